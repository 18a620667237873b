#include "ispn/cli.hpp"

int main(int argc, char** argv) { return ispn::run_cli(argc, argv); }
