#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ispn/cli.hpp"
#include "ispn/datasets.hpp"
#include "ispn/errors.hpp"
#include "ispn/gate.hpp"

using namespace ispn;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "ispn_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  nlohmann::json j;
  f >> j;
  return j;
}

int run_bin(const std::string& args) {
  const std::string cmd = std::string(ISPN_CLI_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("regime grammar: every intervention family parses") {
  const Scm health = builtin_scm("health");

  CHECK(parse_regime("obs", health).observational());

  Intervention atomic = parse_regime("do:F=30", health);
  REQUIRE(atomic.targets.count("F") == 1);
  CHECK(atomic.targets.at("F").kind == Mechanism::Kind::Atomic);
  CHECK(atomic.targets.at("F").value == 30.0);

  Intervention unif = parse_regime("do:F=uniform", health);
  CHECK(unif.targets.at("F").dist.kind == DistributionSpec::Kind::Uniform);

  const Scm eq = builtin_scm("earthquake");
  Intervention unif_bin = parse_regime("do:Alarm=uniform", eq);
  CHECK(unif_bin.targets.at("Alarm").dist.kind == DistributionSpec::Kind::Bernoulli);
  CHECK(unif_bin.targets.at("Alarm").dist.p == std::vector<double>{0.5});

  Intervention bern = parse_regime("do:Alarm=bern0.7", eq);
  CHECK(bern.targets.at("Alarm").dist.kind == DistributionSpec::Kind::Bernoulli);
  CHECK(bern.targets.at("Alarm").dist.p == std::vector<double>{0.7});

  Intervention gam = parse_regime("do:F=gamma:2,3", health);
  CHECK(gam.targets.at("F").dist.kind == DistributionSpec::Kind::Gamma);
  CHECK(gam.targets.at("F").dist.p == std::vector<double>({2.0, 3.0}));

  Intervention bet = parse_regime("do:A=beta:2,5,10,40", health);
  CHECK(bet.targets.at("A").dist.kind == DistributionSpec::Kind::Beta);
  CHECK(bet.targets.at("A").dist.p == std::vector<double>({2.0, 5.0, 10.0, 40.0}));

  Intervention ind = parse_regime("do:H=ind:20,80", health);
  CHECK(ind.targets.at("H").dist.kind == DistributionSpec::Kind::TwoPoint);
  CHECK(ind.targets.at("H").dist.p == std::vector<double>({20.0, 80.0}));

  Intervention multi = parse_regime("do:F=30+do:M=uniform", health);
  CHECK(multi.targets.size() == 2);
  CHECK(multi.targets.at("F").kind == Mechanism::Kind::Atomic);
  CHECK(multi.targets.at("M").dist.kind == DistributionSpec::Kind::Uniform);
}

TEST_CASE("regime grammar: malformed specs are rejected") {
  const Scm health = builtin_scm("health");
  CHECK_THROWS_AS(parse_regime("", health), BadRegimeSpec);
  CHECK_THROWS_AS(parse_regime("observe", health), BadRegimeSpec);
  CHECK_THROWS_AS(parse_regime("do:F", health), BadRegimeSpec);
  CHECK_THROWS_AS(parse_regime("do:=3", health), BadRegimeSpec);
  CHECK_THROWS_AS(parse_regime("do:Nope=3", health), BadRegimeSpec);
  CHECK_THROWS_AS(parse_regime("do:F=thirty", health), BadRegimeSpec);
  CHECK_THROWS_AS(parse_regime("do:F=bern", health), BadRegimeSpec);
  CHECK_THROWS_AS(parse_regime("do:F=gamma:2", health), BadRegimeSpec);
  CHECK_THROWS_AS(parse_regime("do:F=beta:1,2,3", health), BadRegimeSpec);
  CHECK_THROWS_AS(parse_regime("do:F=3+do:F=4", health), BadRegimeSpec);
  CHECK_THROWS_AS(parse_regime("obs+do:F=3", health), BadRegimeSpec);
  // distribution validation is surfaced as a spec error
  CHECK_THROWS_AS(parse_regime("do:F=gamma:-1,2", health), BadRegimeSpec);
  CHECK_THROWS_AS(parse_regime("do:Alarm=bern1.5", builtin_scm("earthquake")), BadRegimeSpec);
}

TEST_CASE("regime list splitting keeps parameter commas intact") {
  const Scm health = builtin_scm("health");
  auto ivs = parse_regimes("obs,do:F=gamma:2,3,do:H=uniform,do:A=beta:2,5,10,40", health);
  REQUIRE(ivs.size() == 4);
  CHECK(ivs[0].observational());
  CHECK(ivs[1].targets.at("F").dist.p == std::vector<double>({2.0, 3.0}));
  CHECK(ivs[2].targets.count("H") == 1);
  CHECK(ivs[3].targets.at("A").dist.p.size() == 4);
  CHECK_THROWS_AS(parse_regimes("3,obs", health), BadRegimeSpec);
}

TEST_CASE("generate writes a pair per regime plus a manifest") {
  const fs::path out = fresh_dir("gen");
  GenerateOptions o;
  o.dataset = "earthquake";
  o.n = 40;
  o.seed = 7;
  o.out_dir = out.string();
  cmd_generate(o);

  nlohmann::json man = read_json(out / "manifest.json");
  CHECK(man.at("command") == "generate");
  CHECK(man.at("run_id") == "gen-earthquake-s7");
  // default roster: obs + one uniform regime per variable
  CHECK(man.at("outputs").size() == 2 * 6);
  for (const auto& f : man.at("outputs")) CHECK(fs::exists(out / f.get<std::string>()));
  for (const auto& f : man.at("outputs")) {
    const std::string name = f.get<std::string>();
    if (name.ends_with(".json"))
      CHECK(read_json(out / name).at("run_id") == man.at("run_id"));
  }
}

TEST_CASE("generate rejects n = 0 without writing files") {
  const fs::path out = fresh_dir("gen_n0");
  GenerateOptions o;
  o.dataset = "earthquake";
  o.n = 0;
  o.out_dir = (out / "sub").string();
  CHECK_THROWS_AS(cmd_generate(o), BadRegimeSpec);
  CHECK(!fs::exists(out / "sub"));
  o.dataset = "nope";
  o.n = 10;
  CHECK_THROWS_AS(cmd_generate(o), UnknownDataset);
}

TEST_CASE("train resolves builtin defaults and writes per-seed artifacts") {
  const fs::path data = fresh_dir("train_data");
  GenerateOptions g;
  g.dataset = "earthquake";
  g.regimes = "obs,do:Burglary=uniform";
  g.n = 200;
  g.out_dir = data.string();
  cmd_generate(g);

  const fs::path out = fresh_dir("train_out");
  TrainOptions t;
  t.roster_dir = data.string();
  t.out_dir = out.string();
  t.seeds = {1, 2};
  t.epochs = 2;
  cmd_train(t);

  nlohmann::json man = read_json(out / "manifest.json");
  CHECK(man.at("resolved").at("dataset") == "earthquake");
  CHECK(man.at("resolved").at("epochs") == 2);
  CHECK(man.at("resolved").at("repetitions") == 5);
  CHECK(man.at("resolved").at("sums") == 96);
  REQUIRE(man.at("models").size() == 2);

  for (const auto& m : man.at("models")) {
    const fs::path ck_path = out / m.at("checkpoint").get<std::string>();
    REQUIRE(fs::exists(ck_path));
    Checkpoint ck = load_checkpoint(ck_path.string());
    CHECK(ck.meta.at("run_id") == man.at("run_id"));
    CHECK(ck.meta.at("regimes").size() == 2);
    CHECK(ck.structure.num_sum_weights() == 2400);
    const std::string log = slurp(out / m.at("train_log").get<std::string>());
    CHECK(log.starts_with("# run train-earthquake\n"));
  }
  // seeds give different structures
  CHECK(man.at("models")[0].at("structure_hash") != man.at("models")[1].at("structure_hash"));
}

TEST_CASE("train fails fast on mixed schemas and missing rosters") {
  const fs::path data = fresh_dir("train_mixed");
  GenerateOptions g;
  g.dataset = "earthquake";
  g.regimes = "obs";
  g.n = 50;
  g.out_dir = data.string();
  cmd_generate(g);
  g.dataset = "health";
  g.regimes = "do:F=30";  // distinct stem, lands beside the earthquake pair
  g.run_id = "clash";
  cmd_generate(g);

  TrainOptions t;
  t.roster_dir = data.string();
  t.out_dir = fresh_dir("train_mixed_out").string();
  CHECK_THROWS_AS(cmd_train(t), ShapeMismatch);

  t.roster_dir = (data / "missing").string();
  CHECK_THROWS_AS(cmd_train(t), BadRegimeSpec);

  t.roster_dir = data.string();
  t.seeds = {};
  CHECK_THROWS_AS(cmd_train(t), BadRegimeSpec);
}

TEST_CASE("eval usage guards") {
  EvalOptions e;
  e.mode = "nope";
  e.dataset = "earthquake";
  CHECK_THROWS_AS(cmd_eval(e), BadRegimeSpec);
  e.mode = "jsd";
  e.out_dir = fresh_dir("eval_guard").string();
  CHECK_THROWS_AS(cmd_eval(e), BadRegimeSpec);  // empty checkpoint list
}

TEST_CASE("reruns with identical options are byte-identical") {
  GenerateOptions g;
  g.dataset = "earthquake";
  g.regimes = "obs,do:Alarm=bern0.3";
  g.n = 150;
  g.seed = 11;
  g.run_id = "repro";

  const fs::path a = fresh_dir("repro_a"), b = fresh_dir("repro_b");
  g.out_dir = a.string();
  cmd_generate(g);
  g.out_dir = b.string();
  cmd_generate(GenerateOptions::from_json(g.to_json()));
  for (const auto& f : read_json(a / "manifest.json").at("outputs"))
    CHECK(slurp(a / f.get<std::string>()) == slurp(b / f.get<std::string>()));

  TrainOptions t;
  t.seeds = {3};
  t.epochs = 2;
  t.run_id = "repro";
  const fs::path ta = fresh_dir("repro_ta"), tb = fresh_dir("repro_tb");
  t.roster_dir = a.string();
  t.out_dir = ta.string();
  cmd_train(t);
  t.roster_dir = b.string();
  t.out_dir = tb.string();
  cmd_train(TrainOptions::from_json(t.to_json()));
  CHECK(slurp(ta / "model_seed3.ckpt") == slurp(tb / "model_seed3.ckpt"));
}

TEST_CASE("run_cli honours the out-dir environment variable") {
  const fs::path out = fresh_dir("envout");
  setenv("ISPN_OUT_DIR", out.string().c_str(), 1);
  const char* argv[] = {"ispn", "generate", "earthquake", "--regimes", "obs", "--n", "25"};
  CHECK(run_cli(7, argv) == 0);
  unsetenv("ISPN_OUT_DIR");
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "r0_obs.csv"));
}

TEST_CASE("binary exit codes: 0 success, 1 runtime, 2 usage") {
  const fs::path out = fresh_dir("bin");
  CHECK(run_bin("--version") == 0);
  CHECK(run_bin("") == 2);                           // missing subcommand
  CHECK(run_bin("generate nope --n 5") == 2);        // unknown dataset
  CHECK(run_bin("generate earthquake --n 0") == 2);  // invalid n
  CHECK(run_bin("generate earthquake --regimes do:Alarm=maybe") == 2);
  CHECK(run_bin("eval --mode jsd --dataset earthquake") == 2);  // no checkpoints
  CHECK(run_bin("train --roster " + (out / "nodir").string()) == 2);

  const std::string data = (out / "data").string();
  CHECK(run_bin("generate earthquake --regimes obs,do:Alarm=uniform --n 120 --out " + data) == 0);
  const std::string run = (out / "run").string();
  CHECK(run_bin("train --roster " + data + " --out " + run + " --seeds 1 --epochs 1") == 0);
  // runtime failure: checkpoint trained on other regimes than the ate pair
  CHECK(run_bin("eval --mode ate --dataset earthquake --checkpoints " + run +
                "/model_seed1.ckpt --treatment Burglary --outcome Alarm --out " +
                (out / "ev").string()) == 1);
}

TEST_CASE("eval jsd emits the per-variable table") {
  const fs::path out = fresh_dir("evaljsd");
  GenerateOptions g;
  g.dataset = "earthquake";
  g.regimes = "obs,do:Burglary=uniform";
  g.n = 400;
  g.out_dir = (out / "data").string();
  cmd_generate(g);
  TrainOptions t;
  t.roster_dir = g.out_dir;
  t.out_dir = (out / "run").string();
  t.seeds = {1};
  t.epochs = 4;
  cmd_train(t);
  EvalOptions e;
  e.mode = "jsd";
  e.dataset = "earthquake";
  e.checkpoints = {(out / "run" / "model_seed1.ckpt").string()};
  e.roster_dir = g.out_dir;
  e.out_dir = (out / "rep").string();
  e.mc_n = 50000;
  cmd_eval(e);

  std::ifstream f(out / "rep" / "jsd_table.csv");
  std::string line;
  std::getline(f, line);
  CHECK(line == "# run eval-jsd-earthquake");
  std::getline(f, line);
  CHECK(line == "variable,jsd_mean,jsd_sd");
  int rows = 0;
  while (std::getline(f, line) && !line.empty()) ++rows;
  CHECK(rows == 5);
  nlohmann::json man = read_json(out / "rep" / "manifest.json");
  CHECK(man.at("outputs") == nlohmann::json::array({"jsd_table.csv"}));
}
