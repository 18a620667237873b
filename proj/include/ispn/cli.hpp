#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "ispn/evaluator.hpp"
#include "ispn/scm.hpp"

namespace ispn {

extern const char* kToolVersion;

// Regime spec mini-grammar:
//   obs
//   do:<var>=<const>            atomic value
//   do:<var>=uniform            domain-uniform (Bernoulli(0.5) on binary)
//   do:<var>=bern<p>            Bernoulli(p)
//   do:<var>=gamma:<p>,<q>      Gamma(shape, scale)
//   do:<var>=beta:<a>,<b>,<l>,<k>  scaled Beta on [l, k]
//   do:<var>=ind:<x1>,<x2>      two-point indicator
// Multi-target regimes join clauses with '+'. parse_regimes splits on ','.
Intervention parse_regime(const std::string& spec, const Scm& scm);
std::vector<Intervention> parse_regimes(const std::string& csv, const Scm& scm);

struct GenerateOptions {
  std::string dataset;
  std::string regimes;  // comma-separated specs; empty -> default roster
  long long n = -1;     // -1 -> dataset default
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string run_id;  // empty -> derived

  nlohmann::json to_json() const;
  static GenerateOptions from_json(const nlohmann::json& j);
};

struct TrainOptions {
  std::string roster_dir;
  std::string out_dir = ".";
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  // -1 -> resolved from the matching builtin dataset (or library defaults)
  int epochs = -1;
  int batch = -1;
  double lr = -1.0;
  int hidden = -1;
  int repetitions = -1, sums = -1, leaves = -1, depth = -1;
  std::string run_id;

  nlohmann::json to_json() const;
  static TrainOptions from_json(const nlohmann::json& j);
};

struct EvalOptions {
  std::string mode;  // marginals | jsd | ate | capacity | runtime
  std::string dataset;
  std::vector<std::string> checkpoints;
  std::string roster_dir;
  std::string out_dir = ".";
  std::string treatment, outcome;  // ate mode
  long long n = -1;                // capacity mode training samples
  int mc_n = 1000000;              // ground-truth histogram samples
  std::uint64_t gt_seed = 9;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};  // capacity mode
  int passes = 5;                                      // runtime mode
  std::string run_id;

  nlohmann::json to_json() const;
  static EvalOptions from_json(const nlohmann::json& j);
};

// Commands write their outputs plus manifest.json under out_dir. Every file
// referenced by the manifest carries the run id (CSV/JSON report header line,
// dataset sidecar field, checkpoint meta). Usage-class failures write nothing.
void cmd_generate(const GenerateOptions& opts);
void cmd_train(const TrainOptions& opts);
void cmd_eval(const EvalOptions& opts);

// Full argv interface; maps usage errors to exit code 2, runtime errors to 1.
int run_cli(int argc, const char* const* argv);

}  // namespace ispn
