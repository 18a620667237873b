#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ispn/exact.hpp"
#include "ispn/gate.hpp"
#include "ispn/scm.hpp"
#include "ispn/trainer.hpp"

namespace ispn {

// A frozen iSPN: circuit structure, gate shape, trained theta, and the ids
// (Intervention::describe) of the regimes it was trained on.
struct TrainedModel {
  CircuitStructure structure;
  GateConfig gate;
  std::vector<double> theta;
  std::vector<std::string> regimes;
};

TrainedModel model_from_checkpoint(const Checkpoint& ck);

// Gate forward for a regime the model was trained on; UnknownRegime otherwise.
std::vector<double> model_psi(const TrainedModel& m, const Scm& scm, const Intervention& iv);

// Marginal mass vector of `var` under the regime. Binary variables: two-point
// readout by trapezoid quadrature of the circuit density over x in [-3, 4]
// (1401 points, split at x = 0.5). Continuous variables: density at the 100
// equal-width bin centers of the domain, renormalized.
std::vector<double> model_marginal(const TrainedModel& m, const Scm& scm, const Intervention& iv,
                                   int var);

// Expectation readout: P(var=1) for binary, sum of center*mass for continuous.
double model_mean(const TrainedModel& m, const Scm& scm, const Intervention& iv, int var);

// E[outcome | do(t=1)] - E[outcome | do(t=0)] from the two atomic regimes.
double model_ate(const TrainedModel& m, const Scm& scm, const std::string& treatment,
                 const std::string& outcome);

// Ground truth on the same grid as model_marginal: exact enumeration when
// every variable is binary and the intervention has finite support, otherwise
// a Monte Carlo histogram of mc_n samples.
std::vector<double> oracle_marginal(const Scm& scm, const Intervention& iv, int var);
std::vector<double> mc_marginal(const Scm& scm, const Intervention& iv, int var, int mc_n,
                                std::uint64_t seed);
bool oracle_usable(const Scm& scm, const Intervention& iv);
std::vector<double> ground_marginal(const Scm& scm, const Intervention& iv, int var, int mc_n,
                                    std::uint64_t seed);

// ground[r][v]: mass vector for roster regime r and variable v; intervened
// variables of a regime are left empty (the r-th regime's own targets).
std::vector<std::vector<std::vector<double>>> ground_truth_table(
    const Scm& scm, const std::vector<Intervention>& roster, int mc_n, std::uint64_t seed);

// Seed protocol: `seed` drives data sampling (per-regime substreams), the
// structure permutation, and the gate init.
TrainedModel run_training(const Scm& scm, const std::vector<Intervention>& roster, int n,
                          RatConfig rat, TrainConfig cfg, std::uint64_t seed);

// Pinned experiment protocol per builtin dataset (UnknownDataset otherwise):
// default circuit size, default training config (health trains longer on
// bigger batches than the discrete sets), default sample count, and the five
// sum-weight slot counts of the capacity sweep.
RatConfig dataset_default_rat(const std::string& id);
TrainConfig dataset_default_train(const std::string& id);
int dataset_default_n(const std::string& id);
std::vector<RatConfig> dataset_sweep(const std::string& id);

struct MarginalCell {
  std::string regime;
  std::string variable;
  std::vector<double> grid;                   // mass points / bin centers
  std::vector<double> ground;
  std::vector<double> model_mean;             // mean of per-seed mass vectors
  std::vector<std::vector<double>> per_seed;  // one mass vector per seed
  std::vector<double> jsd;                    // per seed vs ground
  double jsd_mean = 0.0;
  double jsd_sd = 0.0;
};

// One cell per (regime, non-intervened variable); seed models all share the
// roster. `ground` must come from ground_truth_table on the same roster.
std::vector<MarginalCell> marginal_report(const std::vector<TrainedModel>& models, const Scm& scm,
                                          const std::vector<Intervention>& roster,
                                          const std::vector<std::vector<std::vector<double>>>& ground);

struct SweepResult {
  RatConfig rat;
  int num_sum_weights = 0;
  int node_count = 0;
  double jsd_mean = 0.0;  // over (regime, variable, seed) cells
  double jsd_sd = 0.0;
};

std::vector<SweepResult> capacity_sweep(const Scm& scm, const std::vector<Intervention>& roster,
                                        int n, const std::vector<RatConfig>& sizes,
                                        const std::vector<std::uint64_t>& seeds,
                                        const TrainConfig& cfg,
                                        const std::vector<std::vector<std::vector<double>>>& ground);

struct AteRow {
  std::string treatment, outcome;
  double oracle_ate = 0.0;
  std::vector<double> model;  // per seed
  double model_mean = 0.0;
  double model_sd = 0.0;
};

// Trains one model per seed on the two atomic regimes do(t=0), do(t=1) and
// reads the ATE from each; oracle by exact enumeration.
AteRow ate_experiment(const Scm& scm, const std::string& treatment, const std::string& outcome,
                      int n, RatConfig rat, TrainConfig cfg,
                      const std::vector<std::uint64_t>& seeds);

// Wall-clock helpers. time_marginal_queries returns total milliseconds for
// `queries` single-variable masked forward passes.
double time_marginal_queries(const CircuitStructure& s, const std::vector<double>& psi,
                             int queries);

struct BenchRow {
  std::string label;
  int nodes = 0;
  double mean_ms = 0.0;
  double sd_ms = 0.0;
  int passes = 0;
};

// Mean/sd wall time of full single-epoch training passes over the roster and
// of blocks of 1000 marginal queries.
std::vector<BenchRow> runtime_bench(const CircuitStructure& s, const std::vector<Dataset>& roster,
                                    const TrainConfig& cfg, int passes);

void write_marginal_report(const std::string& path, const std::vector<MarginalCell>& cells,
                           const std::string& run_id);
void write_marginal_curves_json(const std::string& path, const std::vector<MarginalCell>& cells,
                                const std::string& run_id);
void write_ate_report(const std::string& path, const std::vector<AteRow>& rows,
                      const std::string& run_id);
void write_sweep_report(const std::string& path, const std::vector<SweepResult>& rows,
                        const std::string& run_id);
void write_bench_report(const std::string& path, const std::vector<BenchRow>& rows,
                        const std::string& run_id);

}  // namespace ispn
