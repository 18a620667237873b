#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ispn/circuit_eval.hpp"
#include "ispn/gate.hpp"
#include "ispn/scm.hpp"

namespace ispn {

struct TrainConfig {
  int epochs = 20;
  int batch_size = 100;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int hidden = 10;         // gate hidden width (two ReLU layers)
  std::uint64_t seed = 0;  // drives gate init and per-epoch row shuffles
};

struct TrainLogRow {
  int epoch = 0;               // 1-based
  std::string regime;          // intervention id, or "all" for the epoch total
  double mean_loglik = 0.0;
  double wall_ms = 0.0;        // elapsed since training start, end of epoch
};

struct TrainResult {
  GateConfig gate;
  std::vector<double> theta;
  std::vector<TrainLogRow> log;
  // Instrumentation: every batch is single-regime, so exactly one gate
  // forward serves each batch.
  long long batches = 0;
  long long gate_forwards = 0;
};

// Scratch shared by training and the gradient check.
struct BatchWork {
  BatchWork(const CircuitStructure& s, const GateNet& net);
  CompiledParams params;
  EvalWorkspace ws;
  GateNet::Cache cache;
  std::vector<double> psi, dpsi;
};

// Mean log-likelihood of the listed rows under the regime encoding `x`; one
// gate forward, then per-row circuit passes. When dtheta is non-null,
// accumulates d(-mean loglik)/dtheta. Stops early (no further gradient
// work) if a row comes back non-finite.
double batch_pass(const CircuitStructure& s, const GateNet& net, const double* theta,
                  const std::vector<double>& x, const Dataset& data, const int* rows, int count,
                  double* dtheta, BatchWork& work);

// End-to-end maximum-likelihood training over a mixed-regime roster:
// per-epoch deterministic shuffles, round-robin single-regime batches, Adam
// updates in fixed coordinate order. Throws NonFiniteLoss with the batch id.
TrainResult train(const CircuitStructure& s, const std::vector<Dataset>& roster,
                  const TrainConfig& cfg);

// Max relative error between the analytic composite gradient dL/dtheta and
// central finite differences, over coordinates with |analytic| > 1e-8.
// `corrupt` flips the analytic sign (negative control for the check itself).
double gradcheck(const CircuitStructure& s, const GateNet& net, const std::vector<double>& theta,
                 const std::vector<double>& x, const Dataset& data, int num_rows, double h = 1e-5,
                 bool corrupt = false);

// CSV: "# run <id>" comment, then epoch,regime,mean_loglik,wall_ms.
void write_train_log(const std::string& path, const std::vector<TrainLogRow>& log,
                     const std::string& run_id);

}  // namespace ispn
