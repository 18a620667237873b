#pragma once

#include <cstdint>
#include <vector>

#include "ispn/circuit.hpp"

namespace ispn {

// Parameter vector psi layout: sum-weight logits by slot in [0, W), then
// leaf parameters in [W, W + L): leaf slot l keeps raw mu at W + 2l and raw
// sigma at W + 2l + 1, with sigma = softplus(raw) + 1e-4 and mu read as the
// standardized-space mean.

// Per-psi tables: locally normalized sum weights and transformed leaf
// parameters; reused across all rows of a batch.
class CompiledParams {
 public:
  explicit CompiledParams(const CircuitStructure& s);
  // Throws ShapeMismatch when psi_size != s.num_parameters().
  void load(const CircuitStructure& s, const double* psi, int psi_size);

  std::vector<double> weights;   // per group: members x children, row-major
  std::vector<int> w_offset;     // per group index
  std::vector<double> mu, sigma, inv_sigma, log_sigma, dsigma;  // per leaf slot
};

// Reusable per-row evaluation state; forward must precede backward for the
// same row. Not thread-shared.
class EvalWorkspace {
 public:
  explicit EvalWorkspace(const CircuitStructure& s);

  // Log density of `row` (full joint), or of the marginal over the variables
  // whose mask entry is 0 when `marg` is non-null (1 = integrated out).
  double forward(const CircuitStructure& s, const CompiledParams& cp, const double* row,
                 const std::uint8_t* marg = nullptr);

  // Accumulates weight * d(log p)/d(psi) into grad (size num_parameters()).
  void backward(const CircuitStructure& s, const CompiledParams& cp, double weight, double* grad);

 private:
  std::vector<double> lv_;
  std::vector<double> e_, d_, M_, vmax_;
  std::vector<double> ga_, t_;
  std::vector<double> leaf_u_;
  std::vector<std::uint8_t> leaf_marg_;
  std::vector<double> log_hw_;
};

// One-shot helpers (compile + single row); the batch path above is the same
// code, so these are convenience entry points, not a second implementation.
double log_density(const CircuitStructure& s, const std::vector<double>& psi,
                   const std::vector<double>& row, const std::vector<std::uint8_t>* marg = nullptr);

std::pair<double, std::vector<double>> log_density_grad(
    const CircuitStructure& s, const std::vector<double>& psi, const std::vector<double>& row,
    const std::vector<std::uint8_t>* marg = nullptr);

// Log densities of the univariate marginal of `var` at the grid points.
std::vector<double> marginal_curve(const CircuitStructure& s, const std::vector<double>& psi,
                                   int var, const std::vector<double>& grid);

double softplus(double x);

}  // namespace ispn
