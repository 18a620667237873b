#pragma once

// Shared test utilities: an independent brute-force circuit evaluator
// (linear-space long-double recursion, no log-sum-exp, no grouping), random
// structure generation, and targeted structure corruption.

#include <cmath>
#include <vector>

#include "ispn/circuit.hpp"
#include "ispn/circuit_eval.hpp"
#include "ispn/rng.hpp"

namespace ispn::testing {

// Straight recursion in linear space; long double keeps rounding away from
// the 1e-12 comparison budget.
inline long double brute_density(const CircuitStructure& s, const std::vector<double>& psi,
                                 const std::vector<double>& row,
                                 const std::vector<std::uint8_t>* marg = nullptr) {
  const auto& nodes = s.nodes();
  std::vector<long double> val(nodes.size(), 0.0L);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& nd = nodes[i];
    if (nd.kind == NodeKind::Leaf) {
      if (marg && (*marg)[nd.var]) {
        val[i] = 1.0L;
        continue;
      }
      const VarTransform& t = s.transforms()[nd.var];
      long double muv = psi[s.num_sum_weights() + 2 * nd.slot];
      long double sg = softplus(psi[s.num_sum_weights() + 2 * nd.slot + 1]) + 1e-4;
      long double z = (static_cast<long double>(row[nd.var]) - t.center) / t.halfwidth;
      long double u = (z - muv) / sg;
      val[i] = std::exp(-0.5L * u * u) /
               (sg * t.halfwidth * 2.50662827463100050241576528481105L);
    } else if (nd.kind == NodeKind::Product) {
      long double p = 1.0L;
      for (int c : nd.children) p *= val[c];
      val[i] = p;
    } else {
      // local softmax over this sum's own slots
      const double* z = psi.data() + nd.slot;
      long double zmax = z[0];
      for (std::size_t k = 1; k < nd.children.size(); ++k)
        zmax = std::max<long double>(zmax, z[k]);
      long double denom = 0.0L;
      for (std::size_t k = 0; k < nd.children.size(); ++k)
        denom += std::exp(static_cast<long double>(z[k]) - zmax);
      long double acc = 0.0L;
      for (std::size_t k = 0; k < nd.children.size(); ++k)
        acc += std::exp(static_cast<long double>(z[k]) - zmax) / denom * val[nd.children[k]];
      val[i] = acc;
    }
  }
  return val[s.root()];
}

inline long double brute_log_density(const CircuitStructure& s, const std::vector<double>& psi,
                                     const std::vector<double>& row,
                                     const std::vector<std::uint8_t>* marg = nullptr) {
  return std::log(brute_density(s, psi, row, marg));
}

inline std::vector<Domain> unit_domains(int n) {
  return std::vector<Domain>(n, Domain::make_continuous(-1.0, 1.0));
}

// Random small RAT structure; node count is unconstrained here, callers
// filter on size if they need to.
inline CircuitStructure random_structure(RandomStream& rng) {
  RatConfig cfg;
  cfg.repetitions = 1 + static_cast<int>(rng.below(2));
  cfg.sums_per_region = 1 + static_cast<int>(rng.below(3));
  cfg.leaves_per_var = 1 + static_cast<int>(rng.below(2));
  cfg.depth = static_cast<int>(rng.below(3));
  cfg.seed = rng.next_u64();
  int nv = 1 + static_cast<int>(rng.below(5));
  return build_rat(cfg, unit_domains(nv));
}

// Moderate parameters/rows keep the linear-space oracle away from under- and
// overflow.
inline std::vector<double> random_psi(const CircuitStructure& s, RandomStream& rng) {
  std::vector<double> psi(s.num_parameters());
  for (int i = 0; i < s.num_sum_weights(); ++i) psi[i] = rng.uniform(-2.0, 2.0);
  for (int l = 0; l < s.num_leaves(); ++l) {
    psi[s.num_sum_weights() + 2 * l] = rng.uniform(-2.0, 2.0);
    psi[s.num_sum_weights() + 2 * l + 1] = rng.uniform(-1.0, 2.0);
  }
  return psi;
}

inline std::vector<double> random_row(int num_vars, RandomStream& rng) {
  std::vector<double> row(num_vars);
  for (double& x : row) x = rng.uniform(-1.0, 1.0);
  return row;
}

// Rebuilds the structure with one sum child retargeted to a node of a
// different scope. Returns false when no such corruption is possible.
inline bool corrupt_completeness(const CircuitStructure& s, RandomStream& rng,
                                 CircuitStructure& out) {
  auto nodes = s.nodes();
  std::vector<int> sums;
  // single-child sums are trivially complete whatever the child's scope
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].kind == NodeKind::Sum && nodes[i].children.size() >= 2)
      sums.push_back(static_cast<int>(i));
  if (sums.empty()) return false;
  for (int attempt = 0; attempt < 50; ++attempt) {
    int si = sums[rng.below(sums.size())];
    std::size_t ci = rng.below(nodes[si].children.size());
    int old = nodes[si].children[ci];
    std::vector<int> cands;
    for (int j = 0; j < si; ++j)
      if (s.scopes()[j] != s.scopes()[old]) cands.push_back(j);
    if (cands.empty()) continue;
    auto mutated = nodes;
    mutated[si].children[ci] = cands[rng.below(cands.size())];
    out = CircuitStructure(s.num_vars(), std::move(mutated), s.root(), s.transforms());
    return true;
  }
  return false;
}

// Duplicates one product child over another, forcing a scope overlap.
inline bool corrupt_decomposability(const CircuitStructure& s, RandomStream& rng,
                                    CircuitStructure& out) {
  auto nodes = s.nodes();
  std::vector<int> prods;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].kind == NodeKind::Product && nodes[i].children.size() >= 2)
      prods.push_back(static_cast<int>(i));
  if (prods.empty()) return false;
  int pi = prods[rng.below(prods.size())];
  auto mutated = nodes;
  std::size_t a = rng.below(mutated[pi].children.size());
  std::size_t b = (a + 1) % mutated[pi].children.size();
  mutated[pi].children[a] = mutated[pi].children[b];
  out = CircuitStructure(s.num_vars(), std::move(mutated), s.root(), s.transforms());
  return true;
}

}  // namespace ispn::testing
