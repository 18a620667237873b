#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ispn/graph.hpp"
#include "ispn/mechanism.hpp"

namespace ispn {

// Variable domain; binary variables use {0,1}, continuous ones [lo, hi].
struct Domain {
  bool binary = true;
  double lo = 0.0;
  double hi = 1.0;

  static Domain make_binary() { return {true, 0.0, 1.0}; }
  static Domain make_continuous(double lo, double hi) { return {false, lo, hi}; }

  bool operator==(const Domain&) const = default;
};

// Structural causal model: graph + one mechanism and domain per variable.
struct Scm {
  CausalGraph graph;
  std::vector<Domain> domains;
  std::vector<Mechanism> mechanisms;

  int size() const { return graph.size(); }

  // Checks mechanism/graph consistency (parent counts, CPT row counts,
  // normalized probabilities, atomic values inside domains). Throws
  // MechanismMismatch / DomainError.
  void validate() const;
};

// A set of per-variable mechanism replacements; empty set = observational.
// Replacement mechanisms must be parent-free (Distribution or Atomic).
struct Intervention {
  std::map<std::string, Mechanism> targets;

  bool observational() const { return targets.empty(); }
  // Canonical id, e.g. "obs" or "do_Food_uniform(0,100)"; used in filenames
  // after sanitization.
  std::string describe() const;
  void validate() const;

  bool operator==(const Intervention&) const = default;
};

// Graph surgery: sever incoming edges of every intervened variable.
CausalGraph mutilate(const CausalGraph& g, const Intervention& iv);

// Mutilated graph plus mechanism replacement (the autonomy step: un-intervened
// mechanisms are reused unchanged).
Scm apply_intervention(const Scm& scm, const Intervention& iv);

// Sampled table, row major; remembers the model and regime that produced it.
struct Dataset {
  std::vector<std::string> names;
  std::vector<double> values;  // n_rows * n_cols
  int n_rows = 0;
  int n_cols = 0;
  CausalGraph graph;  // pre-intervention graph of the generating model
  std::vector<Domain> domains;
  Intervention intervention;
  std::uint64_t seed = 0;

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * n_cols + c]; }
  std::vector<double> column(int c) const;
};

// Ancestral sampling of n rows from the intervened model.
Dataset sample(const Scm& scm, const Intervention& iv, int n, std::uint64_t seed);

// One draw of every variable given fixed upstream values (used internally and
// by tests); `row` holds all variables, entries for non-ancestors are ignored.
double sample_value(const Scm& intervened, int v, const std::vector<double>& row, RandomStream& rng);

// Lexicographic CPT row index (first parent = most significant digit) of the
// parent assignment found in `row`.
std::size_t cpt_row_index(const std::vector<int>& parents, const std::vector<double>& row);

}  // namespace ispn
