#pragma once

#include <string>
#include <vector>

#include "ispn/distribution.hpp"

namespace ispn {

// Conditional probability table over binary parents: p1[row] = P(X = 1 | row),
// where row = sum_k parent_value_k * 2^k with parents in ascending index order.
struct Cpt {
  std::vector<double> p1;

  bool operator==(const Cpt&) const = default;
};

// Structural equation: value = f(parents) + g(noise), clamped to [lo, hi].
struct Equation {
  enum class Class {
    AbsScale,  // params = {s};           value = s * |eps|              (no parents)
    Lin1,      // params = {w};           value = w * pa0 + eps
    QuadLin,   // params = {w1, c, w2};   value = w1*(pa0 - pa0^2/c) + w2*pa1 + eps
  };

  Class cls = Class::Lin1;
  std::vector<double> params;
  DistributionSpec noise;
  double lo = 0.0, hi = 100.0;

  int arity() const;
  double eval(const std::vector<double>& parent_values, double eps) const;
  void validate() const;

  bool operator==(const Equation&) const = default;
};

std::string equation_class_name(Equation::Class c);
Equation::Class equation_class_from_name(const std::string& s);

// One causal mechanism. Parent lists are implied by the owning graph.
struct Mechanism {
  enum class Kind {
    CptRows,       // binary CPT (roots use a single-row table)
    Structural,    // equation + noise
    Distribution,  // exogenous distribution, ignores parents ("perfect")
    Atomic,        // constant value
  };

  Kind kind = Kind::Atomic;
  Cpt cpt;
  Equation eq;
  DistributionSpec dist;
  double value = 0.0;

  static Mechanism make_cpt(std::vector<double> p1);
  static Mechanism make_structural(Equation e);
  static Mechanism make_distribution(DistributionSpec d);
  static Mechanism make_atomic(double v);

  // Number of parent slots the mechanism expects; -1 when any number is fine.
  int expected_parents() const;
  std::string describe() const;

  bool operator==(const Mechanism&) const = default;
};

}  // namespace ispn
