#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ispn/rng.hpp"

namespace ispn {

// Parametric distribution used for root priors, structural noise, and
// distributional (imperfect) interventions.
struct DistributionSpec {
  enum class Kind {
    Uniform,   // p = {a, b}
    Bernoulli, // p = {prob of 1}
    Gaussian,  // p = {mu, sigma}
    Gamma,     // p = {shape, scale}
    Beta,      // p = {a, b, l, k}; sample = l + (k - l) * Beta(a, b)
    TwoPoint,  // p = {x1, x2}; equal mass on both points
    Laplace,   // p = {mu, b}
    StudentT,  // p = {nu}
  };

  Kind kind = Kind::Uniform;
  std::vector<double> p;

  static DistributionSpec make_uniform(double a, double b) { return {Kind::Uniform, {a, b}}; }
  static DistributionSpec make_bernoulli(double q) { return {Kind::Bernoulli, {q}}; }
  static DistributionSpec make_gaussian(double mu, double sigma) { return {Kind::Gaussian, {mu, sigma}}; }
  static DistributionSpec make_gamma(double shape, double scale) { return {Kind::Gamma, {shape, scale}}; }
  static DistributionSpec make_beta(double a, double b, double l, double k) { return {Kind::Beta, {a, b, l, k}}; }
  static DistributionSpec make_two_point(double x1, double x2) { return {Kind::TwoPoint, {x1, x2}}; }
  static DistributionSpec make_laplace(double mu, double b) { return {Kind::Laplace, {mu, b}}; }
  static DistributionSpec make_student_t(double nu) { return {Kind::StudentT, {nu}}; }

  // Throws DomainError on invalid parameters (wrong count, sigma <= 0, ...).
  void validate() const;

  double sample(RandomStream& rng) const;

  // True when the distribution puts all mass on finitely many points.
  bool finite_support() const;
  // Point/probability pairs; only valid for finite-support kinds.
  std::vector<std::pair<double, double>> support() const;

  std::string describe() const;

  bool operator==(const DistributionSpec&) const = default;
};

}  // namespace ispn
