#pragma once

#include <string>
#include <vector>

#include "ispn/scm.hpp"

namespace ispn {

// Survival function of the chi-square distribution: P(X > x | df).
double chi2_sf(double x, double df);

double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);

// k-bin equal-width edges on [lo, hi] (k+1 values).
std::vector<double> equal_width_edges(double lo, double hi, int k);
// Interior edges at pooled quantiles (k bins -> k-1 interior edges).
std::vector<double> quantile_edges(std::vector<double> xs, int k);
// Bin index in [0, k); edges are interior cut points (size k-1).
int bin_of(double x, const std::vector<double>& edges);

std::vector<double> histogram(const std::vector<double>& xs, const std::vector<double>& interior_edges);

// Jensen-Shannon divergence (natural log, bounded by ln 2). Inputs are
// renormalized; zero bins contribute nothing.
double jsd(const std::vector<double>& p, const std::vector<double>& q);

// Least-squares line y = intercept + slope x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// One chi-square check; stat/dof are additive across independent checks.
struct Chi2Check {
  std::string name;
  double stat = 0.0;
  double dof = 0.0;
  double p() const;
};

// Pools a set of checks into a single statistic.
Chi2Check pool_checks(const std::string& name, const std::vector<Chi2Check>& checks);

// Two-sample homogeneity of p(var | parents) between `a` and `b` (autonomy,
// Eq. 6). Binary parents use exact cells; continuous parents use pooled
// quantile cells (80 bins for one parent, 25x25 for two). Cells with fewer
// than `min_cell` rows on either side are skipped, as are response bins with
// expected count below `min_expected`.
Chi2Check conditional_homogeneity(const Dataset& a, const Dataset& b, const Scm& scm, int var,
                                  int min_cell = 20, double min_expected = 8.0);

// Goodness of fit of an intervened column against its intervention
// distribution (uniform: 10 equal-width bins; bernoulli: 2 cells; atomic:
// exact match).
Chi2Check intervention_marginal_gof(const Dataset& ds, const Scm& scm, const std::string& var);

// Independence of two columns (truncated factorization, Eq. 7): binary pairs
// use 2x2, continuous use 6x6 pooled quantile cells.
Chi2Check independence(const Dataset& ds, int var_a, int var_b);

// Property checks for one dataset/intervention pair, pooled so each pair
// yields two p-values: autonomy (every non-intervened conditional matches an
// observational sample) and factorization (intervened marginals match their
// specs and are independent of their non-descendants).
struct RegimeChecks {
  Chi2Check autonomy;
  Chi2Check factorization;
};
RegimeChecks scm_property_checks(const Scm& scm, const Intervention& iv, int n, std::uint64_t seed);

}  // namespace ispn
