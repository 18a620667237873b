#pragma once

#include <map>
#include <vector>

#include "ispn/scm.hpp"

namespace ispn {

// Exact inference on binary CBNs by full state enumeration (n <= 20).
// Throws TooLarge beyond that, DomainError on non-binary variables.

// Joint over all 2^n states of the intervened model; state bit v = value of
// variable v. Distributional interventions must have finite support and are
// expanded as mixtures of atomic interventions.
std::vector<double> interventional_joint(const Scm& scm, const Intervention& iv);

// Distribution {P(q=0|...), P(q=1|...)} of `query` under the intervention,
// optionally conditioned on evidence (variable index -> 0/1). Throws
// InconsistentEvidence when the evidence has zero probability.
std::vector<double> exact_query(const Scm& scm, const Intervention& iv, int query,
                                const std::map<int, int>& evidence = {});

// E[var | do-intervention]; for binary variables this is P(var = 1 | ...).
double interventional_mean(const Scm& scm, const Intervention& iv, int var);

// E[outcome | do(treatment=1)] - E[outcome | do(treatment=0)].
double average_treatment_effect(const Scm& scm, int treatment, int outcome);

// Backdoor adjustment sum_w p(outcome=1 | treatment=t, w) p(w) computed from
// the observational joint. Throws ZeroSupport when a needed conditioning
// event has zero probability.
double adjustment_estimate(const Scm& scm, int treatment, int treatment_value, int outcome,
                           const std::vector<int>& adjustment_set);

}  // namespace ispn
