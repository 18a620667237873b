#include "ispn/exact.hpp"

#include <cmath>

#include "ispn/errors.hpp"

namespace ispn {

namespace {

void check_enumerable(const Scm& scm) {
  if (scm.size() > 20)
    throw TooLarge("exact inference limited to 20 variables, got " + std::to_string(scm.size()));
  for (int v = 0; v < scm.size(); ++v)
    if (!scm.domains[v].binary)
      throw DomainError("exact inference requires binary variables; '" +
                        scm.graph.names()[v] + "' is continuous");
}

// Joint of an atomically-intervened model (only CPT and Atomic mechanisms).
std::vector<double> atomic_joint(const Scm& cut) {
  const int n = cut.size();
  const std::size_t states = std::size_t{1} << n;
  // Cache parent lists once.
  std::vector<std::vector<int>> parents(n);
  for (int v = 0; v < n; ++v) parents[v] = cut.graph.parents(v);

  std::vector<double> joint(states, 0.0);
  std::vector<double> row(n, 0.0);
  for (std::size_t s = 0; s < states; ++s) {
    for (int v = 0; v < n; ++v) row[v] = (s >> v) & 1 ? 1.0 : 0.0;
    double p = 1.0;
    for (int v = 0; v < n && p > 0.0; ++v) {
      const Mechanism& m = cut.mechanisms[v];
      if (m.kind == Mechanism::Kind::Atomic) {
        if (row[v] != m.value) p = 0.0;
      } else {
        double p1 = m.cpt.p1[cpt_row_index(parents[v], row)];
        p *= row[v] != 0.0 ? p1 : 1.0 - p1;
      }
    }
    joint[s] = p;
  }
  return joint;
}

// Expands distributional targets into weighted atomic-only interventions.
std::vector<std::pair<double, Intervention>> atomic_mixture(const Intervention& iv) {
  std::vector<std::pair<double, Intervention>> combos = {{1.0, Intervention{}}};
  for (const auto& [name, m] : iv.targets) {
    if (m.kind == Mechanism::Kind::Atomic) {
      for (auto& [w, at] : combos) at.targets[name] = m;
      continue;
    }
    if (m.kind != Mechanism::Kind::Distribution)
      throw MechanismMismatch("intervention on " + name + " must be parent-free");
    if (!m.dist.finite_support())
      throw DomainError("intervention on binary '" + name + "' needs finite support, got " +
                        m.dist.describe());
    std::vector<std::pair<double, Intervention>> next;
    for (const auto& [w, at] : combos) {
      for (const auto& [value, prob] : m.dist.support()) {
        if (value != 0.0 && value != 1.0)
          throw DomainError("support point " + std::to_string(value) + " of intervention on '" +
                            name + "' is not binary");
        if (prob == 0.0) continue;
        Intervention ext = at;
        ext.targets[name] = Mechanism::make_atomic(value);
        next.emplace_back(w * prob, ext);
      }
    }
    combos = std::move(next);
  }
  return combos;
}

}  // namespace

std::vector<double> interventional_joint(const Scm& scm, const Intervention& iv) {
  check_enumerable(scm);
  scm.validate();
  const std::size_t states = std::size_t{1} << scm.size();
  std::vector<double> joint(states, 0.0);
  for (const auto& [w, atomic_iv] : atomic_mixture(iv)) {
    Scm cut = apply_intervention(scm, atomic_iv);
    std::vector<double> part = atomic_joint(cut);
    for (std::size_t s = 0; s < states; ++s) joint[s] += w * part[s];
  }
  return joint;
}

std::vector<double> exact_query(const Scm& scm, const Intervention& iv, int query,
                                const std::map<int, int>& evidence) {
  std::vector<double> joint = interventional_joint(scm, iv);
  double p0 = 0.0, p1 = 0.0;
  for (std::size_t s = 0; s < joint.size(); ++s) {
    bool ok = true;
    for (const auto& [v, val] : evidence)
      if (static_cast<int>((s >> v) & 1) != val) { ok = false; break; }
    if (!ok) continue;
    ((s >> query) & 1 ? p1 : p0) += joint[s];
  }
  double z = p0 + p1;
  if (z <= 0.0) throw InconsistentEvidence("evidence has zero probability");
  return {p0 / z, p1 / z};
}

double interventional_mean(const Scm& scm, const Intervention& iv, int var) {
  return exact_query(scm, iv, var)[1];
}

double average_treatment_effect(const Scm& scm, int treatment, int outcome) {
  const std::string& name = scm.graph.names()[treatment];
  Intervention do1, do0;
  do1.targets[name] = Mechanism::make_atomic(1.0);
  do0.targets[name] = Mechanism::make_atomic(0.0);
  return interventional_mean(scm, do1, outcome) - interventional_mean(scm, do0, outcome);
}

double adjustment_estimate(const Scm& scm, int treatment, int treatment_value, int outcome,
                           const std::vector<int>& adjustment_set) {
  std::vector<double> joint = interventional_joint(scm, Intervention{});
  const std::size_t states = joint.size();

  // p(w), p(t, w), p(y=1, t, w) for every adjustment-set assignment w.
  const std::size_t wstates = std::size_t{1} << adjustment_set.size();
  std::vector<double> pw(wstates, 0.0), ptw(wstates, 0.0), pytw(wstates, 0.0);
  for (std::size_t s = 0; s < states; ++s) {
    std::size_t w = 0;
    for (std::size_t k = 0; k < adjustment_set.size(); ++k)
      if ((s >> adjustment_set[k]) & 1) w |= std::size_t{1} << k;
    pw[w] += joint[s];
    if (static_cast<int>((s >> treatment) & 1) == treatment_value) {
      ptw[w] += joint[s];
      if ((s >> outcome) & 1) pytw[w] += joint[s];
    }
  }

  double total = 0.0;
  for (std::size_t w = 0; w < wstates; ++w) {
    if (pw[w] <= 0.0) continue;
    if (ptw[w] <= 0.0)
      throw ZeroSupport("conditioning event treatment=" + std::to_string(treatment_value) +
                        " has zero probability in an adjustment cell");
    total += pw[w] * (pytw[w] / ptw[w]);
  }
  return total;
}

}  // namespace ispn
