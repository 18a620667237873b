#include "ispn/scm.hpp"

#include <cmath>

#include "ispn/errors.hpp"

namespace ispn {

void Scm::validate() const {
  const int n = size();
  if (static_cast<int>(domains.size()) != n || static_cast<int>(mechanisms.size()) != n)
    throw ShapeMismatch("scm: domains/mechanisms size must match graph");
  for (int v = 0; v < n; ++v) {
    const Mechanism& m = mechanisms[v];
    const auto parents = graph.parents(v);
    const std::string& name = graph.names()[v];
    switch (m.kind) {
      case Mechanism::Kind::CptRows: {
        if (!domains[v].binary)
          throw MechanismMismatch(name + ": CPT mechanism on non-binary variable");
        for (int p : parents)
          if (!domains[p].binary)
            throw MechanismMismatch(name + ": CPT parent " + graph.names()[p] + " not binary");
        std::size_t want = std::size_t{1} << parents.size();
        if (m.cpt.p1.size() != want)
          throw MechanismMismatch(name + ": CPT has " + std::to_string(m.cpt.p1.size()) +
                                  " rows, graph implies " + std::to_string(want));
        for (double q : m.cpt.p1)
          if (!(q >= 0.0 && q <= 1.0))
            throw DomainError(name + ": CPT entry outside [0,1]");
        break;
      }
      case Mechanism::Kind::Structural: {
        m.eq.validate();
        if (m.eq.arity() != static_cast<int>(parents.size()))
          throw MechanismMismatch(name + ": equation arity " + std::to_string(m.eq.arity()) +
                                  " vs " + std::to_string(parents.size()) + " graph parents");
        break;
      }
      case Mechanism::Kind::Distribution: {
        m.dist.validate();
        if (!parents.empty())
          throw MechanismMismatch(name + ": distribution mechanism with incoming edges");
        break;
      }
      case Mechanism::Kind::Atomic: {
        const Domain& d = domains[v];
        if (d.binary) {
          if (m.value != 0.0 && m.value != 1.0)
            throw DomainError(name + ": atomic value must be 0 or 1 on binary domain");
        } else if (m.value < d.lo || m.value > d.hi) {
          throw DomainError(name + ": atomic value outside domain");
        }
        break;
      }
    }
  }
}

std::string Intervention::describe() const {
  if (targets.empty()) return "obs";
  std::string out;
  for (const auto& [name, m] : targets) {
    if (!out.empty()) out += "+";
    out += "do_" + name + "_" + m.describe();
  }
  return out;
}

void Intervention::validate() const {
  for (const auto& [name, m] : targets) {
    if (m.kind == Mechanism::Kind::CptRows || m.kind == Mechanism::Kind::Structural)
      throw MechanismMismatch("intervention on " + name + " must be parent-free");
    if (m.kind == Mechanism::Kind::Distribution) m.dist.validate();
  }
}

CausalGraph mutilate(const CausalGraph& g, const Intervention& iv) {
  std::vector<int> targets;
  for (const auto& [name, m] : iv.targets) targets.push_back(g.index_of(name));
  return g.mutilated(targets);
}

Scm apply_intervention(const Scm& scm, const Intervention& iv) {
  iv.validate();
  Scm out = scm;
  out.graph = mutilate(scm.graph, iv);
  for (const auto& [name, m] : iv.targets) {
    int v = scm.graph.index_of(name);
    if (m.kind == Mechanism::Kind::Atomic) {
      const Domain& d = scm.domains[v];
      if (d.binary) {
        if (m.value != 0.0 && m.value != 1.0)
          throw DomainError(name + ": atomic intervention must be 0 or 1 on binary domain");
      } else if (m.value < d.lo || m.value > d.hi) {
        throw DomainError(name + ": atomic intervention outside domain");
      }
    }
    out.mechanisms[v] = m;
  }
  out.validate();
  return out;
}

// Row index is lexicographic over parent states: the first-listed parent is
// the most significant digit (matches the .bn file layout).
std::size_t cpt_row_index(const std::vector<int>& parents, const std::vector<double>& row) {
  std::size_t idx = 0;
  for (int p : parents) idx = idx * 2 + (row[p] != 0.0 ? 1 : 0);
  return idx;
}

double sample_value(const Scm& scm, int v, const std::vector<double>& row, RandomStream& rng) {
  const Mechanism& m = scm.mechanisms[v];
  switch (m.kind) {
    case Mechanism::Kind::CptRows: {
      std::size_t idx = cpt_row_index(scm.graph.parents(v), row);
      return rng.bernoulli(m.cpt.p1[idx]) ? 1.0 : 0.0;
    }
    case Mechanism::Kind::Structural: {
      const auto parents = scm.graph.parents(v);
      std::vector<double> pa(parents.size());
      for (std::size_t k = 0; k < parents.size(); ++k) pa[k] = row[parents[k]];
      return m.eq.eval(pa, m.eq.noise.sample(rng));
    }
    case Mechanism::Kind::Distribution:
      return m.dist.sample(rng);
    case Mechanism::Kind::Atomic:
      return m.value;
  }
  throw Error("unreachable");
}

std::vector<double> Dataset::column(int c) const {
  std::vector<double> out(n_rows);
  for (int r = 0; r < n_rows; ++r) out[r] = at(r, c);
  return out;
}

Dataset sample(const Scm& scm, const Intervention& iv, int n, std::uint64_t seed) {
  scm.validate();
  Scm cut = apply_intervention(scm, iv);
  const int nv = cut.size();
  const auto order = cut.graph.topological_order();

  // One independent stream per variable keeps columns reproducible even if
  // mechanisms consume different numbers of draws per row.
  std::vector<RandomStream> streams;
  streams.reserve(nv);
  for (int v = 0; v < nv; ++v) streams.emplace_back(substream_seed(seed, static_cast<std::uint64_t>(v)));

  Dataset ds;
  ds.names = scm.graph.names();
  ds.n_rows = n;
  ds.n_cols = nv;
  ds.graph = scm.graph;
  ds.domains = scm.domains;
  ds.intervention = iv;
  ds.seed = seed;
  ds.values.resize(static_cast<std::size_t>(n) * nv);

  std::vector<double> row(nv, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int v : order) row[v] = sample_value(cut, v, row, streams[v]);
    for (int v = 0; v < nv; ++v) ds.values[static_cast<std::size_t>(r) * nv + v] = row[v];
  }
  return ds;
}

}  // namespace ispn
