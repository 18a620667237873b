#include "ispn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "ispn/errors.hpp"

namespace ispn {

double chi2_sf(double x, double df) {
  if (df <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / xs.size();
}

double variance(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double m = mean(xs), s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / xs.size();
}

std::vector<double> equal_width_edges(double lo, double hi, int k) {
  std::vector<double> edges(k + 1);
  for (int i = 0; i <= k; ++i) edges[i] = lo + (hi - lo) * i / k;
  return edges;
}

std::vector<double> quantile_edges(std::vector<double> xs, int k) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> edges;
  for (int i = 1; i < k; ++i)
    edges.push_back(xs[static_cast<std::size_t>(i) * xs.size() / k]);
  return edges;
}

int bin_of(double x, const std::vector<double>& edges) {
  return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
}

std::vector<double> histogram(const std::vector<double>& xs, const std::vector<double>& interior_edges) {
  std::vector<double> counts(interior_edges.size() + 1, 0.0);
  for (double x : xs) ++counts[bin_of(x, interior_edges)];
  return counts;
}

double jsd(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw ShapeMismatch("jsd: length mismatch");
  double zp = 0.0, zq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw DomainError("jsd: negative mass");
    zp += p[i];
    zq += q[i];
  }
  if (zp <= 0.0 || zq <= 0.0) throw DomainError("jsd: empty distribution");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double a = p[i] / zp, b = q[i] / zq, m = 0.5 * (a + b);
    if (a > 0.0) d += 0.5 * a * std::log(a / m);
    if (b > 0.0) d += 0.5 * b * std::log(b / m);
  }
  return std::max(0.0, d);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ShapeMismatch("linear_fit: need matched n >= 2");
  double mx = mean(x), my = mean(y), sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  if (sxx == 0.0) throw DomainError("linear_fit: degenerate x");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

double Chi2Check::p() const { return chi2_sf(stat, dof); }

Chi2Check pool_checks(const std::string& name, const std::vector<Chi2Check>& checks) {
  Chi2Check out;
  out.name = name;
  for (const auto& c : checks) {
    out.stat += c.stat;
    out.dof += c.dof;
  }
  return out;
}

namespace {

// Adds the two-sample homogeneity contribution of one cell given response
// bin counts for both sides.
void cell_contribution(const std::vector<double>& ca, const std::vector<double>& cb,
                       double min_expected, double& stat, double& dof) {
  double na = 0.0, nb = 0.0;
  for (double v : ca) na += v;
  for (double v : cb) nb += v;
  double n = na + nb;
  if (n <= 0.0) return;
  int used = 0;
  double s = 0.0;
  for (std::size_t k = 0; k < ca.size(); ++k) {
    double t = ca[k] + cb[k];
    double ea = t * na / n, eb = t * nb / n;
    if (ea < min_expected || eb < min_expected) continue;
    ++used;
    s += (ca[k] - ea) * (ca[k] - ea) / ea + (cb[k] - eb) * (cb[k] - eb) / eb;
  }
  if (used >= 2) {
    stat += s;
    dof += used - 1;
  }
}

}  // namespace

Chi2Check conditional_homogeneity(const Dataset& a, const Dataset& b, const Scm& scm, int var,
                                  int min_cell, double min_expected) {
  Chi2Check out;
  out.name = "autonomy:" + scm.graph.names()[var];
  const auto parents = scm.graph.parents(var);
  const bool resp_binary = scm.domains[var].binary;

  // Assign every row of both datasets to a parent cell.
  int n_cells = 1;
  std::vector<int> cell_a(a.n_rows, 0), cell_b(b.n_rows, 0);
  if (!parents.empty()) {
    bool all_binary = true;
    for (int p : parents) all_binary = all_binary && scm.domains[p].binary;
    if (all_binary) {
      n_cells = 1 << parents.size();
      for (int r = 0; r < a.n_rows; ++r) {
        int c = 0;
        for (int p : parents) c = c * 2 + (a.at(r, p) != 0.0 ? 1 : 0);
        cell_a[r] = c;
      }
      for (int r = 0; r < b.n_rows; ++r) {
        int c = 0;
        for (int p : parents) c = c * 2 + (b.at(r, p) != 0.0 ? 1 : 0);
        cell_b[r] = c;
      }
    } else {
      // Fine pooled quantile grid; bias from within-cell parent drift shrinks
      // as cells get small relative to n.
      int per_dim = parents.size() == 1 ? 80 : 25;
      n_cells = 1;
      std::vector<std::vector<double>> edges;
      for (int p : parents) {
        std::vector<double> pooled;
        pooled.reserve(a.n_rows + b.n_rows);
        for (int r = 0; r < a.n_rows; ++r) pooled.push_back(a.at(r, p));
        for (int r = 0; r < b.n_rows; ++r) pooled.push_back(b.at(r, p));
        edges.push_back(quantile_edges(std::move(pooled), per_dim));
        n_cells *= per_dim;
      }
      for (int r = 0; r < a.n_rows; ++r) {
        int c = 0;
        for (std::size_t k = 0; k < parents.size(); ++k)
          c = c * per_dim + bin_of(a.at(r, parents[k]), edges[k]);
        cell_a[r] = c;
      }
      for (int r = 0; r < b.n_rows; ++r) {
        int c = 0;
        for (std::size_t k = 0; k < parents.size(); ++k)
          c = c * per_dim + bin_of(b.at(r, parents[k]), edges[k]);
        cell_b[r] = c;
      }
    }
  }

  // Group responses per cell.
  std::vector<std::vector<double>> resp_a(n_cells), resp_b(n_cells);
  for (int r = 0; r < a.n_rows; ++r) resp_a[cell_a[r]].push_back(a.at(r, var));
  for (int r = 0; r < b.n_rows; ++r) resp_b[cell_b[r]].push_back(b.at(r, var));

  const int k_resp = resp_binary ? 2 : (parents.empty() ? 8 : (parents.size() == 1 ? 3 : 2));
  for (int c = 0; c < n_cells; ++c) {
    if (static_cast<int>(resp_a[c].size()) < min_cell ||
        static_cast<int>(resp_b[c].size()) < min_cell)
      continue;
    std::vector<double> ca, cb;
    if (resp_binary) {
      ca.assign(2, 0.0);
      cb.assign(2, 0.0);
      for (double v : resp_a[c]) ++ca[v != 0.0 ? 1 : 0];
      for (double v : resp_b[c]) ++cb[v != 0.0 ? 1 : 0];
    } else {
      std::vector<double> pooled = resp_a[c];
      pooled.insert(pooled.end(), resp_b[c].begin(), resp_b[c].end());
      auto edges = quantile_edges(std::move(pooled), k_resp);
      ca = histogram(resp_a[c], edges);
      cb = histogram(resp_b[c], edges);
    }
    cell_contribution(ca, cb, min_expected, out.stat, out.dof);
  }
  return out;
}

Chi2Check intervention_marginal_gof(const Dataset& ds, const Scm& scm, const std::string& var) {
  Chi2Check out;
  out.name = "gof:" + var;
  const int v = ds.graph.index_of(var);
  auto it = ds.intervention.targets.find(var);
  if (it == ds.intervention.targets.end())
    throw UnknownVariable("gof: " + var + " is not intervened in this dataset");
  const Mechanism& m = it->second;
  auto col = ds.column(v);
  const double inf = std::numeric_limits<double>::infinity();

  if (m.kind == Mechanism::Kind::Atomic) {
    for (double x : col)
      if (x != m.value) {
        out.stat = inf;
        out.dof = 1;
        return out;
      }
    return out;  // stat 0, dof 0 -> p = 1
  }

  const DistributionSpec& d = m.dist;
  if (d.kind == DistributionSpec::Kind::Bernoulli) {
    double n1 = 0.0;
    for (double x : col) n1 += x != 0.0 ? 1.0 : 0.0;
    double n = static_cast<double>(col.size());
    double e1 = n * d.p[0], e0 = n - e1;
    if (e0 <= 0.0 || e1 <= 0.0) {
      out.dof = 0;
      return out;
    }
    double o0 = n - n1;
    out.stat = (o0 - e0) * (o0 - e0) / e0 + (n1 - e1) * (n1 - e1) / e1;
    out.dof = 1;
    return out;
  }
  if (d.kind == DistributionSpec::Kind::TwoPoint) {
    double c1 = 0.0, c2 = 0.0;
    for (double x : col) {
      if (x == d.p[0]) ++c1;
      else if (x == d.p[1]) ++c2;
      else { out.stat = inf; out.dof = 1; return out; }
    }
    double e = 0.5 * static_cast<double>(col.size());
    out.stat = (c1 - e) * (c1 - e) / e + (c2 - e) * (c2 - e) / e;
    out.dof = 1;
    return out;
  }
  if (d.kind == DistributionSpec::Kind::Uniform) {
    auto edges = equal_width_edges(d.p[0], d.p[1], 10);
    std::vector<double> interior(edges.begin() + 1, edges.end() - 1);
    auto counts = histogram(col, interior);
    double e = static_cast<double>(col.size()) / 10.0;
    for (double c : counts) out.stat += (c - e) * (c - e) / e;
    out.dof = 9;
    return out;
  }

  // Generic continuous family: bin edges from a large reference sample.
  RandomStream ref(substream_seed(0x9e3779b9u, static_cast<std::uint64_t>(v)));
  std::vector<double> sample_ref(200000);
  const Domain& dom = scm.domains[v];
  for (double& x : sample_ref) {
    double u = d.sample(ref);
    if (u < dom.lo) u = dom.lo;
    if (u > dom.hi) u = dom.hi;
    x = u;
  }
  auto edges = quantile_edges(sample_ref, 10);
  auto counts = histogram(col, edges);
  double e = static_cast<double>(col.size()) / 10.0;
  for (double c : counts) out.stat += (c - e) * (c - e) / e;
  out.dof = 9;
  return out;
}

Chi2Check independence(const Dataset& ds, int var_a, int var_b) {
  Chi2Check out;
  out.name = "indep:" + ds.names[var_a] + ":" + ds.names[var_b];
  auto col_a = ds.column(var_a), col_b = ds.column(var_b);
  auto codes = [&](const std::vector<double>& col, bool binary) {
    std::pair<std::vector<int>, int> r;
    if (binary) {
      r.second = 2;
      for (double x : col) r.first.push_back(x != 0.0 ? 1 : 0);
    } else {
      auto edges = quantile_edges(col, 6);
      r.second = 6;
      for (double x : col) r.first.push_back(bin_of(x, edges));
    }
    return r;
  };
  auto [ia, ka] = codes(col_a, ds.domains[var_a].binary);
  auto [ib, kb] = codes(col_b, ds.domains[var_b].binary);

  std::vector<double> table(static_cast<std::size_t>(ka) * kb, 0.0);
  for (std::size_t r = 0; r < ia.size(); ++r) ++table[static_cast<std::size_t>(ia[r]) * kb + ib[r]];
  std::vector<double> rows(ka, 0.0), cols(kb, 0.0);
  double n = static_cast<double>(ia.size());
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j) {
      rows[i] += table[static_cast<std::size_t>(i) * kb + j];
      cols[j] += table[static_cast<std::size_t>(i) * kb + j];
    }
  int ru = 0, cu = 0;
  for (int i = 0; i < ka; ++i) ru += rows[i] > 0.0 ? 1 : 0;
  for (int j = 0; j < kb; ++j) cu += cols[j] > 0.0 ? 1 : 0;
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j) {
      double e = rows[i] * cols[j] / n;
      if (e <= 0.0) continue;
      double o = table[static_cast<std::size_t>(i) * kb + j];
      out.stat += (o - e) * (o - e) / e;
    }
  out.dof = std::max(0, (ru - 1) * (cu - 1));
  return out;
}

RegimeChecks scm_property_checks(const Scm& scm, const Intervention& iv, int n, std::uint64_t seed) {
  Dataset obs = sample(scm, Intervention{}, n, splitmix64(seed ^ 0xa5a5a5a5ULL));
  Dataset cut = sample(scm, iv, n, seed);

  RegimeChecks out;
  std::vector<Chi2Check> autonomy;
  for (int v = 0; v < scm.size(); ++v) {
    if (iv.targets.count(scm.graph.names()[v])) continue;
    autonomy.push_back(conditional_homogeneity(obs, cut, scm, v));
  }
  out.autonomy = pool_checks("autonomy:" + iv.describe(), autonomy);

  std::vector<Chi2Check> fact;
  CausalGraph mg = mutilate(scm.graph, iv);
  for (const auto& [name, m] : iv.targets) {
    int v = scm.graph.index_of(name);
    fact.push_back(intervention_marginal_gof(cut, scm, name));
    // Non-descendants of v in the mutilated graph must be independent of it.
    std::vector<bool> desc(scm.size(), false);
    std::vector<int> stack = {v};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int c : mg.children(u))
        if (!desc[c]) {
          desc[c] = true;
          stack.push_back(c);
        }
    }
    for (int u = 0; u < scm.size(); ++u) {
      if (u == v || desc[u]) continue;
      if (iv.targets.count(scm.graph.names()[u])) continue;
      fact.push_back(independence(cut, v, u));
    }
  }
  out.factorization = pool_checks("factorization:" + iv.describe(), fact);
  return out;
}

}  // namespace ispn
