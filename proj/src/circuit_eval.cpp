#include "ispn/circuit_eval.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "ispn/errors.hpp"

namespace ispn {

namespace {
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log sqrt(2 pi)
}

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

CompiledParams::CompiledParams(const CircuitStructure& s) {
  w_offset.reserve(s.groups().size());
  int total = 0;
  for (const auto& g : s.groups()) {
    w_offset.push_back(total);
    total += static_cast<int>(g.members.size() * g.children.size());
  }
  weights.resize(total);
  const int nl = s.num_leaves();
  mu.resize(nl);
  sigma.resize(nl);
  inv_sigma.resize(nl);
  log_sigma.resize(nl);
  dsigma.resize(nl);
}

void CompiledParams::load(const CircuitStructure& s, const double* psi, int psi_size) {
  if (psi_size != s.num_parameters())
    throw ShapeMismatch("psi has " + std::to_string(psi_size) + " entries, circuit expects " +
                        std::to_string(s.num_parameters()));
  const auto& nodes = s.nodes();
  for (std::size_t gi = 0; gi < s.groups().size(); ++gi) {
    const SumGroup& g = s.groups()[gi];
    const int K = static_cast<int>(g.children.size());
    double* W = weights.data() + w_offset[gi];
    for (std::size_t mi = 0; mi < g.members.size(); ++mi) {
      const double* z = psi + nodes[g.members[mi]].slot;
      double zmax = z[0];
      for (int k = 1; k < K; ++k) zmax = std::max(zmax, z[k]);
      double sum = 0.0;
      double* row = W + mi * K;
      for (int k = 0; k < K; ++k) {
        row[k] = std::exp(z[k] - zmax);
        sum += row[k];
      }
      for (int k = 0; k < K; ++k) row[k] /= sum;
    }
  }
  const double* leaf = psi + s.num_sum_weights();
  for (int l = 0; l < s.num_leaves(); ++l) {
    mu[l] = leaf[2 * l];
    double raw = leaf[2 * l + 1];
    sigma[l] = softplus(raw) + 1e-4;
    inv_sigma[l] = 1.0 / sigma[l];
    log_sigma[l] = std::log(sigma[l]);
    dsigma[l] = 1.0 / (1.0 + std::exp(-raw));
  }
}

EvalWorkspace::EvalWorkspace(const CircuitStructure& s) {
  lv_.resize(s.nodes().size());
  ga_.resize(s.nodes().size());
  e_.resize(s.total_group_children());
  int d_total = 0;
  std::size_t max_children = 0;
  for (const auto& g : s.groups()) {
    d_total += static_cast<int>(g.members.size());
    max_children = std::max(max_children, g.children.size());
  }
  d_.resize(d_total);
  M_.resize(s.groups().size());
  vmax_.resize(s.groups().size());
  t_.resize(max_children);
  leaf_u_.resize(s.num_leaves());
  leaf_marg_.resize(s.num_leaves());
  for (const auto& t : s.transforms()) log_hw_.push_back(std::log(t.halfwidth));
}

double EvalWorkspace::forward(const CircuitStructure& s, const CompiledParams& cp,
                              const double* row, const std::uint8_t* marg) {
  const auto& nodes = s.nodes();
  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i) {
    const Node& nd = nodes[i];
    if (nd.kind == NodeKind::Leaf) {
      if (marg && marg[nd.var]) {
        leaf_marg_[nd.slot] = 1;
        lv_[i] = 0.0;
        continue;
      }
      leaf_marg_[nd.slot] = 0;
      const VarTransform& t = s.transforms()[nd.var];
      double z = (row[nd.var] - t.center) / t.halfwidth;
      double u = (z - cp.mu[nd.slot]) * cp.inv_sigma[nd.slot];
      leaf_u_[nd.slot] = u;
      lv_[i] = -kLogSqrt2Pi - cp.log_sigma[nd.slot] - 0.5 * u * u - log_hw_[nd.var];
    } else if (nd.kind == NodeKind::Product) {
      double v = 0.0;
      for (int c : nd.children) v += lv_[c];
      lv_[i] = v;
    } else {
      const int gi = s.group_of(i);
      const SumGroup& g = s.groups()[gi];
      if (g.trigger != i) continue;  // whole group handled at its trigger
      const int K = static_cast<int>(g.children.size());
      double* e = e_.data() + g.e_offset;

      double M = -std::numeric_limits<double>::infinity();
      for (const auto& ck : g.chunks) {
        if (ck.source_group >= 0) {
          M = std::max(M, vmax_[ck.source_group]);
        } else {
          for (int k = ck.begin; k < ck.begin + ck.len; ++k)
            M = std::max(M, lv_[g.children[k]]);
        }
      }
      for (const auto& ck : g.chunks) {
        if (ck.source_group >= 0) {
          const SumGroup& src = s.groups()[ck.source_group];
          double scale = std::exp(M_[ck.source_group] - M);
          const double* ds = d_.data() + src.d_offset;
          for (int j = 0; j < ck.len; ++j) e[ck.begin + j] = ds[j] * scale;
        } else {
          for (int k = ck.begin; k < ck.begin + ck.len; ++k)
            e[k] = std::exp(lv_[g.children[k]] - M);
        }
      }
      const double* W = cp.weights.data() + cp.w_offset[gi];
      double* d = d_.data() + g.d_offset;
      double dmax = 0.0;
      for (std::size_t mi = 0; mi < g.members.size(); ++mi) {
        const double* wrow = W + mi * K;
        double acc = 0.0;
        for (int k = 0; k < K; ++k) acc += wrow[k] * e[k];
        d[mi] = acc;
        dmax = std::max(dmax, acc);
      }
      M_[gi] = M;
      vmax_[gi] = M + std::log(dmax);
      if (g.materialize)
        for (std::size_t mi = 0; mi < g.members.size(); ++mi)
          lv_[g.members[mi]] = M + std::log(d[mi]);
    }
  }
  return lv_[s.root()];
}

void EvalWorkspace::backward(const CircuitStructure& s, const CompiledParams& cp, double weight,
                             double* grad) {
  const auto& nodes = s.nodes();
  const int n = static_cast<int>(nodes.size());
  std::memset(ga_.data(), 0, sizeof(double) * ga_.size());
  ga_[s.root()] = weight;
  double* leaf_grad = grad + s.num_sum_weights();

  for (int i = n - 1; i >= 0; --i) {
    const Node& nd = nodes[i];
    if (nd.kind == NodeKind::Leaf) {
      double g = ga_[i];
      if (g == 0.0 || leaf_marg_[nd.slot]) continue;
      double u = leaf_u_[nd.slot];
      double is = cp.inv_sigma[nd.slot];
      leaf_grad[2 * nd.slot] += g * u * is;
      leaf_grad[2 * nd.slot + 1] += g * (u * u - 1.0) * is * cp.dsigma[nd.slot];
    } else if (nd.kind == NodeKind::Product) {
      double g = ga_[i];
      if (g == 0.0) continue;
      for (int c : nd.children) ga_[c] += g;
    } else {
      const int gi = s.group_of(i);
      const SumGroup& g = s.groups()[gi];
      if (g.members.back() != i) continue;  // whole group handled once, in reverse
      const int K = static_cast<int>(g.children.size());
      const double* e = e_.data() + g.e_offset;
      const double* d = d_.data() + g.d_offset;
      const double* W = cp.weights.data() + cp.w_offset[gi];
      std::memset(t_.data(), 0, sizeof(double) * K);
      for (std::size_t mi = 0; mi < g.members.size(); ++mi) {
        double gm = ga_[g.members[mi]];
        if (gm == 0.0) continue;
        double coeff = gm / d[mi];
        const double* wrow = W + mi * K;
        double* zg = grad + nodes[g.members[mi]].slot;
        for (int k = 0; k < K; ++k) {
          double wk = wrow[k];
          t_[k] += coeff * wk;
          zg[k] += wk * (coeff * e[k] - gm);
        }
      }
      for (const auto& ck : g.chunks) {
        if (ck.source_group >= 0) {
          const SumGroup& src = s.groups()[ck.source_group];
          for (int j = 0; j < ck.len; ++j)
            ga_[src.members[j]] += e[ck.begin + j] * t_[ck.begin + j];
        } else {
          for (int k = ck.begin; k < ck.begin + ck.len; ++k)
            ga_[g.children[k]] += e[k] * t_[k];
        }
      }
    }
  }
}

double log_density(const CircuitStructure& s, const std::vector<double>& psi,
                   const std::vector<double>& row, const std::vector<std::uint8_t>* marg) {
  CompiledParams cp(s);
  cp.load(s, psi.data(), static_cast<int>(psi.size()));
  EvalWorkspace ws(s);
  return ws.forward(s, cp, row.data(), marg ? marg->data() : nullptr);
}

std::pair<double, std::vector<double>> log_density_grad(const CircuitStructure& s,
                                                        const std::vector<double>& psi,
                                                        const std::vector<double>& row,
                                                        const std::vector<std::uint8_t>* marg) {
  CompiledParams cp(s);
  cp.load(s, psi.data(), static_cast<int>(psi.size()));
  EvalWorkspace ws(s);
  double lp = ws.forward(s, cp, row.data(), marg ? marg->data() : nullptr);
  std::vector<double> grad(s.num_parameters(), 0.0);
  ws.backward(s, cp, 1.0, grad.data());
  return {lp, std::move(grad)};
}

std::vector<double> marginal_curve(const CircuitStructure& s, const std::vector<double>& psi,
                                   int var, const std::vector<double>& grid) {
  if (var < 0 || var >= s.num_vars()) throw ShapeMismatch("marginal_curve: bad variable");
  CompiledParams cp(s);
  cp.load(s, psi.data(), static_cast<int>(psi.size()));
  EvalWorkspace ws(s);
  std::vector<std::uint8_t> marg(s.num_vars(), 1);
  marg[var] = 0;
  std::vector<double> row(s.num_vars(), 0.0);
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid) {
    row[var] = x;
    out.push_back(ws.forward(s, cp, row.data(), marg.data()));
  }
  return out;
}

}  // namespace ispn
