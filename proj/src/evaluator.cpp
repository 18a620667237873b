#include "ispn/evaluator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "ispn/errors.hpp"
#include "ispn/io.hpp"
#include "ispn/stats.hpp"

namespace ispn {

namespace {

constexpr int kBinaryGrid = 1401;  // x in [-3, 4], step 0.005, x=0.5 at 700
constexpr int kBins = 100;

double sd_of(const std::vector<double>& xs) {
  return xs.size() > 1 ? std::sqrt(variance(xs)) : 0.0;
}

std::vector<double> renormalized(std::vector<double> m) {
  double t = 0.0;
  for (double v : m) t += v;
  if (!(t > 0.0)) throw ZeroSupport("marginal readout has no mass");
  for (double& v : m) v /= t;
  return m;
}

// trapezoid mass of exp(lp) over [lo, hi] of a uniform grid
double trapezoid_mass(const std::vector<double>& lp, int lo, int hi, double step) {
  double m = 0.5 * (std::exp(lp[lo]) + std::exp(lp[hi]));
  for (int i = lo + 1; i < hi; ++i) m += std::exp(lp[i]);
  return m * step;
}

std::vector<double> grid_for(const Domain& d) {
  if (d.binary) return {0.0, 1.0};
  std::vector<double> centers(kBins);
  const double w = (d.hi - d.lo) / kBins;
  for (int k = 0; k < kBins; ++k) centers[k] = d.lo + (k + 0.5) * w;
  return centers;
}

}  // namespace

TrainedModel model_from_checkpoint(const Checkpoint& ck) {
  TrainedModel m;
  m.structure = ck.structure;
  m.gate = ck.gate;
  m.theta = ck.theta;
  if (ck.meta.contains("regimes"))
    for (const auto& r : ck.meta.at("regimes")) m.regimes.push_back(r.get<std::string>());
  return m;
}

std::vector<double> model_psi(const TrainedModel& m, const Scm& scm, const Intervention& iv) {
  const std::string id = iv.describe();
  if (std::find(m.regimes.begin(), m.regimes.end(), id) == m.regimes.end())
    throw UnknownRegime("model was not trained on regime '" + id + "'");
  GateNet net(m.gate);
  GateNet::Cache cache;
  std::vector<double> x = encode_regime(scm.graph, iv, m.structure.transforms());
  std::vector<double> psi(m.gate.output_dim);
  net.forward(m.theta.data(), x.data(), psi.data(), cache);
  return psi;
}

std::vector<double> model_marginal(const TrainedModel& m, const Scm& scm, const Intervention& iv,
                                   int var) {
  const std::vector<double> psi = model_psi(m, scm, iv);
  const Domain& dom = scm.domains[var];
  if (dom.binary) {
    const double step = 0.005;
    std::vector<double> grid(kBinaryGrid);
    for (int i = 0; i < kBinaryGrid; ++i) grid[i] = -3.0 + step * i;
    const std::vector<double> lp = marginal_curve(m.structure, psi, var, grid);
    const double m0 = trapezoid_mass(lp, 0, 700, step);
    const double m1 = trapezoid_mass(lp, 700, kBinaryGrid - 1, step);
    return renormalized({m0, m1});
  }
  const std::vector<double> centers = grid_for(dom);
  const std::vector<double> lp = marginal_curve(m.structure, psi, var, centers);
  std::vector<double> mass(centers.size());
  for (std::size_t k = 0; k < centers.size(); ++k) mass[k] = std::exp(lp[k]);
  return renormalized(std::move(mass));
}

double model_mean(const TrainedModel& m, const Scm& scm, const Intervention& iv, int var) {
  const std::vector<double> mass = model_marginal(m, scm, iv, var);
  const std::vector<double> grid = grid_for(scm.domains[var]);
  double e = 0.0;
  for (std::size_t k = 0; k < mass.size(); ++k) e += grid[k] * mass[k];
  return e;
}

double model_ate(const TrainedModel& m, const Scm& scm, const std::string& treatment,
                 const std::string& outcome) {
  const int out = scm.graph.index_of(outcome);
  Intervention iv0, iv1;
  iv0.targets[treatment] = Mechanism::make_atomic(0.0);
  iv1.targets[treatment] = Mechanism::make_atomic(1.0);
  return model_mean(m, scm, iv1, out) - model_mean(m, scm, iv0, out);
}

std::vector<double> oracle_marginal(const Scm& scm, const Intervention& iv, int var) {
  return exact_query(scm, iv, var);
}

std::vector<double> mc_marginal(const Scm& scm, const Intervention& iv, int var, int mc_n,
                                std::uint64_t seed) {
  const Dataset ds = sample(scm, iv, mc_n, seed);
  const Domain& dom = scm.domains[var];
  if (dom.binary) {
    double ones = 0.0;
    for (int r = 0; r < ds.n_rows; ++r) ones += ds.at(r, var) > 0.5 ? 1.0 : 0.0;
    return {1.0 - ones / ds.n_rows, ones / ds.n_rows};
  }
  std::vector<double> mass(kBins, 0.0);
  const double w = (dom.hi - dom.lo) / kBins;
  for (int r = 0; r < ds.n_rows; ++r) {
    int k = static_cast<int>((ds.at(r, var) - dom.lo) / w);
    k = std::clamp(k, 0, kBins - 1);
    mass[k] += 1.0;
  }
  return renormalized(std::move(mass));
}

bool oracle_usable(const Scm& scm, const Intervention& iv) {
  if (scm.size() > 20) return false;
  for (const Domain& d : scm.domains)
    if (!d.binary) return false;
  for (const auto& [name, m] : iv.targets) {
    if (m.kind == Mechanism::Kind::Atomic) continue;
    if (m.kind == Mechanism::Kind::Distribution && m.dist.finite_support()) continue;
    return false;
  }
  return true;
}

std::vector<double> ground_marginal(const Scm& scm, const Intervention& iv, int var, int mc_n,
                                    std::uint64_t seed) {
  if (oracle_usable(scm, iv)) return oracle_marginal(scm, iv, var);
  return mc_marginal(scm, iv, var, mc_n, seed);
}

std::vector<std::vector<std::vector<double>>> ground_truth_table(
    const Scm& scm, const std::vector<Intervention>& roster, int mc_n, std::uint64_t seed) {
  const int n = scm.size();
  std::vector<std::vector<std::vector<double>>> table(roster.size());
  for (std::size_t r = 0; r < roster.size(); ++r) {
    table[r].resize(n);
    for (int v = 0; v < n; ++v) {
      if (roster[r].targets.count(scm.graph.names()[v])) continue;  // stays empty
      table[r][v] = ground_marginal(scm, roster[r], v, mc_n,
                                    substream_seed(seed, r * static_cast<std::size_t>(n) + v));
    }
  }
  return table;
}

RatConfig dataset_default_rat(const std::string& id) {
  if (id == "health") return {1, 120, 2, 1, 0};
  if (id == "asia") return {2, 120, 3, 1, 0};
  if (id == "earthquake" || id == "cancer") return {5, 96, 2, 1, 0};
  throw UnknownDataset("no default circuit size for '" + id + "'");
}

TrainConfig dataset_default_train(const std::string& id) {
  TrainConfig cfg;
  if (id == "health") {
    cfg.epochs = 130;
    cfg.batch_size = 1000;
  } else if (id != "asia" && id != "earthquake" && id != "cancer") {
    throw UnknownDataset("no default training config for '" + id + "'");
  }
  return cfg;
}

int dataset_default_n(const std::string& id) {
  if (id == "health") return 100000;
  if (id == "asia" || id == "earthquake" || id == "cancer") return 10000;
  throw UnknownDataset("no default sample count for '" + id + "'");
}

std::vector<RatConfig> dataset_sweep(const std::string& id) {
  // five sum-weight slot counts per dataset; R*S*(I^2+1) weights at depth 1
  if (id == "health")  // 300 600 1000 1500 2000
    return {{1, 60, 2, 1, 0}, {1, 120, 2, 1, 0}, {2, 100, 2, 1, 0}, {3, 100, 2, 1, 0},
            {4, 100, 2, 1, 0}};
  if (id == "asia")  // 600 1200 1800 2400 3200
    return {{1, 60, 3, 1, 0}, {2, 60, 3, 1, 0}, {3, 60, 3, 1, 0}, {2, 120, 3, 1, 0},
            {4, 80, 3, 1, 0}};
  if (id == "earthquake" || id == "cancer")  // 600 1200 1800 2400 3200
    return {{1, 120, 2, 1, 0}, {2, 120, 2, 1, 0}, {3, 120, 2, 1, 0}, {5, 96, 2, 1, 0},
            {5, 128, 2, 1, 0}};
  throw UnknownDataset("no capacity sweep for '" + id + "'");
}

TrainedModel run_training(const Scm& scm, const std::vector<Intervention>& roster, int n,
                          RatConfig rat, TrainConfig cfg, std::uint64_t seed) {
  rat.seed = seed;
  cfg.seed = seed;
  std::vector<Dataset> data;
  data.reserve(roster.size());
  for (std::size_t k = 0; k < roster.size(); ++k)
    data.push_back(sample(scm, roster[k], n, substream_seed(seed, k)));
  CircuitStructure s = build_rat(rat, scm.domains);
  TrainResult res = train(s, data, cfg);
  TrainedModel m;
  m.structure = std::move(s);
  m.gate = res.gate;
  m.theta = std::move(res.theta);
  for (const Intervention& iv : roster) m.regimes.push_back(iv.describe());
  return m;
}

std::vector<MarginalCell> marginal_report(
    const std::vector<TrainedModel>& models, const Scm& scm,
    const std::vector<Intervention>& roster,
    const std::vector<std::vector<std::vector<double>>>& ground) {
  if (ground.size() != roster.size())
    throw ShapeMismatch("ground-truth table does not match the roster");
  std::vector<MarginalCell> cells;
  for (std::size_t r = 0; r < roster.size(); ++r) {
    for (int v = 0; v < scm.size(); ++v) {
      if (ground[r][v].empty()) continue;
      MarginalCell c;
      c.regime = roster[r].describe();
      c.variable = scm.graph.names()[v];
      c.grid = grid_for(scm.domains[v]);
      c.ground = ground[r][v];
      c.model_mean.assign(c.ground.size(), 0.0);
      for (const TrainedModel& m : models) {
        std::vector<double> mass = model_marginal(m, scm, roster[r], v);
        c.jsd.push_back(jsd(mass, c.ground));
        for (std::size_t k = 0; k < mass.size(); ++k) c.model_mean[k] += mass[k];
        c.per_seed.push_back(std::move(mass));
      }
      for (double& m : c.model_mean) m /= static_cast<double>(models.size());
      c.jsd_mean = mean(c.jsd);
      c.jsd_sd = sd_of(c.jsd);
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

std::vector<SweepResult> capacity_sweep(
    const Scm& scm, const std::vector<Intervention>& roster, int n,
    const std::vector<RatConfig>& sizes, const std::vector<std::uint64_t>& seeds,
    const TrainConfig& cfg, const std::vector<std::vector<std::vector<double>>>& ground) {
  std::vector<SweepResult> out;
  for (const RatConfig& size : sizes) {
    std::vector<TrainedModel> models;
    models.reserve(seeds.size());
    for (std::uint64_t seed : seeds) models.push_back(run_training(scm, roster, n, size, cfg, seed));
    const std::vector<MarginalCell> cells = marginal_report(models, scm, roster, ground);
    std::vector<double> all;
    for (const MarginalCell& c : cells) all.insert(all.end(), c.jsd.begin(), c.jsd.end());
    SweepResult r;
    r.rat = size;
    r.num_sum_weights = models.front().structure.num_sum_weights();
    r.node_count = static_cast<int>(models.front().structure.nodes().size());
    r.jsd_mean = mean(all);
    r.jsd_sd = sd_of(all);
    out.push_back(r);
  }
  return out;
}

AteRow ate_experiment(const Scm& scm, const std::string& treatment, const std::string& outcome,
                      int n, RatConfig rat, TrainConfig cfg,
                      const std::vector<std::uint64_t>& seeds) {
  Intervention iv0, iv1;
  iv0.targets[treatment] = Mechanism::make_atomic(0.0);
  iv1.targets[treatment] = Mechanism::make_atomic(1.0);
  const std::vector<Intervention> roster = {iv0, iv1};

  AteRow row;
  row.treatment = treatment;
  row.outcome = outcome;
  row.oracle_ate = average_treatment_effect(scm, scm.graph.index_of(treatment),
                                            scm.graph.index_of(outcome));
  for (std::uint64_t seed : seeds) {
    TrainedModel m = run_training(scm, roster, n, rat, cfg, seed);
    row.model.push_back(model_ate(m, scm, treatment, outcome));
  }
  row.model_mean = mean(row.model);
  row.model_sd = sd_of(row.model);
  return row;
}

double time_marginal_queries(const CircuitStructure& s, const std::vector<double>& psi,
                             int queries) {
  CompiledParams cp(s);
  cp.load(s, psi.data(), static_cast<int>(psi.size()));
  EvalWorkspace ws(s);
  const int n = s.num_vars();
  std::vector<double> row(n, 0.0);
  std::vector<std::uint8_t> marg(n, 1);
  volatile double sink = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int q = 0; q < queries; ++q) {
    const int v = q % n;
    const VarTransform& t = s.transforms()[v];
    marg[v] = 0;
    row[v] = t.center + ((q / n) % 7 - 3) * 0.25 * t.halfwidth;
    sink = sink + ws.forward(s, cp, row.data(), marg.data());
    marg[v] = 1;
  }
  (void)sink;
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<BenchRow> runtime_bench(const CircuitStructure& s, const std::vector<Dataset>& roster,
                                    const TrainConfig& cfg, int passes) {
  std::vector<BenchRow> rows;
  TrainConfig one = cfg;
  one.epochs = 1;
  std::vector<double> train_ms, query_ms;
  for (int p = 0; p < passes; ++p) {
    const auto t0 = std::chrono::steady_clock::now();
    train(s, roster, one);
    train_ms.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  const std::vector<double> psi(s.num_parameters(), 0.0);
  for (int p = 0; p < passes; ++p) query_ms.push_back(time_marginal_queries(s, psi, 1000));

  const int nodes = static_cast<int>(s.nodes().size());
  rows.push_back({"train_pass", nodes, mean(train_ms), sd_of(train_ms), passes});
  rows.push_back({"query_1k", nodes, mean(query_ms), sd_of(query_ms), passes});
  return rows;
}

void write_marginal_report(const std::string& path, const std::vector<MarginalCell>& cells,
                           const std::string& run_id) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw FormatError("cannot open '" + path + "' for writing");
  f << "# run " << run_id << "\n";
  f << "regime,variable,jsd_mean,jsd_sd,seeds\n";
  for (const MarginalCell& c : cells)
    f << c.regime << ',' << c.variable << ',' << format_double(c.jsd_mean) << ','
      << format_double(c.jsd_sd) << ',' << c.per_seed.size() << "\n";
}

void write_marginal_curves_json(const std::string& path, const std::vector<MarginalCell>& cells,
                                const std::string& run_id) {
  nlohmann::json j;
  j["run"] = run_id;
  j["cells"] = nlohmann::json::array();
  for (const MarginalCell& c : cells) {
    nlohmann::json e;
    e["regime"] = c.regime;
    e["variable"] = c.variable;
    e["grid"] = c.grid;
    e["ground"] = c.ground;
    e["model_mean"] = c.model_mean;
    e["per_seed"] = c.per_seed;
    e["jsd"] = c.jsd;
    j["cells"].push_back(std::move(e));
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw FormatError("cannot open '" + path + "' for writing");
  f << j.dump(2) << "\n";
}

void write_ate_report(const std::string& path, const std::vector<AteRow>& rows,
                      const std::string& run_id) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw FormatError("cannot open '" + path + "' for writing");
  f << "# run " << run_id << "\n";
  f << "treatment,outcome,oracle_ate,model_mean,model_sd,seeds\n";
  for (const AteRow& r : rows)
    f << r.treatment << ',' << r.outcome << ',' << format_double(r.oracle_ate) << ','
      << format_double(r.model_mean) << ',' << format_double(r.model_sd) << ',' << r.model.size()
      << "\n";
}

void write_sweep_report(const std::string& path, const std::vector<SweepResult>& rows,
                        const std::string& run_id) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw FormatError("cannot open '" + path + "' for writing");
  f << "# run " << run_id << "\n";
  f << "sum_weights,nodes,jsd_mean,jsd_sd\n";
  for (const SweepResult& r : rows)
    f << r.num_sum_weights << ',' << r.node_count << ',' << format_double(r.jsd_mean) << ','
      << format_double(r.jsd_sd) << "\n";
}

void write_bench_report(const std::string& path, const std::vector<BenchRow>& rows,
                        const std::string& run_id) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw FormatError("cannot open '" + path + "' for writing");
  f << "# run " << run_id << "\n";
  f << "label,nodes,mean_ms,sd_ms,passes\n";
  for (const BenchRow& r : rows)
    f << r.label << ',' << r.nodes << ',' << format_double(r.mean_ms) << ','
      << format_double(r.sd_ms) << ',' << r.passes << "\n";
}

}  // namespace ispn
