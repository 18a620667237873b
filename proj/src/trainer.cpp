#include "ispn/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>

#include "ispn/errors.hpp"
#include "ispn/io.hpp"
#include "ispn/rng.hpp"

namespace ispn {

BatchWork::BatchWork(const CircuitStructure& s, const GateNet& net)
    : params(s), ws(s), psi(s.num_parameters()), dpsi(s.num_parameters()) {
  (void)net;
}

double batch_pass(const CircuitStructure& s, const GateNet& net, const double* theta,
                  const std::vector<double>& x, const Dataset& data, const int* rows, int count,
                  double* dtheta, BatchWork& work) {
  net.forward(theta, x.data(), work.psi.data(), work.cache);
  work.params.load(s, work.psi.data(), static_cast<int>(work.psi.size()));
  std::memset(work.dpsi.data(), 0, sizeof(double) * work.dpsi.size());

  const double w = dtheta ? -1.0 / count : 0.0;
  double sum = 0.0;
  for (int i = 0; i < count; ++i) {
    const double* row = data.values.data() + static_cast<std::size_t>(rows[i]) * data.n_cols;
    const double lp = work.ws.forward(s, work.params, row);
    if (!std::isfinite(lp)) return lp;
    sum += lp;
    if (dtheta) work.ws.backward(s, work.params, w, work.dpsi.data());
  }
  if (dtheta) net.backward(theta, work.cache, work.dpsi.data(), dtheta);
  return sum / count;
}

TrainResult train(const CircuitStructure& s, const std::vector<Dataset>& roster,
                  const TrainConfig& cfg) {
  if (roster.empty()) throw ShapeMismatch("training roster is empty");
  if (cfg.epochs < 0 || cfg.batch_size < 1)
    throw ShapeMismatch("bad train config: epochs >= 0, batch_size >= 1 required");
  const int K = static_cast<int>(roster.size());
  for (const Dataset& d : roster) {
    if (d.n_cols != s.num_vars() || d.names != roster[0].names)
      throw ShapeMismatch("roster datasets disagree on the variable schema");
    if (d.n_rows < 1) throw ShapeMismatch("empty dataset in roster");
  }

  const GateConfig gcfg{gate_input_dim(s.num_vars()), cfg.hidden, s.num_parameters()};
  const GateNet net(gcfg);
  RandomStream rng(cfg.seed);

  TrainResult res;
  res.gate = gcfg;
  res.theta = net.init(rng);

  std::vector<std::vector<double>> enc;
  enc.reserve(K);
  for (const Dataset& d : roster)
    enc.push_back(encode_regime(d.graph, d.intervention, s.transforms()));

  BatchWork work(s, net);
  const int P = net.num_parameters();
  std::vector<double> grad(P), m(P, 0.0), v(P, 0.0);
  long long t = 0;

  std::vector<std::vector<int>> order(K);
  for (int r = 0; r < K; ++r) {
    order[r].resize(roster[r].n_rows);
    for (int i = 0; i < roster[r].n_rows; ++i) order[r][i] = i;
  }
  int max_batches = 0;
  for (int r = 0; r < K; ++r)
    max_batches = std::max(max_batches, (roster[r].n_rows + cfg.batch_size - 1) / cfg.batch_size);

  const auto start = std::chrono::steady_clock::now();
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (int r = 0; r < K; ++r)
      for (int i = roster[r].n_rows - 1; i > 0; --i)
        std::swap(order[r][i], order[r][rng.below(static_cast<std::uint64_t>(i) + 1)]);

    std::vector<double> loglik(K, 0.0);
    for (int b = 0; b < max_batches; ++b) {
      for (int r = 0; r < K; ++r) {
        const int begin = b * cfg.batch_size;
        if (begin >= roster[r].n_rows) continue;
        const int count = std::min(cfg.batch_size, roster[r].n_rows - begin);
        std::memset(grad.data(), 0, sizeof(double) * grad.size());
        const double mean = batch_pass(s, net, res.theta.data(), enc[r], roster[r],
                                       order[r].data() + begin, count, grad.data(), work);
        ++res.batches;
        ++res.gate_forwards;
        if (!std::isfinite(mean))
          throw NonFiniteLoss("non-finite loss at epoch " + std::to_string(epoch) + ", regime '" +
                              roster[r].intervention.describe() + "', batch " + std::to_string(b));
        loglik[r] += mean * count;

        ++t;
        const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
        for (int i = 0; i < P; ++i) {
          m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
          v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
          res.theta[i] -= cfg.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg.adam_eps);
        }
      }
    }

    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    double total = 0.0;
    long long rows = 0;
    for (int r = 0; r < K; ++r) {
      res.log.push_back({epoch, roster[r].intervention.describe(), loglik[r] / roster[r].n_rows, ms});
      total += loglik[r];
      rows += roster[r].n_rows;
    }
    res.log.push_back({epoch, "all", total / static_cast<double>(rows), ms});
  }
  return res;
}

double gradcheck(const CircuitStructure& s, const GateNet& net, const std::vector<double>& theta,
                 const std::vector<double>& x, const Dataset& data, int num_rows, double h,
                 bool corrupt) {
  std::vector<int> rows(num_rows);
  for (int i = 0; i < num_rows; ++i) rows[i] = i;
  BatchWork work(s, net);
  const int P = net.num_parameters();
  std::vector<double> grad(P, 0.0);
  batch_pass(s, net, theta.data(), x, data, rows.data(), num_rows, grad.data(), work);
  if (corrupt)
    for (double& g : grad) g = -g;

  // Central differences carry cancellation noise ~ eps*|loss|/h, so relative
  // error is meaningless for coordinates far below the gradient's own scale;
  // floor the denominator at 1e-3 of the largest entry.
  double linf = 0.0;
  for (double g : grad) linf = std::max(linf, std::fabs(g));

  double worst = 0.0;
  std::vector<double> th = theta;
  for (int i = 0; i < P; ++i) {
    if (std::fabs(grad[i]) <= 1e-8) continue;
    const double keep = th[i];
    th[i] = keep + h;
    const double up = -batch_pass(s, net, th.data(), x, data, rows.data(), num_rows, nullptr, work);
    th[i] = keep - h;
    const double dn = -batch_pass(s, net, th.data(), x, data, rows.data(), num_rows, nullptr, work);
    th[i] = keep;
    const double fd = (up - dn) / (2.0 * h);
    const double scale = std::max({std::fabs(fd), std::fabs(grad[i]), 1e-3 * linf});
    worst = std::max(worst, std::fabs(fd - grad[i]) / scale);
  }
  return worst;
}

void write_train_log(const std::string& path, const std::vector<TrainLogRow>& log,
                     const std::string& run_id) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw FormatError("cannot open '" + path + "' for writing");
  f << "# run " << run_id << "\n";
  f << "epoch,regime,mean_loglik,wall_ms\n";
  for (const TrainLogRow& r : log)
    f << r.epoch << ',' << r.regime << ',' << format_double(r.mean_loglik) << ','
      << format_double(r.wall_ms) << "\n";
}

}  // namespace ispn
