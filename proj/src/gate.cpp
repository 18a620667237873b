#include "ispn/gate.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "ispn/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint io writes raw little-endian doubles");

namespace ispn {

int gate_input_dim(int num_vars) { return num_vars * num_vars + 2 * num_vars; }

std::vector<double> encode_regime(const CausalGraph& g, const Intervention& iv,
                                  const std::vector<VarTransform>& transforms) {
  const int n = g.size();
  if (static_cast<int>(transforms.size()) != n)
    throw ShapeMismatch("encode_regime: need one transform per variable");
  std::vector<int> targets;
  targets.reserve(iv.targets.size());
  for (const auto& [name, m] : iv.targets) targets.push_back(g.index_of(name));
  const CausalGraph mg = g.mutilated(targets);

  std::vector<double> x(gate_input_dim(n), 0.0);
  const auto& adj = mg.adjacency();
  for (int i = 0; i < n * n; ++i) x[i] = adj[i] ? 1.0 : 0.0;
  for (const auto& [name, m] : iv.targets) {
    const int v = g.index_of(name);
    x[n * n + v] = 1.0;
    if (m.kind == Mechanism::Kind::Atomic)
      x[n * n + n + v] = (m.value - transforms[v].center) / transforms[v].halfwidth;
  }
  return x;
}

GateNet::GateNet(GateConfig cfg) : cfg_(cfg) {
  if (cfg_.input_dim < 1 || cfg_.hidden < 1 || cfg_.output_dim < 1)
    throw ShapeMismatch("gate dimensions must be positive");
  o_w1_ = 0;
  o_b1_ = o_w1_ + cfg_.hidden * cfg_.input_dim;
  o_w2_ = o_b1_ + cfg_.hidden;
  o_b2_ = o_w2_ + cfg_.hidden * cfg_.hidden;
  o_w3_ = o_b2_ + cfg_.hidden;
  o_b3_ = o_w3_ + cfg_.output_dim * cfg_.hidden;
}

std::vector<double> GateNet::init(RandomStream& rng) const {
  std::vector<double> theta(num_parameters(), 0.0);
  auto glorot = [&](int off, int fan_out, int fan_in) {
    const double lim = std::sqrt(6.0 / (fan_in + fan_out));
    for (int i = 0; i < fan_out * fan_in; ++i) theta[off + i] = rng.uniform(-lim, lim);
  };
  glorot(o_w1_, cfg_.hidden, cfg_.input_dim);
  glorot(o_w2_, cfg_.hidden, cfg_.hidden);
  glorot(o_w3_, cfg_.output_dim, cfg_.hidden);
  return theta;
}

void GateNet::forward(const double* theta, const double* x, double* psi, Cache& cache) const {
  const int in = cfg_.input_dim, h = cfg_.hidden, out = cfg_.output_dim;
  cache.x.assign(x, x + in);
  cache.h1.resize(h);
  cache.h2.resize(h);
  for (int i = 0; i < h; ++i) {
    double a = theta[o_b1_ + i];
    const double* w = theta + o_w1_ + i * in;
    for (int j = 0; j < in; ++j) a += w[j] * x[j];
    cache.h1[i] = a > 0.0 ? a : 0.0;
  }
  for (int i = 0; i < h; ++i) {
    double a = theta[o_b2_ + i];
    const double* w = theta + o_w2_ + i * h;
    for (int j = 0; j < h; ++j) a += w[j] * cache.h1[j];
    cache.h2[i] = a > 0.0 ? a : 0.0;
  }
  for (int o = 0; o < out; ++o) {
    double a = theta[o_b3_ + o];
    const double* w = theta + o_w3_ + o * h;
    for (int j = 0; j < h; ++j) a += w[j] * cache.h2[j];
    psi[o] = a;
  }
}

void GateNet::backward(const double* theta, const Cache& cache, const double* dpsi,
                       double* dtheta) const {
  const int in = cfg_.input_dim, h = cfg_.hidden, out = cfg_.output_dim;
  std::vector<double> dh2(h, 0.0), dh1(h, 0.0);
  for (int o = 0; o < out; ++o) {
    const double g = dpsi[o];
    if (g == 0.0) continue;
    dtheta[o_b3_ + o] += g;
    const double* w = theta + o_w3_ + o * h;
    double* dw = dtheta + o_w3_ + o * h;
    for (int j = 0; j < h; ++j) {
      dw[j] += g * cache.h2[j];
      dh2[j] += g * w[j];
    }
  }
  for (int i = 0; i < h; ++i) {
    if (cache.h2[i] <= 0.0) continue;  // ReLU gate
    const double g = dh2[i];
    dtheta[o_b2_ + i] += g;
    const double* w = theta + o_w2_ + i * h;
    double* dw = dtheta + o_w2_ + i * h;
    for (int j = 0; j < h; ++j) {
      dw[j] += g * cache.h1[j];
      dh1[j] += g * w[j];
    }
  }
  for (int i = 0; i < h; ++i) {
    if (cache.h1[i] <= 0.0) continue;
    const double g = dh1[i];
    dtheta[o_b1_ + i] += g;
    double* dw = dtheta + o_w1_ + i * in;
    for (int j = 0; j < in; ++j) dw[j] += g * cache.x[j];
  }
}

namespace {

constexpr char kMagic[8] = {'I', 'S', 'P', 'N', 'C', 'K', '0', '1'};

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

void save_checkpoint(const std::string& path, const CircuitStructure& s, const GateConfig& gate,
                     const std::vector<double>& theta, const nlohmann::json& meta) {
  if (gate.output_dim != s.num_parameters())
    throw ShapeMismatch("gate output dim " + std::to_string(gate.output_dim) +
                        " != circuit parameter count " + std::to_string(s.num_parameters()));
  if (static_cast<int>(theta.size()) != GateNet(gate).num_parameters())
    throw ShapeMismatch("theta length does not match the gate shape");

  nlohmann::json hdr;
  hdr["structure"] = s.to_json();
  hdr["structure_hash"] = hash_hex(s.hash());
  hdr["gate"] = {{"input_dim", gate.input_dim}, {"hidden", gate.hidden}, {"output_dim", gate.output_dim}};
  hdr["theta_len"] = theta.size();
  hdr["meta"] = meta;
  const std::string hs = hdr.dump();

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw CheckpointError("cannot open '" + path + "' for writing");
  f.write(kMagic, 8);
  const std::uint32_t len = static_cast<std::uint32_t>(hs.size());
  unsigned char lb[4] = {static_cast<unsigned char>(len & 0xff),
                         static_cast<unsigned char>((len >> 8) & 0xff),
                         static_cast<unsigned char>((len >> 16) & 0xff),
                         static_cast<unsigned char>((len >> 24) & 0xff)};
  f.write(reinterpret_cast<const char*>(lb), 4);
  f.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  f.write(reinterpret_cast<const char*>(theta.data()),
          static_cast<std::streamsize>(theta.size() * sizeof(double)));
  if (!f) throw CheckpointError("write failed for '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CheckpointError("cannot open '" + path + "'");
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kMagic, 8) != 0)
    throw CheckpointError("'" + path + "' is not a checkpoint file");
  unsigned char lb[4];
  f.read(reinterpret_cast<char*>(lb), 4);
  if (!f) throw CheckpointError("truncated checkpoint header in '" + path + "'");
  const std::uint32_t len = static_cast<std::uint32_t>(lb[0]) | (static_cast<std::uint32_t>(lb[1]) << 8) |
                            (static_cast<std::uint32_t>(lb[2]) << 16) |
                            (static_cast<std::uint32_t>(lb[3]) << 24);
  std::string hs(len, '\0');
  f.read(hs.data(), len);
  if (!f) throw CheckpointError("truncated checkpoint header in '" + path + "'");

  nlohmann::json hdr;
  try {
    hdr = nlohmann::json::parse(hs);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("bad checkpoint header: " + std::string(e.what()));
  }

  Checkpoint ck;
  try {
    ck.structure = CircuitStructure::from_json(hdr.at("structure"));
    ck.gate.input_dim = hdr.at("gate").at("input_dim").get<int>();
    ck.gate.hidden = hdr.at("gate").at("hidden").get<int>();
    ck.gate.output_dim = hdr.at("gate").at("output_dim").get<int>();
    ck.meta = hdr.value("meta", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("bad checkpoint header: " + std::string(e.what()));
  }
  if (hdr.value("structure_hash", "") != hash_hex(ck.structure.hash()))
    throw HashMismatch("structure hash mismatch in '" + path + "'");
  if (ck.gate.output_dim != ck.structure.num_parameters())
    throw CheckpointError("gate output dim disagrees with the stored structure");

  const std::size_t tl = hdr.at("theta_len").get<std::size_t>();
  if (tl != static_cast<std::size_t>(GateNet(ck.gate).num_parameters()))
    throw CheckpointError("theta length disagrees with the gate shape");
  ck.theta.resize(tl);
  f.read(reinterpret_cast<char*>(ck.theta.data()), static_cast<std::streamsize>(tl * sizeof(double)));
  if (!f || f.gcount() != static_cast<std::streamsize>(tl * sizeof(double)))
    throw CheckpointError("truncated checkpoint payload in '" + path + "'");
  return ck;
}

}  // namespace ispn
