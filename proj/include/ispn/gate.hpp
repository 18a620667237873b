#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "ispn/circuit.hpp"
#include "ispn/rng.hpp"
#include "ispn/scm.hpp"

namespace ispn {

// Gate input layout: flattened mutilated adjacency (row major, N^2), then per
// variable an intervened indicator and the standardized atomic value (zero
// for observational regimes and non-degenerate interventions).
int gate_input_dim(int num_vars);

std::vector<double> encode_regime(const CausalGraph& g, const Intervention& iv,
                                  const std::vector<VarTransform>& transforms);

// Two-hidden-layer ReLU perceptron mapping a regime encoding to the circuit
// parameter vector psi. Weights live in one flat theta:
// [W1 (h x in), b1, W2 (h x h), b2, W3 (out x h), b3].
struct GateConfig {
  int input_dim = 0;
  int hidden = 10;
  int output_dim = 0;

  bool operator==(const GateConfig&) const = default;
};

class GateNet {
 public:
  explicit GateNet(GateConfig cfg);

  const GateConfig& config() const { return cfg_; }
  int num_parameters() const { return o_b3_ + cfg_.output_dim; }

  // Glorot-uniform weight blocks, zero biases.
  std::vector<double> init(RandomStream& rng) const;

  struct Cache {
    std::vector<double> x, h1, h2;
  };

  void forward(const double* theta, const double* x, double* psi, Cache& cache) const;
  // Accumulates dL/dtheta for the row held in `cache` (written by forward).
  void backward(const double* theta, const Cache& cache, const double* dpsi,
                double* dtheta) const;

 private:
  GateConfig cfg_;
  int o_w1_, o_b1_, o_w2_, o_b2_, o_w3_, o_b3_;
};

// Checkpoint file: 8-byte magic, little-endian uint32 header length, JSON
// header (circuit structure + hash + gate shape + metadata), then theta as
// little-endian f64. The stored structure hash is re-verified on load.
struct Checkpoint {
  CircuitStructure structure;
  GateConfig gate;
  std::vector<double> theta;
  nlohmann::json meta;
};

void save_checkpoint(const std::string& path, const CircuitStructure& s, const GateConfig& gate,
                     const std::vector<double>& theta, const nlohmann::json& meta);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ispn
