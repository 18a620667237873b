#pragma once

#include <cstdint>
#include <random>

namespace ispn {

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic random stream: mt19937_64 plus hand-rolled transforms so
// sampled values are bit-identical across platforms and standard libraries
// (std::normal_distribution et al. are not pinned by the standard).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0,1), 53-bit resolution.
  double uniform01();
  // Uniform on (0,1); safe for logs.
  double uniform01_open();
  double uniform(double a, double b);
  // Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform01() < p; }

  // Box-Muller with spare caching.
  double gaussian();
  double gaussian(double mu, double sigma) { return mu + sigma * gaussian(); }

  // Marsaglia-Tsang; shape > 0, scale > 0.
  double gamma(double shape, double scale);
  double beta(double a, double b);
  double student_t(double nu);
  double laplace(double mu, double b);

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Seed for the stream of variable `index` within a dataset drawn with `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ispn
