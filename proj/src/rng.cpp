#include "ispn/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ispn {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(0x5851f42d4c957f2dULL * (index + 1)));
}

double RandomStream::uniform01() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform01_open() {
  return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::uniform(double a, double b) {
  return a + (b - a) * uniform01();
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RandomStream::below: n == 0");
  // Unbiased rejection sampling on the top bits.
  std::uint64_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    std::uint64_t v = eng_() & mask;
    if (v < n) return v;
  }
}

double RandomStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01_open();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double RandomStream::gamma(double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0)
    throw std::invalid_argument("gamma: shape and scale must be positive");
  if (shape < 1.0) {
    // Boost to shape+1 and shrink (Marsaglia-Tsang small-shape trick).
    double u = uniform01_open();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform01_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

double RandomStream::beta(double a, double b) {
  double x = gamma(a, 1.0);
  double y = gamma(b, 1.0);
  return x / (x + y);
}

double RandomStream::student_t(double nu) {
  if (nu <= 0.0) throw std::invalid_argument("student_t: nu must be positive");
  double z = gaussian();
  double v = gamma(0.5 * nu, 2.0);  // chi-square with nu dof
  return z * std::sqrt(nu / v);
}

double RandomStream::laplace(double mu, double b) {
  double u = uniform01() - 0.5;
  double s = u < 0.0 ? -1.0 : 1.0;
  return mu - b * s * std::log(1.0 - 2.0 * std::fabs(u));
}

}  // namespace ispn
