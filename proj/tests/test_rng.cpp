#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ispn/rng.hpp"

using namespace ispn;

namespace {

struct Moments {
  double mean, var;
};

template <class F>
Moments sample_moments(F&& draw, int n) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = draw();
    s += x;
    s2 += x * x;
  }
  double mean = s / n;
  return {mean, s2 / n - mean * mean};
}

template <class F>
double sample_quantile(F&& draw, int n, double q) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = draw();
  std::size_t k = static_cast<std::size_t>(q * n);
  std::nth_element(xs.begin(), xs.begin() + k, xs.end());
  return xs[k];
}

constexpr int kN = 200000;

}  // namespace

TEST_CASE("stream is a seeded mt19937_64") {
  RandomStream rs(42);
  std::mt19937_64 ref(42);
  for (int i = 0; i < 5; ++i) CHECK(rs.next_u64() == ref());
}

TEST_CASE("same seed reproduces, different seed differs") {
  RandomStream a(7), b(7), c(8);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    double x = a.gaussian(), y = b.gaussian(), z = c.gaussian();
    all_equal = all_equal && x == y;
    any_diff = any_diff || x != z;
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform01 moments and range") {
  RandomStream rs(1);
  auto m = sample_moments([&] { return rs.uniform01(); }, kN);
  CHECK(m.mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(m.var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
  RandomStream rs2(2);
  for (int i = 0; i < 1000; ++i) {
    double u = rs2.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("below is in range and roughly uniform") {
  RandomStream rs(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rs.below(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("gaussian moments") {
  RandomStream rs(4);
  auto m = sample_moments([&] { return rs.gaussian(); }, kN);
  CHECK(m.mean == doctest::Approx(0.0).epsilon(1).scale(0.02));
  CHECK(m.var == doctest::Approx(1.0).epsilon(0.02));
  // third moment ~ 0 (symmetry)
  RandomStream rs2(5);
  double s3 = 0.0;
  for (int i = 0; i < kN; ++i) {
    double x = rs2.gaussian();
    s3 += x * x * x;
  }
  CHECK(std::fabs(s3 / kN) < 0.05);
}

TEST_CASE("gamma moments: mean k*theta, var k*theta^2") {
  RandomStream rs(6);
  auto m = sample_moments([&] { return rs.gamma(2.0, 5.0); }, kN);
  CHECK(m.mean == doctest::Approx(10.0).epsilon(0.02));
  CHECK(m.var == doctest::Approx(50.0).epsilon(0.05));
  // small-shape branch
  RandomStream rs2(7);
  auto m2 = sample_moments([&] { return rs2.gamma(0.5, 2.0); }, kN);
  CHECK(m2.mean == doctest::Approx(1.0).epsilon(0.03));
  CHECK(m2.var == doctest::Approx(2.0).epsilon(0.06));
}

TEST_CASE("beta moments") {
  RandomStream rs(8);
  // Beta(2,5): mean 2/7, var 10/(49*8)
  auto m = sample_moments([&] { return rs.beta(2.0, 5.0); }, kN);
  CHECK(m.mean == doctest::Approx(2.0 / 7.0).epsilon(0.02));
  CHECK(m.var == doctest::Approx(10.0 / (49.0 * 8.0)).epsilon(0.05));
}

TEST_CASE("student t: variance nu/(nu-2), heavy-tail quantiles") {
  RandomStream rs(9);
  // t(5) has finite 4th moment, variance 5/3.
  auto m = sample_moments([&] { return rs.student_t(5.0); }, kN);
  CHECK(m.mean == doctest::Approx(0.0).epsilon(1).scale(0.03));
  CHECK(m.var == doctest::Approx(5.0 / 3.0).epsilon(0.08));
  // |t(3)| median is 0.76489 (75% point of t3).
  RandomStream rs2(10);
  double med = sample_quantile([&] { return std::fabs(rs2.student_t(3.0)); }, kN, 0.5);
  CHECK(med == doctest::Approx(0.76489).epsilon(0.02));
}

TEST_CASE("laplace moments") {
  RandomStream rs(11);
  auto m = sample_moments([&] { return rs.laplace(5.0, 5.0); }, kN);
  CHECK(m.mean == doctest::Approx(5.0).epsilon(0.02));
  CHECK(m.var == doctest::Approx(50.0).epsilon(0.05));
}

TEST_CASE("bernoulli frequency") {
  RandomStream rs(12);
  int ones = 0;
  for (int i = 0; i < kN; ++i) ones += rs.bernoulli(0.3) ? 1 : 0;
  CHECK(static_cast<double>(ones) / kN == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("substream seeds decorrelate columns") {
  // Neighbouring seeds give unrelated streams once passed through splitmix.
  CHECK(substream_seed(1, 0) != substream_seed(1, 1));
  CHECK(substream_seed(1, 0) != substream_seed(2, 0));
  RandomStream a(substream_seed(1, 0)), b(substream_seed(1, 1));
  double corr = 0.0;
  for (int i = 0; i < kN; ++i)
    corr += (a.uniform01() - 0.5) * (b.uniform01() - 0.5);
  corr /= kN * (1.0 / 12.0);
  CHECK(std::fabs(corr) < 0.02);
}
