#include "ispn/distribution.hpp"

#include <cmath>

#include "ispn/errors.hpp"

namespace ispn {

namespace {
void need(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}
}  // namespace

void DistributionSpec::validate() const {
  switch (kind) {
    case Kind::Uniform:
      need(p.size() == 2, "uniform needs 2 params");
      need(p[0] < p[1], "uniform needs a < b");
      break;
    case Kind::Bernoulli:
      need(p.size() == 1, "bernoulli needs 1 param");
      need(p[0] >= 0.0 && p[0] <= 1.0, "bernoulli prob outside [0,1]");
      break;
    case Kind::Gaussian:
      need(p.size() == 2, "gaussian needs 2 params");
      need(p[1] > 0.0, "gaussian sigma must be positive");
      break;
    case Kind::Gamma:
      need(p.size() == 2, "gamma needs 2 params");
      need(p[0] > 0.0 && p[1] > 0.0, "gamma params must be positive");
      break;
    case Kind::Beta:
      need(p.size() == 4, "beta needs 4 params");
      need(p[0] > 0.0 && p[1] > 0.0, "beta shape params must be positive");
      need(p[2] < p[3], "beta range needs l < k");
      break;
    case Kind::TwoPoint:
      need(p.size() == 2, "two-point needs 2 params");
      break;
    case Kind::Laplace:
      need(p.size() == 2, "laplace needs 2 params");
      need(p[1] > 0.0, "laplace scale must be positive");
      break;
    case Kind::StudentT:
      need(p.size() == 1, "student-t needs 1 param");
      need(p[0] > 0.0, "student-t nu must be positive");
      break;
  }
}

double DistributionSpec::sample(RandomStream& rng) const {
  switch (kind) {
    case Kind::Uniform: return rng.uniform(p[0], p[1]);
    case Kind::Bernoulli: return rng.bernoulli(p[0]) ? 1.0 : 0.0;
    case Kind::Gaussian: return rng.gaussian(p[0], p[1]);
    case Kind::Gamma: return rng.gamma(p[0], p[1]);
    case Kind::Beta: return p[2] + (p[3] - p[2]) * rng.beta(p[0], p[1]);
    case Kind::TwoPoint: return rng.bernoulli(0.5) ? p[1] : p[0];
    case Kind::Laplace: return rng.laplace(p[0], p[1]);
    case Kind::StudentT: return rng.student_t(p[0]);
  }
  throw Error("unreachable");
}

bool DistributionSpec::finite_support() const {
  return kind == Kind::Bernoulli || kind == Kind::TwoPoint;
}

std::vector<std::pair<double, double>> DistributionSpec::support() const {
  switch (kind) {
    case Kind::Bernoulli: return {{0.0, 1.0 - p[0]}, {1.0, p[0]}};
    case Kind::TwoPoint: return {{p[0], 0.5}, {p[1], 0.5}};
    default: throw DomainError("support(): not a finite-support distribution");
  }
}

std::string DistributionSpec::describe() const {
  switch (kind) {
    case Kind::Uniform: return "uniform(" + fmt(p[0]) + "," + fmt(p[1]) + ")";
    case Kind::Bernoulli: return "bern(" + fmt(p[0]) + ")";
    case Kind::Gaussian: return "gauss(" + fmt(p[0]) + "," + fmt(p[1]) + ")";
    case Kind::Gamma: return "gamma(" + fmt(p[0]) + "," + fmt(p[1]) + ")";
    case Kind::Beta: return "beta(" + fmt(p[0]) + "," + fmt(p[1]) + "," + fmt(p[2]) + "," + fmt(p[3]) + ")";
    case Kind::TwoPoint: return "ind(" + fmt(p[0]) + "," + fmt(p[1]) + ")";
    case Kind::Laplace: return "laplace(" + fmt(p[0]) + "," + fmt(p[1]) + ")";
    case Kind::StudentT: return "studentt(" + fmt(p[0]) + ")";
  }
  return "?";
}

}  // namespace ispn
