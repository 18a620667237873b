#include "ispn/mechanism.hpp"

#include <cmath>
#include <cstdio>

#include "ispn/errors.hpp"

namespace ispn {

int Equation::arity() const {
  switch (cls) {
    case Class::AbsScale: return 0;
    case Class::Lin1: return 1;
    case Class::QuadLin: return 2;
  }
  return -1;
}

double Equation::eval(const std::vector<double>& pa, double eps) const {
  double v = 0.0;
  switch (cls) {
    case Class::AbsScale:
      v = params[0] * std::fabs(eps);
      break;
    case Class::Lin1:
      v = params[0] * pa[0] + eps;
      break;
    case Class::QuadLin:
      v = params[0] * (pa[0] - pa[0] * pa[0] / params[1]) + params[2] * pa[1] + eps;
      break;
  }
  if (v < lo) v = lo;
  if (v > hi) v = hi;
  return v;
}

void Equation::validate() const {
  std::size_t want = 0;
  switch (cls) {
    case Class::AbsScale: want = 1; break;
    case Class::Lin1: want = 1; break;
    case Class::QuadLin: want = 3; break;
  }
  if (params.size() != want)
    throw DomainError("equation " + equation_class_name(cls) + " needs " +
                      std::to_string(want) + " params, got " + std::to_string(params.size()));
  if (!(lo < hi)) throw DomainError("equation clamp needs lo < hi");
  noise.validate();
}

std::string equation_class_name(Equation::Class c) {
  switch (c) {
    case Equation::Class::AbsScale: return "absscale";
    case Equation::Class::Lin1: return "lin1";
    case Equation::Class::QuadLin: return "quadlin";
  }
  return "?";
}

Equation::Class equation_class_from_name(const std::string& s) {
  if (s == "absscale") return Equation::Class::AbsScale;
  if (s == "lin1") return Equation::Class::Lin1;
  if (s == "quadlin") return Equation::Class::QuadLin;
  throw DomainError("unknown equation class '" + s + "'");
}

Mechanism Mechanism::make_cpt(std::vector<double> p1) {
  Mechanism m;
  m.kind = Kind::CptRows;
  m.cpt.p1 = std::move(p1);
  return m;
}

Mechanism Mechanism::make_structural(Equation e) {
  Mechanism m;
  m.kind = Kind::Structural;
  m.eq = std::move(e);
  return m;
}

Mechanism Mechanism::make_distribution(DistributionSpec d) {
  Mechanism m;
  m.kind = Kind::Distribution;
  m.dist = std::move(d);
  return m;
}

Mechanism Mechanism::make_atomic(double v) {
  Mechanism m;
  m.kind = Kind::Atomic;
  m.value = v;
  return m;
}

int Mechanism::expected_parents() const {
  switch (kind) {
    case Kind::CptRows: {
      std::size_t rows = cpt.p1.size();
      int k = 0;
      while ((std::size_t{1} << k) < rows) ++k;
      return k;
    }
    case Kind::Structural: return eq.arity();
    case Kind::Distribution: return 0;
    case Kind::Atomic: return 0;
  }
  return -1;
}

std::string Mechanism::describe() const {
  switch (kind) {
    case Kind::CptRows: return "cpt[" + std::to_string(cpt.p1.size()) + "]";
    case Kind::Structural: return "eq:" + equation_class_name(eq.cls);
    case Kind::Distribution: return dist.describe();
    case Kind::Atomic: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", value);
      return std::string("atomic(") + buf + ")";
    }
  }
  return "?";
}

}  // namespace ispn
