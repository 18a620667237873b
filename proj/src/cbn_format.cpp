#include "ispn/cbn_format.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ispn/errors.hpp"

namespace ispn {

namespace {

struct VarDecl {
  std::string name;
  Domain domain;
};

double parse_num(const std::string& tok, const std::string& origin, int line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(origin, line, "expected number, got '" + tok + "'");
  }
}

DistributionSpec parse_noise(const std::vector<std::string>& toks, std::size_t& i,
                             const std::string& origin, int line) {
  auto want = [&](std::size_t k) {
    if (i + k > toks.size()) throw ParseError(origin, line, "missing noise parameters");
  };
  const std::string fam = toks[i++];
  if (fam == "gauss") {
    want(2);
    double a = parse_num(toks[i++], origin, line), b = parse_num(toks[i++], origin, line);
    return DistributionSpec::make_gaussian(a, b);
  }
  if (fam == "gamma") {
    want(2);
    double a = parse_num(toks[i++], origin, line), b = parse_num(toks[i++], origin, line);
    return DistributionSpec::make_gamma(a, b);
  }
  if (fam == "laplace") {
    want(2);
    double a = parse_num(toks[i++], origin, line), b = parse_num(toks[i++], origin, line);
    return DistributionSpec::make_laplace(a, b);
  }
  if (fam == "studentt") {
    want(1);
    return DistributionSpec::make_student_t(parse_num(toks[i++], origin, line));
  }
  if (fam == "uniform") {
    want(2);
    double a = parse_num(toks[i++], origin, line), b = parse_num(toks[i++], origin, line);
    return DistributionSpec::make_uniform(a, b);
  }
  throw ParseError(origin, line, "unknown noise family '" + fam + "'");
}

}  // namespace

Scm parse_cbn(std::istream& in, const std::string& origin) {
  std::vector<VarDecl> decls;
  std::vector<std::pair<std::string, std::string>> edges;
  // var -> (row index -> p1)
  std::map<std::string, std::map<int, double>> cpt_rows;
  std::map<std::string, Equation> mechs;
  int declared = -1;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;

    const std::string& cmd = toks[0];
    if (cmd == "vars") {
      if (toks.size() != 2) throw ParseError(origin, line_no, "vars needs a count");
      declared = static_cast<int>(parse_num(toks[1], origin, line_no));
    } else if (cmd == "var") {
      if (toks.size() < 3) throw ParseError(origin, line_no, "var needs name and domain");
      VarDecl d;
      d.name = toks[1];
      if (toks[2] == "binary") {
        if (toks.size() != 3) throw ParseError(origin, line_no, "binary domain takes no bounds");
        d.domain = Domain::make_binary();
      } else if (toks[2] == "cont") {
        if (toks.size() != 5) throw ParseError(origin, line_no, "cont domain needs lo hi");
        d.domain = Domain::make_continuous(parse_num(toks[3], origin, line_no),
                                           parse_num(toks[4], origin, line_no));
        if (!(d.domain.lo < d.domain.hi)) throw ParseError(origin, line_no, "cont needs lo < hi");
      } else {
        throw ParseError(origin, line_no, "domain must be 'binary' or 'cont'");
      }
      decls.push_back(d);
    } else if (cmd == "edge") {
      if (toks.size() != 3) throw ParseError(origin, line_no, "edge needs src dst");
      edges.emplace_back(toks[1], toks[2]);
    } else if (cmd == "cpt") {
      if (toks.size() != 5) throw ParseError(origin, line_no, "cpt needs var, row index, p0, p1");
      int row = static_cast<int>(parse_num(toks[2], origin, line_no));
      double p0 = parse_num(toks[3], origin, line_no);
      double p1 = parse_num(toks[4], origin, line_no);
      if (std::fabs(p0 + p1 - 1.0) > 1e-9)
        throw ParseError(origin, line_no, "cpt row does not sum to 1");
      if (p1 < 0.0 || p1 > 1.0) throw ParseError(origin, line_no, "cpt probability outside [0,1]");
      auto& rows = cpt_rows[toks[1]];
      if (rows.count(row)) throw ParseError(origin, line_no, "duplicate cpt row");
      rows[row] = p1;
    } else if (cmd == "mech") {
      if (toks.size() < 4) throw ParseError(origin, line_no, "mech needs var, class, and params");
      Equation eq;
      eq.cls = [&] {
        try {
          return equation_class_from_name(toks[2]);
        } catch (const DomainError& e) {
          throw ParseError(origin, line_no, e.what());
        }
      }();
      std::size_t np = eq.cls == Equation::Class::QuadLin ? 3 : 1;
      std::size_t i = 3;
      for (std::size_t k = 0; k < np; ++k) {
        if (i >= toks.size()) throw ParseError(origin, line_no, "missing equation params");
        eq.params.push_back(parse_num(toks[i++], origin, line_no));
      }
      if (i >= toks.size()) throw ParseError(origin, line_no, "missing noise spec");
      eq.noise = parse_noise(toks, i, origin, line_no);
      if (i != toks.size()) throw ParseError(origin, line_no, "trailing tokens after mech");
      if (mechs.count(toks[1])) throw ParseError(origin, line_no, "duplicate mech for " + toks[1]);
      mechs.emplace(toks[1], std::move(eq));
    } else {
      throw ParseError(origin, line_no, "unknown directive '" + cmd + "'");
    }
  }

  if (declared >= 0 && declared != static_cast<int>(decls.size()))
    throw ParseError(origin, line_no, "vars count " + std::to_string(declared) + " != " +
                                          std::to_string(decls.size()) + " declarations");

  std::vector<std::string> names;
  for (const auto& d : decls) names.push_back(d.name);
  const int n = static_cast<int>(names.size());
  std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * n, 0);
  CausalGraph graph;
  try {
    graph = CausalGraph(names, adj);
    for (const auto& [s, t] : edges) graph.set_edge(graph.index_of(s), graph.index_of(t), true);
    graph = CausalGraph(graph.names(), graph.adjacency());  // re-check acyclicity
  } catch (const Error& e) {
    throw ParseError(origin, line_no, e.what());
  }

  Scm scm;
  scm.graph = graph;
  for (const auto& d : decls) scm.domains.push_back(d.domain);
  scm.mechanisms.resize(n);

  for (int v = 0; v < n; ++v) {
    const std::string& name = names[v];
    const bool has_cpt = cpt_rows.count(name) != 0;
    const bool has_mech = mechs.count(name) != 0;
    if (has_cpt && has_mech) throw ParseError(origin, line_no, name + " has both cpt and mech");
    if (!has_cpt && !has_mech) throw ParseError(origin, line_no, name + " has no mechanism");
    if (has_cpt) {
      const auto& rows = cpt_rows[name];
      std::size_t want = std::size_t{1} << graph.parents(v).size();
      std::vector<double> p1(want);
      for (std::size_t i = 0; i < want; ++i) {
        auto it = rows.find(static_cast<int>(i));
        if (it == rows.end())
          throw ParseError(origin, line_no, name + ": missing cpt row " + std::to_string(i));
        p1[i] = it->second;
      }
      if (rows.size() != want) throw ParseError(origin, line_no, name + ": extra cpt rows");
      scm.mechanisms[v] = Mechanism::make_cpt(std::move(p1));
    } else {
      const Equation& eq = mechs.at(name);
      Equation e = eq;
      e.lo = scm.domains[v].lo;
      e.hi = scm.domains[v].hi;
      scm.mechanisms[v] = Mechanism::make_structural(std::move(e));
    }
  }

  try {
    scm.validate();
  } catch (const Error& e) {
    throw ParseError(origin, line_no, e.what());
  }
  return scm;
}

Scm load_cbn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open spec file '" + path + "'");
  return parse_cbn(in, path);
}

}  // namespace ispn
