#include "ispn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ispn/errors.hpp"

namespace ispn {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json domain_to_json(const Domain& d) {
  if (d.binary) return json{{"binary", true}};
  return json{{"binary", false}, {"lo", d.lo}, {"hi", d.hi}};
}

Domain domain_from_json(const json& j) {
  if (j.at("binary").get<bool>()) return Domain::make_binary();
  return Domain::make_continuous(j.at("lo").get<double>(), j.at("hi").get<double>());
}

namespace {

json distribution_to_json(const DistributionSpec& d) {
  static const char* names[] = {"uniform", "bern", "gauss", "gamma", "beta", "ind", "laplace", "studentt"};
  return json{{"family", names[static_cast<int>(d.kind)]}, {"params", d.p}};
}

DistributionSpec distribution_from_json(const json& j) {
  const std::string fam = j.at("family").get<std::string>();
  DistributionSpec d;
  d.p = j.at("params").get<std::vector<double>>();
  if (fam == "uniform") d.kind = DistributionSpec::Kind::Uniform;
  else if (fam == "bern") d.kind = DistributionSpec::Kind::Bernoulli;
  else if (fam == "gauss") d.kind = DistributionSpec::Kind::Gaussian;
  else if (fam == "gamma") d.kind = DistributionSpec::Kind::Gamma;
  else if (fam == "beta") d.kind = DistributionSpec::Kind::Beta;
  else if (fam == "ind") d.kind = DistributionSpec::Kind::TwoPoint;
  else if (fam == "laplace") d.kind = DistributionSpec::Kind::Laplace;
  else if (fam == "studentt") d.kind = DistributionSpec::Kind::StudentT;
  else throw FormatError("unknown distribution family '" + fam + "'");
  d.validate();
  return d;
}

}  // namespace

json intervention_to_json(const Intervention& iv) {
  json targets = json::object();
  for (const auto& [name, m] : iv.targets) {
    if (m.kind == Mechanism::Kind::Atomic) {
      targets[name] = json{{"kind", "atomic"}, {"value", m.value}};
    } else if (m.kind == Mechanism::Kind::Distribution) {
      json d = distribution_to_json(m.dist);
      d["kind"] = "distribution";
      targets[name] = d;
    } else {
      throw FormatError("cannot serialize intervention with parented mechanism on " + name);
    }
  }
  return json{{"targets", targets}};
}

Intervention intervention_from_json(const json& j) {
  Intervention iv;
  for (const auto& [name, spec] : j.at("targets").items()) {
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "atomic") {
      iv.targets[name] = Mechanism::make_atomic(spec.at("value").get<double>());
    } else if (kind == "distribution") {
      iv.targets[name] = Mechanism::make_distribution(distribution_from_json(spec));
    } else {
      throw FormatError("unknown intervention kind '" + kind + "'");
    }
  }
  return iv;
}

void save_dataset(const Dataset& ds, const std::string& stem, const std::string& run_id) {
  std::ofstream csv(stem + ".csv");
  if (!csv) throw FormatError("cannot write " + stem + ".csv");
  for (int c = 0; c < ds.n_cols; ++c) csv << (c ? "," : "") << ds.names[c];
  csv << "\n";
  for (int r = 0; r < ds.n_rows; ++r) {
    for (int c = 0; c < ds.n_cols; ++c) csv << (c ? "," : "") << format_double(ds.at(r, c));
    csv << "\n";
  }
  if (!csv) throw FormatError("write failed for " + stem + ".csv");

  json side;
  side["intervention"] = intervention_to_json(ds.intervention);
  side["seed"] = ds.seed;
  side["n"] = ds.n_rows;
  const int n = ds.graph.size();
  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j2 = 0; j2 < n; ++j2) row.push_back(ds.graph.edge(i, j2) ? 1 : 0);
    rows.push_back(row);
  }
  side["graph"] = rows;
  side["names"] = ds.names;
  json doms = json::array();
  for (const Domain& d : ds.domains) doms.push_back(domain_to_json(d));
  side["domains"] = doms;
  if (!run_id.empty()) side["run_id"] = run_id;

  std::ofstream js(stem + ".json");
  if (!js) throw FormatError("cannot write " + stem + ".json");
  js << side.dump(2) << "\n";
}

Dataset load_dataset(const std::string& stem) {
  std::ifstream js(stem + ".json");
  if (!js) throw FormatError("cannot open " + stem + ".json");
  json side = json::parse(js, nullptr, true, true);

  Dataset ds;
  ds.intervention = intervention_from_json(side.at("intervention"));
  ds.seed = side.at("seed").get<std::uint64_t>();
  ds.names = side.at("names").get<std::vector<std::string>>();
  const int n = static_cast<int>(ds.names.size());
  std::vector<std::uint8_t> adj;
  for (const auto& row : side.at("graph")) {
    if (static_cast<int>(row.size()) != n) throw FormatError(stem + ".json: ragged adjacency");
    for (const auto& e : row) adj.push_back(e.get<int>() ? 1 : 0);
  }
  ds.graph = CausalGraph(ds.names, adj);
  for (const auto& d : side.at("domains")) ds.domains.push_back(domain_from_json(d));

  std::ifstream csv(stem + ".csv");
  if (!csv) throw FormatError("cannot open " + stem + ".csv");
  std::string line;
  if (!std::getline(csv, line)) throw FormatError(stem + ".csv: empty file");
  {
    std::istringstream hs(line);
    std::string tok;
    int c = 0;
    while (std::getline(hs, tok, ',')) {
      if (c >= n || tok != ds.names[c]) throw FormatError(stem + ".csv: header mismatch");
      ++c;
    }
    if (c != n) throw FormatError(stem + ".csv: header mismatch");
  }
  ds.n_cols = n;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    int c = 0;
    while (std::getline(ls, tok, ',')) {
      if (c >= n) throw FormatError(stem + ".csv: too many columns");
      ds.values.push_back(std::stod(tok));
      ++c;
    }
    if (c != n) throw FormatError(stem + ".csv: too few columns");
    ++ds.n_rows;
  }
  const int expect = side.at("n").get<int>();
  if (ds.n_rows != expect)
    throw FormatError(stem + ": sidecar n=" + std::to_string(expect) + " but csv has " +
                      std::to_string(ds.n_rows) + " rows");
  return ds;
}

}  // namespace ispn
