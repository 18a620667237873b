#include "ispn/datasets.hpp"

#include <sstream>

#include "ispn/cbn_format.hpp"
#include "ispn/errors.hpp"

namespace ispn {

namespace {

const char* kHealth = R"(vars 4
var A cont 0 100
var F cont 0 100
var H cont 0 100
var M cont 0 100
edge A F
edge A H
edge F H
edge H M
mech A absscale 20 studentt 3
mech F lin1 0.5 gamma 2 5
mech H quadlin 0.4 400 0.7 gauss 5 6
mech M lin1 0.9 laplace 5 5
)";

const char* kAsia = R"(vars 8
var asia binary
var tub binary
var smoke binary
var lung binary
var bronc binary
var either binary
var xray binary
var dysp binary
edge asia tub
edge smoke lung
edge smoke bronc
edge tub either
edge lung either
edge either xray
edge bronc dysp
edge either dysp
cpt asia 0 0.99 0.01
cpt smoke 0 0.5 0.5
cpt tub 0 0.99 0.01
cpt tub 1 0.95 0.05
cpt lung 0 0.99 0.01
cpt lung 1 0.9 0.1
cpt bronc 0 0.7 0.3
cpt bronc 1 0.4 0.6
cpt either 0 1 0
cpt either 1 0 1
cpt either 2 0 1
cpt either 3 0 1
cpt xray 0 0.95 0.05
cpt xray 1 0.02 0.98
cpt dysp 0 0.9 0.1
cpt dysp 1 0.3 0.7
cpt dysp 2 0.2 0.8
cpt dysp 3 0.1 0.9
)";

const char* kEarthquake = R"(vars 5
var Burglary binary
var Earthquake binary
var Alarm binary
var JohnCalls binary
var MaryCalls binary
edge Burglary Alarm
edge Earthquake Alarm
edge Alarm JohnCalls
edge Alarm MaryCalls
cpt Burglary 0 0.99 0.01
cpt Earthquake 0 0.98 0.02
cpt Alarm 0 0.94 0.06
cpt Alarm 1 0.95 0.05
cpt Alarm 2 0.001 0.999
cpt Alarm 3 0.29 0.71
cpt JohnCalls 0 0.95 0.05
cpt JohnCalls 1 0.1 0.9
cpt MaryCalls 0 0.99 0.01
cpt MaryCalls 1 0.3 0.7
)";

const char* kCancer = R"(vars 5
var Pollution binary
var Smoker binary
var Cancer binary
var Xray binary
var Dyspnoea binary
edge Pollution Cancer
edge Smoker Cancer
edge Cancer Xray
edge Cancer Dyspnoea
cpt Pollution 0 0.9 0.1
cpt Smoker 0 0.7 0.3
cpt Cancer 0 0.999 0.001
cpt Cancer 1 0.97 0.03
cpt Cancer 2 0.98 0.02
cpt Cancer 3 0.95 0.05
cpt Xray 0 0.8 0.2
cpt Xray 1 0.1 0.9
cpt Dyspnoea 0 0.7 0.3
cpt Dyspnoea 1 0.35 0.65
)";

const char* spec_text(const std::string& id) {
  if (id == "health") return kHealth;
  if (id == "asia") return kAsia;
  if (id == "earthquake") return kEarthquake;
  if (id == "cancer") return kCancer;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& dataset_ids() {
  static const std::vector<std::string> ids = {"health", "asia", "earthquake", "cancer"};
  return ids;
}

bool is_dataset_id(const std::string& id) { return spec_text(id) != nullptr; }

Scm builtin_scm(const std::string& id) {
  const char* text = spec_text(id);
  if (!text) throw UnknownDataset("unknown dataset id '" + id + "'");
  std::istringstream in(text);
  return parse_cbn(in, "builtin:" + id);
}

Intervention uniform_intervention(const Scm& scm, const std::string& var) {
  int v = scm.graph.index_of(var);
  const Domain& d = scm.domains[v];
  Intervention iv;
  iv.targets[var] = d.binary
                        ? Mechanism::make_distribution(DistributionSpec::make_bernoulli(0.5))
                        : Mechanism::make_distribution(DistributionSpec::make_uniform(d.lo, d.hi));
  return iv;
}

std::vector<Intervention> default_roster(const Scm& scm) {
  std::vector<Intervention> out;
  out.push_back(Intervention{});
  for (const std::string& name : scm.graph.names()) out.push_back(uniform_intervention(scm, name));
  return out;
}

}  // namespace ispn
