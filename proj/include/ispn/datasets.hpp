#pragma once

#include <string>
#include <vector>

#include "ispn/scm.hpp"

namespace ispn {

// Ids of the bundled benchmark models: health, asia, earthquake, cancer.
const std::vector<std::string>& dataset_ids();
bool is_dataset_id(const std::string& id);

// Built-in model, parsed from embedded spec text (identical to the files
// under data/). Throws UnknownVariable for unknown ids.
Scm builtin_scm(const std::string& id);

// do(var = uniform-over-domain); binary domains get Bernoulli(1/2).
Intervention uniform_intervention(const Scm& scm, const std::string& var);

// Cycled uniform-intervention protocol: observational plus one uniform
// intervention per variable, in variable order.
std::vector<Intervention> default_roster(const Scm& scm);

}  // namespace ispn
