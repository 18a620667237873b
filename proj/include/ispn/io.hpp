#pragma once

#include <string>

#include "json.hpp"
#include "ispn/scm.hpp"

namespace ispn {

// Shortest exact decimal rendering of a double (%.17g trimmed via round-trip).
std::string format_double(double v);

nlohmann::json domain_to_json(const Domain& d);
Domain domain_from_json(const nlohmann::json& j);

// Interventions serialize only parent-free mechanisms (atomic / distribution).
nlohmann::json intervention_to_json(const Intervention& iv);
Intervention intervention_from_json(const nlohmann::json& j);

// Writes `<stem>.csv` (header row of names, one row per sample) and the
// sidecar `<stem>.json` (intervention, seed, n, graph adjacency rows, names,
// domains, optional run id).
void save_dataset(const Dataset& ds, const std::string& stem, const std::string& run_id = "");
Dataset load_dataset(const std::string& stem);

}  // namespace ispn
