#pragma once

// JSON and CSV emission of reports. All output is deterministic: fixed key
// order, shortest round-trip number formatting.

#include <string>
#include <utility>
#include <vector>

#include "layerpot/conditions.hpp"
#include "layerpot/config.hpp"
#include "layerpot/operators.hpp"
#include "layerpot/solver.hpp"

namespace layerpot {

Json to_json(const ModelConstants& mc);
/// sup_estimate is null when Marginal and "Divergent" when the supremum
/// diverges.
Json to_json(const ConditionReport& r);
Json to_json(const HardyReport& r);
Json to_json(const SolveDiagnostics& d);
Json to_json(const IsomorphismReport& r);
Json to_json(const PiLemmaReport& r);

/// {"version", "command", "config", ...body}.
Json envelope(const std::string& command, const RunConfig& cfg, const Json& body);

void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);
/// Two-column CSV with a header.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace layerpot
