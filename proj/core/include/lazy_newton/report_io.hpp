#pragma once

#include <nlohmann/json.hpp>

#include "lazy_newton/scenarios.hpp"

namespace lazy_newton {

inline constexpr int kReportSchemaVersion = 1;

/// Report document: fixed keys (schema_version, scenario, inputs,
/// comparisons, max_rel_deviation, rel_deviation_floor, fits, diagnostics,
/// wall_time_s, notes) plus one top-level key per named output.
nlohmann::json to_json(const ScenarioReport& report);

}  // namespace lazy_newton
