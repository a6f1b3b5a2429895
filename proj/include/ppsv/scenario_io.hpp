#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ppsv/scenario.hpp"

namespace ppsv {

/// Scenario document (JSON, kW throughout):
///
///   { "time_slots": N,
///     "substation_profile": ["peak", "offpeak", ...],
///     "power_slot_breakpoints_kw": [b0, ..., bk],
///     "users": [ { "id": "u1",
///                  "epp_kw": [e0, ..., e_{N-1}],
///                  "deviation": {"type": "discrete", "points_kw": [...], "probabilities": [...]},
///                  "deviation_overrides": [ {"time_slot": 3, "deviation": {...}} ] } ] }
///
/// Deviation types: discrete, uniform {lo_kw, hi_kw},
/// truncated_gaussian {mean_kw, stddev_kw, lo_kw, hi_kw}.
///
/// Structural problems (missing keys, wrong JSON types, syntax) throw
/// ParseError. Semantic problems are left for validate().
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& scenario);
std::string emit_scenario(const Scenario& scenario);

/// 16 hex digits of FNV-1a-64 over the canonical (compact) serialization.
std::string scenario_digest(const Scenario& scenario);

}  // namespace ppsv
