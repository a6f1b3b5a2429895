#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ppsv/verifier.hpp"

namespace ppsv {

inline constexpr int kReportSchemaVersion = 1;

/// Report JSON: {"schema_version", "kind", "result": {...}, "execution": {...}}.
/// "result" is deterministic for fixed (scenario, params, seed); timings,
/// worker count and batch statistics live only under "execution".
nlohmann::json report_to_json(const VerificationReport& report);
nlohmann::json report_to_json(const ExactTable& table);

/// Serialized form used for files; byte-stable for equal inputs.
std::string report_json_text(const nlohmann::json& report);

/// Flattened rows: state,slot_lo_kw,slot_hi_kw,verdict,mean,samples.
std::string report_to_csv(const VerificationReport& report);
std::string report_to_csv(const ExactTable& table);

/// Pairs a verify report with an oracle report of the same scenario.
struct OracleComparisonRow {
    std::string state;
    std::size_t slot = 0;
    bool bot = false;
    double estimate = 0.0;
    double exact = 0.0;
};

struct OracleComparison {
    std::vector<OracleComparisonRow> rows;
    /// Per state (report order): sum over non-bot estimates, sum of exact values.
    std::vector<std::pair<double, double>> coverage;
};

/// Throws DataError when the two documents do not describe the same table.
OracleComparison compare_with_oracle(const nlohmann::json& verify_report, const nlohmann::json& oracle_report);

}  // namespace ppsv
