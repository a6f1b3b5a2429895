#include "ppsv/report_io.hpp"

#include <cstdio>
#include <map>

#include "ppsv/errors.hpp"

namespace ppsv {

using nlohmann::json;

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json coverage_json(const std::vector<SubstationState>& states, const std::vector<double>& sums) {
    json out = json::array();
    for (std::size_t v = 0; v < states.size(); ++v) out.push_back({{"state", states[v]}, {"sum", sums[v]}});
    return out;
}

}  // namespace

json report_to_json(const VerificationReport& report) {
    json entries = json::array();
    json timings = json::array();
    for (const auto& e : report.entries) {
        json je = {{"state", e.state}, {"slot", e.slot}, {"slot_lo_kw", e.slot_lo_kw}, {"slot_hi_kw", e.slot_hi_kw}};
        if (const auto* est = std::get_if<Estimate>(&e.outcome)) {
            je["verdict"] = "estimate";
            je["mean"] = est->mean;
        } else {
            je["verdict"] = "bot";
        }
        je["samples"] = e.samples_used;
        entries.push_back(std::move(je));
        timings.push_back({{"state", e.state}, {"slot", e.slot}, {"wall_nanos", e.wall_nanos}});
    }
    const auto& p = report.params;
    return {{"schema_version", kReportSchemaVersion},
            {"kind", "verification_report"},
            {"result",
             {{"scenario_digest", report.scenario_digest},
              {"deviation_composition", "additive"},
              {"engine", "speculative-ordered-batches"},
              {"seed", report.seed},
              {"params",
               {{"epsilon", p.epsilon},
                {"delta", p.delta},
                {"requested_delta", report.requested_delta},
                {"family_wise", report.family_wise},
                {"upsilon", p.upsilon},
                {"upsilon1", p.upsilon1},
                {"cutoff", p.cutoff}}},
              {"states", report.states},
              {"power_slot_breakpoints_kw", report.breakpoints_kw},
              {"entries", std::move(entries)},
              {"coverage", coverage_json(report.states, report.coverage)}}},
            {"execution",
             {{"workers", report.execution.workers},
              {"batch_size", report.execution.batch_size},
              {"lookahead", report.execution.lookahead},
              {"generated_batches", report.execution.generated_batches},
              {"discarded_batches", report.execution.discarded_batches},
              {"wall_nanos", report.execution.wall_nanos},
              {"entry_timings", std::move(timings)}}}};
}

json report_to_json(const ExactTable& table) {
    json entries = json::array();
    for (std::size_t v = 0; v < table.states.size(); ++v)
        for (std::size_t w = 0; w < table.psi[v].size(); ++w)
            entries.push_back({{"state", table.states[v]},
                               {"slot", w},
                               {"slot_lo_kw", table.breakpoints_kw[w]},
                               {"slot_hi_kw", table.breakpoints_kw[w + 1]},
                               {"verdict", "exact"},
                               {"mean", table.psi[v][w]}});
    return {{"schema_version", kReportSchemaVersion},
            {"kind", "exact_table"},
            {"result",
             {{"scenario_digest", table.scenario_digest},
              {"deviation_composition", "additive"},
              {"states", table.states},
              {"power_slot_breakpoints_kw", table.breakpoints_kw},
              {"entries", std::move(entries)},
              {"coverage", coverage_json(table.states, table.coverage)}}}};
}

std::string report_json_text(const json& report) { return report.dump(2) + "\n"; }

std::string report_to_csv(const VerificationReport& report) {
    std::string out = "state,slot_lo_kw,slot_hi_kw,verdict,mean,samples\n";
    for (const auto& e : report.entries) {
        out += csv_field(e.state) + "," + num(e.slot_lo_kw) + "," + num(e.slot_hi_kw) + ",";
        if (const auto* est = std::get_if<Estimate>(&e.outcome))
            out += "estimate," + num(est->mean);
        else
            out += "bot,";
        out += "," + std::to_string(e.samples_used) + "\n";
    }
    return out;
}

std::string report_to_csv(const ExactTable& table) {
    std::string out = "state,slot_lo_kw,slot_hi_kw,verdict,mean,samples\n";
    for (std::size_t v = 0; v < table.states.size(); ++v)
        for (std::size_t w = 0; w < table.psi[v].size(); ++w)
            out += csv_field(table.states[v]) + "," + num(table.breakpoints_kw[w]) + "," +
                   num(table.breakpoints_kw[w + 1]) + ",exact," + num(table.psi[v][w]) + ",\n";
    return out;
}

OracleComparison compare_with_oracle(const json& verify_report, const json& oracle_report) {
    try {
        if (verify_report.at("kind") != "verification_report" || oracle_report.at("kind") != "exact_table")
            throw DataError("expected a verification_report and an exact_table");
        const auto& vr = verify_report.at("result");
        const auto& orr = oracle_report.at("result");
        if (vr.at("scenario_digest") != orr.at("scenario_digest"))
            throw DataError("reports describe different scenarios");
        std::map<std::pair<std::string, std::size_t>, double> exact;
        for (const auto& e : orr.at("entries"))
            exact[{e.at("state").get<std::string>(), e.at("slot").get<std::size_t>()}] = e.at("mean").get<double>();
        if (exact.size() != vr.at("entries").size()) throw DataError("reports have different table sizes");

        OracleComparison out;
        std::map<std::string, std::pair<double, double>> cov;
        for (const auto& e : vr.at("entries")) {
            OracleComparisonRow row;
            row.state = e.at("state").get<std::string>();
            row.slot = e.at("slot").get<std::size_t>();
            const auto it = exact.find({row.state, row.slot});
            if (it == exact.end()) throw DataError("oracle table lacks entry for state " + row.state);
            row.exact = it->second;
            row.bot = e.at("verdict") == "bot";
            if (!row.bot) row.estimate = e.at("mean").get<double>();
            auto& c = cov[row.state];
            if (!row.bot) c.first += row.estimate;
            c.second += row.exact;
            out.rows.push_back(std::move(row));
        }
        for (const auto& s : vr.at("states")) out.coverage.push_back(cov[s.get<std::string>()]);
        return out;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
}

}  // namespace ppsv
