// ppsv: command-line front end over the libppsv C API.
//
//   ppsv verify   SCENARIO [--epsilon E] [--delta D] [--seed S] [--workers N] ...
//   ppsv oracle   SCENARIO [-o PATH] [--format json|csv|both]
//   ppsv gen      [--seed S] [--users N] [--time-slots N] [--states N] ... -o PATH
//   ppsv validate SCENARIO
//
// Exit codes: 0 success, 1 I/O or runtime failure, 2 invalid input,
// 3 oracle inapplicable.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>

#include "ppsv/ppsv.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitOracle = 3;

struct ScenarioDeleter {
    void operator()(ppsv_scenario* s) const { ppsv_scenario_free(s); }
};
struct ReportDeleter {
    void operator()(ppsv_report* r) const { ppsv_report_free(r); }
};
struct StringDeleter {
    void operator()(char* s) const { ppsv_string_free(s); }
};
using ScenarioPtr = std::unique_ptr<ppsv_scenario, ScenarioDeleter>;
using ReportPtr = std::unique_ptr<ppsv_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int exit_code(ppsv_status status) {
    switch (status) {
    case PPSV_OK: return kExitOk;
    case PPSV_ERR_INVALID:
    case PPSV_ERR_PARAMETER: return kExitInvalid;
    case PPSV_ERR_ORACLE_INAPPLICABLE:
    case PPSV_ERR_RESOURCE: return kExitOracle;
    default: return kExitFailure;
    }
}

int report_failure(ppsv_status status) {
    std::cerr << "ppsv: " << ppsv_last_error() << '\n';
    return exit_code(status);
}

bool write_file(const std::string& path, const char* text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out.flush());
}

// Loads and validates; prints violations. Returns nullptr with `code` set on failure.
ScenarioPtr load_valid(const std::string& path, int& code) {
    ppsv_scenario* raw = nullptr;
    if (const auto st = ppsv_scenario_load_file(path.c_str(), &raw); st != PPSV_OK) {
        code = report_failure(st);
        return nullptr;
    }
    ScenarioPtr s(raw);
    if (const auto n = ppsv_scenario_violation_count(s.get()); n > 0) {
        std::cerr << "ppsv: scenario " << path << " has " << n << " violation(s):\n";
        for (std::size_t i = 0; i < n; ++i) std::cerr << "  " << ppsv_scenario_violation(s.get(), i) << '\n';
        code = kExitInvalid;
        return nullptr;
    }
    return s;
}

int emit_report(const ppsv_report* report, const std::string& output, const std::string& format) {
    const bool json = format == "json" || format == "both";
    const bool csv = format == "csv" || format == "both";
    std::string json_path = output, csv_path = output;
    if (format == "both") {
        if (output.empty()) {
            std::cerr << "ppsv: --format both requires --output\n";
            return kExitInvalid;
        }
        const auto stem = std::filesystem::path(output).replace_extension().string();
        json_path = stem + ".json";
        csv_path = stem + ".csv";
    }
    auto emit = [&](bool enabled, auto render, const std::string& path) -> int {
        if (!enabled) return kExitOk;
        char* raw = nullptr;
        if (const auto st = render(report, &raw); st != PPSV_OK) return report_failure(st);
        StringPtr text(raw);
        if (path.empty()) {
            std::cout << text.get();
            return kExitOk;
        }
        if (!write_file(path, text.get())) {
            std::cerr << "ppsv: cannot write " << path << '\n';
            return kExitFailure;
        }
        return kExitOk;
    };
    if (const int rc = emit(json, ppsv_report_to_json, json_path); rc != kExitOk) return rc;
    return emit(csv, ppsv_report_to_csv, csv_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo verification of aggregated power demand"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ppsv_version()));

    ppsv_verify_options vopts;
    ppsv_verify_options_init(&vopts);
    vopts.workers = std::max(1u, std::thread::hardware_concurrency());
    std::string scenario_path, output, format = "json";

    auto* verify = app.add_subcommand("verify", "Approximate Psi_v(w) for every state and power slot");
    verify->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    verify->add_option("--epsilon", vopts.epsilon, "Relative tolerance in (0,1)")->capture_default_str();
    verify->add_option("--delta", vopts.delta, "Confidence parameter in (0,1)")->capture_default_str();
    verify->add_option("--seed", vopts.seed, "Master seed")->envname("PPSV_SEED")->capture_default_str();
    verify->add_option("--workers", vopts.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    verify->add_option("--batch-size", vopts.batch_size, "Samples per batch")->check(CLI::PositiveNumber)->capture_default_str();
    verify->add_option("--lookahead", vopts.lookahead, "Speculative batches per task (0: 2 x workers)")->capture_default_str();
    verify->add_flag("--family-wise", vopts.family_wise, "Split delta over the whole table");
    verify->add_option("-o,--output", output, "Output path (stdout if omitted)");
    verify->add_option("--format", format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}))->capture_default_str();

    auto* oracle = app.add_subcommand("oracle", "Exact Psi table for discrete scenarios");
    oracle->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    oracle->add_option("-o,--output", output, "Output path (stdout if omitted)");
    oracle->add_option("--format", format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}))->capture_default_str();

    ppsv_gen_options gopts;
    ppsv_gen_options_init(&gopts);
    std::string family = "discrete";
    auto* gen = app.add_subcommand("gen", "Write a seeded synthetic scenario");
    gen->add_option("--seed", gopts.seed, "Generator seed")->capture_default_str();
    gen->add_option("--users", gopts.users, "Number of users")->capture_default_str();
    gen->add_option("--time-slots", gopts.time_slots, "Number of time slots")->capture_default_str();
    gen->add_option("--states", gopts.states, "Number of substation states")->capture_default_str();
    gen->add_option("--power-slots", gopts.power_slots, "Number of power slots")->capture_default_str();
    gen->add_option("--family", family, "discrete, uniform or truncated_gaussian")->capture_default_str();
    gen->add_option("--magnitude", gopts.magnitude, "Deviation half-width as a fraction of mean EPP")->capture_default_str();
    gen->add_option("--support-points", gopts.support_points, "Discrete support size")->capture_default_str();
    gen->add_option("--epp-min-kw", gopts.epp_min_kw, "Lower bound of predicted power")->capture_default_str();
    gen->add_option("--epp-max-kw", gopts.epp_max_kw, "Upper bound of predicted power")->capture_default_str();
    gen->add_option("--override-fraction", gopts.override_fraction, "Share of per-slot model overrides")->capture_default_str();
    gen->add_option("-o,--output", output, "Output path (stdout if omitted)");

    auto* validate = app.add_subcommand("validate", "List scenario invariant violations");
    validate->add_option("scenario", scenario_path, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    int code = kExitOk;
    if (*verify) {
        auto s = load_valid(scenario_path, code);
        if (!s) return code;
        ppsv_report* raw = nullptr;
        if (const auto st = ppsv_verify(s.get(), &vopts, &raw); st != PPSV_OK) return report_failure(st);
        ReportPtr report(raw);
        return emit_report(report.get(), output, format);
    }
    if (*oracle) {
        auto s = load_valid(scenario_path, code);
        if (!s) return code;
        ppsv_report* raw = nullptr;
        if (const auto st = ppsv_oracle(s.get(), &raw); st != PPSV_OK) return report_failure(st);
        ReportPtr report(raw);
        return emit_report(report.get(), output, format);
    }
    if (*gen) {
        gopts.family = family.c_str();
        ppsv_scenario* raw = nullptr;
        if (const auto st = ppsv_scenario_generate(&gopts, &raw); st != PPSV_OK) return report_failure(st);
        ScenarioPtr s(raw);
        char* text = nullptr;
        if (const auto st = ppsv_scenario_to_json(s.get(), &text); st != PPSV_OK) return report_failure(st);
        StringPtr owned(text);
        if (output.empty()) {
            std::cout << owned.get();
        } else if (!write_file(output, owned.get())) {
            std::cerr << "ppsv: cannot write " << output << '\n';
            return kExitFailure;
        }
        return kExitOk;
    }
    if (*validate) {
        auto s = load_valid(scenario_path, code);
        if (!s) return code;
        std::cout << scenario_path << ": valid\n";
    }
    return code;
}
