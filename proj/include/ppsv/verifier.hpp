#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ppsv/ed_approximation.hpp"
#include "ppsv/scenario.hpp"

namespace ppsv {

struct VerifyOptions {
    std::size_t workers = 1;
    std::size_t batch_size = 4096;
    /// 0 selects 2 x workers.
    std::size_t lookahead = 0;
    /// Split delta evenly over the |V_S| x |W| table.
    bool family_wise = false;
};

/// Psi~_v(w) for one (state, slot).
struct ApdEstimate {
    SubstationState state;
    std::size_t slot = 0;
    double slot_lo_kw = 0.0;
    double slot_hi_kw = 0.0;
    EdOutcome outcome;
    std::uint64_t samples_used = 0;
    std::uint64_t wall_nanos = 0;
};

struct ExecutionInfo {
    std::size_t workers = 1;
    std::size_t batch_size = 0;
    std::size_t lookahead = 0;
    std::uint64_t generated_batches = 0;
    std::uint64_t discarded_batches = 0;
    std::uint64_t wall_nanos = 0;
};

struct VerificationReport {
    std::string scenario_digest;
    EdParams params;            // constants actually used (delta split if family_wise)
    double requested_delta = 0.0;
    bool family_wise = false;
    std::uint64_t seed = 0;
    std::vector<SubstationState> states;
    std::vector<double> breakpoints_kw;
    /// Ordered by (state label, slot index); exactly |V_S| x |W| entries.
    std::vector<ApdEstimate> entries;
    /// Per state (same order as `states`): sum of means over non-bot entries.
    std::vector<double> coverage;
    /// Scheduling-dependent; excluded from the deterministic block.
    ExecutionInfo execution;
};

/// Runs the stopping rule for every (state, slot) of a valid scenario.
/// Throws ValidationError for an invalid scenario and ParameterError for
/// bad options. Everything except `execution` and the per-entry timings
/// is a pure function of (scenario, epsilon, delta, family_wise, seed).
VerificationReport verify(const Scenario& scenario, double epsilon, double delta, std::uint64_t seed,
                          const VerifyOptions& options = {});

/// Exact Psi table in report shape (discrete scenarios only).
struct ExactTable {
    std::string scenario_digest;
    std::vector<SubstationState> states;
    std::vector<double> breakpoints_kw;
    /// [state][slot]
    std::vector<std::vector<double>> psi;
    /// Per state: sum over slots (the in-range mass).
    std::vector<double> coverage;
};

ExactTable oracle_table(const Scenario& scenario);

}  // namespace ppsv
