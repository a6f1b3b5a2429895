#include "ppsv/verifier.hpp"

#include <chrono>

#include "ppsv/errors.hpp"
#include "ppsv/exact_oracle.hpp"
#include "ppsv/parallel_engine.hpp"
#include "ppsv/scenario_io.hpp"

namespace ppsv {

VerificationReport verify(const Scenario& scenario, double epsilon, double delta, std::uint64_t seed,
                          const VerifyOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    if (options.workers == 0) throw ParameterError("workers must be >= 1");
    if (options.batch_size == 0) throw ParameterError("batch_size must be >= 1");
    const ScenarioSampler sampler(scenario);
    make_params(epsilon, delta);  // range-check before any split

    const std::size_t table = sampler.states().size() * sampler.power_slot_count();
    const EdParams params = make_params(epsilon, options.family_wise ? delta / static_cast<double>(table) : delta);

    WorkPlan plan = full_plan(sampler, options.batch_size, options.lookahead);
    const auto results = run_parallel(plan, sampler, params, seed, options.workers);

    VerificationReport report;
    report.scenario_digest = scenario_digest(scenario);
    report.params = params;
    report.requested_delta = delta;
    report.family_wise = options.family_wise;
    report.seed = seed;
    report.states = sampler.states();
    report.breakpoints_kw = scenario.slots.breakpoints();
    report.coverage.assign(report.states.size(), 0.0);
    report.entries.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& task = plan.tasks[i];
        const auto& r = results[i];
        ApdEstimate e;
        e.state = report.states[task.state_index];
        e.slot = task.slot;
        e.slot_lo_kw = scenario.slots.lower(task.slot);
        e.slot_hi_kw = scenario.slots.upper(task.slot);
        e.outcome = r.outcome;
        e.samples_used = samples_used(r.outcome);
        e.wall_nanos = r.wall_nanos;
        if (const auto* est = std::get_if<Estimate>(&r.outcome)) report.coverage[task.state_index] += est->mean;
        report.execution.generated_batches += r.generated_batches;
        report.execution.discarded_batches += r.discarded_batches;
        report.entries.push_back(std::move(e));
    }
    report.execution.workers = options.workers;
    report.execution.batch_size = options.batch_size;
    report.execution.lookahead = options.lookahead == 0 ? 2 * options.workers : options.lookahead;
    report.execution.wall_nanos = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count());
    return report;
}

ExactTable oracle_table(const Scenario& scenario) {
    ExactTable out;
    out.psi = exact_psi_table(scenario);
    out.scenario_digest = scenario_digest(scenario);
    out.states = scenario.substation.states();
    out.breakpoints_kw = scenario.slots.breakpoints();
    for (const auto& row : out.psi) {
        double s = 0.0;
        for (double p : row) s += p;
        out.coverage.push_back(s);
    }
    return out;
}

}  // namespace ppsv
