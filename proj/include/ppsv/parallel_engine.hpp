#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ppsv/ed_approximation.hpp"
#include "ppsv/scenario.hpp"

namespace ppsv {

/// One batch of one task's indicator stream. Sample j of the batch is the
/// stream element batch_index * batch_size + j, so batching never changes
/// stream contents.
struct BatchAddress {
    std::uint64_t master_seed = 0;
    SubstationState state;
    std::size_t slot = 0;
    std::uint64_t batch_index = 0;
    std::size_t batch_size = 1;
};

/// Infinite, counter-addressed indicator stream for one (state, slot) pair.
class IndicatorStream {
public:
    IndicatorStream(const ScenarioSampler& sampler, std::size_t state_index, std::size_t slot, std::uint64_t seed);

    /// Element i, computed in isolation.
    bool at(std::uint64_t i) const;
    bool next() { return at(position_++); }
    std::uint64_t position() const noexcept { return position_; }
    std::uint64_t key() const noexcept { return key_; }

private:
    const ScenarioSampler* sampler_;
    std::size_t state_index_;
    std::size_t slot_;
    std::uint64_t key_;
    std::uint64_t position_ = 0;
};

IndicatorStream estimand_stream(const ScenarioSampler& sampler, const SubstationState& state, std::size_t slot,
                                std::uint64_t seed);

/// Worker kernel: batch_size indicator bits for `addr`.
std::vector<std::uint8_t> batch_generate(const BatchAddress& addr, const ScenarioSampler& sampler);
std::vector<std::uint8_t> batch_generate(const BatchAddress& addr, const Scenario& scenario);

struct EngineTask {
    std::size_t state_index = 0;
    std::size_t slot = 0;
};

struct WorkPlan {
    std::vector<EngineTask> tasks;
    std::size_t batch_size = 4096;
    /// Max batches generated past the last consumed one; 0 selects 2 x workers.
    std::size_t lookahead = 0;
    /// Test hook invoked by a worker before it generates a batch.
    std::function<void(const BatchAddress&)> before_generate;
};

/// Every (state, slot) pair of the sampler's scenario, ordered by state label
/// then slot index.
WorkPlan full_plan(const ScenarioSampler& sampler, std::size_t batch_size = 4096, std::size_t lookahead = 0);

struct TaskResult {
    EdOutcome outcome;
    std::uint64_t stream_key = 0;
    std::uint64_t wall_nanos = 0;
    std::uint64_t generated_batches = 0;
    std::uint64_t consumed_batches = 0;
    std::uint64_t discarded_batches = 0;
};

/// Master-worker engine with speculative ordered batches. Workers generate
/// batches for any active task up to `lookahead` ahead of its consumer; each
/// task's stopping rule consumes batches strictly in batch_index order, so
/// outcomes match a sequential run over the same stream for every worker
/// count, batch size and completion order.
///
/// Throws RunError naming the task if a worker fails; no partial results.
std::vector<TaskResult> run_parallel(const WorkPlan& plan, const ScenarioSampler& sampler, const EdParams& params,
                                     std::uint64_t seed, std::size_t workers);

/// Reference path: sequential stopping rule over IndicatorStream.
EdOutcome run_sequential(const ScenarioSampler& sampler, std::size_t state_index, std::size_t slot,
                         const EdParams& params, std::uint64_t seed);

}  // namespace ppsv
