#include "ppsv/parallel_engine.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>

#include "ppsv/errors.hpp"

namespace ppsv {

namespace {

void fill_bits(const ScenarioSampler& sampler, std::size_t state_index, std::size_t slot, std::uint64_t key,
               std::uint64_t first, std::span<std::uint8_t> out) {
    for (std::size_t j = 0; j < out.size(); ++j) {
        RngStream rng(key, first + j);
        out[j] = sampler.sample_indicator(state_index, slot, rng) ? 1 : 0;
    }
}

std::uint64_t nanos_since(std::chrono::steady_clock::time_point t0) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count());
}

}  // namespace

IndicatorStream::IndicatorStream(const ScenarioSampler& sampler, std::size_t state_index, std::size_t slot,
                                 std::uint64_t seed)
    : sampler_(&sampler),
      state_index_(state_index),
      slot_(slot),
      key_(task_stream_key(seed, sampler.states().at(state_index), slot)) {
    if (slot >= sampler.power_slot_count()) throw ParameterError("power slot index " + std::to_string(slot) + " out of range");
}

bool IndicatorStream::at(std::uint64_t i) const {
    RngStream rng(key_, i);
    return sampler_->sample_indicator(state_index_, slot_, rng);
}

IndicatorStream estimand_stream(const ScenarioSampler& sampler, const SubstationState& state, std::size_t slot,
                                std::uint64_t seed) {
    return IndicatorStream(sampler, sampler.state_index(state), slot, seed);
}

std::vector<std::uint8_t> batch_generate(const BatchAddress& addr, const ScenarioSampler& sampler) {
    if (addr.batch_size == 0) throw ParameterError("batch_size must be >= 1");
    const std::size_t state_index = sampler.state_index(addr.state);
    if (addr.slot >= sampler.power_slot_count()) throw ParameterError("power slot index out of range");
    std::vector<std::uint8_t> bits(addr.batch_size);
    fill_bits(sampler, state_index, addr.slot, task_stream_key(addr.master_seed, addr.state, addr.slot),
              addr.batch_index * addr.batch_size, bits);
    return bits;
}

std::vector<std::uint8_t> batch_generate(const BatchAddress& addr, const Scenario& scenario) {
    const ScenarioSampler sampler(scenario);
    return batch_generate(addr, sampler);
}

WorkPlan full_plan(const ScenarioSampler& sampler, std::size_t batch_size, std::size_t lookahead) {
    WorkPlan plan;
    plan.batch_size = batch_size;
    plan.lookahead = lookahead;
    for (std::size_t v = 0; v < sampler.states().size(); ++v)
        for (std::size_t w = 0; w < sampler.power_slot_count(); ++w) plan.tasks.push_back({v, w});
    return plan;
}

EdOutcome run_sequential(const ScenarioSampler& sampler, std::size_t state_index, std::size_t slot,
                         const EdParams& params, std::uint64_t seed) {
    IndicatorStream stream(sampler, state_index, slot, seed);
    return estimate_mean(params, [&] { return stream.next() ? 1.0 : 0.0; });
}

namespace {

struct TaskState {
    explicit TaskState(const EdParams& p) : rule(p) {}
    StoppingRule rule;
    std::uint64_t key = 0;
    std::uint64_t next_generate = 0;
    std::uint64_t next_consume = 0;
    std::map<std::uint64_t, std::vector<std::uint8_t>> ready;
    bool consuming = false;
    bool done = false;
    bool started = false;
    std::chrono::steady_clock::time_point t0;
    TaskResult result;
};

class Master {
public:
    Master(const WorkPlan& plan, const ScenarioSampler& sampler, const EdParams& params, std::uint64_t seed,
           std::size_t workers)
        : plan_(plan),
          sampler_(sampler),
          seed_(seed),
          lookahead_(plan.lookahead == 0 ? 2 * workers : plan.lookahead),
          window_(std::max<std::size_t>(2 * workers, 2)),
          remaining_(plan.tasks.size()) {
        tasks_.reserve(plan.tasks.size());
        std::unordered_map<std::uint64_t, std::size_t> keys;
        for (std::size_t i = 0; i < plan.tasks.size(); ++i) {
            const auto& t = plan.tasks[i];
            if (t.state_index >= sampler.states().size() || t.slot >= sampler.power_slot_count())
                throw ParameterError("work plan task " + std::to_string(i) + " addresses an unknown (state, slot)");
            tasks_.emplace_back(params);
            tasks_.back().key = task_stream_key(seed, sampler.states()[t.state_index], t.slot);
            if (!keys.emplace(tasks_.back().key, i).second)
                throw RunError("rng stream key collision between tasks " + std::to_string(keys[tasks_.back().key]) +
                               " and " + std::to_string(i));
        }
    }

    void worker_loop() {
        std::unique_lock lk(mu_);
        while (!failure_ && remaining_ > 0) {
            if (auto task = find_consumable()) {
                consume(*task, lk);
            } else if (auto gen = find_generatable()) {
                generate(gen->first, gen->second, lk);
            } else {
                cv_.wait(lk);
            }
        }
        cv_.notify_all();
    }

    std::vector<TaskResult> results() {
        if (failure_) std::rethrow_exception(failure_);
        std::vector<TaskResult> out;
        out.reserve(tasks_.size());
        for (auto& t : tasks_) out.push_back(std::move(t.result));
        return out;
    }

private:
    template <typename F>
    void for_window(F&& f) {
        while (head_ < tasks_.size() && tasks_[head_].done) ++head_;
        std::size_t seen = 0;
        for (std::size_t i = head_; i < tasks_.size() && seen < window_; ++i) {
            if (tasks_[i].done) continue;
            ++seen;
            if (f(i)) return;
        }
    }

    std::optional<std::size_t> find_consumable() {
        std::optional<std::size_t> found;
        for_window([&](std::size_t i) {
            const auto& t = tasks_[i];
            if (!t.consuming && !t.ready.empty() && t.ready.begin()->first == t.next_consume) {
                found = i;
                return true;
            }
            return false;
        });
        return found;
    }

    std::optional<std::pair<std::size_t, std::uint64_t>> find_generatable() {
        std::optional<std::pair<std::size_t, std::uint64_t>> found;
        for_window([&](std::size_t i) {
            auto& t = tasks_[i];
            // Speculation is bounded by batches actually fed to the rule, not merely
            // handed to a consumer, so a task can never overrun by more than L.
            if (t.next_generate < t.result.consumed_batches + lookahead_) {
                if (!t.started) {
                    t.started = true;
                    t.t0 = std::chrono::steady_clock::now();
                }
                found.emplace(i, t.next_generate++);
                return true;
            }
            return false;
        });
        return found;
    }

    void generate(std::size_t task_index, std::uint64_t batch_index, std::unique_lock<std::mutex>& lk) {
        const auto& spec = plan_.tasks[task_index];
        const std::uint64_t key = tasks_[task_index].key;
        std::vector<std::uint8_t> bits(plan_.batch_size);
        lk.unlock();
        std::exception_ptr error;
        try {
            if (plan_.before_generate)
                plan_.before_generate(BatchAddress{seed_, sampler_.states()[spec.state_index], spec.slot, batch_index,
                                                   plan_.batch_size});
            fill_bits(sampler_, spec.state_index, spec.slot, key, batch_index * plan_.batch_size, bits);
        } catch (const std::exception& e) {
            error = std::make_exception_ptr(RunError("worker failed on task (state \"" +
                                                     sampler_.states()[spec.state_index] + "\", slot " +
                                                     std::to_string(spec.slot) + "), batch " +
                                                     std::to_string(batch_index) + ": " + e.what()));
        }
        lk.lock();
        auto& t = tasks_[task_index];
        ++t.result.generated_batches;
        if (error) {
            if (!failure_) failure_ = error;
        } else if (t.done) {
            ++t.result.discarded_batches;
        } else {
            t.ready.emplace(batch_index, std::move(bits));
        }
        cv_.notify_all();
    }

    void consume(std::size_t task_index, std::unique_lock<std::mutex>& lk) {
        auto& t = tasks_[task_index];
        t.consuming = true;
        std::vector<std::vector<std::uint8_t>> batches;
        while (!t.ready.empty() && t.ready.begin()->first == t.next_consume) {
            batches.push_back(std::move(t.ready.begin()->second));
            t.ready.erase(t.ready.begin());
            ++t.next_consume;
        }
        lk.unlock();
        std::uint64_t used = 0;
        for (const auto& b : batches) {
            if (t.rule.decided()) break;
            t.rule.feed_bits(b);
            ++used;
        }
        lk.lock();
        t.consuming = false;
        t.result.consumed_batches += used;
        t.result.discarded_batches += batches.size() - used;
        if (t.rule.decided()) {
            t.done = true;
            t.result.outcome = t.rule.outcome();
            t.result.stream_key = t.key;
            t.result.discarded_batches += t.ready.size();
            t.ready.clear();
            t.result.wall_nanos = nanos_since(t.t0);
            --remaining_;
        }
        cv_.notify_all();
    }

    const WorkPlan& plan_;
    const ScenarioSampler& sampler_;
    std::uint64_t seed_;
    std::size_t lookahead_;
    std::size_t window_;
    std::vector<TaskState> tasks_;
    std::size_t head_ = 0;
    std::size_t remaining_;
    std::exception_ptr failure_;
    std::mutex mu_;
    std::condition_variable cv_;
};

}  // namespace

std::vector<TaskResult> run_parallel(const WorkPlan& plan, const ScenarioSampler& sampler, const EdParams& params,
                                     std::uint64_t seed, std::size_t workers) {
    if (workers == 0) throw ParameterError("workers must be >= 1");
    if (plan.batch_size == 0) throw ParameterError("batch_size must be >= 1");
    Master master(plan, sampler, params, seed, workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back([&] { master.worker_loop(); });
    }
    return master.results();
}

}  // namespace ppsv
