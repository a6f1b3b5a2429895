#include <doctest.h>

#include <atomic>
#include <chrono>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "fixtures.hpp"
#include "ppsv/errors.hpp"
#include "ppsv/parallel_engine.hpp"

using namespace ppsv;
using namespace ppsv::testing;

namespace {

Scenario three_users() {
    Scenario s;
    s.time_slots = 4;
    s.substation = SubstationProfile({"peak", "off", "peak", "off"});
    s.slots = PowerSlotPartition({0.0, 9.0, 10.5, 30.0});
    s.users.push_back(User{"a", {3, 2, 3, 2}, discrete({-0.5, 0.0, 0.5}, {0.3, 0.4, 0.3}), {}});
    s.users.push_back(User{"b", {4, 3, 4, 3}, UniformDeviation{-1.0, 1.0}, {}});
    s.users.push_back(User{"c", {3, 2.5, 3, 2.5}, TruncatedGaussianDeviation{0.0, 0.5, -1.0, 1.0}, {}});
    return s;
}

std::string prefix(IndicatorStream s, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) out += s.next() ? '1' : '0';
    return out;
}

std::vector<EdOutcome> outcomes(const std::vector<TaskResult>& rs) {
    std::vector<EdOutcome> out;
    for (const auto& r : rs) out.push_back(r.outcome);
    return out;
}

}  // namespace

TEST_CASE("batch_generate golden vector (3 users, batch 0, size 32)") {
    const Scenario s = three_users();
    const ScenarioSampler sampler(s);
    const std::vector<std::uint8_t> golden{1, 1, 0, 1, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1,
                                           1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 1, 0, 1, 1, 0};
    const BatchAddress addr{2024, "peak", 1, 0, 32};
    CHECK(batch_generate(addr, sampler) == golden);
    CHECK(batch_generate(addr, s) == golden);
}

TEST_CASE("batch_generate: pure, and bit j is stream element batch*size + j") {
    const Scenario s = three_users();
    const ScenarioSampler sampler(s);
    const BatchAddress addr{7, "off", 2, 3, 50};
    const auto a = batch_generate(addr, sampler);
    CHECK(a == batch_generate(addr, sampler));
    const auto stream = estimand_stream(sampler, "off", 2, 7);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == stream.at(150 + j));
}

TEST_CASE("batch_generate: constant indicator gives all ones") {
    const Scenario s = single_user(5.0, no_deviation(), {4, 6, 8});
    const auto bits = batch_generate(BatchAddress{1, "v", 0, 9, 64}, s);
    CHECK(bits == std::vector<std::uint8_t>(64, 1));
    CHECK_THROWS_AS(batch_generate(BatchAddress{1, "x", 0, 0, 4}, s), ParameterError);
    CHECK_THROWS_AS(batch_generate(BatchAddress{1, "v", 0, 0, 0}, s), ParameterError);
}

TEST_CASE("estimand_stream golden prefixes and addressing") {
    const Scenario s = two_states();
    const ScenarioSampler sampler(s);
    CHECK(prefix(estimand_stream(sampler, "high", 2, 42), 40) == "1101111111111011101111111111110111111111");
    CHECK(prefix(estimand_stream(sampler, "high", 3, 42), 40) == "0000000000000000010000001000010000000000");
    CHECK(prefix(estimand_stream(sampler, "high", 2, 42), 500) == prefix(estimand_stream(sampler, "high", 2, 42), 500));

    auto seq = estimand_stream(sampler, "low", 1, 9);
    bool last = false;
    for (int i = 0; i <= 10'000; ++i) last = seq.next();
    CHECK(estimand_stream(sampler, "low", 1, 9).at(10'000) == last);
}

TEST_CASE("parallel outcomes equal the sequential stopping rule for every worker count and batch size") {
    const Scenario s = two_states();
    const ScenarioSampler sampler(s);
    const auto params = make_params(0.1, 0.05);
    std::vector<EdOutcome> sequential;
    for (std::size_t v = 0; v < 2; ++v)
        for (std::size_t w = 0; w < 4; ++w) sequential.push_back(run_sequential(sampler, v, w, params, 5));

    for (std::size_t batch : {1u, 7u, 333u, 4096u})
        for (std::size_t workers : {1u, 2u, 8u}) {
            CAPTURE(batch);
            CAPTURE(workers);
            const auto rs = run_parallel(full_plan(sampler, batch), sampler, params, 5, workers);
            CHECK(outcomes(rs) == sequential);
            for (const auto& r : rs) {
                const std::uint64_t needed = (samples_used(r.outcome) + batch - 1) / batch;
                CHECK(r.consumed_batches == needed);
                CHECK(r.generated_batches == r.consumed_batches + r.discarded_batches);
            }
        }
}

TEST_CASE("schedule independence under randomized completion delays") {
    const Scenario s = three_users();
    const ScenarioSampler sampler(s);
    const auto params = make_params(0.2, 0.1);
    const auto reference = outcomes(run_parallel(full_plan(sampler, 16), sampler, params, 77, 1));
    for (int trial = 0; trial < 3; ++trial) {
        WorkPlan plan = full_plan(sampler, 16, 6);
        plan.before_generate = [trial](const BatchAddress& a) {
            const auto h = mix64(a.batch_index * 31 + a.slot + static_cast<std::uint64_t>(trial) * 1000);
            std::this_thread::sleep_for(std::chrono::microseconds(h % 200));
        };
        CHECK(outcomes(run_parallel(plan, sampler, params, 77, 4)) == reference);
    }
}

TEST_CASE("work conservation: generated batches never exceed consumed + lookahead") {
    const Scenario s = two_states();
    const ScenarioSampler sampler(s);
    const auto params = make_params(0.1, 0.05);
    for (std::size_t lookahead : {1u, 3u}) {
        const auto rs = run_parallel(full_plan(sampler, 64, lookahead), sampler, params, 3, 4);
        for (const auto& r : rs) CHECK(r.generated_batches <= r.consumed_batches + lookahead);
    }
}

TEST_CASE("distinct tasks use distinct stream keys") {
    const Scenario s = two_states();
    const ScenarioSampler sampler(s);
    const auto rs = run_parallel(full_plan(sampler, 512), sampler, make_params(0.3, 0.1), 11, 2);
    std::set<std::uint64_t> keys;
    for (const auto& r : rs) keys.insert(r.stream_key);
    CHECK(keys.size() == rs.size());
}

TEST_CASE("a failing worker surfaces as a run error naming the task") {
    const Scenario s = two_states();
    const ScenarioSampler sampler(s);
    WorkPlan plan = full_plan(sampler, 32);
    plan.before_generate = [](const BatchAddress& a) {
        if (a.state == "low" && a.slot == 2 && a.batch_index == 3) throw std::runtime_error("injected");
    };
    try {
        run_parallel(plan, sampler, make_params(0.1, 0.05), 1, 3);
        FAIL("expected RunError");
    } catch (const RunError& e) {
        const std::string what = e.what();
        CHECK(what.find("\"low\"") != std::string::npos);
        CHECK(what.find("slot 2") != std::string::npos);
        CHECK(what.find("injected") != std::string::npos);
    }
}

TEST_CASE("run_parallel argument checks") {
    const Scenario s = two_states();
    const ScenarioSampler sampler(s);
    const auto params = make_params(0.1, 0.05);
    CHECK_THROWS_AS(run_parallel(full_plan(sampler), sampler, params, 1, 0), ParameterError);
    CHECK_THROWS_AS(run_parallel(full_plan(sampler, 0), sampler, params, 1, 1), ParameterError);
    WorkPlan bad = full_plan(sampler);
    bad.tasks.push_back({5, 0});
    CHECK_THROWS_AS(run_parallel(bad, sampler, params, 1, 1), ParameterError);
    WorkPlan empty;
    CHECK(run_parallel(empty, sampler, params, 1, 2).empty());
}
