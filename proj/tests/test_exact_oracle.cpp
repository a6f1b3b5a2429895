#include <doctest.h>

#include <cmath>

#include "brute_force.hpp"
#include "fixtures.hpp"
#include "ppsv/errors.hpp"
#include "ppsv/exact_oracle.hpp"
#include "ppsv/generator.hpp"
#include "ppsv/scenario.hpp"

using namespace ppsv;
using namespace ppsv::testing;

TEST_CASE("single +-1 user: {4: 1/2, 6: 1/2}") {
    const auto d = apd_distribution(single_user(5.0, plus_minus_one(), {0, 10}), 0);
    REQUIRE(d.support.size() == 2);
    CHECK(d.support[0] == std::pair{4.0, 0.5});
    CHECK(d.support[1] == std::pair{6.0, 0.5});
}

TEST_CASE("two +-1 users: binomial convolution") {
    Scenario s = single_user(4.0, plus_minus_one(), {0, 20});
    s.users.push_back(User{"u2", std::vector<double>(4, 6.0), plus_minus_one(), {}});
    const auto d = apd_distribution(s, 2);
    REQUIRE(d.support.size() == 3);
    CHECK(d.support[0] == std::pair{8.0, 0.25});
    CHECK(d.support[1] == std::pair{10.0, 0.5});
    CHECK(d.support[2] == std::pair{12.0, 0.25});
}

TEST_CASE("three users with asymmetric supports match enumeration") {
    Scenario s;
    s.time_slots = 2;
    s.substation = SubstationProfile({"v", "v"});
    s.slots = PowerSlotPartition({0, 30});
    s.users.push_back(User{"a", {1.5, 2.0}, discrete({-0.3, 0.1, 0.7}, {0.2, 0.5, 0.3}), {}});
    s.users.push_back(User{"b", {3.0, 1.0}, discrete({0.0, 2.0}, {0.9, 0.1}), {}});
    s.users.push_back(User{"c", {0.25, 4.0}, discrete({-1.0, -0.5, 0.5, 1.0}, {0.1, 0.2, 0.3, 0.4}), {}});
    for (TimeSlotId t = 0; t < 2; ++t) {
        const auto d = apd_distribution(s, t);
        CHECK(total_variation(d.support, enumerate_apd(s, t)) < 1e-12);
        CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 1; i < d.support.size(); ++i) CHECK(d.support[i].first > d.support[i - 1].first);
    }
}

TEST_CASE("exact_psi examples") {
    Scenario fixed = single_user(4.0, no_deviation(), {9, 11});
    fixed.users.push_back(User{"u2", std::vector<double>(4, 6.0), no_deviation(), {}});
    CHECK(exact_psi(fixed, "v", 0) == 1.0);
    CHECK(exact_psi(single_user(5.0, plus_minus_one(), {4, 6, 8}), "v", 0) == 0.5);
    CHECK(exact_psi(single_user(5.0, plus_minus_one(), {4, 6, 8}), "v", 1) == 0.5);
}

TEST_CASE("mixed-state scenario matches enumeration per state") {
    const Scenario s = two_states();
    const auto table = exact_psi_table(s);
    const auto states = s.substation.states();
    for (std::size_t v = 0; v < states.size(); ++v) {
        double sum = 0.0;
        for (std::size_t w = 0; w < s.slots.slot_count(); ++w) {
            CHECK(table[v][w] == doctest::Approx(enumerate_psi(s, states[v], w)).epsilon(1e-12));
            sum += table[v][w];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    // high: 10 +- 1 +- 0.5 spans [8.5, 11.5]; low: 6 +- 1 +- 0.5.
    CHECK(table[0][2] > 0.0);
    CHECK(table[1][0] > 0.0);
    CHECK(table[0][0] == 0.0);
}

TEST_CASE("slot masses plus out-of-range mass sum to one") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        GeneratorParams g;
        g.seed = seed;
        g.users = 1 + seed % 4;
        g.time_slots = 1 + seed % 8;
        g.states = 1 + seed % std::min<std::size_t>(3, g.time_slots);
        g.power_slots = 1 + seed % 6;
        g.support_points = 1 + seed % 4;
        g.magnitude = 0.3;
        Scenario s = generate_scenario(g);
        // Narrow the range so some mass falls outside.
        auto bps = s.slots.breakpoints();
        const double shrink = 0.25 * (bps.back() - bps.front());
        const double lo = bps.front() + shrink;
        std::erase_if(bps, [&](double b) { return b <= lo; });
        bps.insert(bps.begin(), lo);
        s.slots = PowerSlotPartition(bps);
        REQUIRE(validate(s).empty());
        for (TimeSlotId t = 0; t < s.time_slots; ++t) {
            const auto d = apd_distribution(s, t);
            double in = 0.0, out = 0.0;
            for (const auto& [x, p] : d.support) (s.slots.slot_of(x) ? in : out) += p;
            double by_slot = 0.0;
            for (std::size_t w = 0; w < s.slots.slot_count(); ++w) by_slot += d.mass_in(s.slots, w);
            CHECK(by_slot + out == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(by_slot == doctest::Approx(in).epsilon(1e-12));
        }
    }
}

TEST_CASE("continuous models make the oracle inapplicable") {
    const Scenario s = single_user(5.0, UniformDeviation{-1, 1}, {0, 10});
    CHECK_FALSE(oracle_applicable(s));
    CHECK_THROWS_AS(apd_distribution(s, 0), OracleInapplicable);
    CHECK_THROWS_AS(exact_psi_table(s), OracleInapplicable);

    Scenario o = single_user(5.0, plus_minus_one(), {0, 10});
    o.users[0].deviation_overrides.emplace(1, TruncatedGaussianDeviation{0, 1, -1, 1});
    CHECK_FALSE(oracle_applicable(o));
    CHECK_NOTHROW(apd_distribution(o, 0));
    CHECK_THROWS_AS(apd_distribution(o, 1), OracleInapplicable);
}

TEST_CASE("support blowup hits the resource guard") {
    Scenario s;
    s.time_slots = 1;
    s.substation = SubstationProfile({"v"});
    s.slots = PowerSlotPartition({-1e9, 1e9});
    std::vector<double> pts, probs;
    for (int i = 0; i < 100; ++i) {
        pts.push_back(i * 1.0);
        probs.push_back(0.01);
    }
    // Incommensurate scales keep every sum distinct: 100^4 > 10^6.
    for (int u = 0; u < 4; ++u) {
        auto scaled = pts;
        for (auto& x : scaled) x *= std::pow(101.0, u);
        s.users.push_back(User{"u" + std::to_string(u), {0.0}, discrete(scaled, probs), {}});
    }
    CHECK_THROWS_AS(apd_distribution(s, 0), ResourceError);
}

TEST_CASE("Monte Carlo frequency matches exact_psi within 4 standard errors") {
    const Scenario s = two_states();
    const ScenarioSampler sampler(s);
    const auto table = exact_psi_table(s);
    const int n = 1'000'000;
    for (std::size_t v = 0; v < 2; ++v) {
        std::vector<int> hits(s.slots.slot_count(), 0);
        for (int i = 0; i < n; ++i) {
            RngStream r(1234 + v, static_cast<std::uint64_t>(i));
            const TimeSlotId t = sampler.pick_time_slot(v, r);
            if (auto w = s.slots.slot_of(sampler.sample_apd(t, r))) hits[*w]++;
        }
        for (std::size_t w = 0; w < hits.size(); ++w) {
            const double p = table[v][w];
            const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / n);
            CHECK(std::abs(hits[w] / double(n) - p) <= 4 * se + 1e-12);
        }
    }
}
