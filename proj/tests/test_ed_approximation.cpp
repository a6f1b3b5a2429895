#include <doctest.h>

#include <cmath>
#include <vector>

#include "ppsv/ed_approximation.hpp"
#include "ppsv/errors.hpp"
#include "ppsv/rng.hpp"

using namespace ppsv;

namespace {

// Golden constants from a 50-digit mpmath evaluation of the closed forms.
constexpr double kUpsilon1_010_005 = 1166.8482348770236431;
constexpr double kUpsilon_010_005 = 1059.86203170638513;

EdOutcome run_stream(const EdParams& p, const std::vector<double>& values, std::size_t* reads = nullptr) {
    std::size_t i = 0;
    auto out = estimate_mean(p, [&] { return values.at(i++); });
    if (reads) *reads = i;
    return out;
}

EdOutcome bernoulli_run(const EdParams& p, double prob, std::uint64_t key) {
    std::uint64_t i = 0;
    return estimate_mean(p, [&] {
        RngStream r(key, i++);
        return r.next_unit() < prob ? 1.0 : 0.0;
    });
}

}  // namespace

TEST_CASE("make_params: golden constants") {
    const auto p = make_params(0.1, 0.05);
    CHECK(p.upsilon == doctest::Approx(kUpsilon_010_005).epsilon(1e-13));
    CHECK(p.upsilon1 == doctest::Approx(kUpsilon1_010_005).epsilon(1e-13));
    CHECK(p.cutoff == 11669);
    CHECK(required_cutoff(p) == 11669);
    CHECK(p.upsilon1 > p.upsilon);
    CHECK(p.cutoff >= static_cast<std::uint64_t>(std::ceil(p.upsilon1)));
}

TEST_CASE("make_params: M = ceil(2 Upsilon1) at epsilon 0.5") {
    const auto p = make_params(0.5, 0.5);
    CHECK(p.cutoff == static_cast<std::uint64_t>(std::ceil(2.0 * p.upsilon1)));
    CHECK(p.cutoff == 50);
}

TEST_CASE("make_params: range errors") {
    for (double bad : {0.0, 1.0, -0.1, 1.5, double(NAN)}) {
        CHECK_THROWS_AS(make_params(bad, 0.05), ParameterError);
        CHECK_THROWS_AS(make_params(0.1, bad), ParameterError);
    }
}

TEST_CASE("constants are monotone in epsilon and delta") {
    CHECK(make_params(0.1, 0.01).upsilon1 > make_params(0.1, 0.05).upsilon1);
    CHECK(make_params(0.05, 0.05).upsilon1 > make_params(0.1, 0.05).upsilon1);
    // Halving epsilon scales M by 8 (1 + eps/2) / (1 + eps), just under 8,
    // because of the (1 + eps) factor in upsilon1.
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        const auto a = make_params(eps, 0.05);
        const auto b = make_params(eps / 2, 0.05);
        const double ratio = static_cast<double>(b.cutoff) / static_cast<double>(a.cutoff);
        CHECK(ratio == doctest::Approx(8.0 * (1.0 + eps / 2) / (1.0 + eps)).epsilon(0.01));
        CHECK(ratio > 6.0);
        CHECK(ratio < 8.0);
    }
    // epsilon -> 1: M -> ceil(Upsilon1).
    const auto near_one = make_params(0.999999, 0.05);
    CHECK(near_one.cutoff - static_cast<std::uint64_t>(std::ceil(near_one.upsilon1)) <= 1);
}

TEST_CASE("all-ones stream stops at ceil(Upsilon1)") {
    const auto p = make_params(0.1, 0.05);
    std::size_t reads = 0;
    const auto out = run_stream(p, std::vector<double>(20'000, 1.0), &reads);
    REQUIRE(std::holds_alternative<Estimate>(out));
    const auto e = std::get<Estimate>(out);
    CHECK(e.samples_used == 1167);
    CHECK(reads == 1167);
    CHECK(e.mean == p.upsilon1 / 1167.0);
    CHECK(e.mean <= 1.0);
    CHECK(e.mean > 1.0 - 1.0 / 1167.0);
}

TEST_CASE("all-zeros stream is bot after exactly M samples") {
    const auto p = make_params(0.1, 0.05);
    std::size_t reads = 0;
    const auto out = run_stream(p, std::vector<double>(20'000, 0.0), &reads);
    REQUIRE(is_bot(out));
    CHECK(samples_used(out) == p.cutoff);
    CHECK(reads == p.cutoff);
}

TEST_CASE("values outside [0,1] are data errors naming the index") {
    const auto p = make_params(0.1, 0.05);
    try {
        run_stream(p, {1.0, 0.0, 1.5});
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("sample 2") != std::string::npos);
    }
    CHECK_THROWS_AS(run_stream(p, {-0.1}), DataError);
    CHECK_THROWS_AS(run_stream(p, {NAN}), DataError);
}

TEST_CASE("prefix property and determinism") {
    const auto p = make_params(0.2, 0.1);
    std::vector<double> values;
    RngStream r(3, 0);
    for (int i = 0; i < 50'000; ++i) values.push_back(r.next_unit() < 0.3 ? 1.0 : r.next_unit());
    std::size_t n1 = 0;
    const auto a = run_stream(p, values, &n1);
    std::vector<double> prefix(values.begin(), values.begin() + static_cast<long>(n1));
    std::size_t n2 = 0;
    CHECK(run_stream(p, prefix, &n2) == a);
    CHECK(n2 == n1);
    CHECK(run_stream(p, values) == a);
}

TEST_CASE("feed_bits agrees with feed") {
    const auto p = make_params(0.1, 0.05);
    std::vector<std::uint8_t> bits;
    for (std::uint64_t i = 0; i < 30'000; ++i) bits.push_back(RngStream(77, i).next_unit() < 0.25);
    StoppingRule by_bits(p), by_value(p);
    const auto used = by_bits.feed_bits(bits);
    for (auto b : bits)
        if (by_value.feed(b)) break;
    CHECK(by_bits.outcome() == by_value.outcome());
    CHECK(used == samples_used(by_bits.outcome()));
    CHECK(by_bits.feed_bits(bits) == 0);
}

TEST_CASE("estimate mean lies in (0,1] for fractional samples") {
    const auto p = make_params(0.3, 0.2);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        std::uint64_t i = 0;
        const auto out = estimate_mean(p, [&] { return RngStream(seed, i++).next_unit(); });
        REQUIRE(std::holds_alternative<Estimate>(out));
        const double m = std::get<Estimate>(out).mean;
        CHECK((m > 0.0 && m <= 1.0));
        CHECK(std::get<Estimate>(out).samples_used >= static_cast<std::uint64_t>(std::ceil(p.upsilon1)));
    }
}

TEST_CASE("Bernoulli(0.5) meta-experiment: >= 93% of 200 runs within relative 0.1") {
    const auto p = make_params(0.1, 0.05);
    int good = 0;
    for (std::uint64_t run = 0; run < 200; ++run) {
        const auto out = bernoulli_run(p, 0.5, 1000 + run);
        if (const auto* e = std::get_if<Estimate>(&out); e && std::abs(e->mean - 0.5) / 0.5 <= 0.1) ++good;
    }
    CHECK(good >= 186);
}

TEST_CASE("bot soundness on direct Bernoulli streams") {
    const auto p = make_params(0.1, 0.05);
    int bots_rare = 0, bots_common = 0;
    for (std::uint64_t run = 0; run < 100; ++run) {
        bots_rare += is_bot(bernoulli_run(p, 0.1 / 50, 5000 + run));
        bots_common += is_bot(bernoulli_run(p, 0.2, 9000 + run));
    }
    CHECK(bots_rare >= 99);
    CHECK(bots_common <= 5);
}
