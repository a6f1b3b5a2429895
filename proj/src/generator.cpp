#include "ppsv/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ppsv/errors.hpp"

namespace ppsv {

namespace {

// std::uniform_real_distribution is implementation-defined; the raw
// mt19937_64 sequence is not.
class Draws {
public:
    explicit Draws(std::uint64_t seed) : engine_(seed) {}
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + unit() * (hi - lo); }
    std::size_t below(std::size_t n) {
        return static_cast<std::size_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

private:
    std::mt19937_64 engine_;
};

double round_to(double x, double quantum) { return std::round(x / quantum) * quantum; }

struct Range {
    double lo, hi;
};

DeviationModel make_model(DeviationFamily family, double half_width, std::size_t points, Draws& draws) {
    switch (family) {
    case DeviationFamily::Discrete: {
        DiscreteDeviation d;
        if (points == 1) {
            d.points_kw = {0.0};
            d.probabilities = {1.0};
            return d;
        }
        std::vector<double> weights;
        for (std::size_t i = 0; i < points; ++i) {
            const double x = -half_width + 2.0 * half_width * static_cast<double>(i) / static_cast<double>(points - 1);
            d.points_kw.push_back(round_to(x, 1e-3));
            weights.push_back(0.2 + draws.unit());
        }
        // Rounding can collapse points when the width is tiny.
        for (std::size_t i = 1; i < d.points_kw.size(); ++i)
            if (d.points_kw[i] <= d.points_kw[i - 1]) d.points_kw[i] = d.points_kw[i - 1] + 1e-3;
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < points; ++i) {
            d.probabilities.push_back(weights[i] / total);
            acc += d.probabilities.back();
        }
        d.probabilities.push_back(1.0 - acc);
        return d;
    }
    case DeviationFamily::Uniform:
        return UniformDeviation{-half_width, half_width};
    case DeviationFamily::TruncatedGaussian:
        return TruncatedGaussianDeviation{0.0, std::max(half_width / 2.0, 1e-3), -std::max(half_width, 1e-3),
                                          std::max(half_width, 1e-3)};
    }
    return DiscreteDeviation{{0.0}, {1.0}};
}

Range support_of(const DeviationModel& m) {
    return std::visit(
        [](const auto& x) -> Range {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, DiscreteDeviation>)
                return {*std::min_element(x.points_kw.begin(), x.points_kw.end()),
                        *std::max_element(x.points_kw.begin(), x.points_kw.end())};
            else
                return {x.lo_kw, x.hi_kw};
        },
        m);
}

}  // namespace

DeviationFamily parse_family(const std::string& name) {
    if (name == "discrete") return DeviationFamily::Discrete;
    if (name == "uniform") return DeviationFamily::Uniform;
    if (name == "truncated_gaussian") return DeviationFamily::TruncatedGaussian;
    throw ParameterError("unknown deviation family \"" + name + "\"");
}

Scenario generate_scenario(const GeneratorParams& p) {
    if (p.users == 0) throw ParameterError("users must be >= 1");
    if (p.time_slots == 0) throw ParameterError("time_slots must be >= 1");
    if (p.states == 0 || p.states > p.time_slots) throw ParameterError("states must lie in [1, time_slots]");
    if (p.power_slots == 0) throw ParameterError("power_slots must be >= 1");
    if (p.support_points == 0) throw ParameterError("support_points must be >= 1");
    if (!(p.magnitude >= 0.0) || !std::isfinite(p.magnitude)) throw ParameterError("magnitude must be >= 0");
    if (!(p.epp_min_kw <= p.epp_max_kw) || !std::isfinite(p.epp_min_kw) || !std::isfinite(p.epp_max_kw))
        throw ParameterError("need finite epp_min_kw <= epp_max_kw");
    if (!(p.override_fraction >= 0.0 && p.override_fraction <= 1.0))
        throw ParameterError("override_fraction must lie in [0, 1]");

    Draws draws(p.seed);
    Scenario s;
    s.time_slots = p.time_slots;

    // Every state gets at least one time slot.
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < p.states; ++k) labels.push_back("s" + std::to_string(k));
    std::vector<std::string> assignment(p.time_slots);
    std::vector<std::size_t> order(p.time_slots);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[draws.below(i)]);
    for (std::size_t i = 0; i < p.time_slots; ++i)
        assignment[order[i]] = i < p.states ? labels[i] : labels[draws.below(p.states)];
    s.substation = SubstationProfile(std::move(assignment));

    for (std::size_t u = 0; u < p.users; ++u) {
        User user;
        user.id = "u" + std::to_string(u);
        for (std::size_t t = 0; t < p.time_slots; ++t)
            user.epp_kw.push_back(round_to(draws.uniform(p.epp_min_kw, p.epp_max_kw), 0.01));
        const double mean_epp =
            std::accumulate(user.epp_kw.begin(), user.epp_kw.end(), 0.0) / static_cast<double>(p.time_slots);
        const double half_width = p.magnitude * std::abs(mean_epp);
        const std::size_t points = (p.family == DeviationFamily::Discrete && half_width < 1e-3) ? 1 : p.support_points;
        user.deviation = make_model(p.family, half_width, points, draws);
        if (p.override_fraction > 0.0)
            for (std::size_t t = 0; t < p.time_slots; ++t)
                if (draws.unit() < p.override_fraction)
                    user.deviation_overrides.emplace(t, make_model(p.family, 2.0 * half_width, points, draws));
        s.users.push_back(std::move(user));
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t t = 0; t < p.time_slots; ++t) {
        double a = 0.0, b = 0.0;
        for (const auto& user : s.users) {
            const auto r = support_of(user.deviation_at(t));
            a += user.epp_kw[t] + r.lo;
            b += user.epp_kw[t] + r.hi;
        }
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    const double margin = 0.05 * (hi - lo) + 0.01;
    std::vector<double> bps{lo - margin, hi + margin};
    for (std::size_t k = 1; k < p.power_slots; ++k) bps.push_back(draws.uniform(lo - margin, hi + margin));
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    while (bps.size() < p.power_slots + 1) bps.push_back(bps.back() + 1.0);
    s.slots = PowerSlotPartition(std::move(bps));
    return s;
}

}  // namespace ppsv
