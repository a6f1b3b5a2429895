#include "ppsv/ed_approximation.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ppsv/errors.hpp"

namespace ppsv {

EdParams make_params(double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ParameterError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
    if (!(delta > 0.0 && delta < 1.0))
        throw ParameterError("delta must lie in (0, 1), got " + std::to_string(delta));
    EdParams p;
    p.epsilon = epsilon;
    p.delta = delta;
    p.upsilon = 4.0 * (std::numbers::e - 2.0) * std::log(2.0 / delta) / (epsilon * epsilon);
    p.upsilon1 = 1.0 + (1.0 + epsilon) * p.upsilon;
    p.cutoff = static_cast<std::uint64_t>(std::ceil(p.upsilon1 / epsilon));
    return p;
}

bool StoppingRule::feed(double z) {
    if (decided_) return true;
    if (!(z >= 0.0 && z <= 1.0))
        throw DataError("sample " + std::to_string(n_) + " = " + std::to_string(z) + " lies outside [0, 1]");
    // Neumaier compensated summation.
    const double t = sum_ + z;
    if (std::abs(sum_) >= std::abs(z))
        compensation_ += (sum_ - t) + z;
    else
        compensation_ += (z - t) + sum_;
    sum_ = t;
    ++n_;
    return step();
}

std::size_t StoppingRule::feed_bits(std::span<const std::uint8_t> bits) {
    std::size_t used = 0;
    for (const std::uint8_t b : bits) {
        if (decided_) break;
        ++used;
        // Sums of bits stay exact integers well past any reachable cutoff.
        sum_ += static_cast<double>(b != 0);
        ++n_;
        step();
    }
    return used;
}

bool StoppingRule::step() {
    if (running_sum() >= params_.upsilon1 || n_ >= params_.cutoff) decided_ = true;
    return decided_;
}

EdOutcome StoppingRule::outcome() const {
    if (running_sum() >= params_.upsilon1) return Estimate{params_.upsilon1 / static_cast<double>(n_), n_};
    return Bot{n_};
}

EdOutcome estimate_mean(const EdParams& params, const std::function<double()>& sampler) {
    StoppingRule rule(params);
    while (!rule.feed(sampler())) {
    }
    return rule.outcome();
}

}  // namespace ppsv
