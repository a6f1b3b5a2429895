#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>

namespace ppsv {

/// Tolerance/confidence pair and the stopping-rule constants derived from it:
///   upsilon  = 4 (e - 2) ln(2 / delta) / epsilon^2
///   upsilon1 = 1 + (1 + epsilon) upsilon
///   cutoff   = ceil(upsilon1 / epsilon)
struct EdParams {
    double epsilon = 0.0;
    double delta = 0.0;
    double upsilon = 0.0;
    double upsilon1 = 0.0;
    std::uint64_t cutoff = 0;
};

EdParams make_params(double epsilon, double delta);

inline std::uint64_t required_cutoff(const EdParams& params) noexcept { return params.cutoff; }

struct Estimate {
    double mean = 0.0;
    std::uint64_t samples_used = 0;
    bool operator==(const Estimate&) const = default;
};

/// Budget of `cutoff` samples exhausted before the running sum reached
/// upsilon1: the mean is below epsilon with confidence >= 1 - delta.
struct Bot {
    std::uint64_t samples_used = 0;
    bool operator==(const Bot&) const = default;
};

using EdOutcome = std::variant<Estimate, Bot>;

inline bool is_bot(const EdOutcome& o) noexcept { return std::holds_alternative<Bot>(o); }
inline std::uint64_t samples_used(const EdOutcome& o) noexcept {
    return std::visit([](const auto& x) { return x.samples_used; }, o);
}

/// Incremental form of the stopping rule. Feed samples in stream order until
/// decided(); the parallel engine drives this one batch at a time.
class StoppingRule {
public:
    explicit StoppingRule(const EdParams& params) : params_(params) {}

    /// Consumes one sample. Returns true once the outcome is decided; further
    /// calls are ignored. Throws DataError for values outside [0, 1].
    bool feed(double z);

    /// Feeds indicator bits until decided or the span is exhausted. Returns
    /// the number of bits consumed.
    std::size_t feed_bits(std::span<const std::uint8_t> bits);

    bool decided() const noexcept { return decided_; }
    std::uint64_t samples() const noexcept { return n_; }
    double running_sum() const noexcept { return sum_ + compensation_; }

    /// Only meaningful once decided().
    EdOutcome outcome() const;

private:
    bool step();

    EdParams params_;
    std::uint64_t n_ = 0;
    double sum_ = 0.0;
    double compensation_ = 0.0;
    bool decided_ = false;
};

/// Runs the stopping rule over `sampler`, which is called once per sample
/// and never past the deciding one.
EdOutcome estimate_mean(const EdParams& params, const std::function<double()>& sampler);

}  // namespace ppsv
