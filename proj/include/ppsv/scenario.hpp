#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ppsv/rng.hpp"

namespace ppsv {

using TimeSlotId = std::size_t;
using SubstationState = std::string;

struct DiscreteDeviation {
    std::vector<double> points_kw;
    std::vector<double> probabilities;
    bool operator==(const DiscreteDeviation&) const = default;
};

struct UniformDeviation {
    double lo_kw = 0.0;
    double hi_kw = 0.0;
    bool operator==(const UniformDeviation&) const = default;
};

struct TruncatedGaussianDeviation {
    double mean_kw = 0.0;
    double stddev_kw = 1.0;
    double lo_kw = -1.0;
    double hi_kw = 1.0;
    bool operator==(const TruncatedGaussianDeviation&) const = default;
};

/// Additive deviation of a user's power from its predicted profile.
using DeviationModel = std::variant<DiscreteDeviation, UniformDeviation, TruncatedGaussianDeviation>;

/// Draws one deviation value. Every family consumes exactly one 64-bit
/// draw from the stream (the truncated Gaussian uses inverse-CDF sampling).
double sample_deviation(const DeviationModel& model, RngStream& rng);

namespace detail {

struct CompiledDeviation {
    enum class Kind { Discrete, Uniform, TruncatedGaussian } kind = Kind::Discrete;
    std::vector<double> cumulative;
    std::vector<double> points;
    double lo = 0.0, hi = 0.0;
    double mean = 0.0, stddev = 1.0;
    // Truncated Gaussian: CDF (or upper-tail CDF) of the standardized bounds.
    double tail_lo = 0.0, tail_hi = 0.0;
    bool upper_tail = false;
};

CompiledDeviation compile_deviation(const DeviationModel& model);
double draw_deviation(const CompiledDeviation& dev, RngStream& rng);

}  // namespace detail

/// Power-axis partition: [b0,b1), [b1,b2), ..., [b_{k-1}, b_k].
class PowerSlotPartition {
public:
    PowerSlotPartition() = default;
    explicit PowerSlotPartition(std::vector<double> breakpoints_kw) : breakpoints_(std::move(breakpoints_kw)) {}

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    std::size_t slot_count() const noexcept { return breakpoints_.size() < 2 ? 0 : breakpoints_.size() - 1; }
    double lower(std::size_t slot) const { return breakpoints_.at(slot); }
    double upper(std::size_t slot) const { return breakpoints_.at(slot + 1); }

    /// Slot containing `power_kw`, or nullopt when outside [b0, bk].
    std::optional<std::size_t> slot_of(double power_kw) const noexcept;
    bool contains(std::size_t slot, double power_kw) const noexcept;

    bool operator==(const PowerSlotPartition&) const = default;

private:
    std::vector<double> breakpoints_;
};

/// sigma: time slot -> substation state.
class SubstationProfile {
public:
    SubstationProfile() = default;
    explicit SubstationProfile(std::vector<SubstationState> assignment) : assignment_(std::move(assignment)) {}

    const std::vector<SubstationState>& assignment() const noexcept { return assignment_; }
    /// V_S, sorted by label.
    std::vector<SubstationState> states() const;
    /// T_v in increasing time order.
    std::vector<TimeSlotId> slots_in_state(const SubstationState& state) const;

    bool operator==(const SubstationProfile&) const = default;

private:
    std::vector<SubstationState> assignment_;
};

struct User {
    std::string id;
    std::vector<double> epp_kw;
    DeviationModel deviation;
    std::map<TimeSlotId, DeviationModel> deviation_overrides;

    const DeviationModel& deviation_at(TimeSlotId t) const;
    bool operator==(const User&) const = default;
};

struct Scenario {
    std::size_t time_slots = 0;
    std::vector<User> users;
    SubstationProfile substation;
    PowerSlotPartition slots;

    bool operator==(const Scenario&) const = default;
};

/// Every invariant violation, each prefixed by a path-like locator.
std::vector<std::string> validate(const Scenario& scenario);

/// Throws ValidationError when validate() reports anything.
void require_valid(const Scenario& scenario);

/// Precompiled, immutable sampling view of a valid scenario. Safe to share
/// across threads.
class ScenarioSampler {
public:
    explicit ScenarioSampler(const Scenario& scenario);

    const Scenario& scenario() const noexcept { return *scenario_; }
    const std::vector<SubstationState>& states() const noexcept { return states_; }
    std::size_t state_index(const SubstationState& state) const;
    const std::vector<TimeSlotId>& slots_in_state(std::size_t state_index) const { return state_slots_.at(state_index); }
    std::size_t power_slot_count() const noexcept { return scenario_->slots.slot_count(); }

    /// One APD draw at time slot t: users in declared order, one draw each.
    double sample_apd(TimeSlotId t, RngStream& rng) const;

    /// One Bernoulli trial for (state, slot): first draw picks t uniformly in
    /// T_v, then sample_apd.
    bool sample_indicator(std::size_t state_index, std::size_t slot, RngStream& rng) const;

    /// The time slot a trial would pick (first draw of the stream).
    TimeSlotId pick_time_slot(std::size_t state_index, RngStream& rng) const;

private:
    const Scenario* scenario_;
    std::vector<SubstationState> states_;
    std::vector<std::vector<TimeSlotId>> state_slots_;
    // Per user, per time slot compiled deviation model (index into compiled_).
    std::vector<std::vector<std::size_t>> model_index_;
    std::vector<detail::CompiledDeviation> compiled_;
};

/// Free-function forms; build a ScenarioSampler per call.
double sample_apd(const Scenario& scenario, TimeSlotId t, RngStream& rng);
bool sample_indicator(const Scenario& scenario, const SubstationState& state, std::size_t slot, RngStream& rng);

}  // namespace ppsv
