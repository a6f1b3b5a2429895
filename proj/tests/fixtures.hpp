#pragma once

#include <string>
#include <vector>

#include "ppsv/scenario.hpp"

namespace ppsv::testing {

inline DiscreteDeviation discrete(std::vector<double> points, std::vector<double> probs) {
    return DiscreteDeviation{std::move(points), std::move(probs)};
}

inline DiscreteDeviation plus_minus_one() { return discrete({-1.0, 1.0}, {0.5, 0.5}); }
inline DiscreteDeviation no_deviation() { return discrete({0.0}, {1.0}); }

/// One user with constant EPP over `time_slots` slots, all in state "v".
inline Scenario single_user(double epp, DeviationModel dev, std::vector<double> breakpoints,
                            std::size_t time_slots = 4) {
    Scenario s;
    s.time_slots = time_slots;
    s.substation = SubstationProfile(std::vector<SubstationState>(time_slots, "v"));
    s.slots = PowerSlotPartition(std::move(breakpoints));
    s.users.push_back(User{"u1", std::vector<double>(time_slots, epp), std::move(dev), {}});
    return s;
}

/// Indicator stream with Pr[1] = p: one user at 0 kW, deviation {0: p, 1: 1-p},
/// slot 0 = [-0.5, 0.5).
inline Scenario bernoulli(double p) {
    return single_user(0.0, discrete({0.0, 1.0}, {p, 1.0 - p}), {-0.5, 0.5, 1.5}, 1);
}

/// Two states with disjoint time slots and different EPP levels.
inline Scenario two_states() {
    Scenario s;
    s.time_slots = 6;
    s.substation = SubstationProfile({"high", "low", "high", "low", "high", "low"});
    s.slots = PowerSlotPartition({0.0, 5.5, 8.5, 11.5, 20.0});
    s.users.push_back(User{"a", {6, 3, 6, 3, 6, 3}, plus_minus_one(), {}});
    s.users.push_back(User{"b", {4, 3, 4, 3, 4, 3}, discrete({-0.5, 0.0, 0.5}, {0.25, 0.5, 0.25}), {}});
    return s;
}

}  // namespace ppsv::testing
