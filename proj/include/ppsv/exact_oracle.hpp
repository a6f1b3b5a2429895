#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ppsv/scenario.hpp"

namespace ppsv {

/// Exact law of APD(t): sorted support with strictly positive masses.
struct ExactDistribution {
    std::vector<std::pair<double, double>> support;  // (power kW, probability)

    double total_mass() const noexcept;
    /// Mass inside power slot `slot` of `partition`.
    double mass_in(const PowerSlotPartition& partition, std::size_t slot) const noexcept;
};

/// Support points closer than this are merged during convolution.
inline constexpr double kSupportMergeToleranceKw = 1e-12;
/// Convolution aborts with ResourceError beyond this many support points.
inline constexpr std::size_t kMaxSupportPoints = 1'000'000;

/// Convolves the users' discrete deviations at time slot t, accumulating
/// power in the same order and association as the sampler
/// (apd + (epp + deviation), users in declared order).
/// Throws OracleInapplicable if any model at t is not discrete.
ExactDistribution apd_distribution(const Scenario& scenario, TimeSlotId t);

/// Psi_v(w) = mean over t in T_v of Pr[APD(t) in w].
double exact_psi(const Scenario& scenario, const SubstationState& state, std::size_t slot);

/// Full table, indexed [state (sorted label order)][slot]. Computes each
/// time slot's distribution once.
std::vector<std::vector<double>> exact_psi_table(const Scenario& scenario);

/// True when every model of every user at every time slot is discrete.
bool oracle_applicable(const Scenario& scenario) noexcept;

}  // namespace ppsv
