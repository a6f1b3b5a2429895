#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "ppsv/scenario.hpp"

namespace ppsv {

enum class DeviationFamily { Discrete, Uniform, TruncatedGaussian };

DeviationFamily parse_family(const std::string& name);

/// Knobs of the synthetic scenario generator.
struct GeneratorParams {
    std::uint64_t seed = 1;
    std::size_t users = 2;
    std::size_t time_slots = 24;
    std::size_t states = 2;
    std::size_t power_slots = 4;
    DeviationFamily family = DeviationFamily::Discrete;
    /// Deviation half-width as a fraction of the user's mean predicted power.
    double magnitude = 0.1;
    /// Discrete family only: number of support points (evenly spaced).
    std::size_t support_points = 2;
    double epp_min_kw = 1.0;
    double epp_max_kw = 10.0;
    /// Also emit a per-time-slot override for roughly this fraction of
    /// (user, time slot) pairs, same family, doubled magnitude.
    double override_fraction = 0.0;
};

/// Deterministic for a given GeneratorParams; the result always validates.
/// Throws ParameterError for out-of-range knobs.
Scenario generate_scenario(const GeneratorParams& params);

}  // namespace ppsv
