#include "ppsv/exact_oracle.hpp"

#include <algorithm>
#include <string>

#include "ppsv/errors.hpp"

namespace ppsv {

double ExactDistribution::total_mass() const noexcept {
    double s = 0.0;
    for (const auto& [x, p] : support) s += p;
    return s;
}

double ExactDistribution::mass_in(const PowerSlotPartition& partition, std::size_t slot) const noexcept {
    double s = 0.0;
    for (const auto& [x, p] : support)
        if (partition.contains(slot, x)) s += p;
    return s;
}

bool oracle_applicable(const Scenario& scenario) noexcept {
    for (const auto& u : scenario.users) {
        if (!std::holds_alternative<DiscreteDeviation>(u.deviation)) {
            // Still fine if every time slot overrides the base model.
            for (TimeSlotId t = 0; t < scenario.time_slots; ++t)
                if (!std::holds_alternative<DiscreteDeviation>(u.deviation_at(t))) return false;
        }
        for (const auto& [t, m] : u.deviation_overrides)
            if (!std::holds_alternative<DiscreteDeviation>(m)) return false;
    }
    return true;
}

ExactDistribution apd_distribution(const Scenario& scenario, TimeSlotId t) {
    require_valid(scenario);
    if (t >= scenario.time_slots) throw ParameterError("time slot " + std::to_string(t) + " out of range");

    std::vector<std::pair<double, double>> current{{0.0, 1.0}};
    std::vector<std::pair<double, double>> next;
    for (const auto& user : scenario.users) {
        const auto* model = std::get_if<DiscreteDeviation>(&user.deviation_at(t));
        if (model == nullptr)
            throw OracleInapplicable("oracle requires discrete deviation models (user \"" + user.id + "\", t=" +
                                     std::to_string(t) + ")");
        if (current.size() * model->points_kw.size() > kMaxSupportPoints)
            throw ResourceError("APD support at t=" + std::to_string(t) + " would exceed " +
                                std::to_string(kMaxSupportPoints) + " points");
        next.clear();
        const double epp = user.epp_kw[t];
        for (const auto& [x, p] : current)
            for (std::size_t i = 0; i < model->points_kw.size(); ++i)
                next.emplace_back(x + (epp + model->points_kw[i]), p * model->probabilities[i]);
        std::sort(next.begin(), next.end());
        current.clear();
        for (const auto& [x, p] : next) {
            if (!current.empty() && x - current.back().first <= kSupportMergeToleranceKw)
                current.back().second += p;
            else
                current.emplace_back(x, p);
        }
    }
    return ExactDistribution{std::move(current)};
}

std::vector<std::vector<double>> exact_psi_table(const Scenario& scenario) {
    require_valid(scenario);
    if (!oracle_applicable(scenario)) throw OracleInapplicable("oracle requires discrete deviation models");
    std::vector<ExactDistribution> per_t;
    per_t.reserve(scenario.time_slots);
    for (TimeSlotId t = 0; t < scenario.time_slots; ++t) per_t.push_back(apd_distribution(scenario, t));

    const auto states = scenario.substation.states();
    const std::size_t slots = scenario.slots.slot_count();
    std::vector<std::vector<double>> table(states.size(), std::vector<double>(slots, 0.0));
    for (std::size_t v = 0; v < states.size(); ++v) {
        const auto ts = scenario.substation.slots_in_state(states[v]);
        for (std::size_t w = 0; w < slots; ++w) {
            double acc = 0.0;
            for (TimeSlotId t : ts) acc += per_t[t].mass_in(scenario.slots, w);
            table[v][w] = acc / static_cast<double>(ts.size());
        }
    }
    return table;
}

double exact_psi(const Scenario& scenario, const SubstationState& state, std::size_t slot) {
    const auto states = scenario.substation.states();
    const auto it = std::lower_bound(states.begin(), states.end(), state);
    if (it == states.end() || *it != state) throw ParameterError("unknown substation state \"" + state + "\"");
    if (slot >= scenario.slots.slot_count()) throw ParameterError("power slot index out of range");
    return exact_psi_table(scenario)[static_cast<std::size_t>(it - states.begin())][slot];
}

}  // namespace ppsv
