#include "ppsv/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "ppsv/errors.hpp"

namespace ppsv {

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error([&] {
          std::string msg = "scenario invalid:";
          for (const auto& v : violations) msg += "\n  " + v;
          return msg;
      }()),
      violations_(std::move(violations)) {}

namespace detail {

CompiledDeviation compile_deviation(const DeviationModel& model) {
    CompiledDeviation out;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DiscreteDeviation>) {
                out.kind = CompiledDeviation::Kind::Discrete;
                out.points = m.points_kw;
                double acc = 0.0;
                for (double p : m.probabilities) {
                    acc += p;
                    out.cumulative.push_back(acc);
                }
                // The last point absorbs the rounding of the running sum.
                if (!out.cumulative.empty()) out.cumulative.back() = 1.0;
            } else if constexpr (std::is_same_v<T, UniformDeviation>) {
                out.kind = CompiledDeviation::Kind::Uniform;
                out.lo = m.lo_kw;
                out.hi = m.hi_kw;
            } else {
                out.kind = CompiledDeviation::Kind::TruncatedGaussian;
                out.lo = m.lo_kw;
                out.hi = m.hi_kw;
                out.mean = m.mean_kw;
                out.stddev = m.stddev_kw;
                const double z_lo = (m.lo_kw - m.mean_kw) / m.stddev_kw;
                const double z_hi = (m.hi_kw - m.mean_kw) / m.stddev_kw;
                // Work in whichever tail keeps the CDF values away from 1.
                out.upper_tail = z_lo > 0.0;
                if (out.upper_tail) {
                    out.tail_lo = 0.5 * std::erfc(z_lo / std::numbers::sqrt2);
                    out.tail_hi = 0.5 * std::erfc(z_hi / std::numbers::sqrt2);
                } else {
                    out.tail_lo = 0.5 * std::erfc(-z_lo / std::numbers::sqrt2);
                    out.tail_hi = 0.5 * std::erfc(-z_hi / std::numbers::sqrt2);
                }
            }
        },
        model);
    return out;
}

double draw_deviation(const CompiledDeviation& dev, RngStream& rng) {
    switch (dev.kind) {
    case CompiledDeviation::Kind::Discrete: {
        const double u = rng.next_unit();
        const auto it = std::upper_bound(dev.cumulative.begin(), dev.cumulative.end(), u);
        const auto idx = std::min<std::size_t>(it - dev.cumulative.begin(), dev.points.size() - 1);
        return dev.points[idx];
    }
    case CompiledDeviation::Kind::Uniform: {
        const double u = rng.next_unit();
        return dev.lo + u * (dev.hi - dev.lo);
    }
    case CompiledDeviation::Kind::TruncatedGaussian: {
        const double u = rng.next_open_unit();
        if (dev.tail_lo == dev.tail_hi) {
            // Interval lies so far in a tail that its mass underflows.
            return dev.upper_tail ? dev.lo : dev.hi;
        }
        double z;
        if (dev.upper_tail) {
            const double q = dev.tail_lo - u * (dev.tail_lo - dev.tail_hi);
            z = std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
        } else {
            const double p = dev.tail_lo + u * (dev.tail_hi - dev.tail_lo);
            z = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
        }
        return std::clamp(dev.mean + dev.stddev * z, dev.lo, dev.hi);
    }
    }
    return 0.0;
}

}  // namespace detail

double sample_deviation(const DeviationModel& model, RngStream& rng) {
    return detail::draw_deviation(detail::compile_deviation(model), rng);
}

std::optional<std::size_t> PowerSlotPartition::slot_of(double power_kw) const noexcept {
    if (breakpoints_.size() < 2 || !(power_kw >= breakpoints_.front()) || !(power_kw <= breakpoints_.back()))
        return std::nullopt;
    if (power_kw == breakpoints_.back()) return breakpoints_.size() - 2;
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), power_kw);
    return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

bool PowerSlotPartition::contains(std::size_t slot, double power_kw) const noexcept {
    if (slot + 1 >= breakpoints_.size()) return false;
    const double lo = breakpoints_[slot];
    const double hi = breakpoints_[slot + 1];
    if (slot + 2 == breakpoints_.size()) return power_kw >= lo && power_kw <= hi;
    return power_kw >= lo && power_kw < hi;
}

std::vector<SubstationState> SubstationProfile::states() const {
    std::set<SubstationState> unique(assignment_.begin(), assignment_.end());
    return {unique.begin(), unique.end()};
}

std::vector<TimeSlotId> SubstationProfile::slots_in_state(const SubstationState& state) const {
    std::vector<TimeSlotId> out;
    for (TimeSlotId t = 0; t < assignment_.size(); ++t)
        if (assignment_[t] == state) out.push_back(t);
    return out;
}

const DeviationModel& User::deviation_at(TimeSlotId t) const {
    const auto it = deviation_overrides.find(t);
    return it == deviation_overrides.end() ? deviation : it->second;
}

namespace {

std::string fmt_num(double x) {
    std::ostringstream os;
    os.precision(15);
    os << x;
    return os.str();
}

void check_deviation(const DeviationModel& model, const std::string& where, std::vector<std::string>& out) {
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DiscreteDeviation>) {
                if (m.points_kw.empty()) out.push_back(where + ": discrete model has no support points");
                if (m.points_kw.size() != m.probabilities.size())
                    out.push_back(where + ": " + std::to_string(m.points_kw.size()) + " support points but " +
                                  std::to_string(m.probabilities.size()) + " probabilities");
                double sum = 0.0;
                for (std::size_t i = 0; i < m.probabilities.size(); ++i) {
                    const double p = m.probabilities[i];
                    if (!std::isfinite(p) || p <= 0.0)
                        out.push_back(where + ".probabilities[" + std::to_string(i) + "]: must be > 0, got " + fmt_num(p));
                    sum += p;
                }
                if (!m.probabilities.empty() && !(std::abs(sum - 1.0) <= 1e-12))
                    out.push_back(where + ": probability mass sums to " + fmt_num(sum) + ", expected 1");
                std::set<double> seen;
                for (std::size_t i = 0; i < m.points_kw.size(); ++i) {
                    const double d = m.points_kw[i];
                    if (!std::isfinite(d)) out.push_back(where + ".points_kw[" + std::to_string(i) + "]: not finite");
                    if (!seen.insert(d).second)
                        out.push_back(where + ".points_kw[" + std::to_string(i) + "]: duplicate support point " + fmt_num(d));
                }
            } else if constexpr (std::is_same_v<T, UniformDeviation>) {
                if (!std::isfinite(m.lo_kw) || !std::isfinite(m.hi_kw))
                    out.push_back(where + ": uniform bounds must be finite");
                else if (m.lo_kw > m.hi_kw)
                    out.push_back(where + ": uniform requires lo <= hi, got [" + fmt_num(m.lo_kw) + ", " + fmt_num(m.hi_kw) + "]");
            } else {
                if (!std::isfinite(m.mean_kw)) out.push_back(where + ": truncated gaussian mean must be finite");
                if (!std::isfinite(m.stddev_kw) || m.stddev_kw <= 0.0)
                    out.push_back(where + ": truncated gaussian requires stddev > 0, got " + fmt_num(m.stddev_kw));
                if (!std::isfinite(m.lo_kw) || !std::isfinite(m.hi_kw))
                    out.push_back(where + ": truncated gaussian bounds must be finite");
                else if (!(m.lo_kw < m.hi_kw))
                    out.push_back(where + ": truncated gaussian requires lo < hi, got [" + fmt_num(m.lo_kw) + ", " + fmt_num(m.hi_kw) + "]");
            }
        },
        model);
}

}  // namespace

std::vector<std::string> validate(const Scenario& scenario) {
    std::vector<std::string> out;
    const std::size_t n = scenario.time_slots;
    if (n == 0) out.push_back("time_slots: must be >= 1");

    const auto& assignment = scenario.substation.assignment();
    if (assignment.size() < n)
        out.push_back("substation_profile: assignment incomplete, " + std::to_string(assignment.size()) + " of " +
                      std::to_string(n) + " time slots assigned (first missing t=" + std::to_string(assignment.size()) + ")");
    else if (assignment.size() > n)
        out.push_back("substation_profile: " + std::to_string(assignment.size()) + " entries for " + std::to_string(n) +
                      " time slots");
    for (std::size_t t = 0; t < assignment.size(); ++t)
        if (assignment[t].empty()) out.push_back("substation_profile[" + std::to_string(t) + "]: empty state label");

    const auto& bps = scenario.slots.breakpoints();
    if (bps.size() < 2) out.push_back("power_slot_breakpoints_kw: need at least 2 breakpoints");
    for (std::size_t i = 0; i < bps.size(); ++i) {
        if (!std::isfinite(bps[i]))
            out.push_back("power_slot_breakpoints_kw[" + std::to_string(i) + "]: not finite");
        else if (i > 0 && std::isfinite(bps[i - 1]) && !(bps[i] > bps[i - 1]))
            out.push_back("power_slot_breakpoints_kw[" + std::to_string(i) + "]: breakpoints must be strictly increasing");
    }

    if (scenario.users.empty()) out.push_back("users: at least one user required");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < scenario.users.size(); ++i) {
        const auto& u = scenario.users[i];
        const std::string where = "users[" + std::to_string(i) + "] (id \"" + u.id + "\")";
        if (u.id.empty()) out.push_back(where + ".id: empty");
        else if (!ids.insert(u.id).second) out.push_back(where + ".id: duplicate user id");
        if (u.epp_kw.size() != n)
            out.push_back(where + ".epp_kw: " + std::to_string(u.epp_kw.size()) + " values for " + std::to_string(n) +
                          " time slots");
        for (std::size_t t = 0; t < u.epp_kw.size(); ++t)
            if (!std::isfinite(u.epp_kw[t])) out.push_back(where + ".epp_kw[" + std::to_string(t) + "]: not finite");
        check_deviation(u.deviation, where + ".deviation", out);
        for (const auto& [t, model] : u.deviation_overrides) {
            const std::string ow = where + ".deviation_overrides[t=" + std::to_string(t) + "]";
            if (t >= n) out.push_back(ow + ": time slot out of range");
            check_deviation(model, ow, out);
        }
    }
    return out;
}

void require_valid(const Scenario& scenario) {
    auto violations = validate(scenario);
    if (!violations.empty()) throw ValidationError(std::move(violations));
}

ScenarioSampler::ScenarioSampler(const Scenario& scenario) : scenario_(&scenario) {
    require_valid(scenario);
    states_ = scenario.substation.states();
    for (const auto& s : states_) state_slots_.push_back(scenario.substation.slots_in_state(s));

    for (const auto& user : scenario.users) {
        const std::size_t base = compiled_.size();
        compiled_.push_back(detail::compile_deviation(user.deviation));
        std::vector<std::size_t> per_t(scenario.time_slots, base);
        for (const auto& [t, model] : user.deviation_overrides) {
            per_t[t] = compiled_.size();
            compiled_.push_back(detail::compile_deviation(model));
        }
        model_index_.push_back(std::move(per_t));
    }
}

std::size_t ScenarioSampler::state_index(const SubstationState& state) const {
    const auto it = std::lower_bound(states_.begin(), states_.end(), state);
    if (it == states_.end() || *it != state) throw ParameterError("unknown substation state \"" + state + "\"");
    return static_cast<std::size_t>(it - states_.begin());
}

double ScenarioSampler::sample_apd(TimeSlotId t, RngStream& rng) const {
    double apd = 0.0;
    const auto& users = scenario_->users;
    for (std::size_t u = 0; u < users.size(); ++u) {
        const double dev = detail::draw_deviation(compiled_[model_index_[u][t]], rng);
        apd = apd + (users[u].epp_kw[t] + dev);
    }
    return apd;
}

TimeSlotId ScenarioSampler::pick_time_slot(std::size_t state_index, RngStream& rng) const {
    const auto& ts = state_slots_.at(state_index);
    return ts[rng.next_below(ts.size())];
}

bool ScenarioSampler::sample_indicator(std::size_t state_index, std::size_t slot, RngStream& rng) const {
    if (state_index >= states_.size()) throw ParameterError("substation state index out of range");
    if (slot >= power_slot_count()) throw ParameterError("power slot index " + std::to_string(slot) + " out of range");
    const TimeSlotId t = pick_time_slot(state_index, rng);
    return scenario_->slots.contains(slot, sample_apd(t, rng));
}

double sample_apd(const Scenario& scenario, TimeSlotId t, RngStream& rng) {
    const ScenarioSampler sampler(scenario);
    if (t >= scenario.time_slots) throw ParameterError("time slot " + std::to_string(t) + " out of range");
    return sampler.sample_apd(t, rng);
}

bool sample_indicator(const Scenario& scenario, const SubstationState& state, std::size_t slot, RngStream& rng) {
    const ScenarioSampler sampler(scenario);
    return sampler.sample_indicator(sampler.state_index(state), slot, rng);
}

}  // namespace ppsv
