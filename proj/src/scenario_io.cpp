#include "ppsv/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ppsv/errors.hpp"

namespace ppsv {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + ": missing \"" + key + "\"");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where + ": expected a number");
    return v.get<double>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
    if (!v.is_array()) throw ParseError(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

DeviationModel deviation_from_json(const json& d, const std::string& where) {
    const json& type = field(d, "type", where);
    if (!type.is_string()) throw ParseError(where + ".type: expected a string");
    const auto t = type.get<std::string>();
    if (t == "discrete")
        return DiscreteDeviation{numbers(field(d, "points_kw", where), where + ".points_kw"),
                                 numbers(field(d, "probabilities", where), where + ".probabilities")};
    if (t == "uniform")
        return UniformDeviation{number(field(d, "lo_kw", where), where + ".lo_kw"),
                                number(field(d, "hi_kw", where), where + ".hi_kw")};
    if (t == "truncated_gaussian")
        return TruncatedGaussianDeviation{number(field(d, "mean_kw", where), where + ".mean_kw"),
                                          number(field(d, "stddev_kw", where), where + ".stddev_kw"),
                                          number(field(d, "lo_kw", where), where + ".lo_kw"),
                                          number(field(d, "hi_kw", where), where + ".hi_kw")};
    throw ParseError(where + ".type: unknown deviation type \"" + t + "\"");
}

json deviation_to_json(const DeviationModel& model) {
    return std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DiscreteDeviation>)
                return {{"type", "discrete"}, {"points_kw", m.points_kw}, {"probabilities", m.probabilities}};
            else if constexpr (std::is_same_v<T, UniformDeviation>)
                return {{"type", "uniform"}, {"lo_kw", m.lo_kw}, {"hi_kw", m.hi_kw}};
            else
                return {{"type", "truncated_gaussian"},
                        {"mean_kw", m.mean_kw},
                        {"stddev_kw", m.stddev_kw},
                        {"lo_kw", m.lo_kw},
                        {"hi_kw", m.hi_kw}};
        },
        model);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
    Scenario s;
    const json& n = field(doc, "time_slots", "scenario");
    if (!n.is_number_integer() || n.get<std::int64_t>() < 0)
        throw ParseError("time_slots: expected a non-negative integer");
    s.time_slots = n.get<std::size_t>();

    const json& profile = field(doc, "substation_profile", "scenario");
    if (!profile.is_array()) throw ParseError("substation_profile: expected an array of state labels");
    std::vector<SubstationState> assignment;
    for (std::size_t t = 0; t < profile.size(); ++t) {
        if (!profile[t].is_string())
            throw ParseError("substation_profile[" + std::to_string(t) + "]: expected a string label");
        assignment.push_back(profile[t].get<std::string>());
    }
    s.substation = SubstationProfile(std::move(assignment));
    s.slots = PowerSlotPartition(numbers(field(doc, "power_slot_breakpoints_kw", "scenario"), "power_slot_breakpoints_kw"));

    const json& users = field(doc, "users", "scenario");
    if (!users.is_array()) throw ParseError("users: expected an array");
    for (std::size_t i = 0; i < users.size(); ++i) {
        const std::string where = "users[" + std::to_string(i) + "]";
        const json& u = users[i];
        User user;
        const json& id = field(u, "id", where);
        if (!id.is_string()) throw ParseError(where + ".id: expected a string");
        user.id = id.get<std::string>();
        user.epp_kw = numbers(field(u, "epp_kw", where), where + ".epp_kw");
        user.deviation = deviation_from_json(field(u, "deviation", where), where + ".deviation");
        if (const auto it = u.find("deviation_overrides"); it != u.end()) {
            if (!it->is_array()) throw ParseError(where + ".deviation_overrides: expected an array");
            for (std::size_t k = 0; k < it->size(); ++k) {
                const std::string ow = where + ".deviation_overrides[" + std::to_string(k) + "]";
                const json& o = (*it)[k];
                const json& t = field(o, "time_slot", ow);
                if (!t.is_number_integer() || t.get<std::int64_t>() < 0)
                    throw ParseError(ow + ".time_slot: expected a non-negative integer");
                const auto slot = t.get<std::size_t>();
                if (user.deviation_overrides.contains(slot))
                    throw ParseError(ow + ": duplicate override for time slot " + std::to_string(slot));
                user.deviation_overrides.emplace(slot, deviation_from_json(field(o, "deviation", ow), ow + ".deviation"));
            }
        }
        s.users.push_back(std::move(user));
    }
    return s;
}

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // byte is 1-based and points just past the offending character.
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                             e.what(),
                         line, col);
    }
    return scenario_from_json(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

json scenario_to_json(const Scenario& scenario) {
    json users = json::array();
    for (const auto& u : scenario.users) {
        json ju = {{"id", u.id}, {"epp_kw", u.epp_kw}, {"deviation", deviation_to_json(u.deviation)}};
        if (!u.deviation_overrides.empty()) {
            json overrides = json::array();
            for (const auto& [t, model] : u.deviation_overrides)
                overrides.push_back({{"time_slot", t}, {"deviation", deviation_to_json(model)}});
            ju["deviation_overrides"] = std::move(overrides);
        }
        users.push_back(std::move(ju));
    }
    return {{"time_slots", scenario.time_slots},
            {"substation_profile", scenario.substation.assignment()},
            {"power_slot_breakpoints_kw", scenario.slots.breakpoints()},
            {"users", std::move(users)}};
}

std::string emit_scenario(const Scenario& scenario) { return scenario_to_json(scenario).dump(2) + "\n"; }

std::string scenario_digest(const Scenario& scenario) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(scenario_to_json(scenario).dump())));
    return buf;
}

}  // namespace ppsv
