#include "ppsv/ppsv.h"

#include <cstdlib>
#include <cstring>
#include <ios>
#include <memory>
#include <string>
#include <variant>

#include "ppsv/errors.hpp"
#include "ppsv/exact_oracle.hpp"
#include "ppsv/generator.hpp"
#include "ppsv/report_io.hpp"
#include "ppsv/scenario_io.hpp"
#include "ppsv/verifier.hpp"

struct ppsv_scenario {
    ppsv::Scenario scenario;
    std::vector<std::string> violations;
};

struct ppsv_report {
    std::variant<ppsv::VerificationReport, ppsv::ExactTable> body;
    std::vector<ppsv_entry> entries;
};

namespace {

thread_local std::string last_error;

ppsv_status fail(ppsv_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <typename F>
ppsv_status guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const ppsv::ValidationError& e) {
        return fail(PPSV_ERR_INVALID, e.what());
    } catch (const ppsv::ParseError& e) {
        return fail(PPSV_ERR_INVALID, e.what());
    } catch (const ppsv::OracleInapplicable& e) {
        return fail(PPSV_ERR_ORACLE_INAPPLICABLE, e.what());
    } catch (const ppsv::ParameterError& e) {
        return fail(PPSV_ERR_PARAMETER, e.what());
    } catch (const ppsv::ResourceError& e) {
        return fail(PPSV_ERR_RESOURCE, e.what());
    } catch (const ppsv::RunError& e) {
        return fail(PPSV_ERR_RUN, e.what());
    } catch (const ppsv::DataError& e) {
        return fail(PPSV_ERR_INVALID, e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(PPSV_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(PPSV_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PPSV_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ppsv_scenario* wrap(ppsv::Scenario s) {
    auto h = std::make_unique<ppsv_scenario>();
    h->violations = ppsv::validate(s);
    h->scenario = std::move(s);
    return h.release();
}

void index_entries(ppsv_report& r) {
    if (const auto* rep = std::get_if<ppsv::VerificationReport>(&r.body)) {
        for (const auto& e : rep->entries) {
            const auto* est = std::get_if<ppsv::Estimate>(&e.outcome);
            r.entries.push_back(ppsv_entry{e.state.c_str(), e.slot, e.slot_lo_kw, e.slot_hi_kw,
                                           est ? PPSV_VERDICT_ESTIMATE : PPSV_VERDICT_BOT, est ? est->mean : 0.0,
                                           e.samples_used});
        }
    } else {
        const auto& t = std::get<ppsv::ExactTable>(r.body);
        for (std::size_t v = 0; v < t.states.size(); ++v)
            for (std::size_t w = 0; w < t.psi[v].size(); ++w)
                r.entries.push_back(ppsv_entry{t.states[v].c_str(), w, t.breakpoints_kw[w], t.breakpoints_kw[w + 1],
                                               PPSV_VERDICT_EXACT, t.psi[v][w], 0});
    }
}

nlohmann::json report_json(const ppsv_report& r) {
    return std::visit([](const auto& b) { return ppsv::report_to_json(b); }, r.body);
}

}  // namespace

extern "C" {

const char* ppsv_version(void) { return "1.0.0"; }

const char* ppsv_last_error(void) { return last_error.c_str(); }

void ppsv_string_free(char* s) { std::free(s); }

ppsv_status ppsv_scenario_load_file(const char* path, ppsv_scenario** out) {
    if (path == nullptr || out == nullptr) return fail(PPSV_ERR_PARAMETER, "null argument");
    return guarded([&] {
        *out = wrap(ppsv::load_scenario(path));
        return PPSV_OK;
    });
}

ppsv_status ppsv_scenario_parse(const char* json, size_t len, ppsv_scenario** out) {
    if (json == nullptr || out == nullptr) return fail(PPSV_ERR_PARAMETER, "null argument");
    return guarded([&] {
        *out = wrap(ppsv::parse_scenario(std::string_view(json, len)));
        return PPSV_OK;
    });
}

ppsv_status ppsv_scenario_generate(const ppsv_gen_options* opts, ppsv_scenario** out) {
    if (opts == nullptr || out == nullptr) return fail(PPSV_ERR_PARAMETER, "null argument");
    return guarded([&] {
        ppsv::GeneratorParams p;
        p.seed = opts->seed;
        p.users = opts->users;
        p.time_slots = opts->time_slots;
        p.states = opts->states;
        p.power_slots = opts->power_slots;
        p.family = ppsv::parse_family(opts->family ? opts->family : "discrete");
        p.magnitude = opts->magnitude;
        p.support_points = opts->support_points;
        p.epp_min_kw = opts->epp_min_kw;
        p.epp_max_kw = opts->epp_max_kw;
        p.override_fraction = opts->override_fraction;
        *out = wrap(ppsv::generate_scenario(p));
        return PPSV_OK;
    });
}

void ppsv_scenario_free(ppsv_scenario* s) { delete s; }

ppsv_status ppsv_scenario_to_json(const ppsv_scenario* s, char** out) {
    if (s == nullptr || out == nullptr) return fail(PPSV_ERR_PARAMETER, "null argument");
    return guarded([&] {
        *out = dup_string(ppsv::emit_scenario(s->scenario));
        return PPSV_OK;
    });
}

size_t ppsv_scenario_violation_count(const ppsv_scenario* s) { return s ? s->violations.size() : 0; }

const char* ppsv_scenario_violation(const ppsv_scenario* s, size_t index) {
    if (s == nullptr || index >= s->violations.size()) return nullptr;
    return s->violations[index].c_str();
}

ppsv_status ppsv_ed_constants_compute(double epsilon, double delta, ppsv_ed_constants* out) {
    if (out == nullptr) return fail(PPSV_ERR_PARAMETER, "null argument");
    return guarded([&] {
        const auto p = ppsv::make_params(epsilon, delta);
        *out = ppsv_ed_constants{p.upsilon, p.upsilon1, p.cutoff};
        return PPSV_OK;
    });
}

void ppsv_verify_options_init(ppsv_verify_options* opts) {
    if (opts == nullptr) return;
    *opts = ppsv_verify_options{0.1, 0.05, 1, 1, 4096, 0, 0};
}

void ppsv_gen_options_init(ppsv_gen_options* opts) {
    if (opts == nullptr) return;
    const ppsv::GeneratorParams d;
    *opts = ppsv_gen_options{d.seed,      d.users,      d.time_slots,     d.states,     d.power_slots,
                             "discrete",  d.magnitude,  d.support_points, d.epp_min_kw, d.epp_max_kw,
                             d.override_fraction};
}

ppsv_status ppsv_verify(const ppsv_scenario* s, const ppsv_verify_options* opts, ppsv_report** out) {
    if (s == nullptr || opts == nullptr || out == nullptr) return fail(PPSV_ERR_PARAMETER, "null argument");
    return guarded([&] {
        ppsv::VerifyOptions o;
        o.workers = opts->workers;
        o.batch_size = opts->batch_size;
        o.lookahead = opts->lookahead;
        o.family_wise = opts->family_wise != 0;
        auto r = std::make_unique<ppsv_report>();
        r->body = ppsv::verify(s->scenario, opts->epsilon, opts->delta, opts->seed, o);
        index_entries(*r);
        *out = r.release();
        return PPSV_OK;
    });
}

ppsv_status ppsv_oracle(const ppsv_scenario* s, ppsv_report** out) {
    if (s == nullptr || out == nullptr) return fail(PPSV_ERR_PARAMETER, "null argument");
    return guarded([&] {
        auto r = std::make_unique<ppsv_report>();
        r->body = ppsv::oracle_table(s->scenario);
        index_entries(*r);
        *out = r.release();
        return PPSV_OK;
    });
}

void ppsv_report_free(ppsv_report* r) { delete r; }

size_t ppsv_report_entry_count(const ppsv_report* r) { return r ? r->entries.size() : 0; }

ppsv_status ppsv_report_entry(const ppsv_report* r, size_t index, ppsv_entry* out) {
    if (r == nullptr || out == nullptr) return fail(PPSV_ERR_PARAMETER, "null argument");
    if (index >= r->entries.size()) return fail(PPSV_ERR_PARAMETER, "entry index out of range");
    *out = r->entries[index];
    return PPSV_OK;
}

ppsv_status ppsv_report_to_json(const ppsv_report* r, char** out) {
    if (r == nullptr || out == nullptr) return fail(PPSV_ERR_PARAMETER, "null argument");
    return guarded([&] {
        *out = dup_string(ppsv::report_json_text(report_json(*r)));
        return PPSV_OK;
    });
}

ppsv_status ppsv_report_result_json(const ppsv_report* r, char** out) {
    if (r == nullptr || out == nullptr) return fail(PPSV_ERR_PARAMETER, "null argument");
    return guarded([&] {
        *out = dup_string(ppsv::report_json_text(report_json(*r).at("result")));
        return PPSV_OK;
    });
}

ppsv_status ppsv_report_to_csv(const ppsv_report* r, char** out) {
    if (r == nullptr || out == nullptr) return fail(PPSV_ERR_PARAMETER, "null argument");
    return guarded([&] {
        *out = dup_string(std::visit([](const auto& b) { return ppsv::report_to_csv(b); }, r->body));
        return PPSV_OK;
    });
}

}  // extern "C"
