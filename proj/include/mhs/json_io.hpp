#ifndef MHS_JSON_IO_HPP
#define MHS_JSON_IO_HPP

#include <json.hpp>

#include "congruences.hpp"
#include "divisible.hpp"
#include "dyadic.hpp"
#include "reserved.hpp"

namespace mhs {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::json;

// nlohmann's default object keeps keys sorted, so dumps are canonical;
// set members are serialized as decimal strings because deep-level indices
// overflow any JSON number type.

inline json to_json(const Composition& s) {
    json arr = json::array();
    for (int x : s.parts) arr.push_back(x);
    return arr;
}

inline json to_json(const Certificate& c) {
    json j;
    j["type"] = Certificate::kind_name(c.kind);
    switch (c.kind) {
        case Certificate::Kind::CriterionPass:
            j["tau"] = c.tau;
            j["f"] = c.f;
            j["threshold"] = c.threshold;
            break;
        case Certificate::Kind::EmptyLevel:
            j["level"] = c.level;
            break;
        case Certificate::Kind::ValuationClosedForm:
            j["note"] = c.note;
            break;
        case Certificate::Kind::BudgetExhausted:
            j["level"] = c.level;
            j["note"] = c.note;
            break;
    }
    return j;
}

inline json to_json(const Budget& b) {
    return json{{"max_level", b.max_level}, {"max_nodes", b.max_nodes}, {"max_power", b.max_power}};
}

inline json to_json(const JSetReport& rep) {
    json levels = json::object();
    for (const auto& [t, v] : rep.levels) {
        json arr = json::array();
        for (const Int& n : v) arr.push_back(n.get_str());
        levels[std::to_string(t)] = arr;
    }
    return json{{"composition", to_json(rep.composition)},
                {"prime", rep.prime},
                {"verdict", verdict_name(rep.verdict)},
                {"certificate", to_json(rep.certificate)},
                {"levels", levels},
                {"budget", to_json(rep.budget)},
                {"schema_version", kSchemaVersion}};
}

inline json to_json(const CriterionResult& r) {
    return json{{"composition", to_json(r.composition)}, {"prime", r.prime},
                {"tau", r.tau},           {"f", r.f},
                {"threshold", r.threshold}, {"passes", r.passes},
                {"witness", r.witness},   {"schema_version", kSchemaVersion}};
}

inline json to_json(const ReservedSet& rs) {
    json polys = json::array();
    for (const auto& f : rs.polynomials) polys.push_back(f.str());
    return json{{"case", rs.case_id},
                {"pattern", rs.pattern},
                {"polynomials", polys},
                {"segment_bound", rs.segment_bound},
                {"extrapolated", rs.extrapolated},
                {"schema_version", kSchemaVersion}};
}

inline json to_json(const DensityStat& d) {
    json ledger = json::object();
    for (const auto& [p, t] : d.ledger) ledger[std::to_string(p)] = tristate_name(t);
    return json{{"composition", to_json(d.composition)},
                {"bound", d.bound},
                {"first_m", d.first_m},
                {"reserved_count", d.reserved_count},
                {"prime_count", d.prime_count},
                {"undetermined_count", d.undetermined_count},
                {"density", d.density.get_str()},
                {"ledger", ledger},
                {"schema_version", kSchemaVersion}};
}

inline json to_json(const DyadicTrack& tr) {
    json terms = json::array();
    for (const auto& term : tr.terms)
        terms.push_back(json{{"t", term.t},
                             {"n", term.n.get_str()},
                             {"w", term.w},
                             {"r", term.r},
                             {"case", std::string(1, term.case_label)}});
    return json{{"s", tr.s}, {"terms", terms}, {"max_gap", tr.max_gap}, {"schema_version", kSchemaVersion}};
}

inline json to_json(const SimulationResult& r, size_t curve_samples = 32) {
    json curve = json::object();
    size_t g = r.extinct_fraction.size();
    for (size_t i = 1; i <= curve_samples && i <= g; ++i) {
        size_t idx = i * g / std::min(curve_samples, g);
        curve[std::to_string(idx)] = r.extinct_fraction[idx - 1];
    }
    return json{{"p", r.p},
                {"offspring_mean", r.offspring_mean.get_str()},
                {"trials", r.trials},
                {"generations", r.generations},
                {"extinct_fraction", curve},
                {"schema_version", kSchemaVersion}};
}

/// Canonical dump: sorted keys, two-space indent, trailing newline.
inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace mhs

#endif
