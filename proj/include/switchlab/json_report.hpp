// JSON serialization of tables, reports, and certificates. All floating
// point values are rounded to nine decimal digits before insertion so that
// repeated runs produce byte-identical output.

#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "switchlab/causal_models.hpp"
#include "switchlab/inequalities.hpp"
#include "switchlab/scenarios.hpp"
#include "switchlab/selfcheck.hpp"
#include "switchlab/tables.hpp"

namespace switchlab {

inline double round9(double v) {
    const double r = std::round(v * 1e9) / 1e9;
    return r == 0.0 ? 0.0 : r; // normalize -0
}

inline nlohmann::json to_json(const ProbTable& t) {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : t.vars()) vars.push_back({{"name", v.name}, {"card", v.card}});
    nlohmann::json values = nlohmann::json::array();
    for (std::size_t f = 0; f < t.size(); ++f) values.push_back(round9(t[f]));
    return {{"vars", vars}, {"values", values}};
}

inline nlohmann::json to_json(const PossTable& t) {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : t.vars()) vars.push_back({{"name", v.name}, {"card", v.card}});
    nlohmann::json values = nlohmann::json::array();
    for (std::size_t f = 0; f < t.size(); ++f) values.push_back(static_cast<int>(t[f]));
    return {{"vars", vars}, {"values", values}};
}

inline nlohmann::json to_json(const ScenarioData& d) {
    return {{"config",
             {{"kind", d.info.kind},
              {"depolarizing", round9(d.info.depolarizing)},
              {"n", d.info.n}}},
            {"conditional", to_json(d.conditional)},
            {"joint", to_json(d.joint)},
            {"possibility", to_json(d.poss)}};
}

inline nlohmann::json to_json(const MerminReport& r) {
    return {{"parityTerms",
             {round9(r.parity_terms[0]), round9(r.parity_terms[1]), round9(r.parity_terms[2]),
              round9(r.parity_terms[3])}},
            {"alpha", round9(r.alpha)},
            {"beta", round9(r.beta)},
            {"gamma", round9(r.gamma)},
            {"total", round9(r.total)},
            {"classicalBound", round9(r.classical_bound)},
            {"algebraicMax", round9(r.algebraic_max)},
            {"verdict", r.violated ? "VIOLATED" : "NOT_VIOLATED"}};
}

inline nlohmann::json to_json(const ChainReport& r) {
    return {{"N", r.n},
            {"bcValue", round9(r.bc_value)},
            {"alpha", round9(r.alpha)},
            {"constrainedValue", round9(r.constrained_value)},
            {"classicalBound", round9(r.classical_bound)},
            {"algebraicMax", round9(r.algebraic_max)},
            {"closedForm", round9(r.closed_form)},
            {"causalFractionBound", round9(r.causal_fraction_bound)},
            {"verdict", r.violated ? "VIOLATED" : "NOT_VIOLATED"}};
}

inline nlohmann::json to_json(const ProofCertificate& c) {
    nlohmann::json conditions = nlohmann::json::array();
    for (const auto& cond : c.conditions) {
        conditions.push_back({{"name", cond.name}, {"pass", cond.pass}, {"detail", cond.detail}});
    }
    return {{"verdict", c.verdict},
            {"conditions", conditions},
            {"forcedDeterminism", c.forced_determinism},
            {"xorSystemParity", c.xor_system_parity},
            {"candidatesPerWing", c.candidates_per_wing},
            {"validExtensions",
             {static_cast<long long>(c.valid_extensions[0]),
              static_cast<long long>(c.valid_extensions[1]),
              static_cast<long long>(c.valid_extensions[2])}},
            {"modelsSatisfyingAll", c.models_satisfying_all},
            {"maxParityConstraints", c.max_parity_constraints}};
}

/// SuiteResult JSON deliberately omits wall-clock so repeated runs are
/// byte-identical; timing goes to the console summary instead.
inline nlohmann::json to_json(const SuiteResult& s) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : s.checks) {
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"measured", round9(c.measured)},
                          {"tolerance", c.tolerance},
                          {"detail", c.detail}});
    }
    return {{"allPass", s.all_pass()}, {"checks", checks}};
}

} // namespace switchlab
