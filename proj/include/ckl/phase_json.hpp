#pragma once

#include <json.hpp>

#include "ckl/phase.hpp"
#include "ckl/polynomial.hpp"

namespace ckl {

// JSON interchange for polynomials: {"vars": n, "terms": [{"exps": [..], "coef": f}]}
inline Polynomial polynomial_from_json(const nlohmann::json& j) {
    if (!j.contains("vars") || !j.contains("terms")) throw ConfigError("polynomial JSON needs vars and terms");
    int vars = j.at("vars").get<int>();
    std::vector<Polynomial::Term> terms;
    for (const auto& tj : j.at("terms")) {
        Polynomial::Term t;
        t.exps = tj.at("exps").get<std::vector<int>>();
        t.coef = tj.at("coef").get<double>();
        terms.push_back(std::move(t));
    }
    return Polynomial(vars, std::move(terms));
}

inline nlohmann::json polynomial_to_json(const Polynomial& p) {
    nlohmann::json j;
    j["vars"] = p.vars();
    j["terms"] = nlohmann::json::array();
    for (const auto& t : p.terms()) j["terms"].push_back({{"exps", t.exps}, {"coef", t.coef}});
    return j;
}

// phase interchange: {"kind": string, "n": int, "params": {...}, "rho": float}
inline PhaseSpec phase_from_json(const nlohmann::json& j) {
    for (const auto& key : {"kind", "n", "params", "rho"})
        if (!j.contains(key)) throw ConfigError(std::string("phase JSON missing field: ") + key);
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string k = it.key();
        if (k != "kind" && k != "n" && k != "params" && k != "rho")
            throw ConfigError("unknown phase JSON field: " + k);
    }
    PhaseKind kind = phase_kind_from_string(j.at("kind").get<std::string>());
    int n = j.at("n").get<int>();
    double rho = j.at("rho").get<double>();
    const auto& params = j.at("params");
    switch (kind) {
        case PhaseKind::ConstCoeff: return PhaseSpec::const_coeff(n, rho);
        case PhaseKind::BourgainStar: return PhaseSpec::bourgain_star(n, rho);
        case PhaseKind::Counterexample:
            if (n != 3) throw ConfigError("Counterexample phase requires n = 3");
            return PhaseSpec::counterexample(rho);
        case PhaseKind::TranslationInvariantPoly:
            if (!params.contains("psi")) throw ConfigError("TranslationInvariantPoly needs params.psi");
            return PhaseSpec::translation_invariant_poly(n, polynomial_from_json(params.at("psi")), rho);
        case PhaseKind::Custom:
            if (!params.contains("phi")) throw ConfigError("Custom needs params.phi");
            return PhaseSpec::custom(n, polynomial_from_json(params.at("phi")), rho);
    }
    throw ConfigError("unreachable phase kind");
}

inline nlohmann::json phase_to_json(const PhaseSpec& p) {
    nlohmann::json j;
    j["kind"] = to_string(p.kind());
    j["n"] = p.n();
    j["rho"] = p.rho();
    j["params"] = nlohmann::json::object();
    if (p.kind() == PhaseKind::TranslationInvariantPoly) j["params"]["psi"] = polynomial_to_json(p.poly());
    if (p.kind() == PhaseKind::Custom) j["params"]["phi"] = polynomial_to_json(p.poly());
    return j;
}

} // namespace ckl
