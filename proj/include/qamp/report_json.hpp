#pragma once

// JSON views of results and configs. Reports embed the resolved parameters
// flat at top level, so any report re-ingests as a config.

#include <json.hpp>

#include "qamp/chain.hpp"
#include "qamp/fock/verify.hpp"
#include "qamp/optimizer.hpp"

namespace qamp {

using json = nlohmann::ordered_json;

inline json params_to_json(const RepeaterParams& p) {
    json j;
    j["p"] = p.p;
    j["q"] = p.q;
    j["R"] = p.R;
    j["eta_d"] = p.eta_d;
    j["eta_m"] = p.eta_m;
    j["total_length_km"] = p.total_length_km;
    j["nesting_levels"] = p.nesting_levels;
    j["attenuation_length_km"] = p.attenuation_length_km;
    j["fiber_speed_km_per_s"] = p.fiber_speed_km_per_s;
    if (p.gamma_rep_hz) j["gamma_rep_hz"] = *p.gamma_rep_hz;
    return j;
}

inline void params_from_json(const json& j, RepeaterParams& p) {
    auto get = [&](const char* key, double& into) {
        if (j.contains(key)) into = j.at(key).get<double>();
    };
    get("p", p.p);
    get("q", p.q);
    get("R", p.R);
    get("eta_d", p.eta_d);
    get("eta_m", p.eta_m);
    get("total_length_km", p.total_length_km);
    get("attenuation_length_km", p.attenuation_length_km);
    get("fiber_speed_km_per_s", p.fiber_speed_km_per_s);
    if (j.contains("nesting_levels")) p.nesting_levels = j.at("nesting_levels").get<int>();
    if (j.contains("gamma_rep_hz")) p.gamma_rep_hz = j.at("gamma_rep_hz").get<double>();
}

inline json diagnostics_to_json(const ChainDiagnostics& d) {
    json j;
    j["herald_prob"] = d.herald_prob;
    j["breakeven_gamma_rep_hz"] = d.breakeven_gamma_rep_hz;
    j["elementary_link_km"] = d.elementary_link_km;
    j["link_transmission"] = d.link_transmission;
    if (d.prep_time_included) j["preparation_time_s"] = d.preparation_time_s;
    j["stage_probabilities"] = d.stage_probabilities;
    j["outside_validity_regime"] = d.regime.outside_validity;
    j["p_over_R"] = d.regime.p_over_R;
    return j;
}

inline json chain_to_json(const RepeaterParams& p, const ChainResult& r) {
    json j = params_to_json(p);
    j["total_time_s"] = r.total_time_s;
    j["fidelity"] = r.fidelity;
    j["diagnostics"] = diagnostics_to_json(r.diagnostics);
    return j;
}

inline json optimum_to_json(const RepeaterParams& hardware, const Optimum& o) {
    json j = params_to_json(hardware);
    j["feasible"] = o.feasible;
    if (o.feasible) {
        j["p"] = o.p;
        j["R"] = o.R;
        j["nesting_levels"] = o.n;
        j["total_time_s"] = o.total_time_s;
        j["fidelity"] = o.fidelity;
        j["diagnostics"] = diagnostics_to_json(o.diagnostics);
    }
    j["evaluations"] = o.evaluations;
    return j;
}

inline json verification_to_json(const fock::VerificationReport& r) {
    auto stage = [](const fock::StageComparison& c) {
        json rows = json::array();
        for (const auto& row : c.rows) {
            rows.push_back({{"name", row.name},
                            {"exact", row.exact},
                            {"formula", row.formula},
                            {"rel_dev", row.rel_dev},
                            {"gated", row.gated}});
        }
        return json{{"stage", c.stage}, {"rows", rows}};
    };
    json j;
    j["p"] = r.p;
    j["q"] = r.q;
    j["R"] = r.R;
    j["eta_d"] = r.eta_d;
    if (r.eta_m) j["eta_m"] = *r.eta_m;
    if (r.eta_t) j["eta_t"] = *r.eta_t;
    j["levels"] = r.levels;
    j["per_mode_cap"] = r.per_mode_cap;
    j["total_cap"] = r.total_cap;
    j["amplifier"] = stage(r.amplifier);
    j["scaling"] = {{"dev_at_p", r.scaling.dev_at_p},
                    {"dev_at_p_over_10", r.scaling.dev_at_p_over_10},
                    {"ratio", r.scaling.ratio},
                    {"exponent", r.scaling.exponent}};
    j["herald_pattern_spread"] = r.herald_pattern_spread;
    j["vacuum_population"] = r.vacuum_population;
    j["residual_population"] = r.residual_population;
    j["error_class_uniformity"] = r.error_class_uniformity;
    json ff = json::array(), si = json::array();
    for (const auto& c : r.formula_fed) ff.push_back(stage(c));
    for (const auto& c : r.stage_isolated) si.push_back(stage(c));
    j["formula_fed"] = ff;
    j["stage_isolated"] = si;
    j["tolerances"] = {{"amplifier", r.tolerances.amplifier},
                       {"link_swap", r.tolerances.link_swap},
                       {"scaling_ratio_min", r.tolerances.scaling_ratio_min},
                       {"scaling_ratio_max", r.tolerances.scaling_ratio_max},
                       {"exact_symmetry", r.tolerances.exact_symmetry}};
    j["checks"] = {{"amplifier_within", r.amplifier_within},
                   {"link_swap_within", r.link_swap_within},
                   {"symmetry_within", r.symmetry_within},
                   {"scaling_within", r.scaling_within},
                   {"all_within", r.all_within()}};
    return j;
}

} // namespace qamp
