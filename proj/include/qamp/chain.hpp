#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qamp/amplifier.hpp"
#include "qamp/errors.hpp"
#include "qamp/model.hpp"

namespace qamp {

/// A post-measurement state together with the success probability of the
/// measurement that produced it (all four equivalent coincidences counted).
struct LinkResult {
    LinkState state;
    double probability = 0.0;
};

/// Entanglement creation in the elementary link: two heralded sources, their
/// output modes read from memory, sent to the central station and Bell
/// measured. Inputs are trace-normalized, so the output trace is the
/// single-pattern success probability.
///
/// The one-photon error class of the sources cannot double-click the link
/// measurement, which is what purifies detector and source inefficiencies.
inline LinkResult elementary_link(const AmplifierCoeffs& coeffs, double eta_d,
                                  double eta_m, double eta_t) {
    coeffs.validate();
    auto eff = [](const char* name, double v) {
        if (!(v > 0.0 && v <= 1.0))
            throw validation_error(name, "must be an efficiency in (0, 1]");
    };
    eff("eta_d", eta_d);
    eff("eta_m", eta_m);
    eff("eta_t", eta_t);
    const double s = coeffs.trace();
    if (!(s > 0.0))
        throw degenerate_state_error("elementary link: source state has zero trace");
    const double e = eta_d * eta_m * eta_t;
    const double a = coeffs.alpha0s / s, b = coeffs.beta0s / s,
                 g = coeffs.gamma0s / s, d = coeffs.delta0s / s;
    LinkState st;
    st.level = 0;
    st.alpha = (e * e / 8.0) * a * a;
    st.beta = (e * e / 2.0) * ((a * d / 2.0 + b * g) / 2.0 + a * g * (1.0 - e));
    st.gamma = 0.0;
    return {st, 4.0 * st.trace()};
}

/// One entanglement-swapping round: Bell measurement on the two inner modes
/// of two identical copies of `state`. The level-0 input has a different
/// class structure than level >= 1, so the two recursions are kept as
/// separate code paths.
inline LinkResult entanglement_swap(const LinkState& state, double eta_d, double eta_m) {
    state.validate();
    auto eff = [](const char* name, double v) {
        if (!(v > 0.0 && v <= 1.0))
            throw validation_error(name, "must be an efficiency in (0, 1]");
    };
    eff("eta_d", eta_d);
    eff("eta_m", eta_m);
    const double tr = state.trace();
    if (!(tr > 0.0))
        throw degenerate_state_error("swap: input state has zero trace");
    const double e = eta_d * eta_m;
    const double a = state.alpha / tr, b = state.beta / tr, g = state.gamma / tr;
    LinkState out;
    out.level = state.level + 1;
    if (state.level == 0) {
        out.alpha = (e * e / 8.0) * a * a;
        out.beta = e * e * (1.0 - e) * b * (a + 8.0 * b * (1.0 - e));
        out.gamma = (e * e / 8.0) * b * (a + 16.0 * b * (1.0 - e));
    } else {
        out.alpha = (e * e / 8.0) * a * a;
        out.beta = (e * e / 4.0) *
                   (b * (a + 2.0 * b) + 4.0 * g * (1.0 - e) * (a + 4.0 * b) +
                    2.0 * (4.0 * g * (1.0 - e)) * (4.0 * g * (1.0 - e)));
        out.gamma = (e * e / 8.0) * g * (a + 4.0 * b + 16.0 * g * (1.0 - e));
    }
    return {out, 4.0 * out.trace()};
}

/// Overlap of the (normalized) state with the maximally entangled target.
/// At level >= 1 the uniform single-photon-each-side error class contributes
/// beta/2 to the overlap; at level 0 that class is absent.
inline double fidelity(const LinkState& state) {
    state.validate();
    const double tr = state.trace();
    if (!(tr > 0.0))
        throw degenerate_state_error("fidelity: state has zero trace");
    return state.level == 0 ? state.alpha / tr
                            : (state.alpha + state.beta / 2.0) / tr;
}

struct ChainDiagnostics {
    double herald_prob = 0.0;              ///< P0s of the heralded source
    double breakeven_gamma_rep_hz = 0.0;   ///< rate equating prep and travel time
    double elementary_link_km = 0.0;
    double link_transmission = 0.0;        ///< eta_t
    double preparation_time_s = 0.0;       ///< 0 unless prep time included
    bool prep_time_included = false;
    std::vector<double> stage_probabilities;  ///< P0, P1, ..., Pn
    std::vector<LinkState> states;            ///< level 0 .. n
    RegimeFlags regime;
};

struct ChainResult {
    double total_time_s = 0.0;
    double fidelity = 0.0;
    ChainDiagnostics diagnostics;
};

struct ChainOptions {
    bool include_prep_time = false;
};

/// Full pipeline: source coefficients -> elementary link -> n swaps ->
/// (3/2)^n * tau / (P0 P1 ... Pn) with tau = L0/c, or T0s + L0/c when the
/// source preparation time is included.
inline ChainResult total_time(const RepeaterParams& params, ChainOptions opts = {}) {
    params.validate();
    ChainResult res;
    auto& d = res.diagnostics;
    d.elementary_link_km = params.elementary_link_km();
    d.link_transmission = params.link_transmission();
    d.regime = regime_flags(params);

    AmplifierCoeffs coeffs = amplifier_coefficients(params);
    d.herald_prob = herald_probability(coeffs);
    if (!(d.herald_prob > 0.0))
        throw degenerate_state_error("chain: heralded source never succeeds (p = 0?)");
    d.breakeven_gamma_rep_hz = breakeven_repetition_rate(
        d.herald_prob, d.elementary_link_km, params.fiber_speed_km_per_s);

    LinkResult stage = elementary_link(coeffs, params.eta_d, params.eta_m,
                                       d.link_transmission);
    if (!(stage.probability > 0.0))
        throw degenerate_state_error("chain: elementary link never succeeds");
    d.stage_probabilities.push_back(stage.probability);
    d.states.push_back(stage.state);
    for (int k = 1; k <= params.nesting_levels; ++k) {
        stage = entanglement_swap(stage.state, params.eta_d, params.eta_m);
        if (!(stage.probability > 0.0))
            throw degenerate_state_error("chain: swap level " + std::to_string(k) +
                                         " never succeeds");
        d.stage_probabilities.push_back(stage.probability);
        d.states.push_back(stage.state);
    }

    double tau = d.elementary_link_km / params.fiber_speed_km_per_s;
    if (opts.include_prep_time) {
        if (!params.gamma_rep_hz)
            throw validation_error("gamma_rep_hz",
                                   "required when include_prep_time is set");
        d.preparation_time_s = preparation_time(d.herald_prob, *params.gamma_rep_hz);
        d.prep_time_included = true;
        tau += d.preparation_time_s;
    }
    double t = std::pow(1.5, params.nesting_levels) * tau;
    for (double pk : d.stage_probabilities)
        t /= pk;
    res.total_time_s = t;
    res.fidelity = fidelity(stage.state);
    return res;
}

/// Distribution time for hypothetical on-demand perfect-pair sources,
/// 2 * 3^n * (L0/c) / (eta_d^(2n+2) * eta_m^(2n) * eta_t^2).
inline double ideal_total_time(int nesting_levels, double total_length_km,
                               double eta_d, double eta_m,
                               double attenuation_length_km = 22.0,
                               double fiber_speed_km_per_s = 2.0e5) {
    if (nesting_levels < 0 || nesting_levels > 30)
        throw validation_error("nesting_levels", "must be in [0, 30]");
    if (!(total_length_km > 0.0))
        throw validation_error("total_length_km", "must be > 0");
    auto eff = [](const char* name, double v) {
        if (!(v > 0.0 && v <= 1.0))
            throw validation_error(name, "must be an efficiency in (0, 1]");
    };
    eff("eta_d", eta_d);
    eff("eta_m", eta_m);
    const double l0 = total_length_km / static_cast<double>(1 << nesting_levels);
    const double eta_t = channel_transmission(l0, attenuation_length_km);
    const int n = nesting_levels;
    return 2.0 * std::pow(3.0, n) * (l0 / fiber_speed_km_per_s) /
           (std::pow(eta_d, 2 * n + 2) * std::pow(eta_m, 2 * n) * eta_t * eta_t);
}

} // namespace qamp
