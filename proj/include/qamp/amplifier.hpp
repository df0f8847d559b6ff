#pragma once

#include <cmath>
#include <limits>

#include "qamp/errors.hpp"
#include "qamp/model.hpp"

namespace qamp {

/// Advisory validity-regime check for the analytical source coefficients:
/// they assume a reflectivity much larger than the pair emission probability
/// and near-unit single-photon sources. Warnings, never errors — the
/// formulas stay evaluable at the boundary and the optimizer probes it.
struct RegimeFlags {
    bool outside_validity = false;
    double p_over_R = 0.0;
    double one_minus_q = 0.0;
};

inline RegimeFlags regime_flags(const RepeaterParams& params) {
    RegimeFlags f;
    f.p_over_R = params.R > 0.0 ? params.p / params.R : std::numeric_limits<double>::infinity();
    f.one_minus_q = 1.0 - params.q;
    f.outside_validity = f.p_over_R > 0.1 || f.one_minus_q > 0.5;
    return f;
}

/// Conditional-state weights of the heralded source for one coincidence
/// pattern, as functions of (p, q, R, eta_d) with T = 1 - R.
inline AmplifierCoeffs amplifier_coefficients(const RepeaterParams& params) {
    params.validate();
    const double p = params.p, q = params.q, R = params.R, ed = params.eta_d;
    const double T = 1.0 - R;
    AmplifierCoeffs c;
    c.alpha0s = 0.25 * ed * ed * p * R * T * q * q;
    c.beta0s = 0.125 * ed * ed * p * R * q * (1.0 - q + (1.0 - ed) * R * q);
    c.gamma0s = (ed / 8.0) * (ed / 8.0) * (p * T * q) * (p * T * q);
    c.delta0s = (ed / 8.0) * (ed / 8.0) * p * p * T * q * (1.0 - q);
    return c;
}

/// Success probability of the heralded preparation: four equivalent twofold
/// coincidences, hence 4x the conditional trace.
inline double herald_probability(const AmplifierCoeffs& coeffs) {
    coeffs.validate();
    const double p0s = 4.0 * coeffs.trace();
    if (p0s > 1.0)
        throw regime_violation_error(
            "herald probability exceeds 1; source parameters are non-perturbative");
    return p0s;
}

/// Lossless-device limit of the herald probability, p R (1 - R).
inline double ideal_herald_probability(double p, double R) {
    if (!(p >= 0.0 && p <= 1.0)) throw validation_error("p", "must be in [0, 1]");
    if (!(R >= 0.0 && R <= 1.0)) throw validation_error("R", "must be in [0, 1]");
    return p * R * (1.0 - R);
}

/// Mean waiting time for one successful heralded preparation.
inline double preparation_time(double herald_prob, double gamma_rep_hz) {
    if (!(herald_prob > 0.0))
        throw validation_error("herald_prob", "must be > 0");
    if (!(gamma_rep_hz > 0.0))
        throw validation_error("gamma_rep_hz", "must be > 0");
    return 1.0 / (gamma_rep_hz * herald_prob);
}

/// Repetition rate at which the source preparation time equals the
/// communication time L0/c.
inline double breakeven_repetition_rate(double herald_prob, double link_length_km,
                                        double fiber_speed_km_per_s) {
    if (!(herald_prob > 0.0))
        throw validation_error("herald_prob", "must be > 0");
    if (!(link_length_km > 0.0))
        throw validation_error("link_length_km", "must be > 0");
    if (!(fiber_speed_km_per_s > 0.0))
        throw validation_error("fiber_speed_km_per_s", "must be > 0");
    return fiber_speed_km_per_s / (link_length_km * herald_prob);
}

} // namespace qamp
