#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "qamp/errors.hpp"

namespace qamp {

/// Transmission of a fiber span from one node to the central station,
/// exp(-L0 / (2 * L_att)). The factor 2 is there because each photon
/// travels half the elementary link.
inline double channel_transmission(double link_length_km, double attenuation_length_km) {
    if (!(link_length_km >= 0.0))
        throw validation_error("link_length_km", "must be >= 0");
    if (!(attenuation_length_km > 0.0))
        throw validation_error("attenuation_length_km", "must be > 0");
    return std::exp(-link_length_km / (2.0 * attenuation_length_km));
}

/// All physical and protocol parameters of one repeater configuration.
/// Immutable value type; validate() is total and names the offending field.
struct RepeaterParams {
    double p = 0.0;       ///< pair-source emission probability per attempt
    double q = 1.0;       ///< single-photon-source efficiency
    double R = 0.5;       ///< tunable beam-splitter reflectivity (intensity); T = 1-R
    double eta_d = 1.0;   ///< detector efficiency
    double eta_m = 1.0;   ///< memory read-out efficiency
    double total_length_km = 1000.0;
    int nesting_levels = 0;                 ///< n; 2^n elementary links
    double attenuation_length_km = 22.0;    ///< standard telecom fiber
    double fiber_speed_km_per_s = 2.0e5;    ///< light speed in fiber
    std::optional<double> gamma_rep_hz;     ///< source repetition rate; absent = prep time neglected

    double elementary_link_km() const {
        return total_length_km / static_cast<double>(1 << nesting_levels);
    }

    double link_transmission() const {
        return channel_transmission(elementary_link_km(), attenuation_length_km);
    }

    void validate() const {
        auto prob = [](const char* name, double v) {
            if (!(v >= 0.0 && v <= 1.0))
                throw validation_error(name, "must be a probability in [0, 1]");
        };
        prob("p", p);
        prob("q", q);
        prob("R", R);
        prob("eta_d", eta_d);
        prob("eta_m", eta_m);
        // R = 0 and R = 1 make the herald probability vanish identically.
        if (R == 0.0 || R == 1.0)
            throw validation_error("R", "must lie strictly inside (0, 1)");
        if (!(total_length_km > 0.0))
            throw validation_error("total_length_km", "must be > 0");
        if (nesting_levels < 0)
            throw validation_error("nesting_levels", "must be >= 0");
        if (nesting_levels > 30)
            throw validation_error("nesting_levels", "must be <= 30");
        if (!(attenuation_length_km > 0.0))
            throw validation_error("attenuation_length_km", "must be > 0");
        if (!(fiber_speed_km_per_s > 0.0))
            throw validation_error("fiber_speed_km_per_s", "must be > 0");
        if (gamma_rep_hz && !(*gamma_rep_hz > 0.0))
            throw validation_error("gamma_rep_hz", "must be > 0 when given");
        if (!(elementary_link_km() > 0.0))
            throw validation_error("total_length_km", "elementary link length must be > 0");
    }
};

/// The four weights of the heralded-source conditional state. Weights are the
/// single-coincidence values; the herald multiplicity (four equivalent
/// coincidences) is applied once, in herald_probability().
struct AmplifierCoeffs {
    double alpha0s = 0.0;  ///< maximally entangled pair component
    double beta0s = 0.0;   ///< lone stored photon, partner lost or absent
    double gamma0s = 0.0;  ///< double pair, both auxiliary photons transmitted
    double delta0s = 0.0;  ///< double pair, one auxiliary photon in the output

    /// Trace of the conditional state: alpha + 2 beta + 4 gamma + 8 delta.
    double trace() const {
        return alpha0s + 2.0 * beta0s + 4.0 * gamma0s + 8.0 * delta0s;
    }

    void validate() const {
        if (!(alpha0s >= 0.0)) throw validation_error("alpha0s", "must be >= 0");
        if (!(beta0s >= 0.0)) throw validation_error("beta0s", "must be >= 0");
        if (!(gamma0s >= 0.0)) throw validation_error("gamma0s", "must be >= 0");
        if (!(delta0s >= 0.0)) throw validation_error("delta0s", "must be >= 0");
        if (!(trace() <= 1.0))
            throw validation_error("trace", "state weights exceed unit trace");
    }
};

/// Non-normalized weights of the post-measurement two-node state.
///
/// level 0 (after elementary-link creation): alpha on the Bell component,
/// beta on the one-side-single/other-side-double error class, gamma == 0.
/// level k >= 1 (after the k-th swapping): beta weights the uniform
/// single-photon-each-side error class, gamma the single/double class.
///
/// Class multiplicities (hence trace and fidelity) follow the exact
/// Fock-space simulation: trace = alpha + 8 beta at level 0 and
/// alpha + 2 beta + 8 gamma at level >= 1.
struct LinkState {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    int level = 0;

    double trace() const {
        return level == 0 ? alpha + 8.0 * beta
                          : alpha + 2.0 * beta + 8.0 * gamma;
    }

    void validate() const {
        if (!(alpha >= 0.0)) throw validation_error("alpha", "must be >= 0");
        if (!(beta >= 0.0)) throw validation_error("beta", "must be >= 0");
        if (!(gamma >= 0.0)) throw validation_error("gamma", "must be >= 0");
        if (level < 0) throw validation_error("level", "must be >= 0");
        if (level == 0 && gamma != 0.0)
            throw validation_error("gamma", "must be exactly 0 at level 0");
    }
};

} // namespace qamp
