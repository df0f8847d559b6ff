#pragma once

#include <cmath>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qamp/fock/state.hpp"

namespace qamp::fock {

/// Required click count per named detector mode. All heralds here are
/// twofold coincidences: two detectors at 1 click, the rest of the
/// measurement's detectors at 0.
struct HeraldPattern {
    std::vector<std::pair<std::string, int>> required;

    int total_clicks() const {
        int s = 0;
        for (const auto& [m, k] : required) s += k;
        return s;
    }
};

struct DetectionResult {
    FockEnsemble conditional;  ///< weights renormalized to 1 over surviving modes
    double probability = 0.0;  ///< total pattern probability
};

namespace detail {

inline double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// P(k clicks | n photons) for a detector of efficiency eta.
inline double click_probability(int photons, int clicks, double eta) {
    if (clicks > photons) return 0.0;
    return binom(photons, clicks) * std::pow(eta, clicks) *
           std::pow(1.0 - eta, photons - clicks);
}

/// Group a pure state by the occupations of `slots`; the grouped slots are
/// zeroed in the residual keys. Components with different occupations of the
/// measured (or traced) modes lose mutual coherence.
inline std::unordered_map<OccKey, PureState> group_by_slots(const PureState& st,
                                                            const std::vector<int>& slots) {
    std::unordered_map<OccKey, PureState> groups;
    for (const auto& [key, a] : st.amp) {
        OccKey sub = 0;
        OccKey rest = key;
        for (size_t i = 0; i < slots.size(); ++i) {
            sub = with_occ(sub, int(i), occ_of(key, slots[i]));
            rest = with_occ(rest, slots[i], 0);
        }
        groups[sub].add(rest, a);
    }
    return groups;
}

} // namespace detail

/// Binomial-click detection conditioned on an exact pattern: the required
/// clicks at the named detectors and zero clicks at every other listed
/// detector mode. Undetected photons are permitted anywhere, including at
/// clicked detectors; that is what the (1 - eta) weights mean. The detector
/// modes leave the state (their photons are absorbed).
inline DetectionResult detect(const FockEnsemble& ens,
                              const std::vector<std::string>& detector_modes,
                              double eta_d, const HeraldPattern& pattern) {
    if (!(eta_d >= 0.0 && eta_d <= 1.0))
        throw validation_error("eta_d", "must be in [0, 1]");
    std::vector<int> slots;
    slots.reserve(detector_modes.size());
    for (const auto& m : detector_modes) slots.push_back(ens.reg.index_of(m));

    std::vector<int> clicks(detector_modes.size(), 0);
    for (const auto& [mode, k] : pattern.required) {
        bool found = false;
        for (size_t i = 0; i < detector_modes.size(); ++i) {
            if (detector_modes[i] == mode) {
                clicks[i] = k;
                found = true;
                break;
            }
        }
        if (!found)
            throw validation_error("pattern", "mode " + mode + " is not a detector mode");
    }

    DetectionResult res;
    res.conditional.reg = ens.reg;
    res.conditional.discarded_weight = ens.discarded_weight;
    for (const auto& br : ens.branches) {
        for (auto& [sub, rest] : detail::group_by_slots(br.state, slots)) {
            double pclick = 1.0;
            for (size_t i = 0; i < slots.size() && pclick > 0.0; ++i)
                pclick *= detail::click_probability(occ_of(sub, int(i)), clicks[i], eta_d);
            if (pclick <= 0.0) continue;
            const double n2 = rest.norm2();
            if (n2 <= 0.0) continue;
            const double w = br.weight * pclick * n2;
            res.probability += w;
            rest.normalize();
            res.conditional.push(w, std::move(rest));
        }
    }
    if (res.probability > 0.0)
        res.conditional.normalize_weights();
    return res;
}

/// Partial trace over the named modes (their slots are zeroed: the register
/// shape is kept, occupancy removed).
inline FockEnsemble trace_out(const FockEnsemble& ens,
                              const std::vector<std::string>& modes) {
    std::vector<int> slots;
    slots.reserve(modes.size());
    for (const auto& m : modes) slots.push_back(ens.reg.index_of(m));
    FockEnsemble out;
    out.reg = ens.reg;
    out.discarded_weight = ens.discarded_weight;
    for (const auto& br : ens.branches) {
        for (auto& [sub, rest] : detail::group_by_slots(br.state, slots)) {
            const double n2 = rest.norm2();
            if (n2 <= 0.0) continue;
            rest.normalize();
            out.push(br.weight * n2, std::move(rest));
        }
    }
    return out;
}

/// Sum of detection probabilities over the complete set of mutually
/// exclusive click patterns (all click counts 0..cap per detector). Equals
/// the ensemble weight for any state: used as a conservation check.
inline double total_pattern_probability(const FockEnsemble& ens,
                                        const std::vector<std::string>& detector_modes,
                                        double eta_d) {
    const int cap = ens.reg.total_cap;
    std::vector<int> clicks(detector_modes.size(), 0);
    double sum = 0.0;
    while (true) {
        HeraldPattern pat;
        for (size_t i = 0; i < detector_modes.size(); ++i)
            pat.required.emplace_back(detector_modes[i], clicks[i]);
        sum += detect(ens, detector_modes, eta_d, pat).probability;
        size_t i = 0;
        for (; i < clicks.size(); ++i) {
            if (++clicks[i] <= cap) break;
            clicks[i] = 0;
        }
        if (i == clicks.size()) break;
    }
    return sum;
}

} // namespace qamp::fock
