#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qamp/fock/compress.hpp"
#include "qamp/fock/detect.hpp"
#include "qamp/fock/linear_map.hpp"
#include "qamp/fock/state.hpp"

namespace qamp::fock {

// Amplifier register. After the Bell network the (aux_H, aux_V, in_H, in_V)
// slots carry the detection modes (d+, d-, dt+, dt-).
inline ModeRegister amplifier_register() {
    return ModeRegister({"g_H", "g_V", "in_H", "in_V", "aux_H", "aux_V",
                         "out_H", "out_V"},
                        /*per_mode=*/6, /*total=*/6);
}

/// Pair source x two single-photon sources: the 12-branch mixture
/// {vacuum, one pair, two pairs} x {aux_H present/absent} x {aux_V ...}.
/// Branch weights are exact (state norms computed, not assumed).
inline FockEnsemble build_source_ensemble(double p, double q,
                                          ModeRegister reg = amplifier_register()) {
    if (!(p >= 0.0 && p <= 1.0)) throw validation_error("p", "must be in [0, 1]");
    if (!(q >= 0.0 && q <= 1.0)) throw validation_error("q", "must be in [0, 1]");
    const double vacuum_weight = 1.0 - p - 0.75 * p * p;
    if (vacuum_weight < 0.0)
        throw validation_error("p", "too large: vacuum weight 1 - p - 3/4 p^2 < 0");

    const int gH = reg.index_of("g_H"), gV = reg.index_of("g_V");
    const int inH = reg.index_of("in_H"), inV = reg.index_of("in_V");
    const int aH = reg.index_of("aux_H"), aV = reg.index_of("aux_V");

    auto emit_pair = [&](const PureState& st) {
        PureState out;
        for (const auto& [k, a] : st.amp) {
            PureState t;
            t.amp.emplace(k, a);
            for (const auto& [k2, a2] : t.created(gH).created(inH).amp) out.add(k2, a2);
            for (const auto& [k2, a2] : t.created(gV).created(inV).amp) out.add(k2, a2);
        }
        return out;
    };

    PureState one_pair_raw = emit_pair(vacuum_state());   // norm^2 = 2
    PureState two_pair_raw = emit_pair(one_pair_raw);     // norm^2 = 12
    const double w1 = (p / 2.0) * one_pair_raw.norm2();
    const double w2 = (p * p / 16.0) * two_pair_raw.norm2();
    one_pair_raw.normalize();
    two_pair_raw.normalize();

    struct Opt { double w; const PureState* st; };
    PureState vac = vacuum_state();
    const std::array<Opt, 3> pair_opts{{{vacuum_weight, &vac},
                                        {w1, &one_pair_raw},
                                        {w2, &two_pair_raw}}};
    FockEnsemble ens;
    ens.reg = reg;
    for (const auto& po : pair_opts) {
        for (int nh = 0; nh <= 1; ++nh) {
            for (int nv = 0; nv <= 1; ++nv) {
                const double w = po.w * (nh ? q : 1.0 - q) * (nv ? q : 1.0 - q);
                if (w <= 0.0) continue;
                PureState st = *po.st;
                if (nh) { st = st.created(aH); st.normalize(); }
                if (nv) { st = st.created(aV); st.normalize(); }
                ens.push(w, std::move(st));
            }
        }
    }
    return ens;
}

/// 4x4 Bell network taking (c_H, c_V, in_H, in_V) to (d+, d-, dt+, dt-):
/// one PBS in the +-45 degree basis followed by an H/V PBS at each output.
inline LinearMap amplifier_bell_network() {
    const double h = 0.5;
    return LinearMap({"aux_H", "aux_V", "in_H", "in_V"},
                     {{h, h, h, -h}, {h, h, -h, h}, {h, -h, h, h}, {-h, h, h, h}});
}

/// The four equivalent twofold coincidences (d/dt pairs). Index 0 is the
/// canonical one; the others reach the same state after a local unitary.
inline std::array<HeraldPattern, 4> amplifier_herald_patterns() {
    auto pat = [](int dp, int dm, int tp, int tm) {
        return HeraldPattern{{{"aux_H", dp}, {"aux_V", dm}, {"in_H", tp}, {"in_V", tm}}};
    };
    return {pat(1, 0, 0, 1), pat(1, 0, 1, 0), pat(0, 1, 1, 0), pat(0, 1, 0, 1)};
}

/// Memory-pair register holding one heralded source output (or one link end
/// pair): two stored modes and two modes that will be read out and measured.
inline ModeRegister memory_pair_register() {
    return ModeRegister({"g_H", "g_V", "out_H", "out_V"}, /*per_mode=*/2, /*total=*/4);
}

struct AmplifierSim {
    FockEnsemble conditional;      ///< normalized, over memory_pair_register
    double pattern_probability = 0.0;  ///< one coincidence; herald prob is 4x
};

/// Exact amplifier run: source -> tunable splitter on the aux modes ->
/// Bell network -> binomial detection on one coincidence pattern.
inline AmplifierSim simulate_amplifier(double p, double q, double R, double eta_d,
                                       int pattern_index = 0) {
    if (!(R >= 0.0 && R <= 1.0)) throw validation_error("R", "must be in [0, 1]");
    FockEnsemble ens = build_source_ensemble(p, q);
    ens = apply_map(ens, LinearMap::splitter("aux_H", "out_H", R));
    ens = apply_map(ens, LinearMap::splitter("aux_V", "out_V", R));
    ens = apply_map(ens, amplifier_bell_network());
    const auto patterns = amplifier_herald_patterns();
    DetectionResult det = detect(ens, {"aux_H", "aux_V", "in_H", "in_V"}, eta_d,
                                 patterns.at(size_t(pattern_index)));
    AmplifierSim sim;
    sim.pattern_probability = det.probability;
    sim.conditional.reg = memory_pair_register();
    if (det.probability > 0.0) {
        // restrict to the occupied memory modes
        const ModeRegister& src = det.conditional.reg;
        const std::array<int, 4> from{src.index_of("g_H"), src.index_of("g_V"),
                                      src.index_of("out_H"), src.index_of("out_V")};
        for (const auto& br : det.conditional.branches) {
            PureState st;
            st.amp.reserve(br.state.amp.size());
            for (const auto& [k, a] : br.state.amp) {
                OccKey nk = 0;
                for (int m = 0; m < 4; ++m) nk = with_occ(nk, m, occ_of(k, from[m]));
                st.amp.emplace(nk, a);
            }
            sim.conditional.push(br.weight, std::move(st));
        }
        sim.conditional = compress(sim.conditional);
    }
    return sim;
}

struct JoinResult {
    FockEnsemble conditional;  ///< normalized, over memory_pair_register:
                               ///< (g_H, g_V) = side-a kept, (out_H, out_V) = side-b kept
    double pattern_probability = 0.0;
};

/// Bell measurement joining two memory pairs: the inner modes of both sides
/// pass a loss channel (memory read-out and, for the elementary link, the
/// fiber), then the two-PBS network, then a twofold coincidence detection.
/// Kept modes of both sides come out as a fresh memory pair.
///
/// Detection modes: d+- = (a_inner_H +- b_inner_V)/sqrt2,
///                  d'+- = (b_inner_H +- a_inner_V)/sqrt2.
/// The (d+, d'+) coincidence maps |phi+> x |phi+> onto |phi+> directly.
inline JoinResult bell_join(const FockEnsemble& side_a, const FockEnsemble& side_b,
                            double loss_transmission, double eta_d) {
    if (!(loss_transmission > 0.0 && loss_transmission <= 1.0))
        throw validation_error("loss_transmission", "must be in (0, 1]");
    const FockEnsemble ca = compress(side_a);
    const FockEnsemble cb = compress(side_b);

    ModeRegister join_reg({"a_H", "a_V", "am_H", "am_V", "b_H", "b_V", "bm_H", "bm_V",
                           "loss0", "loss1", "loss2", "loss3"},
                          /*per_mode=*/4,
                          /*total=*/ca.reg.total_cap + cb.reg.total_cap);
    auto slots = [&](std::initializer_list<const char*> names) {
        std::vector<int> v;
        for (const char* n : names) v.push_back(join_reg.index_of(n));
        return v;
    };
    FockEnsemble joined = tensor_product(ca, slots({"a_H", "a_V", "am_H", "am_V"}),
                                         cb, slots({"b_H", "b_V", "bm_H", "bm_V"}),
                                         join_reg);
    joined = apply_loss(joined, "am_H", "loss0", loss_transmission);
    joined = apply_loss(joined, "am_V", "loss1", loss_transmission);
    joined = apply_loss(joined, "bm_H", "loss2", loss_transmission);
    joined = apply_loss(joined, "bm_V", "loss3", loss_transmission);

    const double s = 1.0 / std::sqrt(2.0);
    LinearMap bm({"am_H", "am_V", "bm_H", "bm_V"},
                 {{s, 0, 0, s}, {s, 0, 0, -s}, {0, s, s, 0}, {0, -s, s, 0}});
    joined = apply_map(joined, bm);
    DetectionResult det = detect(joined, {"am_H", "am_V", "bm_H", "bm_V"}, eta_d,
                                 HeraldPattern{{{"am_H", 1}, {"am_V", 0},
                                                {"bm_H", 1}, {"bm_V", 0}}});

    JoinResult res;
    res.pattern_probability = det.probability;
    res.conditional.reg = memory_pair_register();
    if (det.probability > 0.0) {
        FockEnsemble traced = trace_out(det.conditional, {"loss0", "loss1", "loss2", "loss3"});
        const std::array<int, 4> from{join_reg.index_of("a_H"), join_reg.index_of("a_V"),
                                      join_reg.index_of("b_H"), join_reg.index_of("b_V")};
        for (const auto& br : traced.branches) {
            PureState st;
            st.amp.reserve(br.state.amp.size());
            for (const auto& [k, a] : br.state.amp) {
                OccKey nk = 0;
                for (int m = 0; m < 4; ++m) nk = with_occ(nk, m, occ_of(k, from[m]));
                st.amp.emplace(nk, a);
            }
            res.conditional.push(br.weight, std::move(st));
        }
        res.conditional.discarded_weight += traced.discarded_weight;
        res.conditional = compress(res.conditional);
    }
    return res;
}

/// Elementary link: two exact amplifier conditionals, memory read-out and
/// fiber loss on the travelling modes, central-station Bell measurement.
inline JoinResult simulate_link(double p, double q, double R, double eta_d,
                                double eta_m, double eta_t) {
    AmplifierSim amp = simulate_amplifier(p, q, R, eta_d);
    if (!(amp.pattern_probability > 0.0))
        throw degenerate_state_error("simulate_link: amplifier never heralds");
    return bell_join(amp.conditional, amp.conditional, eta_m * eta_t, eta_d);
}

/// One entanglement swap between two copies of a joined state: the inner
/// modes (out_H, out_V slots of the memory pair) are read out with the
/// memory efficiency and Bell measured.
inline JoinResult simulate_swap(const FockEnsemble& joined_state, double eta_d,
                                double eta_m) {
    return bell_join(joined_state, joined_state, eta_m, eta_d);
}

// Target kets over a memory-pair-shaped register (indices a_H, a_V, b_H, b_V).

inline PureState phi_plus_ket(int aH, int aV, int bH, int bV) {
    const double s = 1.0 / std::sqrt(2.0);
    PureState st;
    st.add(with_occ(with_occ(0, aH, 1), bH, 1), s);
    st.add(with_occ(with_occ(0, aV, 1), bV, 1), s);
    return st;
}

inline PureState phi_minus_ket(int aH, int aV, int bH, int bV) {
    const double s = 1.0 / std::sqrt(2.0);
    PureState st;
    st.add(with_occ(with_occ(0, aH, 1), bH, 1), s);
    st.add(with_occ(with_occ(0, aV, 1), bV, 1), -s);
    return st;
}

/// Normalized two-photon state ((a_H†)² - (a_V†)²)|0>/2 dressed with extra
/// occupations: the double-excitation pattern of the analytical classes.
inline PureState double_excitation_ket(int aH, int aV,
                                       std::initializer_list<std::pair<int, int>> extra) {
    const double s = 1.0 / std::sqrt(2.0);
    OccKey base = 0;
    for (auto [m, n] : extra) base = with_occ(base, m, n);
    PureState st;
    st.add(with_occ(base, aH, 2), s);
    st.add(with_occ(base, aV, 2), -s);
    return st;
}

/// Population by photon-number sector (n_a, n_b) of the two sides.
inline std::vector<std::vector<double>> sector_populations(const FockEnsemble& ens,
                                                           int aH, int aV, int bH,
                                                           int bV, int max_n = 4) {
    std::vector<std::vector<double>> sec(size_t(max_n + 1),
                                         std::vector<double>(size_t(max_n + 1), 0.0));
    for (const auto& br : ens.branches) {
        for (const auto& [k, a] : br.state.amp) {
            const int na = occ_of(k, aH) + occ_of(k, aV);
            const int nb = occ_of(k, bH) + occ_of(k, bV);
            if (na <= max_n && nb <= max_n)
                sec[size_t(na)][size_t(nb)] += br.weight * std::norm(a);
        }
    }
    return sec;
}

} // namespace qamp::fock
