// Acceptance suite: one criterion per command-line argument (1..9), all when
// run without arguments. Prints one [PASS]/[FAIL] line per sub-check and
// returns the number of failures.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qamp/qamp.hpp"

using namespace qamp;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& label, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", label.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

void check_rel(const std::string& label, double value, double expected, double rel_tol) {
    char detail[256];
    std::snprintf(detail, sizeof detail, "%.6g (expected %.6g, tolerance %.0f%%)", value,
                  expected, rel_tol * 100.0);
    check(std::abs(value - expected) <= rel_tol * std::abs(expected), label, detail);
}

void check_abs(const std::string& label, double value, double expected, double abs_tol) {
    char detail[256];
    std::snprintf(detail, sizeof detail, "%.6g (expected %.6g +- %.3g)", value, expected,
                  abs_tol);
    check(std::abs(value - expected) <= abs_tol, label, detail);
}

RepeaterParams table_row(int row) {
    RepeaterParams p;
    p.eta_d = 0.9;
    p.eta_m = 0.9;
    p.total_length_km = 1000.0;
    p.nesting_levels = 4;
    if (row == 1) { p.p = 6e-4; p.q = 1.0; p.R = 0.12; }
    if (row == 2) { p.p = 3.6e-3; p.q = 1.0; p.R = 0.23; }
    if (row == 3) { p.p = 6e-4; p.q = 0.66; p.R = 0.17; }
    return p;
}

void criterion_1() {
    ChainResult r = total_time(table_row(1));
    check_rel("criterion 1: row-1 distribution time", r.total_time_s, 7.4, 0.10);
    check_abs("criterion 1: row-1 fidelity", r.fidelity, 0.96, 0.01);
}

void criterion_2() {
    ChainResult r2 = total_time(table_row(2));
    check_rel("criterion 2: row-2 distribution time", r2.total_time_s, 7.8, 0.10);
    check_abs("criterion 2: row-2 fidelity", r2.fidelity, 0.90, 0.01);
    ChainResult r3 = total_time(table_row(3));
    check_rel("criterion 2: row-3 distribution time", r3.total_time_s, 19.2, 0.10);
    check_abs("criterion 2: row-3 fidelity", r3.fidelity, 0.96, 0.01);
}

void criterion_3() {
    check_rel("criterion 3: ideal-source baseline",
              ideal_total_time(4, 1000.0, 0.9, 0.9), 6.0, 0.10);
}

void criterion_4() {
    const double l0 = 62.5, c = 2e5;
    const double p1 = herald_probability(amplifier_coefficients(table_row(1)));
    const double p2 = herald_probability(amplifier_coefficients(table_row(2)));
    check_rel("criterion 4: row-1 break-even rate",
              breakeven_repetition_rate(p1, l0, c), 6e7, 0.10);
    check_rel("criterion 4: row-2 break-even rate",
              breakeven_repetition_rate(p2, l0, c), 6e6, 0.10);
}

void criterion_5() {
    fock::VerificationReport rep = fock::verify_amplifier(1e-5, 0.999, 0.2, 0.9);
    for (const auto& row : rep.amplifier.rows) {
        char detail[256];
        std::snprintf(detail, sizeof detail,
                      "exact %.8g vs formula %.8g (rel dev %.3g, tolerance 1%%)",
                      row.exact, row.formula, row.rel_dev);
        if (row.gated) {
            check(row.rel_dev <= rep.tolerances.amplifier,
                  "criterion 5: amplifier " + row.name, detail);
        } else {
            std::printf("[info] criterion 5: amplifier %s: %s -- channel dropped by "
                        "the leading-order formula, quantified not gated\n",
                        row.name.c_str(), detail);
        }
    }
    char detail[256];
    std::snprintf(detail, sizeof detail,
                  "herald deviation %.3g at p, %.3g at p/10 (ratio %.2f)",
                  rep.scaling.dev_at_p, rep.scaling.dev_at_p_over_10, rep.scaling.ratio);
    check(rep.scaling_within, "criterion 5: deviation shrinks ~10x for p -> p/10",
          detail);
}

void criterion_6() {
    fock::VerificationReport rep =
        fock::verify_link_and_swaps(1e-5, 0.999, 0.2, 0.9, 0.9, 0.24, 1);
    for (const auto& cmp : rep.stage_isolated) {
        for (const auto& row : cmp.rows) {
            if (!row.gated) continue;
            char detail[256];
            std::snprintf(detail, sizeof detail,
                          "exact %.8g vs formula %.8g (rel dev %.3g, tolerance 2%%)",
                          row.exact, row.formula, row.rel_dev);
            check(row.rel_dev <= rep.tolerances.link_swap,
                  "criterion 6: " + cmp.stage + " " + row.name, detail);
        }
    }
}

void criterion_7() {
    fock::VerificationReport rep = fock::verify_amplifier(1e-4, 0.95, 0.2, 0.85);
    char detail[128];
    std::snprintf(detail, sizeof detail, "max relative spread %.3g",
                  rep.herald_pattern_spread);
    check(rep.herald_pattern_spread <= 1e-10,
          "criterion 7: four herald patterns equal", detail);

    bool invariant = true;
    double worst_f = 1.0;
    LinkState st{0.5, 0.0, 0.0, 0};
    for (int level = 1; level <= 8; ++level) {
        LinkResult r = entanglement_swap(st, 0.85, 0.8);
        st = r.state;
        invariant = invariant && st.beta == 0.0 && st.gamma == 0.0;
        worst_f = std::min(worst_f, fidelity(st));
    }
    std::snprintf(detail, sizeof detail, "beta = gamma = 0 through 8 levels, min F = %g",
                  worst_f);
    check(invariant && worst_f == 1.0,
          "criterion 7: error-free subspace invariant under swapping", detail);

    const double eta = 0.85 * 0.8;
    LinkResult r = entanglement_swap(LinkState{0.37, 0.0, 0.0, 0}, 0.85, 0.8);
    std::snprintf(detail, sizeof detail, "P = %.12g vs eta_DM^2/2 = %.12g",
                  r.probability, eta * eta / 2.0);
    check(r.probability == eta * eta / 2.0,
          "criterion 7: ideal-input swap probability", detail);
}

void criterion_8() {
    // probabilities within [0, 1] across a parameter grid
    bool in_range = true;
    for (double p : {1e-5, 1e-4, 1e-3, 1e-2}) {
        for (double q : {0.66, 0.9, 1.0}) {
            for (double eta : {0.7, 0.9, 1.0}) {
                RepeaterParams params = table_row(1);
                params.p = p;
                params.q = q;
                params.eta_d = eta;
                ChainResult r = total_time(params);
                in_range = in_range && r.fidelity >= 0.0 && r.fidelity <= 1.0 &&
                           r.diagnostics.herald_prob >= 0.0 &&
                           r.diagnostics.herald_prob <= 1.0;
                for (double pk : r.diagnostics.stage_probabilities)
                    in_range = in_range && pk >= 0.0 && pk <= 1.0;
            }
        }
    }
    check(in_range, "criterion 8: all probabilities within [0, 1]", "36-point grid");

    bool monotone = true;
    for (int row : {1, 3}) {
        RepeaterParams params = table_row(row);
        double prev = 2.0;
        for (int i = 0; i <= 12; ++i) {
            params.p = std::pow(10.0, -5.0 + 0.25 * i);
            const double f = total_time(params).fidelity;
            monotone = monotone && f <= prev + 1e-15;
            prev = f;
        }
    }
    check(monotone, "criterion 8: fidelity non-increasing in p",
          "p in [1e-5, 1e-2], rows 1 and 3");

    bool decreasing = true;
    for (int which = 0; which < 2; ++which) {
        RepeaterParams params = table_row(1);
        double prev = std::numeric_limits<double>::infinity();
        for (double eta = 0.6; eta <= 1.001; eta += 0.05) {
            (which == 0 ? params.eta_d : params.eta_m) = std::min(eta, 1.0);
            const double t = total_time(params).total_time_s;
            decreasing = decreasing && t < prev;
            prev = t;
        }
    }
    check(decreasing, "criterion 8: T_tot strictly decreasing in eta_D and eta_M",
          "eta in [0.6, 1.0]");

    // probability conservation over a complete click-pattern set
    fock::FockEnsemble ens = fock::build_source_ensemble(1e-3, 0.9);
    ens = apply_map(ens, fock::LinearMap::splitter("aux_H", "out_H", 0.2));
    ens = apply_map(ens, fock::LinearMap::splitter("aux_V", "out_V", 0.2));
    ens = apply_map(ens, fock::amplifier_bell_network());
    const double total = fock::total_pattern_probability(
        ens, {"aux_H", "aux_V", "in_H", "in_V"}, 0.9);
    char detail[128];
    std::snprintf(detail, sizeof detail, "sum over patterns = %.12f", total);
    check(std::abs(total - 1.0) <= 1e-10,
          "criterion 8: click-pattern probabilities sum to the ensemble weight", detail);

    // loss-model equivalence on one- and two-photon states
    bool equivalent = true;
    for (int photons = 1; photons <= 2 && equivalent; ++photons) {
        for (int clicks = 0; clicks <= photons; ++clicks) {
            fock::ModeRegister reg({"d", "loss"}, 4, 4);
            fock::PureState st = fock::vacuum_state();
            for (int i = 0; i < photons; ++i) st = st.created(0);
            st.normalize();
            fock::FockEnsemble direct_in;
            direct_in.reg = reg;
            direct_in.push(1.0, st);
            const double eta = 0.73;
            const auto direct =
                fock::detect(direct_in, {"d"}, eta, fock::HeraldPattern{{{"d", clicks}}});
            auto lossy = fock::apply_loss(direct_in, "d", "loss", eta);
            const auto folded =
                fock::detect(lossy, {"d"}, 1.0, fock::HeraldPattern{{{"d", clicks}}});
            equivalent =
                equivalent && std::abs(folded.probability - direct.probability) <= 1e-10;
        }
    }
    check(equivalent, "criterion 8: splitter-to-loss-mode equals binomial detection",
          "1- and 2-photon states, all click counts");
}

void criterion_9() {
    RepeaterParams hardware;
    hardware.eta_d = 0.9;
    hardware.eta_m = 0.9;
    hardware.total_length_km = 1000.0;
    Optimum perfect = optimize(1.0, hardware);
    char detail[160];
    std::snprintf(detail, sizeof detail, "T = %.6g s, F = %.6g at (p=%.3g, R=%.3g, n=%d)",
                  perfect.total_time_s, perfect.fidelity, perfect.p, perfect.R, perfect.n);
    check(perfect.feasible && perfect.total_time_s <= 8.0 && perfect.fidelity >= 0.9,
          "criterion 9: q = 1 optimum", detail);

    Optimum lossy = optimize(0.66, hardware);
    std::snprintf(detail, sizeof detail, "T = %.6g s (expected 19.2 +- 15%%), F = %.6g",
                  lossy.total_time_s, lossy.fidelity);
    check(lossy.feasible && std::abs(lossy.total_time_s - 19.2) <= 0.15 * 19.2,
          "criterion 9: q = 0.66 optimum", detail);
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<void()>> criteria = {
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
        criterion_6, criterion_7, criterion_8, criterion_9};
    if (argc > 1) {
        const int which = std::atoi(argv[1]);
        if (which < 1 || which > int(criteria.size())) {
            std::fprintf(stderr, "usage: %s [1..%zu]\n", argv[0], criteria.size());
            return 64;
        }
        criteria[size_t(which - 1)]();
    } else {
        for (const auto& c : criteria) c();
    }
    if (g_failures)
        std::printf("%d sub-check(s) failed\n", g_failures);
    return g_failures;
}
