#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qamp/chain.hpp"

namespace qamp {

/// Search grid: p on a logarithmic grid, R on a linear grid.
struct GridSpec {
    double p_min = 1e-5;
    double p_max = 1e-1;
    int p_points = 60;
    double r_min = 0.01;
    double r_max = 0.99;
    int r_points = 99;

    void validate() const {
        if (!(p_min > 0.0) || !(p_max >= p_min))
            throw validation_error("grid.p", "need 0 < p_min <= p_max");
        if (!(p_max <= 1.0)) throw validation_error("grid.p_max", "must be <= 1");
        if (p_points < 1) throw validation_error("grid.p_points", "must be >= 1");
        if (!(r_min > 0.0) || !(r_max >= r_min) || !(r_max < 1.0))
            throw validation_error("grid.R", "need 0 < r_min <= r_max < 1");
        if (r_points < 1) throw validation_error("grid.r_points", "must be >= 1");
    }

    std::vector<double> p_values() const {
        std::vector<double> v(p_points);
        if (p_points == 1) { v[0] = p_min; return v; }
        const double l0 = std::log10(p_min), l1 = std::log10(p_max);
        for (int i = 0; i < p_points; ++i)
            v[i] = std::pow(10.0, l0 + (l1 - l0) * i / (p_points - 1));
        return v;
    }

    std::vector<double> r_values() const {
        std::vector<double> v(r_points);
        if (r_points == 1) { v[0] = r_min; return v; }
        for (int i = 0; i < r_points; ++i)
            v[i] = r_min + (r_max - r_min) * i / (r_points - 1);
        return v;
    }
};

struct Optimum {
    bool feasible = false;
    double p = 0.0;
    double R = 0.0;
    int n = 0;
    double total_time_s = 0.0;
    double fidelity = 0.0;
    ChainDiagnostics diagnostics;
    long evaluations = 0;
};

namespace detail {

struct GridPoint {
    double p, R;
    int n;
    bool feasible = false;
    double t = 0.0, f = 0.0;
};

// Evaluation is independent per point (data-parallel shape); the reduction
// below runs in grid-index order so the result is deterministic.
inline void evaluate_grid(std::vector<GridPoint>& pts, const RepeaterParams& base,
                          double q, double f_min) {
    for (auto& gp : pts) {
        RepeaterParams params = base;
        params.p = gp.p;
        params.q = q;
        params.R = gp.R;
        params.nesting_levels = gp.n;
        try {
            ChainResult r = total_time(params);
            gp.t = r.total_time_s;
            gp.f = r.fidelity;
            gp.feasible = gp.f >= f_min;
        } catch (const std::exception&) {
            gp.feasible = false;
        }
    }
}

// Ties break toward the experimentally cheapest configuration:
// smallest n, then smallest p, then smallest R.
inline bool better(const GridPoint& a, const GridPoint& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.n != b.n) return a.n < b.n;
    if (a.p != b.p) return a.p < b.p;
    return a.R < b.R;
}

inline std::optional<GridPoint> scan(const GridSpec& grid, int n_max,
                                     const RepeaterParams& base, double q,
                                     double f_min, long& evaluations) {
    std::vector<GridPoint> pts;
    const auto ps = grid.p_values();
    const auto rs = grid.r_values();
    pts.reserve(static_cast<size_t>(n_max + 1) * ps.size() * rs.size());
    for (int n = 0; n <= n_max; ++n)
        for (double p : ps)
            for (double R : rs)
                pts.push_back({p, R, n});
    evaluate_grid(pts, base, q, f_min);
    evaluations += static_cast<long>(pts.size());
    std::optional<GridPoint> best;
    for (const auto& gp : pts)
        if (gp.feasible && (!best || better(gp, *best)))
            best = gp;
    return best;
}

} // namespace detail

/// Exhaustive grid search over (p, R, n) minimizing the distribution time
/// subject to a fidelity floor, followed by one local refinement pass
/// (grids shrunk 10x around the incumbent, clipped to the original bounds,
/// same point counts). Deterministic; an infeasible problem is a result,
/// not an error.
inline Optimum optimize(double q, const RepeaterParams& hardware, double f_min = 0.9,
                        int n_max = 4, GridSpec grid = {}) {
    if (!(q > 0.0 && q <= 1.0))
        throw validation_error("q", "must be in (0, 1]");
    if (!(f_min > 0.0 && f_min <= 1.0))
        throw validation_error("f_min", "must be in (0, 1]");
    if (n_max < 0)
        throw validation_error("n_max", "must be >= 0");
    grid.validate();
    {
        RepeaterParams probe = hardware;  // catch bad hardware before the scan
        probe.p = grid.p_min;
        probe.q = q;
        probe.R = 0.5;
        probe.nesting_levels = 0;
        probe.validate();
    }

    Optimum result;
    auto best = detail::scan(grid, n_max, hardware, q, f_min, result.evaluations);
    if (!best)
        return result;  // no feasible point

    // local refinement around the incumbent
    GridSpec fine = grid;
    const double span_dec = (std::log10(grid.p_max) - std::log10(grid.p_min)) / 10.0;
    fine.p_min = std::max(grid.p_min, best->p * std::pow(10.0, -span_dec / 2.0));
    fine.p_max = std::min(grid.p_max, best->p * std::pow(10.0, span_dec / 2.0));
    const double r_span = (grid.r_max - grid.r_min) / 10.0;
    fine.r_min = std::max(grid.r_min, best->R - r_span / 2.0);
    fine.r_max = std::min(grid.r_max, best->R + r_span / 2.0);
    auto refined = detail::scan(fine, n_max, hardware, q, f_min, result.evaluations);
    if (refined && detail::better(*refined, *best))
        best = refined;

    // re-check feasibility of the incumbent against the chain directly
    RepeaterParams params = hardware;
    params.p = best->p;
    params.q = q;
    params.R = best->R;
    params.nesting_levels = best->n;
    ChainResult check = total_time(params);
    if (!(check.fidelity >= f_min))
        throw regime_violation_error("optimizer incumbent failed the post-hoc fidelity check");

    result.feasible = true;
    result.p = best->p;
    result.R = best->R;
    result.n = best->n;
    result.total_time_s = check.total_time_s;
    result.fidelity = check.fidelity;
    result.diagnostics = check.diagnostics;
    return result;
}

enum class SweepVariable { p, q, R, L, eta_d, eta_m, n };

inline const char* to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::p: return "p";
        case SweepVariable::q: return "q";
        case SweepVariable::R: return "R";
        case SweepVariable::L: return "L";
        case SweepVariable::eta_d: return "eta_d";
        case SweepVariable::eta_m: return "eta_m";
        case SweepVariable::n: return "n";
    }
    return "?";
}

inline SweepVariable sweep_variable_from_string(const std::string& s) {
    if (s == "p") return SweepVariable::p;
    if (s == "q") return SweepVariable::q;
    if (s == "R") return SweepVariable::R;
    if (s == "L") return SweepVariable::L;
    if (s == "eta_d") return SweepVariable::eta_d;
    if (s == "eta_m") return SweepVariable::eta_m;
    if (s == "n") return SweepVariable::n;
    throw validation_error("sweep_variable", "unknown variable '" + s + "'");
}

struct SweepRow {
    double value = 0.0;
    std::optional<ChainResult> result;
    std::string error;  ///< non-empty when this point failed
};

/// One chain evaluation per grid value; failed points carry the error
/// in-row rather than aborting the sweep. Rows in input order.
inline std::vector<SweepRow> sweep(SweepVariable variable,
                                   const std::vector<double>& values,
                                   const RepeaterParams& fixed) {
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (double v : values) {
        SweepRow row;
        row.value = v;
        RepeaterParams params = fixed;
        try {
            switch (variable) {
                case SweepVariable::p: params.p = v; break;
                case SweepVariable::q: params.q = v; break;
                case SweepVariable::R: params.R = v; break;
                case SweepVariable::L: params.total_length_km = v; break;
                case SweepVariable::eta_d: params.eta_d = v; break;
                case SweepVariable::eta_m: params.eta_m = v; break;
                case SweepVariable::n: {
                    if (v != std::floor(v))
                        throw validation_error("n", "sweep values must be integers");
                    params.nesting_levels = static_cast<int>(v);
                    break;
                }
            }
            row.result = total_time(params);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace qamp
