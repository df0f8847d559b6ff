// Command-line front end: rate | ideal | optimize | sweep | verify | table1.
// Exit codes: 0 success, 1 invalid input, 2 verification failure.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "qamp/qamp.hpp"
#include "qamp/report_json.hpp"

namespace {

using qamp::json;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "text";
    std::optional<double> p, q, R, eta_d, eta_m, length_km, gamma_rep;
    std::optional<int> n;
    bool include_prep_time = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file (or env QAMP_CONFIG)");
    cmd->add_option("--out", o.out_path, "write the report here instead of stdout");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("--p", o.p, "pair emission probability");
    cmd->add_option("--q", o.q, "single-photon source efficiency");
    cmd->add_option("--R", o.R, "beam-splitter reflectivity");
    cmd->add_option("--eta-d", o.eta_d, "detector efficiency");
    cmd->add_option("--eta-m", o.eta_m, "memory efficiency");
    cmd->add_option("--L", o.length_km, "total distance [km]");
    cmd->add_option("--n", o.n, "nesting levels");
    cmd->add_option("--gamma-rep", o.gamma_rep, "source repetition rate [Hz]");
    cmd->add_flag("--include-prep-time", o.include_prep_time,
                  "add the source preparation time to the communication time");
}

json load_config(const CommonOpts& o) {
    std::string path = o.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("QAMP_CONFIG")) path = env;
    }
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw qamp::validation_error("config", "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const std::exception& e) {
        throw qamp::validation_error("config", std::string("parse error: ") + e.what());
    }
}

qamp::RepeaterParams resolve_params(const json& cfg, const CommonOpts& o) {
    qamp::RepeaterParams params;
    qamp::params_from_json(cfg, params);
    if (o.p) params.p = *o.p;
    if (o.q) params.q = *o.q;
    if (o.R) params.R = *o.R;
    if (o.eta_d) params.eta_d = *o.eta_d;
    if (o.eta_m) params.eta_m = *o.eta_m;
    if (o.length_km) params.total_length_km = *o.length_km;
    if (o.n) params.nesting_levels = *o.n;
    if (o.gamma_rep) params.gamma_rep_hz = *o.gamma_rep;
    return params;
}

void emit(const CommonOpts& o, const std::string& content) {
    if (o.out_path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(o.out_path);
    if (!out) throw qamp::validation_error("out", "cannot write " + o.out_path);
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// flat key/value view used by the text and csv renderers
std::vector<std::pair<std::string, std::string>> flatten(const json& j,
                                                         const std::string& prefix = "") {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            auto sub = flatten(value, name);
            rows.insert(rows.end(), sub.begin(), sub.end());
        } else if (value.is_array()) {
            for (size_t i = 0; i < value.size(); ++i) {
                const auto& el = value[i];
                const std::string iname = name + "[" + std::to_string(i) + "]";
                if (el.is_object()) {
                    auto sub = flatten(el, iname);
                    rows.insert(rows.end(), sub.begin(), sub.end());
                } else if (el.is_number_float()) {
                    rows.emplace_back(iname, fmt6(el.get<double>()));
                } else {
                    rows.emplace_back(iname, el.dump());
                }
            }
        } else if (value.is_number_float()) {
            rows.emplace_back(name, fmt6(value.get<double>()));
        } else {
            rows.emplace_back(name, value.dump());
        }
    }
    return rows;
}

std::string render(const json& report, const std::string& format) {
    if (format == "json") return report.dump(2);
    const auto rows = flatten(report);
    std::ostringstream out;
    if (format == "csv") {
        for (size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << rows[i].first;
        out << '\n';
        for (size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << rows[i].second;
        out << '\n';
        return out.str();
    }
    size_t width = 0;
    for (const auto& [k, v] : rows) width = std::max(width, k.size());
    for (const auto& [k, v] : rows)
        out << k << std::string(width - k.size() + 2, ' ') << v << '\n';
    return out.str();
}

int cmd_rate(const CommonOpts& o) {
    const json cfg = load_config(o);
    qamp::RepeaterParams params = resolve_params(cfg, o);
    bool include_prep = o.include_prep_time || cfg.value("include_prep_time", false);
    qamp::ChainResult r = qamp::total_time(params, {include_prep});
    emit(o, render(qamp::chain_to_json(params, r), o.format));
    return 0;
}

int cmd_ideal(const CommonOpts& o) {
    const json cfg = load_config(o);
    qamp::RepeaterParams params = resolve_params(cfg, o);
    const double t = qamp::ideal_total_time(
        params.nesting_levels, params.total_length_km, params.eta_d, params.eta_m,
        params.attenuation_length_km, params.fiber_speed_km_per_s);
    json report = qamp::params_to_json(params);
    report["ideal_total_time_s"] = t;
    emit(o, render(report, o.format));
    return 0;
}

int cmd_optimize(const CommonOpts& o) {
    const json cfg = load_config(o);
    qamp::RepeaterParams hardware = resolve_params(cfg, o);
    const double f_min = cfg.value("f_min", 0.9);
    const int n_max = cfg.value("n_max", 4);
    qamp::GridSpec grid;
    grid.p_min = cfg.value("p_min", grid.p_min);
    grid.p_max = cfg.value("p_max", grid.p_max);
    grid.p_points = cfg.value("p_points", grid.p_points);
    grid.r_min = cfg.value("r_min", grid.r_min);
    grid.r_max = cfg.value("r_max", grid.r_max);
    grid.r_points = cfg.value("r_points", grid.r_points);
    qamp::Optimum opt = qamp::optimize(hardware.q, hardware, f_min, n_max, grid);
    json report = qamp::optimum_to_json(hardware, opt);
    report["f_min"] = f_min;
    report["n_max"] = n_max;
    emit(o, render(report, o.format));
    return 0;
}

int cmd_sweep(const CommonOpts& o) {
    const json cfg = load_config(o);
    qamp::RepeaterParams fixed = resolve_params(cfg, o);
    if (!cfg.contains("sweep_variable"))
        throw qamp::validation_error("sweep_variable", "missing from config");
    const auto variable =
        qamp::sweep_variable_from_string(cfg.at("sweep_variable").get<std::string>());
    std::vector<double> values;
    if (cfg.contains("sweep_values")) {
        values = cfg.at("sweep_values").get<std::vector<double>>();
    } else {
        const double from = cfg.value("sweep_from", 0.0);
        const double to = cfg.value("sweep_to", 0.0);
        const int points = cfg.value("sweep_points", 0);
        const bool log_scale = cfg.value("sweep_log", false);
        if (points < 1)
            throw qamp::validation_error("sweep_points", "need sweep_values or a range");
        for (int i = 0; i < points; ++i) {
            const double frac = points == 1 ? 0.0 : double(i) / (points - 1);
            values.push_back(log_scale
                                 ? std::pow(10.0, std::log10(from) +
                                                      (std::log10(to) - std::log10(from)) * frac)
                                 : from + (to - from) * frac);
        }
    }
    const auto rows = qamp::sweep(variable, values, fixed);

    // CSV is the native format here; 6 significant digits, '.' decimal, ',' sep
    std::ostringstream csv;
    csv << qamp::to_string(variable) << ",T_tot_s,F,P0s";
    for (int k = 0; k <= fixed.nesting_levels; ++k) csv << ",P" << k;
    csv << ",error\n";
    json jrows = json::array();
    for (const auto& row : rows) {
        csv << fmt6(row.value);
        json jr;
        jr["value"] = row.value;
        if (row.result) {
            const auto& d = row.result->diagnostics;
            csv << ',' << fmt6(row.result->total_time_s) << ',' << fmt6(row.result->fidelity)
                << ',' << fmt6(d.herald_prob);
            for (int k = 0; k <= fixed.nesting_levels; ++k)
                csv << ',' << (size_t(k) < d.stage_probabilities.size()
                                   ? fmt6(d.stage_probabilities[size_t(k)])
                                   : "");
            csv << ",\n";
            jr["total_time_s"] = row.result->total_time_s;
            jr["fidelity"] = row.result->fidelity;
            jr["herald_prob"] = d.herald_prob;
            jr["stage_probabilities"] = d.stage_probabilities;
        } else {
            for (int k = 0; k <= fixed.nesting_levels + 3; ++k) csv << ',';
            csv << row.error << '\n';
            jr["error"] = row.error;
        }
        jrows.push_back(jr);
    }
    if (o.format == "json") {
        json report = qamp::params_to_json(fixed);
        report["sweep_variable"] = qamp::to_string(variable);
        report["rows"] = jrows;
        emit(o, report.dump(2));
    } else {
        emit(o, csv.str());
    }
    return 0;
}

int cmd_verify(const CommonOpts& o) {
    const json cfg = load_config(o);
    qamp::RepeaterParams params = resolve_params(cfg, o);
    const int levels = cfg.value("verify_levels", 1);
    qamp::fock::VerificationTolerances tol;
    tol.amplifier = cfg.value("verify_tolerance_amplifier", tol.amplifier);
    tol.link_swap = cfg.value("verify_tolerance_link_swap", tol.link_swap);
    qamp::fock::VerificationReport rep =
        levels < 0 ? qamp::fock::verify_amplifier(params.p, params.q, params.R,
                                                  params.eta_d, tol)
                   : qamp::fock::verify_link_and_swaps(
                         params.p, params.q, params.R, params.eta_d, params.eta_m,
                         params.link_transmission(), levels, tol);
    json report = qamp::verification_to_json(rep);
    emit(o, o.format == "text" ? render(report, "text") : report.dump(2));
    return rep.all_within() ? 0 : 2;
}

int cmd_table1(const CommonOpts& o) {
    struct Row {
        double p, q, R;
        double t_ref, f_ref, gamma_ref_mhz;
    };
    const Row rows[] = {{6e-4, 1.0, 0.12, 7.4, 0.96, 60.0},
                        {3.6e-3, 1.0, 0.23, 7.8, 0.90, 6.0},
                        {6e-4, 0.66, 0.17, 19.2, 0.96, 60.0}};
    std::ostringstream out;
    out << "row  T_tot_s    ref    ok    F        ref   ok    gamma_rep_MHz  ref  ok\n";
    bool all_ok = true;
    json jrows = json::array();
    int i = 0;
    for (const Row& row : rows) {
        ++i;
        qamp::RepeaterParams params;
        params.p = row.p;
        params.q = row.q;
        params.R = row.R;
        params.eta_d = 0.9;
        params.eta_m = 0.9;
        params.total_length_km = 1000.0;
        params.nesting_levels = 4;
        qamp::ChainResult r = qamp::total_time(params);
        const double gamma_mhz = r.diagnostics.breakeven_gamma_rep_hz / 1e6;
        const bool t_ok = std::abs(r.total_time_s - row.t_ref) <= 0.10 * row.t_ref;
        const bool f_ok = std::abs(r.fidelity - row.f_ref) <= 0.01;
        const bool g_ok = std::abs(gamma_mhz - row.gamma_ref_mhz) <= 0.10 * row.gamma_ref_mhz;
        all_ok = all_ok && t_ok && f_ok && g_ok;
        char line[160];
        std::snprintf(line, sizeof line,
                      "%-4d %-10.6g %-6g %-5s %-8.5f %-5g %-5s %-14.6g %-4g %s\n", i,
                      r.total_time_s, row.t_ref, t_ok ? "pass" : "FAIL", r.fidelity,
                      row.f_ref, f_ok ? "pass" : "FAIL", gamma_mhz, row.gamma_ref_mhz,
                      g_ok ? "pass" : "FAIL");
        out << line;
        jrows.push_back({{"row", i},
                         {"total_time_s", r.total_time_s},
                         {"total_time_ref_s", row.t_ref},
                         {"fidelity", r.fidelity},
                         {"fidelity_ref", row.f_ref},
                         {"breakeven_gamma_rep_mhz", gamma_mhz},
                         {"gamma_rep_ref_mhz", row.gamma_ref_mhz},
                         {"pass", t_ok && f_ok && g_ok}});
    }
    out << (all_ok ? "overall: pass\n" : "overall: FAIL\n");
    if (o.format == "json")
        emit(o, json{{"rows", jrows}, {"pass", all_ok}}.dump(2));
    else
        emit(o, out.str());
    return all_ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"entanglement-distribution rate and fidelity calculator for "
                 "heralded-qubit-amplifier repeaters"};
    app.require_subcommand(1);
    CommonOpts opts[6];
    CLI::App* rate = app.add_subcommand("rate", "distribution time and fidelity");
    CLI::App* ideal = app.add_subcommand("ideal", "perfect-source baseline time");
    CLI::App* optimize = app.add_subcommand("optimize", "search (p, R, n) under a fidelity floor");
    CLI::App* sweep = app.add_subcommand("sweep", "tabulate the chain over one variable");
    CLI::App* verify = app.add_subcommand("verify", "exact Fock-space check of the formulas");
    CLI::App* table1 = app.add_subcommand("table1", "recompute the three reference rows");
    add_common(rate, opts[0]);
    add_common(ideal, opts[1]);
    add_common(optimize, opts[2]);
    add_common(sweep, opts[3]);
    add_common(verify, opts[4]);
    add_common(table1, opts[5]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (rate->parsed()) return cmd_rate(opts[0]);
        if (ideal->parsed()) return cmd_ideal(opts[1]);
        if (optimize->parsed()) return cmd_optimize(opts[2]);
        if (sweep->parsed()) return cmd_sweep(opts[3]);
        if (verify->parsed()) return cmd_verify(opts[4]);
        if (table1->parsed()) return cmd_table1(opts[5]);
    } catch (const qamp::validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
