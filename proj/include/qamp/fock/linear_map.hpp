#pragma once

#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "qamp/fock/state.hpp"

namespace qamp::fock {

/// Unitary over a subset of modes, identity elsewhere. Creation operators
/// transform as a†_i -> sum_j U(j,i) b†_j, with inputs and outputs occupying
/// the same register slots.
struct LinearMap {
    std::vector<std::string> modes;
    std::vector<std::vector<complex>> u;  // u[row][col]

    LinearMap(std::vector<std::string> touched, std::vector<std::vector<complex>> matrix)
        : modes(std::move(touched)), u(std::move(matrix)) {
        const size_t k = modes.size();
        if (u.size() != k)
            throw validation_error("matrix", "dimension does not match touched-mode count");
        for (const auto& row : u)
            if (row.size() != k)
                throw validation_error("matrix", "matrix is not square");
        // U†U = I to 1e-12
        for (size_t i = 0; i < k; ++i) {
            for (size_t j = 0; j < k; ++j) {
                complex s{};
                for (size_t r = 0; r < k; ++r) s += std::conj(u[r][i]) * u[r][j];
                const complex expect = i == j ? complex{1.0} : complex{};
                if (std::abs(s - expect) > 1e-12)
                    throw validation_error("matrix", "map is not unitary");
            }
        }
    }

    /// Two-mode splitter sending the first mode to itself with amplitude
    /// sqrt(keep) and to the second mode with sqrt(1-keep).
    static LinearMap splitter(const std::string& input, const std::string& other,
                              double keep) {
        if (!(keep >= 0.0 && keep <= 1.0))
            throw validation_error("keep", "must be in [0, 1]");
        const double r = std::sqrt(keep), t = std::sqrt(1.0 - keep);
        return LinearMap({input, other}, {{r, t}, {t, -r}});
    }
};

namespace detail {

struct Expansion {
    std::vector<std::pair<std::vector<int>, complex>> terms;  // (touched occ, amplitude)
};

// Expand prod_i (sum_j U(j,i) x_j)^{n_i} over monomials in the output modes,
// converting between occupation-ket and creation-monomial normalizations.
inline Expansion expand(const std::vector<int>& occ_in,
                        const std::vector<std::vector<complex>>& u) {
    const int k = static_cast<int>(u.size());
    std::unordered_map<OccKey, complex> poly;
    poly.emplace(OccKey{0}, complex{1.0});
    for (int i = 0; i < k; ++i) {
        for (int rep = 0; rep < occ_in[i]; ++rep) {
            std::unordered_map<OccKey, complex> next;
            next.reserve(poly.size() * k);
            for (const auto& [mono, c] : poly) {
                for (int j = 0; j < k; ++j) {
                    if (u[j][i] == complex{}) continue;
                    const OccKey m2 = with_occ(mono, j, occ_of(mono, j) + 1);
                    auto [it, ins] = next.emplace(m2, c * u[j][i]);
                    if (!ins) it->second += c * u[j][i];
                }
            }
            poly = std::move(next);
        }
    }
    double fac_in = 1.0;
    for (int i = 0; i < k; ++i)
        for (int n = 2; n <= occ_in[i]; ++n) fac_in *= n;
    Expansion ex;
    ex.terms.reserve(poly.size());
    for (const auto& [mono, c] : poly) {
        if (c == complex{}) continue;
        double fac_out = 1.0;
        std::vector<int> occ_out(k);
        for (int j = 0; j < k; ++j) {
            occ_out[j] = occ_of(mono, j);
            for (int n = 2; n <= occ_out[j]; ++n) fac_out *= n;
        }
        ex.terms.emplace_back(std::move(occ_out), c * std::sqrt(fac_out / fac_in));
    }
    return ex;
}

} // namespace detail

/// Apply a linear mode map to every branch. Norms are preserved (unitarity);
/// any amplitude that would exceed the register caps raises, caps are never
/// silently clipped.
inline FockEnsemble apply_map(const FockEnsemble& ens, const LinearMap& map) {
    const int k = static_cast<int>(map.modes.size());
    std::vector<int> touched(k);
    for (int i = 0; i < k; ++i) touched[i] = ens.reg.index_of(map.modes[i]);

    std::unordered_map<OccKey, detail::Expansion> cache;
    FockEnsemble out;
    out.reg = ens.reg;
    out.discarded_weight = ens.discarded_weight;
    out.branches.reserve(ens.branches.size());
    for (const auto& br : ens.branches) {
        PureState ns;
        ns.amp.reserve(br.state.amp.size() * 2);
        for (const auto& [key, a] : br.state.amp) {
            OccKey sub = 0;
            for (int i = 0; i < k; ++i) sub = with_occ(sub, i, occ_of(key, touched[i]));
            auto it = cache.find(sub);
            if (it == cache.end()) {
                std::vector<int> occ_in(k);
                for (int i = 0; i < k; ++i) occ_in[i] = occ_of(sub, i);
                it = cache.emplace(sub, detail::expand(occ_in, map.u)).first;
            }
            for (const auto& [occ_out, c] : it->second.terms) {
                OccKey nk = key;
                for (int i = 0; i < k; ++i) nk = with_occ(nk, touched[i], occ_out[i]);
                ns.add(nk, a * c);
            }
        }
        ns.prune(1e-300);
        for (const auto& [nk, a] : ns.amp) ens.reg.check_key(nk);
        const double n2 = ns.norm2();
        if (std::abs(n2 - 1.0) > 1e-10)
            throw std::runtime_error("apply_map: branch norm drifted beyond 1e-10");
        out.branches.push_back({br.weight, std::move(ns)});
    }
    return out;
}

/// Couple `mode` to a fresh vacuum `loss_mode` with the given transmission.
/// Tracing the loss mode afterwards realizes the standard loss channel.
inline FockEnsemble apply_loss(const FockEnsemble& ens, const std::string& mode,
                               const std::string& loss_mode, double transmission) {
    return apply_map(ens, LinearMap::splitter(mode, loss_mode, transmission));
}

} // namespace qamp::fock
