#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "qamp/errors.hpp"

namespace qamp::fock {

using complex = std::complex<double>;

/// Occupation numbers packed 4 bits per mode into one 64-bit key.
/// Supports up to 16 modes with at most 15 photons per mode.
using OccKey = std::uint64_t;

inline int occ_of(OccKey key, int mode) { return int((key >> (4 * mode)) & 0xF); }

inline OccKey with_occ(OccKey key, int mode, int n) {
    return (key & ~(OccKey(0xF) << (4 * mode))) | (OccKey(n) << (4 * mode));
}

/// Ordered set of named modes plus the truncation caps. With sparse state
/// vectors the caps are validation bounds: any operation that would exceed
/// them throws instead of clipping, so truncation is always lossless.
struct ModeRegister {
    std::vector<std::string> labels;
    int per_mode_cap = 3;
    int total_cap = 6;

    ModeRegister() = default;
    ModeRegister(std::vector<std::string> names, int per_mode, int total)
        : labels(std::move(names)), per_mode_cap(per_mode), total_cap(total) {
        if (labels.size() > 16)
            throw truncation_overflow_error("at most 16 modes per register");
        if (per_mode_cap < 0 || per_mode_cap > 15 || total_cap < 0)
            throw truncation_overflow_error("invalid truncation caps");
        for (size_t i = 0; i < labels.size(); ++i)
            for (size_t j = i + 1; j < labels.size(); ++j)
                if (labels[i] == labels[j])
                    throw validation_error("labels", "duplicate mode label " + labels[i]);
    }

    int size() const { return static_cast<int>(labels.size()); }

    int index_of(const std::string& label) const {
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return static_cast<int>(i);
        throw validation_error("mode", "unknown mode label " + label);
    }

    void check_key(OccKey key) const {
        int total = 0;
        for (int m = 0; m < size(); ++m) {
            const int n = occ_of(key, m);
            if (n > per_mode_cap)
                throw truncation_overflow_error("mode " + labels[m] + " exceeds per-mode cap");
            total += n;
        }
        if (total > total_cap)
            throw truncation_overflow_error("total photon number exceeds cap");
    }
};

/// Sparse pure state: map occupation key -> complex amplitude.
struct PureState {
    std::unordered_map<OccKey, complex> amp;

    double norm2() const {
        double s = 0.0;
        for (const auto& [k, a] : amp) s += std::norm(a);
        return s;
    }

    void normalize() {
        const double n = std::sqrt(norm2());
        if (!(n > 0.0))
            throw degenerate_state_error("cannot normalize a zero state");
        for (auto& [k, a] : amp) a /= n;
    }

    void add(OccKey key, complex value) {
        if (value == complex{}) return;
        auto [it, inserted] = amp.emplace(key, value);
        if (!inserted) it->second += value;
    }

    /// Drop exact-zero entries accumulated by cancellation.
    void prune(double tol = 0.0) {
        for (auto it = amp.begin(); it != amp.end();)
            it = std::abs(it->second) <= tol ? amp.erase(it) : std::next(it);
    }

    complex inner(const PureState& other) const {  // <this|other>
        const auto& small = amp.size() <= other.amp.size() ? amp : other.amp;
        complex s{};
        if (&small == &amp) {
            for (const auto& [k, a] : amp) {
                auto it = other.amp.find(k);
                if (it != other.amp.end()) s += std::conj(a) * it->second;
            }
        } else {
            for (const auto& [k, b] : other.amp) {
                auto it = amp.find(k);
                if (it != amp.end()) s += std::conj(it->second) * b;
            }
        }
        return s;
    }

    /// Creation operator on `mode`: a† |n> = sqrt(n+1) |n+1>.
    PureState created(int mode) const {
        PureState out;
        out.amp.reserve(amp.size());
        for (const auto& [k, a] : amp) {
            const int n = occ_of(k, mode);
            out.add(with_occ(k, mode, n + 1), a * std::sqrt(double(n + 1)));
        }
        return out;
    }
};

inline PureState vacuum_state() {
    PureState st;
    st.amp.emplace(OccKey{0}, complex{1.0, 0.0});
    return st;
}

/// Basis ket from (mode, occupation) pairs.
inline PureState basis_ket(std::initializer_list<std::pair<int, int>> occ) {
    OccKey k = 0;
    for (auto [m, n] : occ) k = with_occ(k, m, n);
    PureState st;
    st.amp.emplace(k, complex{1.0, 0.0});
    return st;
}

struct Branch {
    double weight = 0.0;
    PureState state;  ///< unit norm
};

/// Weighted list of pure states representing a mixed state. Weights sum to
/// the represented trace (<= 1); weight dropped on purpose is tracked in
/// discarded_weight, never silently.
struct FockEnsemble {
    ModeRegister reg;
    std::vector<Branch> branches;
    double discarded_weight = 0.0;

    double total_weight() const {
        double s = 0.0;
        for (const auto& b : branches) s += b.weight;
        return s;
    }

    void push(double weight, PureState state) {
        if (weight < 0.0)
            throw validation_error("weight", "branch weights must be >= 0");
        if (weight == 0.0) return;
        for (const auto& [k, a] : state.amp) reg.check_key(k);
        branches.push_back({weight, std::move(state)});
    }

    void normalize_weights() {
        const double w = total_weight();
        if (!(w > 0.0))
            throw degenerate_state_error("cannot normalize an empty ensemble");
        for (auto& b : branches) b.weight /= w;
        discarded_weight /= w;
    }
};

/// Population of a (normalized) target ket in the ensemble:
/// sum_b w_b |<ket|psi_b>|^2.
inline double population(const FockEnsemble& ens, const PureState& ket) {
    double s = 0.0;
    for (const auto& b : ens.branches) s += b.weight * std::norm(ket.inner(b.state));
    return s;
}

/// Tensor product of ensembles over disjoint mode slots of a common target
/// register. `map_a` / `map_b` give, per source mode, the target slot.
inline FockEnsemble tensor_product(const FockEnsemble& a, const std::vector<int>& map_a,
                                   const FockEnsemble& b, const std::vector<int>& map_b,
                                   const ModeRegister& target) {
    auto remap = [](const PureState& st, const std::vector<int>& map) {
        PureState out;
        out.amp.reserve(st.amp.size());
        for (const auto& [k, ampl] : st.amp) {
            OccKey nk = 0;
            for (size_t m = 0; m < map.size(); ++m)
                nk = with_occ(nk, map[m], occ_of(k, int(m)));
            out.amp.emplace(nk, ampl);
        }
        return out;
    };
    FockEnsemble out;
    out.reg = target;
    out.branches.reserve(a.branches.size() * b.branches.size());
    out.discarded_weight = a.discarded_weight + b.discarded_weight;
    for (const auto& ba : a.branches) {
        PureState sa = remap(ba.state, map_a);
        for (const auto& bb : b.branches) {
            PureState sb = remap(bb.state, map_b);
            PureState prod;
            prod.amp.reserve(sa.amp.size() * sb.amp.size());
            for (const auto& [ka, va] : sa.amp)
                for (const auto& [kb, vb] : sb.amp)
                    prod.add(ka | kb, va * vb);  // disjoint slots
            out.push(ba.weight * bb.weight, std::move(prod));
        }
    }
    return out;
}

} // namespace qamp::fock
