#pragma once

#include <Eigen/Dense>
#include <unordered_map>
#include <vector>

#include "qamp/fock/state.hpp"

namespace qamp::fock {

/// Re-express a mixed state as its eigen-ensemble: accumulate the density
/// matrix over the occupied support and diagonalize. Bounds the branch count
/// by the support dimension regardless of how many conditioning steps
/// produced the ensemble; the represented state is unchanged.
inline FockEnsemble compress(const FockEnsemble& ens, double relative_cutoff = 1e-16) {
    std::vector<OccKey> support;
    std::unordered_map<OccKey, int> index;
    for (const auto& br : ens.branches) {
        for (const auto& [k, a] : br.state.amp) {
            if (index.emplace(k, int(support.size())).second)
                support.push_back(k);
        }
    }
    const int d = static_cast<int>(support.size());
    FockEnsemble out;
    out.reg = ens.reg;
    out.discarded_weight = ens.discarded_weight;
    if (d == 0) return out;

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    Eigen::VectorXcd v(d);
    for (const auto& br : ens.branches) {
        v.setZero();
        for (const auto& [k, a] : br.state.amp) v(index[k]) = a;
        rho.noalias() += br.weight * (v * v.adjoint());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
    const double lambda_max = eig.eigenvalues().maxCoeff();
    const double cutoff = lambda_max * relative_cutoff;
    for (int i = 0; i < d; ++i) {
        const double w = eig.eigenvalues()(i);
        if (w <= cutoff) {
            if (w > 0.0) out.discarded_weight += w;
            continue;
        }
        PureState st;
        for (int j = 0; j < d; ++j) {
            const complex a = eig.eigenvectors()(j, i);
            if (std::abs(a) > 1e-15) st.amp.emplace(support[j], a);
        }
        st.normalize();
        out.push(w, std::move(st));
    }
    return out;
}

} // namespace qamp::fock
