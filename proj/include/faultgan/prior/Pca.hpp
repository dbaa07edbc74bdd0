#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <faultgan/numerics/Matrix.hpp>
#include <faultgan/numerics/SymEig.hpp>

namespace faultgan::prior {

struct PcaModel {
    numerics::Vec mean;           // length d
    numerics::Matrix directions;  // d x d, columns by descending variance
    numerics::Vec explained_ratio;  // nonnegative, descending, sums to 1

    std::size_t dim() const { return mean.size(); }
};

/// PCA of the normal windows: eigenvectors of the mean-centered sample
/// covariance. Needs at least d+1 windows.
inline PcaModel fit_pca(const std::vector<numerics::Vec>& windows) {
    if (windows.empty()) throw std::domain_error("fit_pca: no windows");
    const std::size_t d = windows.front().size();
    const std::size_t n = windows.size();
    if (n < d + 1)
        throw std::domain_error("fit_pca: need at least d+1 = " + std::to_string(d + 1) +
                                " windows, got " + std::to_string(n));

    PcaModel model;
    model.mean.assign(d, 0.0);
    for (const auto& x : windows) {
        if (x.size() != d) throw std::domain_error("fit_pca: inconsistent window length");
        numerics::require_finite(x, "fit_pca");
        for (std::size_t i = 0; i < d; ++i) model.mean[i] += x[i];
    }
    for (double& v : model.mean) v /= static_cast<double>(n);

    numerics::Matrix cov(d, d);
    numerics::Vec centered(d);
    for (const auto& x : windows) {
        for (std::size_t i = 0; i < d; ++i) centered[i] = x[i] - model.mean[i];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) cov(i, j) += centered[i] * centered[j];
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) cov(j, i) = cov(i, j) = cov(i, j) / denom;

    auto eig = numerics::sym_eig(cov);
    model.directions = std::move(eig.vectors);

    double total = 0.0;
    for (double& v : eig.values) {
        if (v < 0.0) v = 0.0;  // covariance round-off
        total += v;
    }
    model.explained_ratio.resize(d);
    for (std::size_t i = 0; i < d; ++i)
        model.explained_ratio[i] = total > 0.0 ? eig.values[i] / total : 0.0;
    return model;
}

/// Smallest d' whose cumulative explained variance reaches the threshold.
inline std::size_t select_encoding_dim(const PcaModel& pca, double threshold = 0.90) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::domain_error("select_encoding_dim: threshold must lie in (0,1)");
    double cumulative = 0.0;
    for (std::size_t i = 0; i < pca.explained_ratio.size(); ++i) {
        cumulative += pca.explained_ratio[i];
        if (cumulative >= threshold) return i + 1;
    }
    return pca.explained_ratio.size();
}

}  // namespace faultgan::prior
