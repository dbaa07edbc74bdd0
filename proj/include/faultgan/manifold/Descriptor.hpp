#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <faultgan/numerics/Matrix.hpp>
#include <faultgan/numerics/SymEig.hpp>

namespace faultgan::manifold {

/// Rank-k covariance descriptor factored as U R Uᵀ with U on the Stiefel
/// manifold (orthonormal columns) and R symmetric positive definite.
struct ManifoldPoint {
    numerics::Matrix stiefel;  // d' x k, orthonormal columns
    numerics::Matrix spd;      // k x k
    std::size_t rank = 0;
};

/// Top-k eigenpair factorization of a PSD matrix. Eigenvector signs are
/// normalized (largest-magnitude entry positive) so equal inputs map to
/// equal factors.
inline ManifoldPoint psd_factorize(const numerics::Matrix& c, std::size_t k) {
    if (c.rows() != c.cols()) throw std::domain_error("psd_factorize: matrix not square");
    if (k < 1 || k > c.rows()) throw std::domain_error("psd_factorize: bad rank " + std::to_string(k));

    const auto eig = numerics::sym_eig(c);
    const double lambda_max = std::max(eig.values.front(), 0.0);
    if (eig.values[k - 1] <= 1e-10 * std::max(lambda_max, 1e-300))
        throw std::domain_error(
            "psd_factorize: numerical rank below " + std::to_string(k) +
            " (eigenvalue " + std::to_string(eig.values[k - 1]) +
            "); use a smaller rank or wider windows");

    ManifoldPoint p;
    p.rank = k;
    p.stiefel = numerics::Matrix(c.rows(), k);
    p.spd = numerics::Matrix(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        numerics::Vec v = eig.vectors.col(j);
        double biggest = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::abs(v[i]) > biggest) {
                biggest = std::abs(v[i]);
                arg = i;
            }
        if (v[arg] < 0.0)
            for (double& x : v) x = -x;
        p.stiefel.set_col(j, v);
        p.spd(j, j) = eig.values[j];
    }
    return p;
}

/// Per-sample descriptors C_i = y_i y_iᵀ, which are rank one: the Stiefel
/// factor is the unit direction and the SPD factor the squared norm.
inline std::vector<ManifoldPoint> per_sample_descriptors(
    const std::vector<numerics::Vec>& encodings) {
    std::vector<ManifoldPoint> points;
    points.reserve(encodings.size());
    for (const auto& y : encodings) {
        const double n = numerics::norm(y);
        if (n <= 1e-150)
            throw std::domain_error("per_sample_descriptors: zero encoding has no direction");
        ManifoldPoint p;
        p.rank = 1;
        p.stiefel = numerics::Matrix(y.size(), 1);
        double biggest = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (std::abs(y[i]) > biggest) {
                biggest = std::abs(y[i]);
                arg = i;
            }
        const double sign = y[arg] < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < y.size(); ++i) p.stiefel(i, 0) = sign * y[i] / n;
        p.spd = numerics::Matrix(1, 1);
        p.spd(0, 0) = n * n;
        points.push_back(std::move(p));
    }
    return points;
}

/// Averages C = (1/w) sum y yᵀ over non-overlapping groups of w encodings
/// and factorizes at rank k = min(w, d'). Groups shorter than w are dropped.
inline std::vector<ManifoldPoint> windowed_descriptors(
    const std::vector<numerics::Vec>& encodings, std::size_t w) {
    if (w < 1) throw std::domain_error("windowed_descriptors: window must be >= 1");
    if (encodings.empty()) throw std::domain_error("windowed_descriptors: no encodings");
    const std::size_t d = encodings.front().size();
    const std::size_t k = std::min(w, d);

    std::vector<ManifoldPoint> points;
    for (std::size_t start = 0; start + w <= encodings.size(); start += w) {
        numerics::Matrix c(d, d);
        for (std::size_t s = 0; s < w; ++s) {
            const auto& y = encodings[start + s];
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) c(i, j) += y[i] * y[j];
        }
        for (double& v : c.data()) v /= static_cast<double>(w);
        points.push_back(psd_factorize(c, k));
    }
    return points;
}

}  // namespace faultgan::manifold
