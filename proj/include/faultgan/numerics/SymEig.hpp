#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <faultgan/numerics/Matrix.hpp>

namespace faultgan::numerics {

struct EigResult {
    Vec values;      // descending
    Matrix vectors;  // eigenvectors as columns, same order as values
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t p = 0; p < a.rows(); ++p)
        for (std::size_t q = p + 1; q < a.cols(); ++q) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
}

}  // namespace detail

/// Symmetric eigendecomposition by cyclic Jacobi sweeps.
///
/// Requires |a - aᵀ| within 1e-10 of the matrix scale. Converges
/// quadratically; throws after `max_sweeps` sweeps without reaching the
/// off-diagonal target.
inline EigResult sym_eig(const Matrix& a, std::size_t max_sweeps = 64) {
    if (a.rows() != a.cols()) throw std::domain_error("sym_eig: matrix not square");
    const std::size_t n = a.rows();
    if (n == 0) throw std::domain_error("sym_eig: empty matrix");
    if (!all_finite(a)) throw std::domain_error("sym_eig: non-finite entry");

    const double scale = std::max(max_abs(a), 1e-300);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-10 * scale)
                throw std::domain_error("sym_eig: input not symmetric at (" + std::to_string(i) +
                                        "," + std::to_string(j) + ")");

    // Work on the symmetrized copy so tiny asymmetries cannot bias the sweep.
    Matrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w(i, j) = 0.5 * (a(i, j) + a(j, i));

    Matrix v = Matrix::identity(n);
    const double target = 1e-14 * std::max(frobenius_norm(w), 1e-300);

    std::size_t sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (detail::off_diagonal_norm(w) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (std::abs(apq) <= 1e-300) {
                    w(p, q) = w(q, p) = 0.0;
                    continue;
                }
                const double app = w(p, p);
                const double aqq = w(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double wkp = w(k, p);
                    const double wkq = w(k, q);
                    w(k, p) = c * wkp - s * wkq;
                    w(k, q) = s * wkp + c * wkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double wpk = w(p, k);
                    const double wqk = w(q, k);
                    w(p, k) = c * wpk - s * wqk;
                    w(q, k) = s * wpk + c * wqk;
                }
                w(p, q) = w(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == max_sweeps && detail::off_diagonal_norm(w) > target)
        throw std::runtime_error("sym_eig: no convergence after " + std::to_string(max_sweeps) +
                                 " sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return w(i, i) > w(j, j); });

    EigResult r;
    r.values.resize(n);
    r.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        r.values[j] = w(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[j]);
    }
    return r;
}

}  // namespace faultgan::numerics
