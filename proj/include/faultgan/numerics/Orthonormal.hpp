#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <faultgan/numerics/Matrix.hpp>

namespace faultgan::numerics {

namespace detail {

// One modified Gram-Schmidt pass of x against the columns of basis.
inline void mgs_project_out(Vec& x, const std::vector<Vec>& basis) {
    for (const Vec& b : basis) {
        const double proj = dot(x, b);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= proj * b[i];
    }
}

}  // namespace detail

/// Orthonormalizes the columns of `s` by modified Gram-Schmidt with one
/// re-orthogonalization pass. Throws when the columns are linearly dependent.
inline std::vector<Vec> orthonormalize_columns(const Matrix& s) {
    std::vector<Vec> q;
    q.reserve(s.cols());
    for (std::size_t j = 0; j < s.cols(); ++j) {
        Vec v = s.col(j);
        const double original = norm(v);
        detail::mgs_project_out(v, q);
        detail::mgs_project_out(v, q);  // second pass
        const double residual = norm(v);
        if (residual <= 1e-10 * std::max(original, 1.0))
            throw std::domain_error("orthonormalize_columns: column " + std::to_string(j) +
                                    " is linearly dependent on earlier columns");
        for (double& x : v) x /= residual;
        q.push_back(std::move(v));
    }
    return q;
}

/// Orthonormal basis of the orthogonal complement of span(s_basis) in R^d.
///
/// s_basis is d x d' with independent columns, d' < d; the result is
/// d x (d - d') with columns orthonormal and orthogonal to every input column.
inline Matrix orthonormal_complement(const Matrix& s_basis) {
    const std::size_t d = s_basis.rows();
    const std::size_t dp = s_basis.cols();
    if (dp >= d)
        throw std::domain_error("orthonormal_complement: need fewer columns than rows (got " +
                                std::to_string(dp) + " columns in R^" + std::to_string(d) + ")");
    if (!all_finite(s_basis)) throw std::domain_error("orthonormal_complement: non-finite entry");

    std::vector<Vec> q = orthonormalize_columns(s_basis);

    // Extend with canonical axes; accept the d-d' directions with the largest
    // residuals so the completion is deterministic and well conditioned.
    Matrix complement(d, d - dp);
    std::size_t accepted = 0;
    for (std::size_t axis = 0; axis < d && accepted < d - dp; ++axis) {
        Vec v(d, 0.0);
        v[axis] = 1.0;
        detail::mgs_project_out(v, q);
        detail::mgs_project_out(v, q);
        const double residual = norm(v);
        if (residual <= 1e-8) continue;  // axis already inside the accumulated span
        for (double& x : v) x /= residual;
        complement.set_col(accepted, v);
        q.push_back(std::move(v));
        ++accepted;
    }
    if (accepted != d - dp)
        throw std::domain_error("orthonormal_complement: failed to complete the basis");
    return complement;
}

}  // namespace faultgan::numerics
