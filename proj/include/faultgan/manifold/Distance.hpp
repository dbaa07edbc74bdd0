#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <faultgan/manifold/Descriptor.hpp>
#include <faultgan/numerics/Matrix.hpp>
#include <faultgan/numerics/SymEig.hpp>

namespace faultgan::manifold {

namespace detail {

inline void require_spd(const numerics::Matrix& x, const char* what) {
    if (x.rows() != x.cols()) throw std::domain_error(std::string(what) + ": matrix not square");
    const double scale = std::max(numerics::max_abs(x), 1e-300);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = i + 1; j < x.cols(); ++j)
            if (std::abs(x(i, j) - x(j, i)) > 1e-8 * scale)
                throw std::domain_error(std::string(what) + ": matrix not symmetric");
}

// X^{-1/2} through the eigendecomposition; X is regularized by 1e-10 I first.
inline numerics::Matrix inverse_sqrt(const numerics::Matrix& x, const char* what) {
    numerics::Matrix reg = x;
    for (std::size_t i = 0; i < reg.rows(); ++i) reg(i, i) += 1e-10;
    const auto eig = numerics::sym_eig(reg);
    if (eig.values.back() <= 0.0)
        throw std::domain_error(std::string(what) + ": matrix not positive definite");
    numerics::Matrix out(reg.rows(), reg.rows());
    for (std::size_t i = 0; i < reg.rows(); ++i)
        for (std::size_t j = 0; j < reg.rows(); ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < reg.rows(); ++r)
                s += eig.vectors(i, r) * eig.vectors(j, r) / std::sqrt(eig.values[r]);
            out(i, j) = s;
        }
    return out;
}

}  // namespace detail

/// GL-invariant SPD metric d(X,Y) = sqrt(trace(Log(X^{-1}Y)^2)), computed as
/// the root-sum-square of log generalized eigenvalues.
inline double spd_distance(const numerics::Matrix& x, const numerics::Matrix& y) {
    detail::require_spd(x, "spd_distance");
    detail::require_spd(y, "spd_distance");
    if (x.rows() != y.rows()) throw std::domain_error("spd_distance: size mismatch");

    if (x.rows() == 1) {
        const double a = x(0, 0) + 1e-10;
        const double b = y(0, 0) + 1e-10;
        if (a <= 0.0 || b <= 0.0) throw std::domain_error("spd_distance: not positive definite");
        return std::abs(std::log(b / a));
    }

    const numerics::Matrix xis = detail::inverse_sqrt(x, "spd_distance");
    numerics::Matrix yreg = y;
    for (std::size_t i = 0; i < yreg.rows(); ++i) yreg(i, i) += 1e-10;
    numerics::Matrix m = numerics::multiply(numerics::multiply(xis, yreg), xis);
    // Symmetrize the product's round-off before the eigensolve.
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            m(i, j) = m(j, i) = 0.5 * (m(i, j) + m(j, i));
    const auto eig = numerics::sym_eig(m);
    double sum = 0.0;
    for (double lambda : eig.values) {
        if (lambda <= 0.0) throw std::domain_error("spd_distance: not positive definite");
        const double lg = std::log(lambda);
        sum += lg * lg;
    }
    return std::sqrt(sum);
}

/// Distance between orthonormal frames, invariant to column signs and to
/// rotations within the spanned subspace (eigenbases are only defined up to
/// those). k = 1 reduces to the sign-quotiented sphere geodesic
/// arccos(|u1ᵀu2|); k > 1 uses principal angles from the SVD of U1ᵀU2.
inline double stiefel_distance(const numerics::Matrix& u1, const numerics::Matrix& u2) {
    if (u1.rows() != u2.rows() || u1.cols() != u2.cols())
        throw std::domain_error("stiefel_distance: shape mismatch");
    const std::size_t k = u1.cols();
    for (const auto* u : {&u1, &u2}) {
        numerics::Matrix gram = numerics::multiply(numerics::transpose(*u), *u);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) > 1e-6)
                    throw std::domain_error("stiefel_distance: columns not orthonormal");
    }

    if (k == 1) {
        double dot = 0.0;
        for (std::size_t i = 0; i < u1.rows(); ++i) dot += u1(i, 0) * u2(i, 0);
        return std::acos(std::min(std::abs(dot), 1.0));
    }

    // Principal angles: singular values of U1ᵀU2 are the cosines.
    numerics::Matrix m = numerics::multiply(numerics::transpose(u1), u2);
    numerics::Matrix mtm = numerics::multiply(numerics::transpose(m), m);
    const auto eig = numerics::sym_eig(mtm);
    double sum = 0.0;
    for (double lambda : eig.values) {
        const double c = std::sqrt(std::min(std::max(lambda, 0.0), 1.0));
        const double theta = std::acos(c);
        sum += theta * theta;
    }
    return std::sqrt(sum);
}

/// Gaussian RBF kernel on the product manifold with the l1 product metric:
/// k(P1,P2) = exp(-(d_St + d_SPD)^2), valued in (0, 1].
inline double product_kernel(const ManifoldPoint& p1, const ManifoldPoint& p2) {
    if (p1.rank != p2.rank) throw std::domain_error("product_kernel: rank mismatch");
    const double d = stiefel_distance(p1.stiefel, p2.stiefel) + spd_distance(p1.spd, p2.spd);
    return std::exp(-d * d);
}

}  // namespace faultgan::manifold
