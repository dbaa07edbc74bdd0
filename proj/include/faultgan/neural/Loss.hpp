#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <faultgan/numerics/Matrix.hpp>

namespace faultgan::neural {

enum class LossMode { Raw, Normalized };

/// Reconstruction error between x and x'.
///
/// Raw is the squared Euclidean distance. Normalized divides by the
/// dimension and clamps at 1: inputs live in [0,1]^d, so the value stays in
/// [0,1] even for faulty vectors outside the cube.
inline double recon_loss(const numerics::Vec& x, const numerics::Vec& xp, LossMode mode) {
    if (x.size() != xp.size())
        throw std::domain_error("recon_loss: length mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(xp.size()) + ")");
    if (x.empty()) throw std::domain_error("recon_loss: empty vectors");
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - xp[i];
        sq += d * d;
    }
    if (mode == LossMode::Raw) return sq;
    return std::min(sq / static_cast<double>(x.size()), 1.0);
}

/// Epoch-level reconstruction aggregate: (1 / (m sqrt(d))) * sum of raw losses.
inline double recon_aggregate(double sum_raw, std::size_t m, std::size_t d) {
    if (m == 0 || d == 0) throw std::domain_error("recon_aggregate: empty aggregate");
    return sum_raw / (static_cast<double>(m) * std::sqrt(static_cast<double>(d)));
}

}  // namespace faultgan::neural
