#pragma once

#include <stdexcept>
#include <vector>

#include <faultgan/numerics/Matrix.hpp>
#include <faultgan/numerics/RandomStream.hpp>
#include <faultgan/prior/Pca.hpp>

namespace faultgan::prior {

/// Noise-prior basis N on Gr(d', d), distinct from the data subspace S.
///
/// When 2d' > d the first d-d' columns span the orthogonal complement of S
/// and the rest reuse the leading principal directions; when 2d' <= d all
/// columns come from the complement. Complement columns are the trailing
/// eigenvectors, which are already orthonormal to the leading ones.
struct SubspacePrior {
    numerics::Matrix basis;          // d x d'
    std::size_t complement_count = 0;  // leading columns orthogonal to S
    numerics::Vec mean;              // centering vector for projections
    bool center = true;

    std::size_t data_dim() const { return basis.rows(); }
    std::size_t encoding_dim() const { return basis.cols(); }
};

inline SubspacePrior build_prior_basis(const PcaModel& pca, std::size_t d_prime,
                                       bool center = true) {
    const std::size_t d = pca.dim();
    if (d_prime < 1 || d_prime >= d)
        throw std::domain_error("build_prior_basis: need 1 <= d' < d, got d'=" +
                                std::to_string(d_prime) + ", d=" + std::to_string(d));

    SubspacePrior prior;
    prior.mean = pca.mean;
    prior.center = center;
    prior.basis = numerics::Matrix(d, d_prime);

    const std::size_t complement = d - d_prime;
    prior.complement_count = d_prime <= complement ? d_prime : complement;

    std::size_t col = 0;
    // Complement part: trailing eigenvectors v_{d'+1}..v_d.
    for (std::size_t j = 0; j < prior.complement_count; ++j, ++col)
        prior.basis.set_col(col, pca.directions.col(d_prime + j));
    // Remainder (2d' > d): leading principal directions.
    for (std::size_t j = 0; col < d_prime; ++j, ++col)
        prior.basis.set_col(col, pca.directions.col(j));
    return prior;
}

/// z = Nᵀ(x - mean) for x drawn with replacement from the normal windows.
inline std::vector<numerics::Vec> sample_orthogonal_prior(
    const SubspacePrior& prior, const std::vector<numerics::Vec>& windows, std::size_t batch,
    numerics::RandomStream& rng) {
    if (windows.empty()) throw std::domain_error("sample_orthogonal_prior: empty dataset");
    const std::size_t d = prior.data_dim();
    const std::size_t dp = prior.encoding_dim();

    std::vector<numerics::Vec> zs;
    zs.reserve(batch);
    numerics::Vec centered(d);
    for (std::size_t b = 0; b < batch; ++b) {
        const numerics::Vec& x = windows[rng.index(windows.size())];
        if (x.size() != d) throw std::domain_error("sample_orthogonal_prior: window length != d");
        for (std::size_t i = 0; i < d; ++i)
            centered[i] = prior.center ? x[i] - prior.mean[i] : x[i];
        numerics::Vec z(dp);
        for (std::size_t j = 0; j < dp; ++j) z[j] = numerics::col_dot(prior.basis, j, centered);
        zs.push_back(std::move(z));
    }
    return zs;
}

/// i.i.d. standard normal coordinates.
inline std::vector<numerics::Vec> sample_gaussian_prior(std::size_t d_prime, std::size_t batch,
                                                        numerics::RandomStream& rng) {
    std::vector<numerics::Vec> zs;
    zs.reserve(batch);
    for (std::size_t b = 0; b < batch; ++b) {
        numerics::Vec z(d_prime);
        for (double& v : z) v = rng.gaussian();
        zs.push_back(std::move(z));
    }
    return zs;
}

}  // namespace faultgan::prior
