#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <faultgan/manifold/Distance.hpp>

namespace faultgan::manifold {

/// Biased V-statistic
///   MMD^2 = (1/N1^2) sum k(A,A) - (2/(N1 N2)) sum k(A,B) + (1/N2^2) sum k(B,B).
inline double mmd_squared(const std::vector<ManifoldPoint>& a,
                          const std::vector<ManifoldPoint>& b) {
    if (a.empty() || b.empty()) throw std::domain_error("mmd_squared: empty sample set");
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());

    double kaa = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        kaa += 1.0;  // k(P,P) = 1 on the diagonal
        for (std::size_t j = i + 1; j < a.size(); ++j) kaa += 2.0 * product_kernel(a[i], a[j]);
    }
    double kbb = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        kbb += 1.0;
        for (std::size_t j = i + 1; j < b.size(); ++j) kbb += 2.0 * product_kernel(b[i], b[j]);
    }
    double kab = 0.0;
    for (const auto& pa : a)
        for (const auto& pb : b) kab += product_kernel(pa, pb);

    return kaa / (n1 * n1) - 2.0 * kab / (n1 * n2) + kbb / (n2 * n2);
}

struct TestResult {
    double mmd = 0.0;        // sqrt of the V-statistic
    double threshold = 0.0;  // tau at the requested level
    bool reject = false;
};

/// Level-alpha two-sample test with the distribution-free threshold
///   tau = 2 sqrt(1/max(N1,N2)) (1 + sqrt(-log alpha)).
/// The default rejects when MMD exceeds tau; `literal_inequality` flips the
/// comparison to the direction printed in the source formulation.
inline TestResult two_sample_test(const std::vector<ManifoldPoint>& a,
                                  const std::vector<ManifoldPoint>& b, double alpha,
                                  bool literal_inequality = false) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("two_sample_test: alpha must lie in (0,1)");
    TestResult r;
    r.mmd = std::sqrt(std::max(mmd_squared(a, b), 0.0));
    const double n = static_cast<double>(std::max(a.size(), b.size()));
    r.threshold = 2.0 * std::sqrt(1.0 / n) * (1.0 + std::sqrt(-std::log(alpha)));
    r.reject = literal_inequality ? (r.mmd < r.threshold) : (r.mmd > r.threshold);
    return r;
}

}  // namespace faultgan::manifold
