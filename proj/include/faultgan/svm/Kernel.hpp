#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <faultgan/numerics/Matrix.hpp>

namespace faultgan::svm {

struct KernelSpec {
    enum class Kind { Rbf, Polynomial };

    Kind kind = Kind::Rbf;
    double sigma = 1.0;  // rbf width
    int degree = 3;      // polynomial
    double coef0 = 1.0;
    double scale = 1.0;

    void validate() const {
        if (kind == Kind::Rbf && !(sigma > 0.0))
            throw std::domain_error("kernel: rbf sigma must be positive");
        if (kind == Kind::Polynomial && degree < 1)
            throw std::domain_error("kernel: polynomial degree must be >= 1");
    }

    std::string name() const { return kind == Kind::Rbf ? "rbf" : "polynomial"; }

    static KernelSpec rbf(double sigma = 1.0) {
        KernelSpec k;
        k.kind = Kind::Rbf;
        k.sigma = sigma;
        return k;
    }

    static KernelSpec polynomial(int degree = 3, double coef0 = 1.0, double scale = 1.0) {
        KernelSpec k;
        k.kind = Kind::Polynomial;
        k.degree = degree;
        k.coef0 = coef0;
        k.scale = scale;
        return k;
    }
};

/// RBF: exp(-||x-y||^2 / (2 sigma^2)); polynomial: (scale <x,y> + coef0)^degree.
inline double kernel_eval(const KernelSpec& spec, const numerics::Vec& x,
                          const numerics::Vec& y) {
    if (x.size() != y.size())
        throw std::domain_error("kernel_eval: length mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
    spec.validate();
    if (spec.kind == KernelSpec::Kind::Rbf) {
        double sq = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - y[i];
            sq += d * d;
        }
        return std::exp(-sq / (2.0 * spec.sigma * spec.sigma));
    }
    return std::pow(spec.scale * numerics::dot(x, y) + spec.coef0, spec.degree);
}

}  // namespace faultgan::svm
