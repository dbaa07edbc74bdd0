#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <faultgan/numerics/Matrix.hpp>
#include <faultgan/numerics/RandomStream.hpp>

namespace faultgan::neural {

enum class Activation { Identity, Tanh, Sigmoid, Relu };

inline const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Tanh: return "tanh";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Relu: return "relu";
    }
    return "identity";
}

inline Activation parse_activation(const std::string& name) {
    if (name == "identity") return Activation::Identity;
    if (name == "tanh") return Activation::Tanh;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "relu") return Activation::Relu;
    throw std::domain_error("unknown activation '" + name + "'");
}

struct Layer {
    numerics::Matrix weight;  // out x in
    numerics::Vec bias;       // out
    Activation act = Activation::Identity;

    std::size_t in_size() const { return weight.cols(); }
    std::size_t out_size() const { return weight.rows(); }
};

struct MlpParams {
    std::vector<Layer> layers;

    std::size_t input_size() const { return layers.front().in_size(); }
    std::size_t output_size() const { return layers.back().out_size(); }

    void validate() const {
        if (layers.empty()) throw std::domain_error("mlp: no layers");
        for (std::size_t i = 0; i < layers.size(); ++i) {
            const Layer& l = layers[i];
            if (l.bias.size() != l.out_size())
                throw std::domain_error("mlp: bias length mismatch in layer " + std::to_string(i));
            if (i > 0 && l.in_size() != layers[i - 1].out_size())
                throw std::domain_error("mlp: layer sizes do not chain at layer " +
                                        std::to_string(i));
            numerics::require_finite(l.weight, "mlp weight");
            numerics::require_finite(l.bias, "mlp bias");
        }
    }
};

/// Xavier-uniform initialization, seeded through the caller's stream.
inline MlpParams make_mlp(const std::vector<std::size_t>& sizes,
                          const std::vector<Activation>& acts, numerics::RandomStream& rng) {
    if (sizes.size() < 2 || acts.size() != sizes.size() - 1)
        throw std::domain_error("make_mlp: need n+1 sizes and n activations");
    MlpParams p;
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        Layer l;
        l.weight = numerics::Matrix(sizes[i + 1], sizes[i]);
        const double limit =
            std::sqrt(6.0 / static_cast<double>(sizes[i] + sizes[i + 1]));
        for (double& w : l.weight.data()) w = rng.uniform(-limit, limit);
        l.bias.assign(sizes[i + 1], 0.0);
        l.act = acts[i];
        p.layers.push_back(std::move(l));
    }
    return p;
}

namespace detail {

inline double apply_activation(Activation a, double z) {
    switch (a) {
        case Activation::Identity: return z;
        case Activation::Tanh: return std::tanh(z);
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::Relu: return z > 0.0 ? z : 0.0;
    }
    return z;
}

// Derivative from the layer output (pre-activation for relu's kink handled
// via the sign of the output, which matches z > 0).
inline double activation_grad(Activation a, double out) {
    switch (a) {
        case Activation::Identity: return 1.0;
        case Activation::Tanh: return 1.0 - out * out;
        case Activation::Sigmoid: return out * (1.0 - out);
        case Activation::Relu: return out > 0.0 ? 1.0 : 0.0;
    }
    return 1.0;
}

}  // namespace detail

/// Per-layer activations kept for the backward pass.
struct ForwardCache {
    std::vector<numerics::Vec> activations;  // [0]=input, [i+1]=output of layer i
};

inline numerics::Vec mlp_forward(const MlpParams& p, const numerics::Vec& x,
                                 ForwardCache* cache = nullptr) {
    if (x.size() != p.input_size())
        throw std::domain_error("mlp_forward: input length " + std::to_string(x.size()) +
                                " != " + std::to_string(p.input_size()));
    if (cache) {
        cache->activations.clear();
        cache->activations.push_back(x);
    }
    numerics::Vec a = x;
    for (const Layer& l : p.layers) {
        numerics::Vec z = numerics::matvec(l.weight, a);
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] = detail::apply_activation(l.act, z[i] + l.bias[i]);
        a = std::move(z);
        if (cache) cache->activations.push_back(a);
    }
    return a;
}

struct LayerGrads {
    numerics::Matrix weight;
    numerics::Vec bias;
};

struct MlpGrads {
    std::vector<LayerGrads> layers;

    static MlpGrads zeros_like(const MlpParams& p) {
        MlpGrads g;
        g.layers.reserve(p.layers.size());
        for (const Layer& l : p.layers)
            g.layers.push_back({numerics::Matrix(l.out_size(), l.in_size()),
                                numerics::Vec(l.out_size(), 0.0)});
        return g;
    }

    void scale(double s) {
        for (auto& l : layers) {
            for (double& v : l.weight.data()) v *= s;
            for (double& v : l.bias) v *= s;
        }
    }
};

/// Exact backpropagation. Accumulates parameter gradients into `grads` and
/// returns the gradient with respect to the input.
inline numerics::Vec mlp_backward(const MlpParams& p, const ForwardCache& cache,
                                  const numerics::Vec& out_grad, MlpGrads& grads) {
    const std::size_t n_layers = p.layers.size();
    if (cache.activations.size() != n_layers + 1)
        throw std::domain_error("mlp_backward: cache does not match network depth");
    if (grads.layers.size() != n_layers)
        throw std::domain_error("mlp_backward: gradient container does not match network");
    if (out_grad.size() != p.output_size())
        throw std::domain_error("mlp_backward: output gradient length mismatch");
    for (std::size_t i = 0; i <= n_layers; ++i) {
        const std::size_t want = i == 0 ? p.input_size() : p.layers[i - 1].out_size();
        if (cache.activations[i].size() != want)
            throw std::domain_error("mlp_backward: cache activation " + std::to_string(i) +
                                    " has wrong length");
    }

    numerics::Vec delta = out_grad;
    for (std::size_t li = n_layers; li-- > 0;) {
        const Layer& l = p.layers[li];
        const numerics::Vec& out = cache.activations[li + 1];
        const numerics::Vec& in = cache.activations[li];

        for (std::size_t i = 0; i < delta.size(); ++i)
            delta[i] *= detail::activation_grad(l.act, out[i]);

        LayerGrads& g = grads.layers[li];
        for (std::size_t i = 0; i < l.out_size(); ++i) {
            g.bias[i] += delta[i];
            for (std::size_t j = 0; j < l.in_size(); ++j) g.weight(i, j) += delta[i] * in[j];
        }

        numerics::Vec prev(l.in_size(), 0.0);
        for (std::size_t i = 0; i < l.out_size(); ++i)
            for (std::size_t j = 0; j < l.in_size(); ++j) prev[j] += l.weight(i, j) * delta[i];
        delta = std::move(prev);
    }
    return delta;
}

}  // namespace faultgan::neural
