#pragma once

#include <cmath>
#include <cstdint>

#include <faultgan/neural/Mlp.hpp>

namespace faultgan::neural {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    bool ascend = false;  // gradient ascent when true
};

struct AdamState {
    std::vector<LayerGrads> m, v;
    std::int64_t step = 0;

    static AdamState zeros_like(const MlpParams& p) {
        AdamState s;
        s.m = MlpGrads::zeros_like(p).layers;
        s.v = MlpGrads::zeros_like(p).layers;
        return s;
    }
};

/// Standard Adam moment update with bias correction.
inline void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state,
                      const AdamConfig& cfg) {
    state.step += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    const double sign = cfg.ascend ? 1.0 : -1.0;

    for (std::size_t li = 0; li < params.layers.size(); ++li) {
        auto& w = params.layers[li].weight.data();
        auto& b = params.layers[li].bias;
        const auto& gw = grads.layers[li].weight.data();
        const auto& gb = grads.layers[li].bias;
        auto& mw = state.m[li].weight.data();
        auto& mb = state.m[li].bias;
        auto& vw = state.v[li].weight.data();
        auto& vb = state.v[li].bias;

        for (std::size_t i = 0; i < w.size(); ++i) {
            mw[i] = cfg.beta1 * mw[i] + (1.0 - cfg.beta1) * gw[i];
            vw[i] = cfg.beta2 * vw[i] + (1.0 - cfg.beta2) * gw[i] * gw[i];
            w[i] += sign * cfg.lr * (mw[i] / bc1) / (std::sqrt(vw[i] / bc2) + cfg.eps);
        }
        for (std::size_t i = 0; i < b.size(); ++i) {
            mb[i] = cfg.beta1 * mb[i] + (1.0 - cfg.beta1) * gb[i];
            vb[i] = cfg.beta2 * vb[i] + (1.0 - cfg.beta2) * gb[i] * gb[i];
            b[i] += sign * cfg.lr * (mb[i] / bc1) / (std::sqrt(vb[i] / bc2) + cfg.eps);
        }
    }
}

}  // namespace faultgan::neural
