#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <faultgan/neural/Adam.hpp>
#include <faultgan/neural/Loss.hpp>
#include <faultgan/neural/Mlp.hpp>
#include <faultgan/prior/SubspacePrior.hpp>
#include <faultgan/sim/Dataset.hpp>

namespace faultgan::ganae {

enum class PriorKind { Orthogonal, Gaussian };

inline const char* prior_name(PriorKind k) {
    return k == PriorKind::Orthogonal ? "orthogonal" : "gaussian";
}

inline PriorKind parse_prior(const std::string& name) {
    if (name == "orthogonal") return PriorKind::Orthogonal;
    if (name == "gaussian") return PriorKind::Gaussian;
    throw std::domain_error("unknown prior '" + name + "' (orthogonal|gaussian)");
}

/// D outputs are clamped to [eps, 1-eps] before the logs.
inline constexpr double kLogClamp = 1e-7;

struct TrainConfig {
    std::size_t epochs = 40;
    std::size_t batch = 32;
    double lr = 1e-3;
    PriorKind prior = PriorKind::Orthogonal;
    std::uint64_t seed = 1;
    double train_fraction = 0.9;
    double detect_threshold = 0.5;
    std::size_t encoding_dim = 0;  // resolved by the caller before training
    std::size_t window_len = 0;    // data prep, carried for downstream use
    std::size_t stride = 0;
    std::size_t warmstart_epochs = 0;  // optional reconstruction-only phase
};

/// Encoder E (d -> d'), decoder/generator G (d' -> d) and discriminator D
/// (d -> 1), trained jointly by ascent on the objective V. The generator's
/// sigmoid output keeps reconstructions inside [0,1]^d, so the normalized
/// loss term stays bounded.
struct GanAeModel {
    neural::MlpParams encoder;
    neural::MlpParams generator;
    neural::MlpParams discriminator;
    TrainConfig config;
    prior::SubspacePrior prior_basis;  // basis is empty for the gaussian prior
    numerics::Vec channel_min, channel_max;

    std::size_t input_dim() const { return encoder.input_size(); }
    std::size_t encoding_dim() const { return encoder.output_size(); }

    void validate() const {
        encoder.validate();
        generator.validate();
        discriminator.validate();
        if (generator.input_size() != encoding_dim() || generator.output_size() != input_dim())
            throw std::domain_error("ganae: encoder/generator dimensions do not chain");
        if (discriminator.input_size() != input_dim() || discriminator.output_size() != 1)
            throw std::domain_error("ganae: discriminator must map data space to a scalar");
        if (config.prior == PriorKind::Orthogonal &&
            (prior_basis.data_dim() != input_dim() ||
             prior_basis.encoding_dim() != encoding_dim()))
            throw std::domain_error("ganae: prior basis shape does not match the model");
    }
};

/// Fresh model with the default architecture:
/// E: d-64-d' (tanh, identity), G: d'-64-d (tanh, sigmoid),
/// D: d-64-32-1 (tanh, tanh, sigmoid).
inline GanAeModel make_model(std::size_t d, std::size_t d_prime, const TrainConfig& cfg,
                             numerics::RandomStream& rng) {
    using neural::Activation;
    GanAeModel m;
    m.config = cfg;
    m.config.encoding_dim = d_prime;
    m.encoder = neural::make_mlp({d, 64, d_prime}, {Activation::Tanh, Activation::Identity}, rng);
    m.generator = neural::make_mlp({d_prime, 64, d}, {Activation::Tanh, Activation::Sigmoid}, rng);
    m.discriminator = neural::make_mlp(
        {d, 64, 32, 1}, {Activation::Tanh, Activation::Tanh, Activation::Sigmoid}, rng);
    return m;
}

namespace detail {

inline double clamp_unit(double v) {
    return std::min(std::max(v, kLogClamp), 1.0 - kLogClamp);
}

}  // namespace detail

/// Batch-mean estimate of
///   V = E_x[(1 - L(x, G(E(x)))) + log D(x)] + E_z[log(1 - D(G(z)))]
/// with L the normalized reconstruction loss.
inline double eval_objective(const GanAeModel& m, const std::vector<numerics::Vec>& xs,
                             const std::vector<numerics::Vec>& zs) {
    if (xs.empty() || zs.empty()) throw std::domain_error("eval_objective: empty batch");
    double data_term = 0.0;
    for (const auto& x : xs) {
        const numerics::Vec xp = neural::mlp_forward(m.generator, neural::mlp_forward(m.encoder, x));
        const double lhat = neural::recon_loss(x, xp, neural::LossMode::Normalized);
        const double d = detail::clamp_unit(neural::mlp_forward(m.discriminator, x)[0]);
        data_term += (1.0 - lhat) + std::log(d);
    }
    double noise_term = 0.0;
    for (const auto& z : zs) {
        const numerics::Vec gz = neural::mlp_forward(m.generator, z);
        const double d = detail::clamp_unit(neural::mlp_forward(m.discriminator, gz)[0]);
        noise_term += std::log(1.0 - d);
    }
    return data_term / static_cast<double>(xs.size()) +
           noise_term / static_cast<double>(zs.size());
}

struct ObjectiveGrads {
    neural::MlpGrads encoder, generator, discriminator;
    double v = 0.0;
};

/// Gradients of V with respect to every parameter of E, G and D, plus the
/// objective value at the evaluation point. Exact for the clamped graph:
/// saturated clamps and the L=1 plateau contribute zero.
inline ObjectiveGrads objective_gradients(const GanAeModel& m, const std::vector<numerics::Vec>& xs,
                                          const std::vector<numerics::Vec>& zs) {
    if (xs.empty() || zs.empty()) throw std::domain_error("objective_gradients: empty batch");
    const double n1 = static_cast<double>(xs.size());
    const double n2 = static_cast<double>(zs.size());
    const double dim = static_cast<double>(m.input_dim());

    ObjectiveGrads out;
    out.encoder = neural::MlpGrads::zeros_like(m.encoder);
    out.generator = neural::MlpGrads::zeros_like(m.generator);
    out.discriminator = neural::MlpGrads::zeros_like(m.discriminator);

    neural::ForwardCache ce, cg, cd;
    for (const auto& x : xs) {
        const numerics::Vec e = neural::mlp_forward(m.encoder, x, &ce);
        const numerics::Vec xp = neural::mlp_forward(m.generator, e, &cg);
        const double draw = neural::mlp_forward(m.discriminator, x, &cd)[0];

        const double sq = neural::recon_loss(x, xp, neural::LossMode::Raw);
        const double lhat = std::min(sq / dim, 1.0);
        const double dcl = detail::clamp_unit(draw);
        const double term = (1.0 - lhat) + std::log(dcl);
        if (!std::isfinite(term))
            throw std::runtime_error("objective_gradients: non-finite data term");
        out.v += term / n1;

        if (sq / dim < 1.0) {
            numerics::Vec dxp(xp.size());
            for (std::size_t i = 0; i < xp.size(); ++i)
                dxp[i] = -(2.0 / dim) * (xp[i] - x[i]) / n1;
            const numerics::Vec de = neural::mlp_backward(m.generator, cg, dxp, out.generator);
            neural::mlp_backward(m.encoder, ce, de, out.encoder);
        }
        if (draw > kLogClamp && draw < 1.0 - kLogClamp)
            neural::mlp_backward(m.discriminator, cd, {1.0 / dcl / n1}, out.discriminator);
    }

    for (const auto& z : zs) {
        const numerics::Vec gz = neural::mlp_forward(m.generator, z, &cg);
        const double draw = neural::mlp_forward(m.discriminator, gz, &cd)[0];
        const double dcl = detail::clamp_unit(draw);
        const double term = std::log(1.0 - dcl);
        if (!std::isfinite(term))
            throw std::runtime_error("objective_gradients: non-finite noise term");
        out.v += term / n2;

        if (draw > kLogClamp && draw < 1.0 - kLogClamp) {
            const numerics::Vec dgz =
                neural::mlp_backward(m.discriminator, cd, {-1.0 / (1.0 - dcl) / n2},
                                     out.discriminator);
            neural::mlp_backward(m.generator, cg, dgz, out.generator);
        }
    }
    return out;
}

/// Eq. (6) oracle: D*(x) = p_data(x) / (p_data(x) + p_noise(x)) on a common
/// finite support. Test-side reference, not used in training.
inline numerics::Vec optimal_discriminator_oracle(const numerics::Vec& p_data,
                                                  const numerics::Vec& p_noise) {
    if (p_data.size() != p_noise.size())
        throw std::domain_error("optimal_discriminator_oracle: support size mismatch");
    numerics::Vec d(p_data.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double denom = p_data[i] + p_noise[i];
        if (denom <= 0.0)
            throw std::domain_error("optimal_discriminator_oracle: zero mass at support point " +
                                    std::to_string(i));
        d[i] = p_data[i] / denom;
    }
    return d;
}

/// Optimizer bundle for joint ascent over all three parameter sets.
struct TrainerState {
    neural::AdamState encoder, generator, discriminator;
    neural::AdamConfig adam;

    static TrainerState for_model(const GanAeModel& m) {
        TrainerState s;
        s.encoder = neural::AdamState::zeros_like(m.encoder);
        s.generator = neural::AdamState::zeros_like(m.generator);
        s.discriminator = neural::AdamState::zeros_like(m.discriminator);
        s.adam.lr = m.config.lr;
        s.adam.ascend = true;
        return s;
    }
};

/// Draws a z batch from the configured prior.
inline std::vector<numerics::Vec> draw_prior_batch(const GanAeModel& m,
                                                   const std::vector<numerics::Vec>& data,
                                                   std::size_t batch,
                                                   numerics::RandomStream& rng) {
    if (m.config.prior == PriorKind::Orthogonal)
        return prior::sample_orthogonal_prior(m.prior_basis, data, batch, rng);
    return prior::sample_gaussian_prior(m.encoding_dim(), batch, rng);
}

/// One joint gradient-ascent step on V over (theta_E, theta_G, theta_D);
/// z batch drawn fresh. Returns the objective at the pre-step parameters.
inline double train_step(GanAeModel& m, TrainerState& state, const std::vector<numerics::Vec>& xs,
                         const std::vector<numerics::Vec>& prior_data,
                         numerics::RandomStream& rng) {
    const auto zs = draw_prior_batch(m, prior_data, xs.size(), rng);
    ObjectiveGrads g = objective_gradients(m, xs, zs);
    neural::adam_step(m.encoder, g.encoder, state.encoder, state.adam);
    neural::adam_step(m.generator, g.generator, state.generator, state.adam);
    neural::adam_step(m.discriminator, g.discriminator, state.discriminator, state.adam);
    return g.v;
}

struct EpochStats {
    std::size_t epoch = 0;
    double v_mean = 0.0;
    double recon_train = 0.0;  // (1/(m sqrt d)) sum of raw losses
    double recon_test = 0.0;
};

struct TrainResult {
    GanAeModel model;
    std::vector<EpochStats> trace;
};

namespace detail {

inline double recon_aggregate_over(const GanAeModel& m,
                                   const std::vector<numerics::Vec>& xs) {
    if (xs.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& x : xs) {
        const numerics::Vec xp =
            neural::mlp_forward(m.generator, neural::mlp_forward(m.encoder, x));
        sum += neural::recon_loss(x, xp, neural::LossMode::Raw);
    }
    return neural::recon_aggregate(sum, xs.size(), m.input_dim());
}

}  // namespace detail

/// Trains on normal windows only. The windows are shuffled once per seed and
/// split train/test by config.train_fraction; all epochs are deterministic
/// per seed.
inline TrainResult train(const TrainConfig& cfg, const std::vector<numerics::Vec>& windows,
                         const prior::SubspacePrior& subspace_prior,
                         const numerics::Vec& channel_min = {},
                         const numerics::Vec& channel_max = {}) {
    if (windows.empty()) throw std::domain_error("train: no windows");
    const std::size_t d = windows.front().size();
    std::size_t d_prime = cfg.encoding_dim;
    if (cfg.prior == PriorKind::Orthogonal) {
        if (subspace_prior.basis.empty())
            throw std::domain_error("train: orthogonal prior requires a basis");
        d_prime = subspace_prior.encoding_dim();
    }
    if (d_prime == 0 || d_prime >= d)
        throw std::domain_error("train: encoding dimension must satisfy 0 < d' < d");

    numerics::RandomStream rng(cfg.seed);
    GanAeModel model = make_model(d, d_prime, cfg, rng);
    model.prior_basis = subspace_prior;
    model.channel_min = channel_min;
    model.channel_max = channel_max;
    model.validate();

    std::vector<std::size_t> order(windows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.index(i)]);

    const std::size_t n_train = std::max<std::size_t>(
        1, static_cast<std::size_t>(cfg.train_fraction * static_cast<double>(windows.size())));
    std::vector<numerics::Vec> train_xs, test_xs;
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < n_train ? train_xs : test_xs).push_back(windows[order[i]]);

    TrainerState state = TrainerState::for_model(model);
    TrainResult result;

    // Optional reconstruction-only warm start (default off).
    for (std::size_t we = 0; we < cfg.warmstart_epochs; ++we) {
        for (std::size_t b = 0; b < train_xs.size(); b += cfg.batch) {
            const std::size_t hi = std::min(b + cfg.batch, train_xs.size());
            std::vector<numerics::Vec> batch(train_xs.begin() + b, train_xs.begin() + hi);
            const auto zs = draw_prior_batch(model, train_xs, batch.size(), rng);
            ObjectiveGrads g = objective_gradients(model, batch, zs);
            neural::adam_step(model.encoder, g.encoder, state.encoder, state.adam);
            neural::adam_step(model.generator, g.generator, state.generator, state.adam);
        }
    }

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = train_xs.size(); i > 1; --i)
            std::swap(train_xs[i - 1], train_xs[rng.index(i)]);

        double v_sum = 0.0;
        std::size_t steps = 0;
        for (std::size_t b = 0; b < train_xs.size(); b += cfg.batch) {
            const std::size_t hi = std::min(b + cfg.batch, train_xs.size());
            std::vector<numerics::Vec> batch(train_xs.begin() + b, train_xs.begin() + hi);
            v_sum += train_step(model, state, batch, train_xs, rng);
            ++steps;
        }
        const double v_mean = steps ? v_sum / static_cast<double>(steps) : 0.0;
        if (!std::isfinite(v_mean))
            throw std::runtime_error("train: objective diverged at epoch " +
                                     std::to_string(epoch + 1));

        EpochStats stats;
        stats.epoch = epoch + 1;
        stats.v_mean = v_mean;
        stats.recon_train = detail::recon_aggregate_over(model, train_xs);
        stats.recon_test = detail::recon_aggregate_over(model, test_xs);
        result.trace.push_back(stats);
    }

    result.model = std::move(model);
    return result;
}

struct Detection {
    std::string label;  // "normal" or "fault"
    double score = 0.0;  // D(x)
};

/// Normal iff D(x) >= threshold.
inline Detection detect(const GanAeModel& m, const numerics::Vec& x) {
    const double score = neural::mlp_forward(m.discriminator, x)[0];
    Detection d;
    d.score = score;
    d.label = score >= m.config.detect_threshold ? "normal" : "fault";
    return d;
}

inline std::vector<numerics::Vec> encode(const GanAeModel& m,
                                         const std::vector<numerics::Vec>& windows) {
    std::vector<numerics::Vec> out;
    out.reserve(windows.size());
    for (const auto& x : windows) out.push_back(neural::mlp_forward(m.encoder, x));
    return out;
}

}  // namespace faultgan::ganae
