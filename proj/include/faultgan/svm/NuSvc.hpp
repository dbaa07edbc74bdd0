#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <faultgan/numerics/Matrix.hpp>
#include <faultgan/numerics/RandomStream.hpp>
#include <faultgan/svm/Kernel.hpp>

namespace faultgan::svm {

/// Labels are +1 (normal) and -1 (fault) internally.
inline constexpr int kNormalClass = +1;
inline constexpr int kFaultClass = -1;

struct SvmModel {
    std::vector<numerics::Vec> support_vectors;
    numerics::Vec alpha_c;  // alpha_i * c_i per support vector
    double bias = 0.0;      // decision(x) = sum alpha_c K(sv, x) - bias
    double rho = 0.0;       // functional margin of the free support vectors
    KernelSpec kernel;
    double nu = 0.5;

    std::size_t dim() const {
        return support_vectors.empty() ? 0 : support_vectors.front().size();
    }
};

struct NuSvcOptions {
    double tol = 1e-3;
    std::size_t max_iter = 1000000;
};

namespace detail {

struct WorkingPair {
    std::size_t up = 0, low = 0;
    double violation = -std::numeric_limits<double>::infinity();
    bool valid = false;
};

// Maximal violating pair within one class: alpha_up can grow, alpha_low can
// shrink, both moves keep the per-class sum fixed.
inline WorkingPair select_pair(const std::vector<std::size_t>& members,
                               const numerics::Vec& alpha, const numerics::Vec& grad, double ub) {
    WorkingPair pair;
    double g_up = std::numeric_limits<double>::infinity();
    double g_low = -std::numeric_limits<double>::infinity();
    bool has_up = false, has_low = false;
    for (std::size_t i : members) {
        if (alpha[i] < ub && grad[i] < g_up) {
            g_up = grad[i];
            pair.up = i;
            has_up = true;
        }
        if (alpha[i] > 0.0 && grad[i] > g_low) {
            g_low = grad[i];
            pair.low = i;
            has_low = true;
        }
    }
    if (has_up && has_low && pair.up != pair.low) {
        pair.violation = g_low - g_up;
        pair.valid = true;
    }
    return pair;
}

}  // namespace detail

/// nu-SVC dual by two-variable working-set decomposition:
///   min 1/2 a^T Q a   s.t. 0 <= a_i <= 1/l, sum_{+} a = sum_{-} a = nu/2
/// with Q_ij = c_i c_j K_ij. Pairs are chosen within one class (the maximal
/// violating pair), so both equality constraints hold by construction.
/// Deterministic given data order.
inline SvmModel train_nu_svc(const std::vector<numerics::Vec>& xs, const std::vector<int>& cs,
                             const KernelSpec& spec, double nu, const NuSvcOptions& opt = {}) {
    const std::size_t l = xs.size();
    if (l == 0 || cs.size() != l) throw std::domain_error("train_nu_svc: bad training set");
    spec.validate();

    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < l; ++i) {
        if (cs[i] == kNormalClass) pos.push_back(i);
        else if (cs[i] == kFaultClass) neg.push_back(i);
        else throw std::domain_error("train_nu_svc: labels must be +1/-1");
    }
    if (pos.empty() || neg.empty())
        throw std::domain_error("train_nu_svc: both classes must be present");

    const double feasible =
        2.0 * static_cast<double>(std::min(pos.size(), neg.size())) / static_cast<double>(l);
    if (!(nu > 0.0 && nu < 1.0) || nu > feasible)
        throw std::domain_error("train_nu_svc: nu=" + std::to_string(nu) +
                                " infeasible, need 0 < nu <= 2*min(l+,l-)/l = " +
                                std::to_string(feasible));

    // Gram matrix (data-space kernels, Q folds in the signs).
    numerics::Matrix k(l, l);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = i; j < l; ++j) k(i, j) = k(j, i) = kernel_eval(spec, xs[i], xs[j]);

    const double ub = 1.0 / static_cast<double>(l);
    numerics::Vec alpha(l, 0.0);
    for (const auto* cls : {&pos, &neg}) {
        double remaining = nu / 2.0;
        for (std::size_t i : *cls) {
            alpha[i] = std::min(ub, remaining);
            remaining -= alpha[i];
            if (remaining <= 0.0) break;
        }
    }

    // grad_i = (Q alpha)_i = c_i * sum_j alpha_j c_j K_ij.
    numerics::Vec grad(l, 0.0);
    for (std::size_t i = 0; i < l; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < l; ++j)
            if (alpha[j] > 0.0) s += alpha[j] * static_cast<double>(cs[j]) * k(i, j);
        grad[i] = static_cast<double>(cs[i]) * s;
    }

    std::size_t iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        const auto pair_pos = detail::select_pair(pos, alpha, grad, ub);
        const auto pair_neg = detail::select_pair(neg, alpha, grad, ub);
        double violation = std::max(pair_pos.violation, pair_neg.violation);
        if (!pair_pos.valid && !pair_neg.valid) break;
        if (violation < opt.tol) break;

        detail::WorkingPair pair;
        if (pair_pos.valid && pair_neg.valid) {
            pair = pair_pos.violation >= pair_neg.violation ? pair_pos : pair_neg;
            // Deterministic tie break independent of which class is labeled +1.
            if (pair_pos.violation == pair_neg.violation)
                pair = std::min(pair_pos.up, pair_pos.low) <= std::min(pair_neg.up, pair_neg.low)
                           ? pair_pos
                           : pair_neg;
        } else {
            pair = pair_pos.valid ? pair_pos : pair_neg;
        }

        const std::size_t i = pair.up, j = pair.low;
        const double eta = k(i, i) + k(j, j) - 2.0 * k(i, j);
        double t = eta > 1e-12 ? (grad[j] - grad[i]) / eta
                               : std::numeric_limits<double>::infinity();
        t = std::min({t, ub - alpha[i], alpha[j]});
        if (!(t > 0.0)) continue;

        alpha[i] += t;
        alpha[j] -= t;
        // Snap float dust onto the box so the constraints hold exactly.
        if (alpha[i] > ub - 1e-10 * ub) alpha[i] = ub;
        if (alpha[j] < 1e-10 * ub) alpha[j] = 0.0;

        for (std::size_t r = 0; r < l; ++r)
            grad[r] += t * static_cast<double>(cs[r]) * static_cast<double>(cs[i]) *
                       (k(r, i) - k(r, j));
    }
    if (iter == opt.max_iter)
        throw std::runtime_error("train_nu_svc: no convergence after " +
                                 std::to_string(opt.max_iter) + " iterations");

    // Recover b and rho from the KKT boundary values: free SVs of class c
    // satisfy f_i = b + rho*c with f_i = c_i grad_i.
    double r_pos = 0.0, r_neg = 0.0;
    for (const auto* cls : {&pos, &neg}) {
        const double sign = cls == &pos ? 1.0 : -1.0;
        double sum = 0.0;
        std::size_t count = 0;
        double upper = std::numeric_limits<double>::infinity();
        double lower = -std::numeric_limits<double>::infinity();
        for (std::size_t i : *cls) {
            const double f = static_cast<double>(cs[i]) * grad[i];
            if (alpha[i] > 0.0 && alpha[i] < ub) {
                sum += f;
                ++count;
            } else if (alpha[i] == 0.0) {
                if (sign > 0) upper = std::min(upper, f);
                else lower = std::max(lower, f);
            } else {
                if (sign > 0) lower = std::max(lower, f);
                else upper = std::min(upper, f);
            }
        }
        double r;
        if (count > 0) r = sum / static_cast<double>(count);
        else if (std::isfinite(upper) && std::isfinite(lower)) r = 0.5 * (upper + lower);
        else r = std::isfinite(upper) ? upper : lower;
        (sign > 0 ? r_pos : r_neg) = r;
    }

    SvmModel model;
    model.kernel = spec;
    model.nu = nu;
    model.bias = 0.5 * (r_pos + r_neg);
    model.rho = 0.5 * (r_pos - r_neg);
    for (std::size_t i = 0; i < l; ++i)
        if (alpha[i] > 0.0) {
            model.support_vectors.push_back(xs[i]);
            model.alpha_c.push_back(alpha[i] * static_cast<double>(cs[i]));
        }
    return model;
}

/// <h1, phi(x)> - h2 realized through the kernel trick.
inline double decision_value(const SvmModel& m, const numerics::Vec& x) {
    if (m.support_vectors.empty()) throw std::domain_error("decision_value: empty model");
    if (x.size() != m.dim())
        throw std::domain_error("decision_value: input length " + std::to_string(x.size()) +
                                " != " + std::to_string(m.dim()));
    double f = 0.0;
    for (std::size_t i = 0; i < m.support_vectors.size(); ++i)
        f += m.alpha_c[i] * kernel_eval(m.kernel, m.support_vectors[i], x);
    return f - m.bias;
}

/// Ties (decision exactly 0) go to the fault class.
inline int svm_predict(const SvmModel& m, const numerics::Vec& x) {
    return decision_value(m, x) > 0.0 ? kNormalClass : kFaultClass;
}

/// Minimum signed functional margin over the dataset.
inline double margin_delta(const SvmModel& m, const std::vector<numerics::Vec>& xs,
                           const std::vector<int>& cs) {
    if (xs.empty() || xs.size() != cs.size()) throw std::domain_error("margin_delta: bad dataset");
    double delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i)
        delta = std::min(delta, static_cast<double>(cs[i]) * decision_value(m, xs[i]));
    return delta;
}

struct CrossValRow {
    double nu = 0.0;
    double accuracy = 0.0;
};

struct CrossValResult {
    double best_nu = 0.0;
    std::vector<CrossValRow> table;
};

/// Stratified k-fold accuracy per nu; best = argmax, ties to the smallest nu.
/// A nu that is infeasible on some fold scores 0. Folds that lose a class are
/// reshuffled with a fresh seed, at most 5 attempts.
inline CrossValResult cross_validate_nu(const std::vector<numerics::Vec>& xs,
                                        const std::vector<int>& cs, const KernelSpec& spec,
                                        const std::vector<double>& grid, std::size_t folds,
                                        std::uint64_t seed, const NuSvcOptions& opt = {}) {
    if (folds < 2) throw std::domain_error("cross_validate_nu: need at least 2 folds");
    if (grid.empty()) throw std::domain_error("cross_validate_nu: empty grid");
    if (xs.size() != cs.size() || xs.empty())
        throw std::domain_error("cross_validate_nu: bad dataset");

    std::vector<std::size_t> fold_of(xs.size());
    bool folds_ok = false;
    for (std::uint64_t attempt = 0; attempt < 5 && !folds_ok; ++attempt) {
        numerics::RandomStream rng(seed + attempt);
        // Round-robin per class after a shuffle keeps folds stratified.
        for (int cls : {kNormalClass, kFaultClass}) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < cs.size(); ++i)
                if (cs[i] == cls) members.push_back(i);
            for (std::size_t i = members.size(); i > 1; --i)
                std::swap(members[i - 1], members[rng.index(i)]);
            for (std::size_t i = 0; i < members.size(); ++i) fold_of[members[i]] = i % folds;
        }
        folds_ok = true;
        for (std::size_t f = 0; f < folds && folds_ok; ++f) {
            bool train_pos = false, train_neg = false;
            for (std::size_t i = 0; i < cs.size(); ++i) {
                if (fold_of[i] == f) continue;
                (cs[i] == kNormalClass ? train_pos : train_neg) = true;
            }
            folds_ok = train_pos && train_neg;
        }
    }
    if (!folds_ok)
        throw std::runtime_error("cross_validate_nu: could not stratify folds after 5 attempts");

    CrossValResult result;
    for (double nu : grid) {
        double correct = 0.0, total = 0.0;
        bool feasible = true;
        for (std::size_t f = 0; f < folds && feasible; ++f) {
            std::vector<numerics::Vec> train_x, test_x;
            std::vector<int> train_c, test_c;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (fold_of[i] == f) {
                    test_x.push_back(xs[i]);
                    test_c.push_back(cs[i]);
                } else {
                    train_x.push_back(xs[i]);
                    train_c.push_back(cs[i]);
                }
            }
            try {
                const SvmModel m = train_nu_svc(train_x, train_c, spec, nu, opt);
                for (std::size_t i = 0; i < test_x.size(); ++i) {
                    correct += svm_predict(m, test_x[i]) == test_c[i] ? 1.0 : 0.0;
                    total += 1.0;
                }
            } catch (const std::domain_error&) {
                feasible = false;  // infeasible nu on this fold
            }
        }
        result.table.push_back({nu, feasible && total > 0.0 ? correct / total : 0.0});
    }

    result.best_nu = result.table.front().nu;
    double best_acc = result.table.front().accuracy;
    for (const auto& row : result.table)
        if (row.accuracy > best_acc ||
            (row.accuracy == best_acc && row.nu < result.best_nu)) {
            best_acc = row.accuracy;
            result.best_nu = row.nu;
        }
    return result;
}

}  // namespace faultgan::svm
