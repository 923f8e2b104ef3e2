#pragma once

#include <optional>
#include <span>
#include <vector>

#include "travnet/layers.hpp"

namespace travnet {

/// Batch of score vectors, one row per frame (batch x k).
using ScoreMatrix = RowMatrix<double>;

struct LossConfig {
    double alpha = 1.5;     // weight of the squared positive part of (prediction - target)
    double lambda = 5e-4;   // squared L2 weight on encoder + head parameters
    bool safety_enabled = true;

    double effective_alpha() const { return safety_enabled ? alpha : 0.0; }
    void validate() const;
};

/// Probability clamp used inside the logs of the domain loss.
inline constexpr double kProbabilityEpsilon = 1e-7;

/// Sum over batch and sections of (t - prediction)^2.
double mse_loss(const ScoreMatrix& target, const ScoreMatrix& prediction);

/// Sum over batch and sections of (prediction - t)^2 + alpha * max(0, prediction - t)^2,
/// plus lambda * theta_squared_norm. The norm is required when lambda > 0.
double safety_loss(const ScoreMatrix& target, const ScoreMatrix& prediction, const LossConfig& cfg,
                   std::optional<double> theta_squared_norm = std::nullopt);

/// d(safety_loss)/d(prediction), excluding the regularizer. The kink at
/// prediction == t takes subgradient 0 for the penalty term.
ScoreMatrix safety_loss_grad(const ScoreMatrix& target, const ScoreMatrix& prediction, const LossConfig& cfg);

/// Binary cross-entropy summed over the batch. Labels: 0 = source, 1 = target.
double domain_bce_loss(std::span<const double> probabilities, std::span<const double> labels);

/// d(domain_bce_loss)/d(probability) per sample.
std::vector<double> domain_bce_grad(std::span<const double> probabilities, std::span<const double> labels);

/// Squared L2 norm over a parameter group.
template <typename T>
double squared_norm(const std::vector<Parameter<T>*>& params) {
    double sum = 0.0;
    for (const auto* p : params) {
        for (T v : p->value) {
            sum += static_cast<double>(v) * static_cast<double>(v);
        }
    }
    return sum;
}

/// Adds the regularizer gradient 2 * lambda * theta to each parameter's grad.
template <typename T>
void add_l2_gradient(const std::vector<Parameter<T>*>& params, double lambda) {
    if (lambda == 0.0) {
        return;
    }
    const T factor = static_cast<T>(2.0 * lambda);
    for (auto* p : params) {
        for (std::size_t i = 0; i < p->value.size(); ++i) {
            p->grad[i] += factor * p->value[i];
        }
    }
}

/// Converts a (B, k, 1, 1) network output to a score matrix.
template <typename T>
ScoreMatrix to_score_matrix(const Tensor<T>& raw) {
    ScoreMatrix m(raw.n(), static_cast<Eigen::Index>(raw.sample_size()));
    for (std::size_t i = 0; i < raw.size(); ++i) {
        m.data()[i] = static_cast<double>(raw[i]);
    }
    return m;
}

template <typename T>
Tensor<T> to_tensor(const ScoreMatrix& m) {
    Tensor<T> t(static_cast<int>(m.rows()), static_cast<int>(m.cols()), 1, 1);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = static_cast<T>(m.data()[i]);
    }
    return t;
}

}  // namespace travnet
