#include "travnet/losses.hpp"

#include <algorithm>
#include <cmath>

namespace travnet {

namespace {

void check_shapes(const ScoreMatrix& target, const ScoreMatrix& prediction) {
    if (target.rows() != prediction.rows() || target.cols() != prediction.cols()) {
        throw ConfigError(fmt::format("score shapes differ: {}x{} vs {}x{}", target.rows(), target.cols(),
                                      prediction.rows(), prediction.cols()));
    }
}

}  // namespace

void LossConfig::validate() const {
    if (!(alpha >= 0.0) || !(lambda >= 0.0)) {
        throw ConfigError("alpha and lambda must be non-negative");
    }
}

double mse_loss(const ScoreMatrix& target, const ScoreMatrix& prediction) {
    check_shapes(target, prediction);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < target.size(); ++i) {
        const double d = target.data()[i] - prediction.data()[i];
        sum += d * d;
    }
    return sum;
}

double safety_loss(const ScoreMatrix& target, const ScoreMatrix& prediction, const LossConfig& cfg,
                   std::optional<double> theta_squared_norm) {
    check_shapes(target, prediction);
    cfg.validate();
    const double alpha = cfg.effective_alpha();
    // The squared-error part is literally mse_loss, so alpha = 0 reproduces it bit for bit.
    double sum = mse_loss(target, prediction);
    if (alpha > 0.0) {
        double penalty = 0.0;
        for (Eigen::Index i = 0; i < target.size(); ++i) {
            const double over = std::max(0.0, prediction.data()[i] - target.data()[i]);
            penalty += over * over;
        }
        sum += alpha * penalty;
    }
    if (cfg.lambda > 0.0) {
        if (!theta_squared_norm) {
            throw ConfigError("safety loss with lambda > 0 needs the parameter norm");
        }
        sum += cfg.lambda * *theta_squared_norm;
    }
    return sum;
}

ScoreMatrix safety_loss_grad(const ScoreMatrix& target, const ScoreMatrix& prediction, const LossConfig& cfg) {
    check_shapes(target, prediction);
    const double alpha = cfg.effective_alpha();
    ScoreMatrix g(prediction.rows(), prediction.cols());
    for (Eigen::Index i = 0; i < target.size(); ++i) {
        const double d = prediction.data()[i] - target.data()[i];
        g.data()[i] = 2.0 * d + (d > 0.0 ? 2.0 * alpha * d : 0.0);
    }
    return g;
}

namespace {

double checked_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(fmt::format("probability {} is outside [0, 1]", p));
    }
    return std::min(1.0 - kProbabilityEpsilon, std::max(kProbabilityEpsilon, p));
}

void check_labels(std::span<const double> probabilities, std::span<const double> labels) {
    if (probabilities.size() != labels.size()) {
        throw ConfigError("probabilities and labels differ in length");
    }
    for (double l : labels) {
        if (l != 0.0 && l != 1.0) {
            throw ConfigError(fmt::format("domain label {} is not 0 or 1", l));
        }
    }
}

}  // namespace

double domain_bce_loss(std::span<const double> probabilities, std::span<const double> labels) {
    check_labels(probabilities, labels);
    double sum = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double p = checked_probability(probabilities[i]);
        const double l = labels[i];
        sum -= l * std::log(p) + (1.0 - l) * std::log(1.0 - p);
    }
    return sum;
}

std::vector<double> domain_bce_grad(std::span<const double> probabilities, std::span<const double> labels) {
    check_labels(probabilities, labels);
    std::vector<double> g(probabilities.size());
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double p = checked_probability(probabilities[i]);
        const double l = labels[i];
        g[i] = -l / p + (1.0 - l) / (1.0 - p);
    }
    return g;
}

}  // namespace travnet
