#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "travnet/layers.hpp"

namespace travnet {

struct AdamConfig {
    double lr = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct SgdConfig {
    double lr = 1e-3;
    double momentum = 0.9;
};

/// Adaptive-moment optimizer with bias correction.
template <typename T>
class Adam {
public:
    Adam(std::vector<Parameter<T>*> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
        if (!(cfg_.lr > 0.0)) {
            throw ConfigError("learning rate must be positive");
        }
        for (auto* p : params_) {
            m_.emplace_back(p->size(), 0.0);
            v_.emplace_back(p->size(), 0.0);
        }
    }

    void step() {
        ++steps_;
        const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(steps_));
        const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(steps_));
        for (std::size_t k = 0; k < params_.size(); ++k) {
            auto& p = *params_[k];
            auto& m = m_[k];
            auto& v = v_[k];
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double g = p.grad[i];
                m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
                v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
                const double update = cfg_.lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg_.eps);
                p.value[i] = static_cast<T>(p.value[i] - update);
            }
        }
    }

    std::int64_t steps() const { return steps_; }
    const AdamConfig& config() const { return cfg_; }

    // State access for checkpoints.
    std::vector<std::vector<double>>& first_moments() { return m_; }
    std::vector<std::vector<double>>& second_moments() { return v_; }
    void set_steps(std::int64_t s) { steps_ = s; }

private:
    std::vector<Parameter<T>*> params_;
    AdamConfig cfg_;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
    std::int64_t steps_ = 0;
};

/// Gradient descent with heavy-ball momentum: v = mu * v + g; p -= lr * v.
template <typename T>
class SgdMomentum {
public:
    SgdMomentum(std::vector<Parameter<T>*> params, SgdConfig cfg) : params_(std::move(params)), cfg_(cfg) {
        if (!(cfg_.lr > 0.0) || cfg_.momentum < 0.0) {
            throw ConfigError("invalid SGD configuration");
        }
        for (auto* p : params_) {
            velocity_.emplace_back(p->size(), 0.0);
        }
    }

    void step() {
        for (std::size_t k = 0; k < params_.size(); ++k) {
            auto& p = *params_[k];
            auto& vel = velocity_[k];
            for (std::size_t i = 0; i < p.size(); ++i) {
                vel[i] = cfg_.momentum * vel[i] + p.grad[i];
                p.value[i] = static_cast<T>(p.value[i] - cfg_.lr * vel[i]);
            }
        }
    }

    const SgdConfig& config() const { return cfg_; }
    std::vector<std::vector<double>>& velocity() { return velocity_; }

private:
    std::vector<Parameter<T>*> params_;
    SgdConfig cfg_;
    std::vector<std::vector<double>> velocity_;
};

}  // namespace travnet
