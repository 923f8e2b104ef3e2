#include <doctest.h>

#include <cmath>
#include <random>

#include "travnet/losses.hpp"

using namespace travnet;

namespace {

ScoreMatrix one(double v) {
    ScoreMatrix m(1, 1);
    m(0, 0) = v;
    return m;
}

ScoreMatrix random_scores(std::mt19937_64& rng, int b, int k, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    ScoreMatrix m(b, k);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = u(rng);
    }
    return m;
}

}  // namespace

TEST_CASE("mse examples") {
    CHECK(mse_loss(one(0.8), one(0.8)) == 0.0);
    CHECK(mse_loss(one(0.8), one(0.6)) == doctest::Approx(0.04).epsilon(1e-12));
    CHECK_THROWS_AS(mse_loss(ScoreMatrix(2, 9), ScoreMatrix(2, 8)), ConfigError);
}

TEST_CASE("safety loss examples") {
    LossConfig cfg;
    cfg.alpha = 1.5;
    cfg.lambda = 0.0;
    CHECK(safety_loss(one(0.5), one(0.5), cfg) == 0.0);
    CHECK(std::abs(safety_loss(one(0.8), one(0.6), cfg) - 0.04) < 1e-9);
    CHECK(std::abs(safety_loss(one(0.6), one(0.8), cfg) - 0.10) < 1e-9);

    cfg.lambda = 0.5;
    CHECK(safety_loss(one(0.8), one(0.6), cfg, 2.0) == doctest::Approx(1.04));
    CHECK_THROWS_AS(safety_loss(one(0.8), one(0.6), cfg), ConfigError);

    cfg.safety_enabled = false;
    CHECK(cfg.effective_alpha() == 0.0);
    CHECK(safety_loss(one(0.6), one(0.8), cfg, 0.0) == doctest::Approx(0.04));

    LossConfig bad;
    bad.alpha = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("safety loss without penalty or regularizer is the plain squared error") {
    std::mt19937_64 rng(1);
    LossConfig cfg;
    cfg.alpha = 0.0;
    cfg.lambda = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto t = random_scores(rng, 5, 9, 0.0, 1.0);
        const auto p = random_scores(rng, 5, 9, -0.5, 1.5);
        CHECK(safety_loss(t, p, cfg) == mse_loss(t, p));
    }
}

TEST_CASE("safety loss gradient matches finite differences") {
    std::mt19937_64 rng(2);
    LossConfig cfg;
    cfg.alpha = 1.5;
    cfg.lambda = 0.0;
    const auto t = random_scores(rng, 4, 9, 0.0, 1.0);
    auto p = random_scores(rng, 4, 9, -0.2, 1.2);
    const auto g = safety_loss_grad(t, p, cfg);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double keep = p.data()[i];
        p.data()[i] = keep + 1e-7;
        const double up = safety_loss(t, p, cfg);
        p.data()[i] = keep - 1e-7;
        const double down = safety_loss(t, p, cfg);
        p.data()[i] = keep;
        CHECK(g.data()[i] == doctest::Approx((up - down) / 2e-7).epsilon(1e-6));
    }
    // overestimates cost (1 + alpha) times as much per unit of squared error
    CHECK(safety_loss_grad(one(0.5), one(0.7), cfg)(0, 0) == doctest::Approx(2.5 * 2 * 0.2));
    CHECK(safety_loss_grad(one(0.7), one(0.5), cfg)(0, 0) == doctest::Approx(-2 * 0.2));
}

TEST_CASE("domain cross-entropy") {
    const double log2 = std::log(2.0);
    CHECK(domain_bce_loss(std::vector{0.5}, std::vector{1.0}) == doctest::Approx(log2).epsilon(1e-12));
    CHECK(domain_bce_loss(std::vector{0.5}, std::vector{0.0}) == doctest::Approx(log2).epsilon(1e-12));
    CHECK(domain_bce_loss(std::vector{1.0 - 1e-12}, std::vector{1.0}) < 1e-6);
    CHECK(std::isfinite(domain_bce_loss(std::vector{1.0}, std::vector{0.0})));
    CHECK(domain_bce_loss(std::vector{0.5, 0.5}, std::vector{0.0, 1.0}) == doctest::Approx(2 * log2));

    CHECK_THROWS_AS(domain_bce_loss(std::vector{1.5}, std::vector{1.0}), ConfigError);
    CHECK_THROWS_AS(domain_bce_loss(std::vector{0.5}, std::vector{0.5}), ConfigError);
    CHECK_THROWS_AS(domain_bce_loss(std::vector{0.5}, std::vector<double>{}), ConfigError);

    const std::vector<double> p{0.3, 0.8};
    const std::vector<double> l{0.0, 1.0};
    const auto g = domain_bce_grad(p, l);
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto q = p;
        q[i] += 1e-7;
        const double up = domain_bce_loss(q, l);
        q[i] -= 2e-7;
        const double down = domain_bce_loss(q, l);
        CHECK(g[i] == doctest::Approx((up - down) / 2e-7).epsilon(1e-6));
    }
}

TEST_CASE("l2 regularizer helpers") {
    Parameter<float> a("a", {2});
    a.value = {1.0f, -2.0f};
    std::vector<Parameter<float>*> ps{&a};
    CHECK(squared_norm(ps) == 5.0);
    add_l2_gradient(ps, 0.25);
    CHECK(a.grad[0] == 0.5f);
    CHECK(a.grad[1] == -1.0f);
}
