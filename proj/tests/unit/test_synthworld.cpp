#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "travnet/checkpoint.hpp"
#include "travnet/synthworld.hpp"

using namespace travnet;

TEST_CASE("ground truth examples") {
    SceneSpec spec;
    spec.height = 100;
    spec.width = 90;
    CHECK(ground_truth(spec, 9) == TraversabilityVector::filled(9, 1.0));

    Obstacle o;
    o.x0 = 30;
    o.x1 = 60;
    o.y0 = 10;
    o.y1 = 40;  // bottom edge at row 39
    spec.obstacles = {o};
    const auto t = ground_truth(spec, 9);
    for (int i = 0; i < 9; ++i) {
        CHECK(t[i] == doctest::Approx(i >= 3 && i <= 5 ? 0.60 : 1.0).epsilon(1e-15));
    }
    CHECK(ground_truth_cutoffs(spec, 9)[4] == doctest::Approx(0.40));

    spec.obstacles = {Obstacle{0, 50, 90, 100}};
    CHECK(ground_truth(spec, 9) == TraversabilityVector::filled(9, 0.0));
}

TEST_CASE("ground truth matches the rasterization oracle") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const SceneSpec spec = oracle::random_scene(rng);
        for (int k : {1, 3, 9}) {
            CHECK(ground_truth(spec, k).values() == oracle::rasterized_scores(spec, k));
        }
    }
}

TEST_CASE("render composes texture, obstacles and noise") {
    SceneSpec spec;
    spec.height = 40;
    spec.width = 60;
    spec.seed = 9;
    CHECK(render(spec) == ground_texture(spec.ground, 40, 60, 9));
    CHECK(render(spec).in_unit_range());

    Obstacle full{0, 0, 60, 40, {0.2f, 0.4f, 0.6f}};
    spec.obstacles = {full};
    const ImageFrame solid = render(spec);
    for (int c = 0; c < 3; ++c) {
        CHECK(solid.at(c, 17, 33) == full.color[static_cast<std::size_t>(c)]);
    }

    spec.noise_level = 0.05;
    const ImageFrame noisy = render(spec);
    CHECK(noisy == render(spec));
    CHECK_FALSE(noisy == solid);
    CHECK(noisy.in_unit_range());

    spec.obstacles = {Obstacle{50, 0, 61, 10}};
    CHECK_THROWS_AS(render(spec), ConfigError);
}

TEST_CASE("domain sets share geometry and differ in appearance") {
    SceneDistribution d;
    d.height = 48;
    d.width = 80;
    const auto a = generate_domain_set(12, GroundStyle::asphalt_like, 21, d);
    const auto g = generate_domain_set(12, GroundStyle::grass_like, 21, d);
    REQUIRE(a.size() == 12);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].scores == g[i].scores);
        CHECK_FALSE(a[i].frame == g[i].frame);
        CHECK(a[i].domain == "on_road");
        CHECK(g[i].domain == "off_road");
        CHECK(a[i].scores.values() == oracle::rasterized_scores(a[i].spec, 9));
        CHECK(a[i].frame == render(a[i].spec));
    }
    CHECK_THROWS_AS(generate_domain_set(0, GroundStyle::grass_like, 1, d), ConfigError);
}

TEST_CASE("domain sets are reproducible") {
    SceneDistribution d;
    d.height = 32;
    d.width = 56;
    auto digest = [&](std::uint64_t seed) {
        std::string bytes;
        for (const auto& s : generate_domain_set(200, GroundStyle::asphalt_like, seed, d)) {
            bytes.append(reinterpret_cast<const char*>(s.frame.pixels.data()), s.frame.pixels.size() * sizeof(float));
            for (double v : s.scores.values()) {
                bytes.append(reinterpret_cast<const char*>(&v), sizeof v);
            }
        }
        return fnv1a_hex(bytes);
    };
    CHECK(digest(4) == digest(4));
    CHECK(digest(4) != digest(5));
}

TEST_CASE("style names") {
    CHECK(ground_style_from_string("grass") == GroundStyle::grass_like);
    CHECK(ground_style_from_string(to_string(GroundStyle::asphalt_like)) == GroundStyle::asphalt_like);
    CHECK_THROWS_AS(ground_style_from_string("sand"), ConfigError);
}
