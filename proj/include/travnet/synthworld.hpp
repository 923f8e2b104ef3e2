#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "travnet/core.hpp"

namespace travnet {

enum class GroundStyle { asphalt_like, grass_like };

std::string to_string(GroundStyle style);
GroundStyle ground_style_from_string(const std::string& s);
/// Dataset domain label carried by scenes of a given style.
std::string domain_label(GroundStyle style);

/// Axis-aligned obstacle covering columns [x0, x1) and rows [y0, y1).
struct Obstacle {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;
    std::array<float, 3> color{0.5f, 0.5f, 0.5f};

    bool operator==(const Obstacle&) const = default;
};

struct SceneSpec {
    int height = 128;
    int width = 227;
    GroundStyle ground = GroundStyle::asphalt_like;
    std::vector<Obstacle> obstacles;
    double noise_level = 0.0;  // std-dev of additive Gaussian pixel noise
    std::uint64_t seed = 0;

    void validate() const;
};

/// Ground texture alone, as a pure function of style, size and seed.
ImageFrame ground_texture(GroundStyle style, int height, int width, std::uint64_t seed);

/// Ground texture, then obstacles in list order, then clipped additive noise.
ImageFrame render(const SceneSpec& spec);

/// Per-section score 1 - (r + 1) / H, where r is the lowest obstacle row touching
/// the section; 1.0 for sections without obstacles.
TraversabilityVector ground_truth(const SceneSpec& spec, int k);

/// Normalized cutoff lines (r + 1) / H per section, 0 for free sections; the
/// annotation a perfect annotator would draw.
std::vector<double> ground_truth_cutoffs(const SceneSpec& spec, int k);

struct SceneDistribution {
    int height = 128;
    int width = 227;
    int max_obstacles = 4;
    double noise_level = 0.02;
};

struct SyntheticSample {
    SceneSpec spec;
    ImageFrame frame;
    TraversabilityVector scores;
    std::string domain;
};

/// Samples obstacle geometry for scene `index`; depends only on (seed, index).
std::vector<Obstacle> sample_geometry(const SceneDistribution& dist, std::uint64_t seed, std::uint64_t index);

/// n scenes of one ground style. Obstacle geometry is drawn from the same
/// distribution (and, for equal seeds, the same values) regardless of style;
/// only textures and colors change with the domain.
std::vector<SyntheticSample> generate_domain_set(int n, GroundStyle style, std::uint64_t seed,
                                                 const SceneDistribution& dist = {}, int k = kDefaultSections);

}  // namespace travnet
