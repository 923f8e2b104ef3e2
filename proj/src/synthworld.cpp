#include "travnet/synthworld.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "travnet/rng.hpp"

namespace travnet {

std::string to_string(GroundStyle style) {
    return style == GroundStyle::asphalt_like ? "asphalt_like" : "grass_like";
}

GroundStyle ground_style_from_string(const std::string& s) {
    if (s == "asphalt_like" || s == "asphalt" || s == "on_road") {
        return GroundStyle::asphalt_like;
    }
    if (s == "grass_like" || s == "grass" || s == "off_road") {
        return GroundStyle::grass_like;
    }
    throw ConfigError(fmt::format("unknown ground style '{}'", s));
}

std::string domain_label(GroundStyle style) {
    return style == GroundStyle::asphalt_like ? "on_road" : "off_road";
}

void SceneSpec::validate() const {
    if (height < 1 || width < 1) {
        throw ConfigError(fmt::format("invalid scene size {}x{}", height, width));
    }
    if (!(noise_level >= 0.0)) {
        throw ConfigError("noise level must be non-negative");
    }
    for (const auto& o : obstacles) {
        if (o.x0 < 0 || o.y0 < 0 || o.x1 > width || o.y1 > height || o.x0 >= o.x1 || o.y0 >= o.y1) {
            throw ConfigError(
                fmt::format("obstacle [{}, {}) x [{}, {}) is empty or outside the image", o.x0, o.x1, o.y0, o.y1));
        }
    }
}

namespace {

// Hash of an integer lattice point to [0, 1).
double lattice(std::uint64_t seed, std::int64_t x, std::int64_t y) {
    const std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(x) * 0x9e3779b1ULL +
                                                         static_cast<std::uint64_t>(y) * 0x85ebca77ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Bilinear value noise with cells of cw x ch pixels.
double value_noise(std::uint64_t seed, double x, double y, double cw, double ch) {
    const double fx = x / cw;
    const double fy = y / ch;
    const auto ix = static_cast<std::int64_t>(std::floor(fx));
    const auto iy = static_cast<std::int64_t>(std::floor(fy));
    const double tx = fx - static_cast<double>(ix);
    const double ty = fy - static_cast<double>(iy);
    const double a = lattice(seed, ix, iy);
    const double b = lattice(seed, ix + 1, iy);
    const double c = lattice(seed, ix, iy + 1);
    const double d = lattice(seed, ix + 1, iy + 1);
    return (a * (1 - tx) + b * tx) * (1 - ty) + (c * (1 - tx) + d * tx) * ty;
}

float unit(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

std::array<float, 3> hsv_to_rgb(double h, double s, double v) {
    const double c = v * s;
    const double hp = std::fmod(h, 1.0) * 6.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) {
        r = c, g = x;
    } else if (hp < 2) {
        r = x, g = c;
    } else if (hp < 3) {
        g = c, b = x;
    } else if (hp < 4) {
        g = x, b = c;
    } else if (hp < 5) {
        r = x, b = c;
    } else {
        r = c, b = x;
    }
    const double m = v - c;
    return {unit(r + m), unit(g + m), unit(b + m)};
}

}  // namespace

ImageFrame ground_texture(GroundStyle style, int height, int width, std::uint64_t seed) {
    ImageFrame frame(3, height, width);
    const std::uint64_t coarse = derive_seed(seed, 11);
    const std::uint64_t fine = derive_seed(seed, 12);
    const std::uint64_t grain = derive_seed(seed, 13);
    for (int y = 0; y < height; ++y) {
        // rows near the bottom of the frame are closer to the camera
        const double depth = static_cast<double>(y) / height;
        for (int x = 0; x < width; ++x) {
            const double g = lattice(grain, x, y) - 0.5;
            if (style == GroundStyle::asphalt_like) {
                const double patch = value_noise(coarse, x, y, 24.0, 12.0) - 0.5;
                const double v = 0.40 + 0.08 * depth + 0.10 * patch + 0.08 * g;
                frame.at(0, y, x) = unit(v);
                frame.at(1, y, x) = unit(v + 0.01);
                frame.at(2, y, x) = unit(v + 0.03);
            } else {
                const double blades = value_noise(fine, x, y, 1.5, 6.0) - 0.5;
                const double patch = value_noise(coarse, x, y, 30.0, 15.0) - 0.5;
                const double v = 0.9 + 0.3 * blades + 0.25 * patch + 0.1 * g;
                frame.at(0, y, x) = unit((0.20 + 0.05 * depth) * v);
                frame.at(1, y, x) = unit((0.52 + 0.06 * depth) * v);
                frame.at(2, y, x) = unit((0.14 + 0.03 * depth) * v);
            }
        }
    }
    return frame;
}

ImageFrame render(const SceneSpec& spec) {
    spec.validate();
    ImageFrame frame = ground_texture(spec.ground, spec.height, spec.width, spec.seed);
    for (const auto& o : spec.obstacles) {
        for (int c = 0; c < 3; ++c) {
            for (int y = o.y0; y < o.y1; ++y) {
                for (int x = o.x0; x < o.x1; ++x) {
                    frame.at(c, y, x) = o.color[static_cast<std::size_t>(c)];
                }
            }
        }
    }
    if (spec.noise_level > 0.0) {
        std::mt19937_64 rng(derive_seed(spec.seed, 21));
        std::normal_distribution<double> noise(0.0, spec.noise_level);
        for (auto& v : frame.pixels) {
            v = unit(v + noise(rng));
        }
    }
    return frame;
}

std::vector<double> ground_truth_cutoffs(const SceneSpec& spec, int k) {
    spec.validate();
    const SectionLayout layout = split_sections(spec.width, k);
    std::vector<int> lowest(static_cast<std::size_t>(k), -1);
    for (const auto& o : spec.obstacles) {
        const int first = layout.section_of_column(o.x0);
        const int last = layout.section_of_column(o.x1 - 1);
        for (int s = first; s <= last; ++s) {
            lowest[static_cast<std::size_t>(s)] = std::max(lowest[static_cast<std::size_t>(s)], o.y1 - 1);
        }
    }
    std::vector<double> cutoffs(static_cast<std::size_t>(k), 0.0);
    for (std::size_t s = 0; s < cutoffs.size(); ++s) {
        if (lowest[s] >= 0) {
            cutoffs[s] = static_cast<double>(lowest[s] + 1) / spec.height;
        }
    }
    return cutoffs;
}

TraversabilityVector ground_truth(const SceneSpec& spec, int k) {
    std::vector<double> scores = ground_truth_cutoffs(spec, k);
    for (auto& s : scores) {
        s = 1.0 - s;
    }
    return TraversabilityVector(std::move(scores));
}

std::vector<Obstacle> sample_geometry(const SceneDistribution& dist, std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 rng(derive_seed(derive_seed(seed, seed_stream::scene_geometry), index));
    std::uniform_int_distribution<int> count_dist(0, dist.max_obstacles);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int count = count_dist(rng);
    std::vector<Obstacle> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const int w = std::max(1, static_cast<int>(std::lround((0.08 + 0.32 * u(rng)) * dist.width)));
        const int h = std::max(1, static_cast<int>(std::lround((0.10 + 0.50 * u(rng)) * dist.height)));
        const int x0 = static_cast<int>(std::floor(u(rng) * (dist.width - w + 1)));
        // bottom edge anywhere from the upper fifth down to the bottom row
        const int y1 = std::clamp(static_cast<int>(std::lround((0.2 + 0.8 * u(rng)) * dist.height)), 1, dist.height);
        Obstacle o;
        o.x0 = x0;
        o.x1 = std::min(dist.width, x0 + w);
        o.y1 = y1;
        o.y0 = std::max(0, y1 - h);
        out.push_back(o);
    }
    return out;
}

std::vector<SyntheticSample> generate_domain_set(int n, GroundStyle style, std::uint64_t seed,
                                                 const SceneDistribution& dist, int k) {
    if (n < 1) {
        throw ConfigError("scene count must be positive");
    }
    if (dist.height < 1 || dist.width < k || dist.max_obstacles < 0) {
        throw ConfigError("invalid scene distribution");
    }
    const std::uint64_t appearance = derive_seed(derive_seed(seed, seed_stream::scene_appearance),
                                                 style == GroundStyle::asphalt_like ? 1 : 2);
    std::vector<SyntheticSample> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto index = static_cast<std::uint64_t>(i);
        const std::uint64_t scene_seed = derive_seed(appearance, index);
        SceneSpec spec;
        spec.height = dist.height;
        spec.width = dist.width;
        spec.ground = style;
        spec.noise_level = dist.noise_level;
        spec.seed = scene_seed;
        spec.obstacles = sample_geometry(dist, seed, index);
        std::mt19937_64 color_rng(derive_seed(scene_seed, 31));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& o : spec.obstacles) {
            o.color = hsv_to_rgb(u(color_rng), 0.35 + 0.6 * u(color_rng), 0.25 + 0.65 * u(color_rng));
        }
        SyntheticSample sample;
        sample.frame = render(spec);
        sample.scores = ground_truth(spec, k);
        sample.domain = domain_label(style);
        sample.spec = std::move(spec);
        out.push_back(std::move(sample));
    }
    return out;
}

}  // namespace travnet
