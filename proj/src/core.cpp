#include "travnet/core.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace travnet {

TraversabilityVector::TraversabilityVector(std::vector<double> scores) : scores_(std::move(scores)) {
    if (scores_.empty()) {
        throw ConfigError("traversability vector needs at least one section");
    }
    for (std::size_t i = 0; i < scores_.size(); ++i) {
        const double s = scores_[i];
        if (!(s >= 0.0 && s <= 1.0)) {
            throw ConfigError(fmt::format("score {} at section {} is outside [0, 1]", s, i));
        }
    }
}

TraversabilityVector TraversabilityVector::filled(int k, double value) {
    if (k <= 0) {
        throw ConfigError("section count must be positive");
    }
    return TraversabilityVector(std::vector<double>(static_cast<std::size_t>(k), value));
}

ImageFrame::ImageFrame(int c, int h, int w, float fill)
    : channels(c), height(h), width(w), pixels(static_cast<std::size_t>(c) * h * w, fill) {
    if (c <= 0 || h <= 0 || w <= 0) {
        throw ConfigError(fmt::format("invalid frame shape {}x{}x{}", c, h, w));
    }
}

bool ImageFrame::in_unit_range() const {
    return std::all_of(pixels.begin(), pixels.end(), [](float v) { return v >= 0.0f && v <= 1.0f; });
}

int SectionLayout::section_of_column(int column) const {
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), column);
    return static_cast<int>(it - boundaries.begin()) - 1;
}

SectionLayout split_sections(int width, int k) {
    if (k <= 0) {
        throw ConfigError(fmt::format("section count must be positive, got {}", k));
    }
    if (width < k) {
        throw ConfigError(fmt::format("width {} is smaller than section count {}", width, k));
    }
    SectionLayout layout;
    layout.k = k;
    layout.width = width;
    layout.boundaries.resize(static_cast<std::size_t>(k) + 1);
    const std::int64_t w = width;
    for (std::int64_t i = 0; i <= k; ++i) {
        layout.boundaries[static_cast<std::size_t>(i)] = static_cast<int>(i * w / k);
    }
    return layout;
}

SectionLayout split_sections(const ImageFrame& frame, int k) { return split_sections(frame.width, k); }

TraversabilityVector clamp_scores(std::span<const double> raw) {
    std::vector<double> out(raw.size());
    std::transform(raw.begin(), raw.end(), out.begin(), [](double v) {
        if (std::isnan(v)) {
            return 0.0;
        }
        return std::min(1.0, std::max(0.0, v));
    });
    return TraversabilityVector(std::move(out));
}

double normalize_yaw(double degrees) {
    if (!std::isfinite(degrees)) {
        throw ConfigError("yaw must be finite");
    }
    double r = std::fmod(degrees + 180.0, 360.0);
    if (r < 0.0) {
        r += 360.0;
    }
    r -= 180.0;
    // keep +180 as +180 instead of folding it to -180
    if (r == -180.0 && degrees > 0.0) {
        r = 180.0;
    }
    return r;
}

}  // namespace travnet
