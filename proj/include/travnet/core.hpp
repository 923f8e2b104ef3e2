#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace travnet {

inline constexpr int kDefaultSections = 9;

/// Raised for invalid user-supplied configuration or arguments.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when input data cannot be read or is inconsistent.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-section traversability scores, each in [0, 1].
///
/// 0 means the section is blocked at the robot's feet, 1 means it is free up
/// to the top of the image. Construction validates the range; raw network
/// outputs go through clamp_scores().
class TraversabilityVector {
public:
    TraversabilityVector() = default;
    explicit TraversabilityVector(std::vector<double> scores);

    static TraversabilityVector filled(int k, double value);

    int size() const { return static_cast<int>(scores_.size()); }
    double operator[](int i) const { return scores_[static_cast<std::size_t>(i)]; }
    std::span<const double> scores() const { return scores_; }
    const std::vector<double>& values() const { return scores_; }

    bool operator==(const TraversabilityVector&) const = default;

private:
    std::vector<double> scores_;
};

/// RGB frame stored channel-major (C x H x W), pixel values in [0, 1].
struct ImageFrame {
    int channels = 3;
    int height = 0;
    int width = 0;
    std::vector<float> pixels;

    ImageFrame() = default;
    ImageFrame(int c, int h, int w, float fill = 0.0f);

    float& at(int c, int y, int x) {
        return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float at(int c, int y, int x) const {
        return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    std::size_t plane_size() const { return static_cast<std::size_t>(height) * width; }
    bool in_unit_range() const;

    bool operator==(const ImageFrame&) const = default;
};

/// Column bands of a width-W image divided into k vertical sections.
struct SectionLayout {
    int k = 0;
    int width = 0;
    std::vector<int> boundaries;  // k + 1 entries, boundaries[0] = 0, boundaries[k] = width

    int begin(int i) const { return boundaries[static_cast<std::size_t>(i)]; }
    int end(int i) const { return boundaries[static_cast<std::size_t>(i) + 1]; }
    int band_width(int i) const { return end(i) - begin(i); }
    int section_of_column(int column) const;
};

/// Splits an image width into k near-equal vertical bands.
/// Boundary i sits at round(i * W / k).
SectionLayout split_sections(int width, int k);
SectionLayout split_sections(const ImageFrame& frame, int k);

/// Saturates raw scores into [0, 1]. NaN maps to 0 (not traversable).
TraversabilityVector clamp_scores(std::span<const double> raw);

/// Planar robot pose attached to a frame.
struct PoseStamped {
    double x = 0.0;    // m
    double y = 0.0;    // m
    double yaw = 0.0;  // degrees, [-180, 180]
    std::int64_t frame_index = 0;
    double timestamp = 0.0;  // s

    bool operator==(const PoseStamped&) const = default;
};

/// Wraps an angle in degrees into [-180, 180].
double normalize_yaw(double degrees);

}  // namespace travnet
