#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "travnet/core.hpp"

namespace travnet {

struct EvalOptions {
    // A section prediction counts as unsafe when prediction > truth + tolerance.
    double unsafe_tolerance = 0.0;
};

struct EvalReport {
    double mae_all = 0.0;
    std::map<std::string, double> mae_per_domain;
    std::map<std::string, int> frames_per_domain;
    double unsafe_rate = 0.0;
    double mean_unsafe_overshoot = 0.0;
    int n_frames = 0;
    int n_sections = 0;
    nlohmann::json config = nlohmann::json::object();
};

/// MAE overall and per domain plus safety statistics. Predictions are expected
/// clamped (TraversabilityVector guarantees [0, 1]).
EvalReport compute_report(const std::vector<TraversabilityVector>& predictions,
                          const std::vector<TraversabilityVector>& ground_truth,
                          const std::vector<std::string>& domains, const EvalOptions& options = {});

nlohmann::json to_json(const EvalReport& report);
/// Stable-keyed, indented text form.
std::string serialize_report(const EvalReport& report);

struct OverlayStyle {
    double alpha = 0.45;
    std::array<float, 3> truth_color{0.0f, 1.0f, 0.0f};
    std::array<float, 3> prediction_color{1.0f, 0.0f, 0.0f};
};

/// First row of the traversable region for a score: round((1 - s) * H).
/// Rows above it are the non-traversable part of the section.
int cutoff_row(double score, int height);

/// Tints the non-traversable region of every section: green for the ground
/// truth, then red for the prediction. Each tint is out = (1 - a) * in + a * color.
ImageFrame render_overlay(const ImageFrame& frame, const TraversabilityVector& ground_truth,
                          const TraversabilityVector& prediction, const SectionLayout& layout,
                          const OverlayStyle& style = {});

}  // namespace travnet
