#include "travnet/eval.hpp"

#include <cmath>

#include <fmt/format.h>

namespace travnet {

EvalReport compute_report(const std::vector<TraversabilityVector>& predictions,
                          const std::vector<TraversabilityVector>& ground_truth,
                          const std::vector<std::string>& domains, const EvalOptions& options) {
    if (predictions.size() != ground_truth.size() || predictions.size() != domains.size()) {
        throw ConfigError(fmt::format("report inputs differ in length: {} predictions, {} truths, {} domains",
                                      predictions.size(), ground_truth.size(), domains.size()));
    }
    if (predictions.empty()) {
        throw ConfigError("cannot report on an empty evaluation set");
    }
    if (!(options.unsafe_tolerance >= 0.0)) {
        throw ConfigError("unsafe tolerance must be non-negative");
    }
    EvalReport r;
    std::map<std::string, double> abs_sum;
    std::map<std::string, int> section_count;
    double total_abs = 0.0;
    double overshoot = 0.0;
    int unsafe = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto& p = predictions[i];
        const auto& t = ground_truth[i];
        if (p.size() != t.size()) {
            throw ConfigError(fmt::format("frame {}: {} predicted sections vs {} annotated", i, p.size(), t.size()));
        }
        double frame_abs = 0.0;
        for (int j = 0; j < p.size(); ++j) {
            const double d = p[j] - t[j];
            frame_abs += std::abs(d);
            if (d > options.unsafe_tolerance) {
                ++unsafe;
            }
            overshoot += d > 0.0 ? d : 0.0;
        }
        total_abs += frame_abs;
        abs_sum[domains[i]] += frame_abs;
        section_count[domains[i]] += p.size();
        r.frames_per_domain[domains[i]] += 1;
        r.n_sections += p.size();
    }
    r.n_frames = static_cast<int>(predictions.size());
    r.mae_all = total_abs / r.n_sections;
    for (const auto& [domain, sum] : abs_sum) {
        r.mae_per_domain[domain] = sum / section_count[domain];
    }
    r.unsafe_rate = static_cast<double>(unsafe) / r.n_sections;
    r.mean_unsafe_overshoot = overshoot / r.n_sections;
    r.config = {{"unsafe_tolerance", options.unsafe_tolerance}};
    return r;
}

nlohmann::json to_json(const EvalReport& report) {
    return {{"mae_all", report.mae_all},
            {"mae_per_domain", report.mae_per_domain},
            {"frames_per_domain", report.frames_per_domain},
            {"unsafe_rate", report.unsafe_rate},
            {"mean_unsafe_overshoot", report.mean_unsafe_overshoot},
            {"n_frames", report.n_frames},
            {"n_sections", report.n_sections},
            {"config", report.config}};
}

std::string serialize_report(const EvalReport& report) { return to_json(report).dump(2) + "\n"; }

int cutoff_row(double score, int height) {
    return static_cast<int>(std::lround((1.0 - score) * height));
}

ImageFrame render_overlay(const ImageFrame& frame, const TraversabilityVector& ground_truth,
                          const TraversabilityVector& prediction, const SectionLayout& layout,
                          const OverlayStyle& style) {
    if (ground_truth.size() != layout.k || prediction.size() != layout.k) {
        throw ConfigError("overlay vectors must match the section layout");
    }
    if (layout.width != frame.width || frame.channels != 3) {
        throw ConfigError("overlay layout does not match the frame");
    }
    ImageFrame out = frame;
    const auto a = static_cast<float>(style.alpha);
    auto tint = [&](const TraversabilityVector& scores, const std::array<float, 3>& color) {
        for (int s = 0; s < layout.k; ++s) {
            const int rows = cutoff_row(scores[s], frame.height);
            for (int c = 0; c < 3; ++c) {
                for (int y = 0; y < rows; ++y) {
                    for (int x = layout.begin(s); x < layout.end(s); ++x) {
                        float& v = out.at(c, y, x);
                        v = (1.0f - a) * v + a * color[static_cast<std::size_t>(c)];
                    }
                }
            }
        }
    };
    tint(ground_truth, style.truth_color);
    tint(prediction, style.prediction_color);
    return out;
}

}  // namespace travnet
