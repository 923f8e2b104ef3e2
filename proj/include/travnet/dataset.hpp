#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "travnet/core.hpp"

namespace travnet {

namespace domains {
inline const std::string on_road = "on_road";
inline const std::string off_road = "off_road";
}  // namespace domains

struct FrameRecord {
    std::string image_path;  // as written in the manifest, relative to the manifest directory
    PoseStamped pose;
    std::string domain = domains::on_road;

    bool operator==(const FrameRecord&) const = default;
};

/// One cutoff line per section, as a fraction of image height from the top.
struct Annotation {
    std::string image_path;
    int k = kDefaultSections;
    std::vector<double> cutoff_y;
    std::string annotator_id;
    std::string created_at;

    void validate() const;
    bool operator==(const Annotation&) const = default;
};

struct SelectionConfig {
    double theta_th = 40.0;        // degrees
    double dist_th = 0.8;          // meters
    double comb_threshold = 1.0;   // a frame is kept when dist + dtheta is strictly above this

    void validate() const;
};

/// |theta_i - theta_j| / theta_th, taking the short way around the circle.
double angular_difference(double theta_i, double theta_j, double theta_th);

/// Planar Euclidean distance between poses divided by dist_th.
double linear_displacement(const PoseStamped& p_i, const PoseStamped& p_j, double dist_th);

/// Greedy near-duplicate removal. The first record is always kept; each later
/// record is kept when its combined normalized motion relative to the last
/// kept record exceeds cfg.comb_threshold.
std::vector<FrameRecord> select_frames(const std::vector<FrameRecord>& records, const SelectionConfig& cfg);

/// scores[i] = 1 - cutoff_y[i].
TraversabilityVector annotation_to_scores(const Annotation& a);

/// Inverse of annotation_to_scores: cutoff_y[i] = 1 - scores[i].
std::vector<double> scores_to_cutoffs(const TraversabilityVector& scores);

/// Normalized cutoff for a line drawn at pixel row `row` of an image of height `height`.
double cutoff_from_row(double row, int height);

/// Train/test index partition. |train| = floor(fraction * n); deterministic in seed.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};
SplitIndices split_indices(std::size_t n, double fraction, std::uint64_t seed);

template <typename Item>
std::pair<std::vector<Item>, std::vector<Item>> split_train_test(const std::vector<Item>& items, double fraction,
                                                                 std::uint64_t seed) {
    const SplitIndices idx = split_indices(items.size(), fraction, seed);
    std::pair<std::vector<Item>, std::vector<Item>> out;
    for (std::size_t i : idx.train) {
        out.first.push_back(items[i]);
    }
    for (std::size_t i : idx.test) {
        out.second.push_back(items[i]);
    }
    return out;
}

// ---- file formats -----------------------------------------------------------

void to_json(nlohmann::json& j, const FrameRecord& r);
void from_json(const nlohmann::json& j, FrameRecord& r);
void to_json(nlohmann::json& j, const Annotation& a);
void from_json(const nlohmann::json& j, Annotation& a);

/// Reads a line-delimited manifest; records are returned ordered by frame_index.
std::vector<FrameRecord> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<FrameRecord>& records);

/// Canonical serialized form of an annotation document.
std::string serialize_annotation(const Annotation& a);
Annotation parse_annotation(const std::string& text);
Annotation read_annotation(const std::filesystem::path& path);
/// Writes through a temporary file and rename, so readers never see partial files.
void write_annotation_atomic(const std::filesystem::path& path, const Annotation& a);

/// File name used for the annotation of an image ("<stem>.json").
std::string annotation_filename(const std::string& image_path);

/// All annotation documents in a directory, keyed by image_path.
std::map<std::string, Annotation> load_annotations(const std::filesystem::path& dir);

/// Writes text through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Current UTC time in ISO-8601 form.
std::string utc_timestamp();

}  // namespace travnet
