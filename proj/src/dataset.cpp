#include "travnet/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "travnet/rng.hpp"

namespace travnet {

void Annotation::validate() const {
    if (k < 1) {
        throw ConfigError(fmt::format("annotation k must be positive, got {}", k));
    }
    if (static_cast<int>(cutoff_y.size()) != k) {
        throw ConfigError(fmt::format("annotation has {} cutoffs for k = {}", cutoff_y.size(), k));
    }
    for (std::size_t i = 0; i < cutoff_y.size(); ++i) {
        const double c = cutoff_y[i];
        if (!(c >= 0.0 && c <= 1.0)) {
            throw ConfigError(fmt::format("cutoff_y[{}] = {} is outside [0, 1]", i, c));
        }
    }
}

void SelectionConfig::validate() const {
    if (!(theta_th > 0.0) || !(dist_th > 0.0) || !(comb_threshold > 0.0)) {
        throw ConfigError("selection thresholds must be strictly positive");
    }
}

double angular_difference(double theta_i, double theta_j, double theta_th) {
    if (!(theta_th > 0.0)) {
        throw ConfigError(fmt::format("theta_th must be positive, got {}", theta_th));
    }
    double diff = std::abs(theta_i - theta_j);
    if (diff > 180.0) {
        diff = 360.0 - diff;
    }
    return diff / theta_th;
}

double linear_displacement(const PoseStamped& p_i, const PoseStamped& p_j, double dist_th) {
    if (!(dist_th > 0.0)) {
        throw ConfigError(fmt::format("dist_th must be positive, got {}", dist_th));
    }
    return std::hypot(p_i.x - p_j.x, p_i.y - p_j.y) / dist_th;
}

std::vector<FrameRecord> select_frames(const std::vector<FrameRecord>& records, const SelectionConfig& cfg) {
    cfg.validate();
    std::vector<FrameRecord> kept;
    if (records.empty()) {
        return kept;
    }
    kept.push_back(records.front());
    const PoseStamped* last = &records.front().pose;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const PoseStamped& pose = records[i].pose;
        const double comb = linear_displacement(pose, *last, cfg.dist_th) +
                            angular_difference(pose.yaw, last->yaw, cfg.theta_th);
        if (comb > cfg.comb_threshold) {
            kept.push_back(records[i]);
            last = &records[i].pose;
        }
    }
    return kept;
}

TraversabilityVector annotation_to_scores(const Annotation& a) {
    a.validate();
    std::vector<double> scores(a.cutoff_y.size());
    std::transform(a.cutoff_y.begin(), a.cutoff_y.end(), scores.begin(), [](double c) { return 1.0 - c; });
    return TraversabilityVector(std::move(scores));
}

std::vector<double> scores_to_cutoffs(const TraversabilityVector& scores) {
    std::vector<double> cut(static_cast<std::size_t>(scores.size()));
    std::transform(scores.values().begin(), scores.values().end(), cut.begin(), [](double s) { return 1.0 - s; });
    return cut;
}

double cutoff_from_row(double row, int height) {
    if (height <= 0) {
        throw ConfigError("image height must be positive");
    }
    return std::clamp(row / static_cast<double>(height), 0.0, 1.0);
}

SplitIndices split_indices(std::size_t n, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ConfigError(fmt::format("split fraction must lie in (0, 1), got {}", fraction));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(derive_seed(seed, seed_stream::split));
    // Fisher-Yates with an explicit draw so the permutation does not depend on
    // the standard library's shuffle implementation.
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
    const auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    SplitIndices out;
    out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

void to_json(nlohmann::json& j, const FrameRecord& r) {
    j = nlohmann::json{{"image_path", r.image_path}, {"x", r.pose.x},
                       {"y", r.pose.y},                {"yaw", r.pose.yaw},
                       {"frame_index", r.pose.frame_index}, {"timestamp", r.pose.timestamp},
                       {"domain", r.domain}};
}

void from_json(const nlohmann::json& j, FrameRecord& r) {
    r.image_path = j.at("image_path").get<std::string>();
    r.pose.x = j.at("x").get<double>();
    r.pose.y = j.at("y").get<double>();
    r.pose.yaw = normalize_yaw(j.at("yaw").get<double>());
    r.pose.frame_index = j.at("frame_index").get<std::int64_t>();
    r.pose.timestamp = j.value("timestamp", 0.0);
    r.domain = j.value("domain", domains::on_road);
}

void to_json(nlohmann::json& j, const Annotation& a) {
    j = nlohmann::json{{"image_path", a.image_path},
                       {"k", a.k},
                       {"cutoff_y", a.cutoff_y},
                       {"annotator_id", a.annotator_id},
                       {"created_at", a.created_at}};
}

void from_json(const nlohmann::json& j, Annotation& a) {
    a.image_path = j.at("image_path").get<std::string>();
    a.k = j.at("k").get<int>();
    a.cutoff_y = j.at("cutoff_y").get<std::vector<double>>();
    a.annotator_id = j.value("annotator_id", std::string{});
    a.created_at = j.value("created_at", std::string{});
}

std::vector<FrameRecord> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("cannot open manifest {}", path.string()));
    }
    std::vector<FrameRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            records.push_back(nlohmann::json::parse(line).get<FrameRecord>());
        } catch (const nlohmann::json::exception& e) {
            throw DataError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
        }
    }
    std::stable_sort(records.begin(), records.end(), [](const FrameRecord& a, const FrameRecord& b) {
        return a.pose.frame_index < b.pose.frame_index;
    });
    return records;
}

void write_manifest(const std::filesystem::path& path, const std::vector<FrameRecord>& records) {
    std::ostringstream out;
    for (const auto& r : records) {
        out << nlohmann::json(r).dump() << '\n';
    }
    write_file_atomic(path, out.str());
}

std::string serialize_annotation(const Annotation& a) { return nlohmann::json(a).dump(2) + "\n"; }

Annotation parse_annotation(const std::string& text) {
    Annotation a;
    try {
        a = nlohmann::json::parse(text).get<Annotation>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("malformed annotation document: {}", e.what()));
    }
    a.validate();
    return a;
}

Annotation read_annotation(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("cannot open annotation {}", path.string()));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_annotation(buf.str());
    } catch (const ConfigError& e) {
        throw DataError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void write_annotation_atomic(const std::filesystem::path& path, const Annotation& a) {
    a.validate();
    write_file_atomic(path, serialize_annotation(a));
}

std::string annotation_filename(const std::string& image_path) {
    return std::filesystem::path(image_path).stem().string() + ".json";
}

std::map<std::string, Annotation> load_annotations(const std::filesystem::path& dir) {
    std::map<std::string, Annotation> out;
    if (!std::filesystem::is_directory(dir)) {
        throw DataError(fmt::format("annotation directory {} does not exist", dir.string()));
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        Annotation a = read_annotation(f);
        out[a.image_path] = std::move(a);
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    static std::atomic<unsigned> counter{0};
    const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
    std::filesystem::path tmp = path;
    tmp += fmt::format(".tmp.{:x}.{}", tid, counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError(fmt::format("cannot write {}", tmp.string()));
        }
        out << contents;
        out.flush();
        if (!out) {
            throw DataError(fmt::format("write to {} failed", tmp.string()));
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw DataError(fmt::format("cannot move {} into place: {}", path.string(), ec.message()));
    }
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace travnet
