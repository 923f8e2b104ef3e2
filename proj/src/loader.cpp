#include "travnet/loader.hpp"

#include <fmt/format.h>

#include "travnet/image_io.hpp"

namespace travnet {

LabeledSet load_labeled_set(const std::filesystem::path& manifest, const std::filesystem::path& annotations_dir) {
    const auto records = read_manifest(manifest);
    const auto annotations = load_annotations(annotations_dir);
    const auto root = manifest.parent_path();
    LabeledSet out;
    out.reserve(records.size());
    for (const auto& r : records) {
        const auto it = annotations.find(r.image_path);
        if (it == annotations.end()) {
            throw DataError(fmt::format("{} has no annotation in {}", r.image_path, annotations_dir.string()));
        }
        out.push_back({load_image(root / r.image_path), annotation_to_scores(it->second), r.domain, r.image_path});
    }
    return out;
}

std::vector<ImageFrame> load_frames(const std::filesystem::path& manifest) {
    const auto records = read_manifest(manifest);
    const auto root = manifest.parent_path();
    std::vector<ImageFrame> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        out.push_back(load_image(root / r.image_path));
    }
    return out;
}

}  // namespace travnet
