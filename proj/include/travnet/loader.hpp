#pragma once

#include <filesystem>
#include <vector>

#include "travnet/dataset.hpp"
#include "travnet/train.hpp"

namespace travnet {

/// Frames of a manifest with their annotations. Every record must have an
/// annotation document; the sample id is the manifest image_path.
LabeledSet load_labeled_set(const std::filesystem::path& manifest, const std::filesystem::path& annotations_dir);

/// Decoded images of a manifest, in manifest order. Annotations are not read.
std::vector<ImageFrame> load_frames(const std::filesystem::path& manifest);

}  // namespace travnet
