#pragma once

#include <filesystem>

#include "travnet/core.hpp"

namespace travnet {

/// Decodes an image file into an RGB frame with values in [0, 1].
ImageFrame load_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB image; the format follows the file extension.
void save_image(const std::filesystem::path& path, const ImageFrame& frame);

/// Resamples so the shorter side equals `short_side`, keeping the aspect ratio
/// (long side rounded to the nearest pixel). Frames already at that size are returned as is.
ImageFrame resize_short_side(const ImageFrame& frame, int short_side);

/// 8-bit quantization as applied when writing an image file.
ImageFrame quantize_8bit(const ImageFrame& frame);

}  // namespace travnet
