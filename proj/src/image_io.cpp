#include "travnet/image_io.hpp"

#include <cmath>

#include <fmt/format.h>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace travnet {

namespace {

cv::Mat to_mat(const ImageFrame& frame) {
    if (frame.channels != 3) {
        throw ConfigError("only 3-channel frames can be converted");
    }
    cv::Mat rgb(frame.height, frame.width, CV_32FC3);
    for (int y = 0; y < frame.height; ++y) {
        auto* row = rgb.ptr<cv::Vec3f>(y);
        for (int x = 0; x < frame.width; ++x) {
            row[x] = cv::Vec3f(frame.at(0, y, x), frame.at(1, y, x), frame.at(2, y, x));
        }
    }
    return rgb;
}

ImageFrame from_mat(const cv::Mat& rgb) {
    ImageFrame frame(3, rgb.rows, rgb.cols);
    for (int y = 0; y < rgb.rows; ++y) {
        const auto* row = rgb.ptr<cv::Vec3f>(y);
        for (int x = 0; x < rgb.cols; ++x) {
            for (int c = 0; c < 3; ++c) {
                frame.at(c, y, x) = std::min(1.0f, std::max(0.0f, row[x][c]));
            }
        }
    }
    return frame;
}

}  // namespace

ImageFrame load_image(const std::filesystem::path& path) {
    cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty()) {
        throw DataError(fmt::format("cannot decode image {}", path.string()));
    }
    cv::Mat rgb;
    cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
    cv::Mat rgbf;
    rgb.convertTo(rgbf, CV_32FC3, 1.0 / 255.0);
    return from_mat(rgbf);
}

void save_image(const std::filesystem::path& path, const ImageFrame& frame) {
    cv::Mat rgb8;
    to_mat(frame).convertTo(rgb8, CV_8UC3, 255.0);
    cv::Mat bgr;
    cv::cvtColor(rgb8, bgr, cv::COLOR_RGB2BGR);
    if (!cv::imwrite(path.string(), bgr)) {
        throw DataError(fmt::format("cannot write image {}", path.string()));
    }
}

ImageFrame resize_short_side(const ImageFrame& frame, int short_side) {
    if (short_side < 1) {
        throw ConfigError("target short side must be positive");
    }
    const int current = std::min(frame.height, frame.width);
    if (current == short_side) {
        return frame;
    }
    const double scale = static_cast<double>(short_side) / current;
    int h = frame.height <= frame.width ? short_side : static_cast<int>(std::lround(frame.height * scale));
    int w = frame.width < frame.height ? short_side : static_cast<int>(std::lround(frame.width * scale));
    cv::Mat out;
    cv::resize(to_mat(frame), out, cv::Size(w, h), 0, 0, scale < 1.0 ? cv::INTER_AREA : cv::INTER_LINEAR);
    return from_mat(out);
}

ImageFrame quantize_8bit(const ImageFrame& frame) {
    ImageFrame out = frame;
    for (auto& v : out.pixels) {
        // same arithmetic as the encoder (round half to even) and decoder (multiply by 1/255)
        const float level = std::nearbyint(std::min(1.0f, std::max(0.0f, v)) * 255.0f);
        v = level * static_cast<float>(1.0 / 255.0);
    }
    return out;
}

}  // namespace travnet
