#pragma once

#include <array>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "travnet/core.hpp"

namespace travnet {

/// Cache-line aligned allocation. Eigen picks its vectorized code paths from
/// pointer alignment, so fixed alignment keeps float reductions reproducible
/// regardless of where the heap places a buffer.
template <typename T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::align_val_t kAlignment{64};

    AlignedAllocator() = default;
    template <typename U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), kAlignment)); }
    void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlignment); }

    template <typename U>
    bool operator==(const AlignedAllocator<U>&) const noexcept {
        return true;
    }
};

template <typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

/// Dense N x C x H x W tensor. Flat feature batches use H = W = 1.
template <typename T>
class Tensor {
public:
    Tensor() = default;
    Tensor(int n, int c, int h, int w, T fill = T(0))
        : shape_{n, c, h, w}, data_(static_cast<std::size_t>(n) * c * h * w, fill) {}

    static Tensor like(const Tensor& other, T fill = T(0)) {
        return Tensor(other.n(), other.c(), other.h(), other.w(), fill);
    }

    int n() const { return shape_[0]; }
    int c() const { return shape_[1]; }
    int h() const { return shape_[2]; }
    int w() const { return shape_[3]; }
    const std::array<int, 4>& shape() const { return shape_; }

    std::size_t size() const { return data_.size(); }
    std::size_t sample_size() const { return static_cast<std::size_t>(c()) * h() * w(); }
    std::size_t plane_size() const { return static_cast<std::size_t>(h()) * w(); }
    bool empty() const { return data_.empty(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    T* sample(int i) { return data_.data() + i * sample_size(); }
    const T* sample(int i) const { return data_.data() + i * sample_size(); }

    T& operator[](std::size_t i) { return data_[i]; }
    T operator[](std::size_t i) const { return data_[i]; }
    T& at(int n_, int c_, int h_, int w_) { return data_[index(n_, c_, h_, w_)]; }
    T at(int n_, int c_, int h_, int w_) const { return data_[index(n_, c_, h_, w_)]; }

    AlignedVector<T>& storage() { return data_; }
    const AlignedVector<T>& storage() const { return data_; }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    bool operator==(const Tensor&) const = default;

private:
    std::size_t index(int n_, int c_, int h_, int w_) const {
        return ((static_cast<std::size_t>(n_) * shape_[1] + c_) * shape_[2] + h_) * shape_[3] + w_;
    }

    std::array<int, 4> shape_{0, 0, 0, 0};
    AlignedVector<T> data_;
};

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
using MatrixMap = Eigen::Map<RowMatrix<T>>;

template <typename T>
using ConstMatrixMap = Eigen::Map<const RowMatrix<T>>;

/// Stacks frames into a batch tensor. All frames must share a shape.
template <typename T>
Tensor<T> stack_frames(std::span<const ImageFrame* const> frames) {
    if (frames.empty()) {
        throw ConfigError("cannot stack an empty frame list");
    }
    const ImageFrame& first = *frames.front();
    Tensor<T> batch(static_cast<int>(frames.size()), first.channels, first.height, first.width);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const ImageFrame& f = *frames[i];
        if (f.channels != first.channels || f.height != first.height || f.width != first.width) {
            throw ConfigError("frames in a batch must share one shape");
        }
        T* dst = batch.sample(static_cast<int>(i));
        for (std::size_t j = 0; j < f.pixels.size(); ++j) {
            dst[j] = static_cast<T>(f.pixels[j]);
        }
    }
    return batch;
}

template <typename T>
Tensor<T> stack_frames(std::span<const ImageFrame> frames) {
    std::vector<const ImageFrame*> ptrs;
    ptrs.reserve(frames.size());
    for (const auto& f : frames) {
        ptrs.push_back(&f);
    }
    return stack_frames<T>(std::span<const ImageFrame* const>(ptrs));
}

}  // namespace travnet
