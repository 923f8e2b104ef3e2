#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "travnet/tensor.hpp"

namespace travnet {

using Rng = std::mt19937_64;

enum class Phase { train, eval };

struct ForwardContext {
    Phase phase = Phase::eval;
    // Batch-norm running statistics are only updated when this is set (train phase).
    bool update_running_stats = true;

    bool training() const { return phase == Phase::train; }
};

inline constexpr ForwardContext kEval{Phase::eval, false};
inline constexpr ForwardContext kTrain{Phase::train, true};

/// Named state tensor that is not learned (e.g. batch-norm running mean).
template <typename T>
struct Buffer {
    std::string name;
    std::vector<int> shape;
    AlignedVector<T> value;
};

/// Learnable tensor with its accumulated gradient.
template <typename T>
struct Parameter {
    std::string name;
    std::vector<int> shape;
    AlignedVector<T> value;
    AlignedVector<T> grad;

    Parameter() = default;
    Parameter(std::string n, std::vector<int> s) : name(std::move(n)), shape(std::move(s)) {
        std::size_t count = 1;
        for (int d : shape) {
            count *= static_cast<std::size_t>(d);
        }
        value.assign(count, T(0));
        grad.assign(count, T(0));
    }

    std::size_t size() const { return value.size(); }
    void zero_grad() { std::fill(grad.begin(), grad.end(), T(0)); }
};

template <typename T>
class Layer {
public:
    virtual ~Layer() = default;

    /// Caches whatever backward() needs; backward() refers to the latest forward().
    virtual Tensor<T> forward(const Tensor<T>& x, const ForwardContext& ctx) = 0;
    /// Returns the gradient w.r.t. the input and accumulates parameter gradients.
    virtual Tensor<T> backward(const Tensor<T>& grad_out) = 0;

    virtual void collect_parameters(std::vector<Parameter<T>*>&) {}
    virtual void collect_buffers(std::vector<Buffer<T>*>&) {}
    virtual void initialize(Rng&) {}
    virtual std::string name() const = 0;
};

namespace detail {

// He-uniform bound sqrt(6 / fan_in) for convolutions, which all feed rectifiers here.
inline const double kHeGain = std::sqrt(6.0);

template <typename T>
void fan_in_uniform(AlignedVector<T>& values, std::size_t fan_in, Rng& rng, double gain = 1.0) {
    const double bound = gain / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (auto& v : values) {
        v = static_cast<T>(dist(rng));
    }
}

inline int conv_out_size(int in, int kernel, int stride, int pad, int dilation) {
    return (in + 2 * pad - dilation * (kernel - 1) - 1) / stride + 1;
}

}  // namespace detail

/// 2-D convolution (square kernel) with stride, zero padding and dilation.
template <typename T>
class Conv2d : public Layer<T> {
public:
    Conv2d(std::string name, int in_channels, int out_channels, int kernel, int stride = 1, int pad = 0,
           int dilation = 1)
        : name_(std::move(name)),
          in_(in_channels),
          out_(out_channels),
          kernel_(kernel),
          stride_(stride),
          pad_(pad),
          dilation_(dilation),
          weight_(name_ + ".weight", {out_channels, in_channels, kernel, kernel}),
          bias_(name_ + ".bias", {out_channels}) {
        if (in_channels <= 0 || out_channels <= 0 || kernel <= 0 || stride <= 0 || pad < 0 || dilation <= 0) {
            throw ConfigError(fmt::format("invalid convolution '{}'", name_));
        }
    }

    int in_channels() const { return in_; }
    int out_channels() const { return out_; }

    std::pair<int, int> output_size(int h, int w) const {
        return {detail::conv_out_size(h, kernel_, stride_, pad_, dilation_),
                detail::conv_out_size(w, kernel_, stride_, pad_, dilation_)};
    }

    Tensor<T> forward(const Tensor<T>& x, const ForwardContext&) override {
        if (x.c() != in_) {
            throw ConfigError(fmt::format("{}: expected {} input channels, got {}", name_, in_, x.c()));
        }
        auto [ho, wo] = output_size(x.h(), x.w());
        if (ho < 1 || wo < 1) {
            throw ConfigError(fmt::format("{}: input {}x{} too small", name_, x.h(), x.w()));
        }
        input_ = x;
        Tensor<T> y(x.n(), out_, ho, wo);
        const int kdim = in_ * kernel_ * kernel_;
        const int positions = ho * wo;
        ConstMatrixMap<T> wmat(weight_.value.data(), out_, kdim);
        Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> bias(bias_.value.data(), out_);
        RowMatrix<T> col;
        for (int i = 0; i < x.n(); ++i) {
            MatrixMap<T> ymat(y.sample(i), out_, positions);
            if (pointwise()) {
                ymat.noalias() = wmat * ConstMatrixMap<T>(x.sample(i), in_, positions);
            } else {
                im2col(x.sample(i), x.h(), x.w(), ho, wo, col);
                ymat.noalias() = wmat * col;
            }
            ymat.colwise() += bias;
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        const Tensor<T>& x = input_;
        const int ho = grad_out.h();
        const int wo = grad_out.w();
        const int kdim = in_ * kernel_ * kernel_;
        const int positions = ho * wo;
        Tensor<T> dx = Tensor<T>::like(x);
        ConstMatrixMap<T> wmat(weight_.value.data(), out_, kdim);
        MatrixMap<T> dw(weight_.grad.data(), out_, kdim);
        Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>> db(bias_.grad.data(), out_);
        RowMatrix<T> col;
        RowMatrix<T> dcol;
        for (int i = 0; i < x.n(); ++i) {
            ConstMatrixMap<T> g(grad_out.sample(i), out_, positions);
            db += g.rowwise().sum();
            if (pointwise()) {
                ConstMatrixMap<T> xi(x.sample(i), in_, positions);
                dw.noalias() += g * xi.transpose();
                MatrixMap<T>(dx.sample(i), in_, positions).noalias() = wmat.transpose() * g;
            } else {
                im2col(x.sample(i), x.h(), x.w(), ho, wo, col);
                dw.noalias() += g * col.transpose();
                dcol.noalias() = wmat.transpose() * g;
                col2im(dcol, x.h(), x.w(), ho, wo, dx.sample(i));
            }
        }
        return dx;
    }

    void collect_parameters(std::vector<Parameter<T>*>& out) override {
        out.push_back(&weight_);
        out.push_back(&bias_);
    }

    void initialize(Rng& rng) override {
        const std::size_t fan_in = static_cast<std::size_t>(in_) * kernel_ * kernel_;
        detail::fan_in_uniform(weight_.value, fan_in, rng, detail::kHeGain);
        detail::fan_in_uniform(bias_.value, fan_in, rng);
    }

    std::string name() const override { return name_; }

    Parameter<T>& weight() { return weight_; }
    Parameter<T>& bias() { return bias_; }

private:
    bool pointwise() const { return kernel_ == 1 && stride_ == 1 && pad_ == 0; }

    void im2col(const T* x, int h, int w, int ho, int wo, RowMatrix<T>& col) const {
        col.resize(static_cast<Eigen::Index>(in_) * kernel_ * kernel_, static_cast<Eigen::Index>(ho) * wo);
        for (int c = 0; c < in_; ++c) {
            const T* plane = x + static_cast<std::size_t>(c) * h * w;
            for (int ki = 0; ki < kernel_; ++ki) {
                for (int kj = 0; kj < kernel_; ++kj) {
                    T* row = col.data() + ((static_cast<std::size_t>(c) * kernel_ + ki) * kernel_ + kj) * ho * wo;
                    for (int oy = 0; oy < ho; ++oy) {
                        const int iy = oy * stride_ - pad_ + ki * dilation_;
                        T* dst = row + static_cast<std::size_t>(oy) * wo;
                        if (iy < 0 || iy >= h) {
                            std::fill(dst, dst + wo, T(0));
                            continue;
                        }
                        const T* src = plane + static_cast<std::size_t>(iy) * w;
                        for (int ox = 0; ox < wo; ++ox) {
                            const int ix = ox * stride_ - pad_ + kj * dilation_;
                            dst[ox] = (ix >= 0 && ix < w) ? src[ix] : T(0);
                        }
                    }
                }
            }
        }
    }

    void col2im(const RowMatrix<T>& col, int h, int w, int ho, int wo, T* dx) const {
        for (int c = 0; c < in_; ++c) {
            T* plane = dx + static_cast<std::size_t>(c) * h * w;
            for (int ki = 0; ki < kernel_; ++ki) {
                for (int kj = 0; kj < kernel_; ++kj) {
                    const T* row =
                        col.data() + ((static_cast<std::size_t>(c) * kernel_ + ki) * kernel_ + kj) * ho * wo;
                    for (int oy = 0; oy < ho; ++oy) {
                        const int iy = oy * stride_ - pad_ + ki * dilation_;
                        if (iy < 0 || iy >= h) {
                            continue;
                        }
                        T* dst = plane + static_cast<std::size_t>(iy) * w;
                        const T* src = row + static_cast<std::size_t>(oy) * wo;
                        for (int ox = 0; ox < wo; ++ox) {
                            const int ix = ox * stride_ - pad_ + kj * dilation_;
                            if (ix >= 0 && ix < w) {
                                dst[ix] += src[ox];
                            }
                        }
                    }
                }
            }
        }
    }

    std::string name_;
    int in_, out_, kernel_, stride_, pad_, dilation_;
    Parameter<T> weight_;
    Parameter<T> bias_;
    Tensor<T> input_;
};

/// Per-channel batch normalization over (N, H, W).
template <typename T>
class BatchNorm2d : public Layer<T> {
public:
    BatchNorm2d(std::string name, int channels, double momentum = 0.1, double eps = 1e-5)
        : name_(std::move(name)),
          channels_(channels),
          momentum_(momentum),
          eps_(eps),
          gamma_(name_ + ".weight", {channels}),
          beta_(name_ + ".bias", {channels}),
          running_mean_{name_ + ".running_mean", {channels}, AlignedVector<T>(static_cast<std::size_t>(channels), T(0))},
          running_var_{name_ + ".running_var", {channels}, AlignedVector<T>(static_cast<std::size_t>(channels), T(1))} {
        std::fill(gamma_.value.begin(), gamma_.value.end(), T(1));
    }

    Tensor<T> forward(const Tensor<T>& x, const ForwardContext& ctx) override {
        if (x.c() != channels_) {
            throw ConfigError(fmt::format("{}: expected {} channels, got {}", name_, channels_, x.c()));
        }
        training_ = ctx.training();
        const std::size_t plane = x.plane_size();
        const std::size_t count = plane * static_cast<std::size_t>(x.n());
        if (training_ && count < 2) {
            throw ConfigError(fmt::format("{}: need more than one value per channel in training", name_));
        }
        Tensor<T> y = Tensor<T>::like(x);
        xhat_ = Tensor<T>::like(x);
        inv_std_.assign(static_cast<std::size_t>(channels_), T(0));
        for (int c = 0; c < channels_; ++c) {
            double mean = 0.0;
            double var = 0.0;
            if (training_) {
                for (int n = 0; n < x.n(); ++n) {
                    const T* p = x.sample(n) + c * plane;
                    for (std::size_t j = 0; j < plane; ++j) {
                        mean += p[j];
                    }
                }
                mean /= static_cast<double>(count);
                for (int n = 0; n < x.n(); ++n) {
                    const T* p = x.sample(n) + c * plane;
                    for (std::size_t j = 0; j < plane; ++j) {
                        const double d = p[j] - mean;
                        var += d * d;
                    }
                }
                var /= static_cast<double>(count);
                if (ctx.update_running_stats) {
                    const double unbiased = var * static_cast<double>(count) / static_cast<double>(count - 1);
                    auto& rm = running_mean_.value[static_cast<std::size_t>(c)];
                    auto& rv = running_var_.value[static_cast<std::size_t>(c)];
                    rm = static_cast<T>((1.0 - momentum_) * rm + momentum_ * mean);
                    rv = static_cast<T>((1.0 - momentum_) * rv + momentum_ * unbiased);
                }
            } else {
                mean = running_mean_.value[static_cast<std::size_t>(c)];
                var = running_var_.value[static_cast<std::size_t>(c)];
            }
            const double inv_std = 1.0 / std::sqrt(var + eps_);
            inv_std_[static_cast<std::size_t>(c)] = static_cast<T>(inv_std);
            const T g = gamma_.value[static_cast<std::size_t>(c)];
            const T b = beta_.value[static_cast<std::size_t>(c)];
            const T m = static_cast<T>(mean);
            const T s = static_cast<T>(inv_std);
            for (int n = 0; n < x.n(); ++n) {
                const T* p = x.sample(n) + c * plane;
                T* xh = xhat_.sample(n) + c * plane;
                T* q = y.sample(n) + c * plane;
                for (std::size_t j = 0; j < plane; ++j) {
                    xh[j] = (p[j] - m) * s;
                    q[j] = g * xh[j] + b;
                }
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        Tensor<T> dx = Tensor<T>::like(grad_out);
        const std::size_t plane = grad_out.plane_size();
        const double count = static_cast<double>(plane * static_cast<std::size_t>(grad_out.n()));
        for (int c = 0; c < channels_; ++c) {
            double sum_g = 0.0;
            double sum_gx = 0.0;
            for (int n = 0; n < grad_out.n(); ++n) {
                const T* g = grad_out.sample(n) + c * plane;
                const T* xh = xhat_.sample(n) + c * plane;
                for (std::size_t j = 0; j < plane; ++j) {
                    sum_g += g[j];
                    sum_gx += static_cast<double>(g[j]) * xh[j];
                }
            }
            gamma_.grad[static_cast<std::size_t>(c)] += static_cast<T>(sum_gx);
            beta_.grad[static_cast<std::size_t>(c)] += static_cast<T>(sum_g);
            const double gamma = gamma_.value[static_cast<std::size_t>(c)];
            const double inv_std = inv_std_[static_cast<std::size_t>(c)];
            for (int n = 0; n < grad_out.n(); ++n) {
                const T* g = grad_out.sample(n) + c * plane;
                const T* xh = xhat_.sample(n) + c * plane;
                T* d = dx.sample(n) + c * plane;
                for (std::size_t j = 0; j < plane; ++j) {
                    if (training_) {
                        d[j] = static_cast<T>(gamma * inv_std / count *
                                              (count * g[j] - sum_g - static_cast<double>(xh[j]) * sum_gx));
                    } else {
                        d[j] = static_cast<T>(gamma * inv_std * g[j]);
                    }
                }
            }
        }
        return dx;
    }

    void collect_parameters(std::vector<Parameter<T>*>& out) override {
        out.push_back(&gamma_);
        out.push_back(&beta_);
    }

    void collect_buffers(std::vector<Buffer<T>*>& out) override {
        out.push_back(&running_mean_);
        out.push_back(&running_var_);
    }

    void initialize(Rng&) override {
        std::fill(gamma_.value.begin(), gamma_.value.end(), T(1));
        std::fill(beta_.value.begin(), beta_.value.end(), T(0));
        std::fill(running_mean_.value.begin(), running_mean_.value.end(), T(0));
        std::fill(running_var_.value.begin(), running_var_.value.end(), T(1));
    }

    std::string name() const override { return name_; }

private:
    std::string name_;
    int channels_;
    double momentum_;
    double eps_;
    Parameter<T> gamma_;
    Parameter<T> beta_;
    Buffer<T> running_mean_;
    Buffer<T> running_var_;
    bool training_ = false;
    Tensor<T> xhat_;
    AlignedVector<T> inv_std_;
};

template <typename T>
class ReLU : public Layer<T> {
public:
    explicit ReLU(std::string name = "relu") : name_(std::move(name)) {}

    Tensor<T> forward(const Tensor<T>& x, const ForwardContext&) override {
        output_ = x;
        for (auto& v : output_.storage()) {
            v = v > T(0) ? v : T(0);
        }
        return output_;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        Tensor<T> dx = grad_out;
        for (std::size_t i = 0; i < dx.size(); ++i) {
            if (!(output_[i] > T(0))) {
                dx[i] = T(0);
            }
        }
        return dx;
    }

    std::string name() const override { return name_; }

private:
    std::string name_;
    Tensor<T> output_;
};

/// Average pooling onto a fixed output grid; bins follow floor/ceil index rules
/// so any input size (including smaller than the grid) maps to out_h x out_w.
template <typename T>
class AdaptiveAvgPool2d : public Layer<T> {
public:
    AdaptiveAvgPool2d(std::string name, int out_h, int out_w) : name_(std::move(name)), oh_(out_h), ow_(out_w) {}

    Tensor<T> forward(const Tensor<T>& x, const ForwardContext&) override {
        if (x.h() < 1 || x.w() < 1) {
            throw ConfigError(fmt::format("{}: empty spatial input", name_));
        }
        in_shape_ = x.shape();
        Tensor<T> y(x.n(), x.c(), oh_, ow_);
        for (int n = 0; n < x.n(); ++n) {
            for (int c = 0; c < x.c(); ++c) {
                for (int i = 0; i < oh_; ++i) {
                    const auto [y0, y1] = bin(i, oh_, x.h());
                    for (int j = 0; j < ow_; ++j) {
                        const auto [x0, x1] = bin(j, ow_, x.w());
                        double sum = 0.0;
                        for (int yy = y0; yy < y1; ++yy) {
                            for (int xx = x0; xx < x1; ++xx) {
                                sum += x.at(n, c, yy, xx);
                            }
                        }
                        y.at(n, c, i, j) = static_cast<T>(sum / ((y1 - y0) * (x1 - x0)));
                    }
                }
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        Tensor<T> dx(in_shape_[0], in_shape_[1], in_shape_[2], in_shape_[3]);
        for (int n = 0; n < dx.n(); ++n) {
            for (int c = 0; c < dx.c(); ++c) {
                for (int i = 0; i < oh_; ++i) {
                    const auto [y0, y1] = bin(i, oh_, dx.h());
                    for (int j = 0; j < ow_; ++j) {
                        const auto [x0, x1] = bin(j, ow_, dx.w());
                        const T g = grad_out.at(n, c, i, j) / static_cast<T>((y1 - y0) * (x1 - x0));
                        for (int yy = y0; yy < y1; ++yy) {
                            for (int xx = x0; xx < x1; ++xx) {
                                dx.at(n, c, yy, xx) += g;
                            }
                        }
                    }
                }
            }
        }
        return dx;
    }

    std::string name() const override { return name_; }

private:
    static std::pair<int, int> bin(int i, int out, int in) {
        const int start = (i * in) / out;
        const int end = ((i + 1) * in + out - 1) / out;
        return {start, end};
    }

    std::string name_;
    int oh_, ow_;
    std::array<int, 4> in_shape_{};
};

/// Fully-connected layer on the flattened sample: y = W x + b.
template <typename T>
class Linear : public Layer<T> {
public:
    Linear(std::string name, int in_features, int out_features)
        : name_(std::move(name)),
          in_(in_features),
          out_(out_features),
          weight_(name_ + ".weight", {out_features, in_features}),
          bias_(name_ + ".bias", {out_features}) {}

    int in_features() const { return in_; }
    int out_features() const { return out_; }

    Tensor<T> forward(const Tensor<T>& x, const ForwardContext&) override {
        if (static_cast<int>(x.sample_size()) != in_) {
            throw ConfigError(fmt::format("{}: expected {} input features, got {}", name_, in_, x.sample_size()));
        }
        input_ = x;
        Tensor<T> y(x.n(), out_, 1, 1);
        ConstMatrixMap<T> xm(x.data(), x.n(), in_);
        ConstMatrixMap<T> wm(weight_.value.data(), out_, in_);
        Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>> b(bias_.value.data(), out_);
        MatrixMap<T> ym(y.data(), x.n(), out_);
        ym.noalias() = xm * wm.transpose();
        ym.rowwise() += b;
        return y;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        const int n = input_.n();
        ConstMatrixMap<T> g(grad_out.data(), n, out_);
        ConstMatrixMap<T> xm(input_.data(), n, in_);
        ConstMatrixMap<T> wm(weight_.value.data(), out_, in_);
        MatrixMap<T>(weight_.grad.data(), out_, in_).noalias() += g.transpose() * xm;
        Eigen::Map<Eigen::Matrix<T, 1, Eigen::Dynamic>>(bias_.grad.data(), out_) += g.colwise().sum();
        Tensor<T> dx = Tensor<T>::like(input_);
        MatrixMap<T>(dx.data(), n, in_).noalias() = g * wm;
        return dx;
    }

    void collect_parameters(std::vector<Parameter<T>*>& out) override {
        out.push_back(&weight_);
        out.push_back(&bias_);
    }

    void initialize(Rng& rng) override {
        detail::fan_in_uniform(weight_.value, static_cast<std::size_t>(in_), rng);
        detail::fan_in_uniform(bias_.value, static_cast<std::size_t>(in_), rng);
    }

    std::string name() const override { return name_; }

    Parameter<T>& weight() { return weight_; }
    Parameter<T>& bias() { return bias_; }

private:
    std::string name_;
    int in_, out_;
    Parameter<T> weight_;
    Parameter<T> bias_;
    Tensor<T> input_;
};

template <typename T>
class Sigmoid : public Layer<T> {
public:
    explicit Sigmoid(std::string name = "sigmoid") : name_(std::move(name)) {}

    Tensor<T> forward(const Tensor<T>& x, const ForwardContext&) override {
        output_ = x;
        for (auto& v : output_.storage()) {
            v = v >= T(0) ? T(1) / (T(1) + std::exp(-v)) : std::exp(v) / (T(1) + std::exp(v));
        }
        return output_;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        Tensor<T> dx = grad_out;
        for (std::size_t i = 0; i < dx.size(); ++i) {
            dx[i] *= output_[i] * (T(1) - output_[i]);
        }
        return dx;
    }

    std::string name() const override { return name_; }

private:
    std::string name_;
    Tensor<T> output_;
};

/// Identity on the forward pass; multiplies the upstream gradient by -scale.
template <typename T>
class GradientReversal : public Layer<T> {
public:
    explicit GradientReversal(std::string name = "grad_reversal", double scale = 1.0)
        : name_(std::move(name)), scale_(scale) {}

    Tensor<T> forward(const Tensor<T>& x, const ForwardContext&) override { return x; }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        Tensor<T> dx = grad_out;
        const T factor = static_cast<T>(-scale_);
        for (auto& v : dx.storage()) {
            v *= factor;
        }
        return dx;
    }

    double scale() const { return scale_; }
    void set_scale(double scale) { scale_ = scale; }

    std::string name() const override { return name_; }

private:
    std::string name_;
    double scale_;
};

/// Ordered chain of layers.
template <typename T>
class Sequential : public Layer<T> {
public:
    explicit Sequential(std::string name = "sequential") : name_(std::move(name)) {}

    template <typename L, typename... Args>
    L& add(Args&&... args) {
        auto layer = std::make_unique<L>(std::forward<Args>(args)...);
        L& ref = *layer;
        layers_.push_back(std::move(layer));
        return ref;
    }

    Tensor<T> forward(const Tensor<T>& x, const ForwardContext& ctx) override {
        Tensor<T> out = x;
        for (auto& layer : layers_) {
            out = layer->forward(out, ctx);
        }
        return out;
    }

    Tensor<T> backward(const Tensor<T>& grad_out) override {
        Tensor<T> g = grad_out;
        for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
            g = (*it)->backward(g);
        }
        return g;
    }

    void collect_parameters(std::vector<Parameter<T>*>& out) override {
        for (auto& layer : layers_) {
            layer->collect_parameters(out);
        }
    }

    void collect_buffers(std::vector<Buffer<T>*>& out) override {
        for (auto& layer : layers_) {
            layer->collect_buffers(out);
        }
    }

    void initialize(Rng& rng) override {
        for (auto& layer : layers_) {
            layer->initialize(rng);
        }
    }

    std::string name() const override { return name_; }
    std::size_t size() const { return layers_.size(); }
    Layer<T>& operator[](std::size_t i) { return *layers_[i]; }

private:
    std::string name_;
    std::vector<std::unique_ptr<Layer<T>>> layers_;
};

}  // namespace travnet
