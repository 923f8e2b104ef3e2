#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "travnet/layers.hpp"

namespace travnet {

enum class EncoderKind { tiny, segmentation_backbone };

std::string to_string(EncoderKind kind);
EncoderKind encoder_kind_from_string(const std::string& s);

struct EncoderSpec {
    EncoderKind kind = EncoderKind::tiny;
    int output_channels = 2048;
    // Widths of the three strided stages of the tiny encoder.
    std::vector<int> tiny_widths{16, 32, 64};

    bool operator==(const EncoderSpec&) const = default;
};

struct HeadSpec {
    int reduce_channels = 64;
    int pooled_h = 8;
    int pooled_w = 8;
    int outputs = kDefaultSections;
    double bn_momentum = 0.1;

    int flattened() const { return reduce_channels * pooled_h * pooled_w; }
    bool operator==(const HeadSpec&) const = default;
};

struct DomainClassifierSpec {
    int hidden1 = 1024;
    int hidden2 = 256;
    // Backward multiplier is -reversal_scale; 0 decouples the encoder from the domain loss.
    double reversal_scale = 1.0;

    bool operator==(const DomainClassifierSpec&) const = default;
};

struct ModelSpec {
    EncoderSpec encoder;
    HeadSpec head;
    DomainClassifierSpec domain;
    int input_short_side = 128;

    bool operator==(const ModelSpec&) const = default;
};

void to_json(nlohmann::json& j, const ModelSpec& spec);
void from_json(const nlohmann::json& j, ModelSpec& spec);

/// Image encoder producing an output_channels x h x w map.
template <typename T>
class Encoder : public Layer<T> {
public:
    virtual int output_channels() const = 0;
    virtual std::pair<int, int> output_size(int h, int w) const = 0;
    virtual bool trainable() const { return true; }
    virtual EncoderKind kind() const = 0;
};

/// Desk-scale convolutional encoder: three strided 3x3 stages and a pointwise
/// expansion to the full channel count. A 128 x 227 input yields a 17 x 29 map,
/// the same output stride as the dilated segmentation backbone it stands in for.
template <typename T>
class TinyEncoder : public Encoder<T> {
public:
    explicit TinyEncoder(const EncoderSpec& spec) : out_channels_(spec.output_channels), net_("encoder") {
        if (spec.tiny_widths.size() != 3) {
            throw ConfigError("tiny encoder needs exactly three stage widths");
        }
        const int w1 = spec.tiny_widths[0];
        const int w2 = spec.tiny_widths[1];
        const int w3 = spec.tiny_widths[2];
        stages_.push_back(&net_.template add<Conv2d<T>>("encoder.conv1", 3, w1, 3, 2, 1));
        net_.template add<ReLU<T>>("encoder.relu1");
        stages_.push_back(&net_.template add<Conv2d<T>>("encoder.conv2", w1, w2, 3, 2, 2));
        net_.template add<ReLU<T>>("encoder.relu2");
        stages_.push_back(&net_.template add<Conv2d<T>>("encoder.conv3", w2, w3, 3, 2, 1));
        net_.template add<ReLU<T>>("encoder.relu3");
        stages_.push_back(&net_.template add<Conv2d<T>>("encoder.expand", w3, out_channels_, 1));
        net_.template add<ReLU<T>>("encoder.relu4");
    }

    Tensor<T> forward(const Tensor<T>& x, const ForwardContext& ctx) override {
        if (x.c() != 3) {
            throw ConfigError(fmt::format("encoder expects 3-channel input, got {}", x.c()));
        }
        auto [h, w] = output_size(x.h(), x.w());
        if (h < 1 || w < 1) {
            throw ConfigError(fmt::format("input {}x{} gives an empty encoder map", x.h(), x.w()));
        }
        return net_.forward(x, ctx);
    }
    Tensor<T> backward(const Tensor<T>& g) override { return net_.backward(g); }
    void collect_parameters(std::vector<Parameter<T>*>& out) override { net_.collect_parameters(out); }
    void collect_buffers(std::vector<Buffer<T>*>& out) override { net_.collect_buffers(out); }
    void initialize(Rng& rng) override { net_.initialize(rng); }
    std::string name() const override { return "encoder"; }

    int output_channels() const override { return out_channels_; }
    std::pair<int, int> output_size(int h, int w) const override {
        for (const auto* conv : stages_) {
            if (h < 1 || w < 1) {
                return {0, 0};
            }
            std::tie(h, w) = conv->output_size(h, w);
        }
        return {h, w};
    }
    EncoderKind kind() const override { return EncoderKind::tiny; }

private:
    int out_channels_;
    Sequential<T> net_;
    std::vector<Conv2d<T>*> stages_;
};

/// Adapter slot for an external pretrained segmentation encoder. The wrapped
/// callable maps a (B, 3, H, W) batch to a (B, 2048, h, w) map; its weights are
/// frozen, so no gradient flows past the adapter.
template <typename T>
class BackboneAdapter : public Encoder<T> {
public:
    using ForwardFn = std::function<Tensor<T>(const Tensor<T>&)>;
    using SizeFn = std::function<std::pair<int, int>(int, int)>;

    BackboneAdapter(ForwardFn forward, SizeFn size, int output_channels = 2048)
        : forward_(std::move(forward)), size_(std::move(size)), channels_(output_channels) {}

    Tensor<T> forward(const Tensor<T>& x, const ForwardContext&) override {
        in_shape_ = x.shape();
        Tensor<T> y = forward_(x);
        if (y.n() != x.n() || y.c() != channels_) {
            throw ConfigError(fmt::format("backbone returned {}x{} maps, expected {}x{}", y.n(), y.c(), x.n(),
                                          channels_));
        }
        if (y.h() < 1 || y.w() < 1) {
            throw ConfigError("backbone returned an empty spatial map");
        }
        return y;
    }
    Tensor<T> backward(const Tensor<T>&) override {
        return Tensor<T>(in_shape_[0], in_shape_[1], in_shape_[2], in_shape_[3]);
    }
    std::string name() const override { return "backbone"; }

    int output_channels() const override { return channels_; }
    std::pair<int, int> output_size(int h, int w) const override { return size_(h, w); }
    bool trainable() const override { return false; }
    EncoderKind kind() const override { return EncoderKind::segmentation_backbone; }

private:
    ForwardFn forward_;
    SizeFn size_;
    int channels_;
    std::array<int, 4> in_shape_{};
};

/// Traversability network: encoder, regression head and the domain classifier
/// attached to the shared 4096-d feature tap through a gradient-reversal layer.
///
/// Layout of the head: batch norm on the encoder map, 1x1 convolution down to
/// 64 channels, ReLU, adaptive average pooling to 8x8, flatten (the shared
/// feature tap), fully-connected to k raw scores. No output activation.
///
/// Each backward_* call refers to the latest forward through that part of the
/// network; callers interleave forward/backward pairs.
template <typename T>
class TraversabilityNet {
public:
    explicit TraversabilityNet(ModelSpec spec, std::uint64_t seed = 0);
    TraversabilityNet(ModelSpec spec, std::unique_ptr<Encoder<T>> encoder, std::uint64_t seed = 0);

    TraversabilityNet(const TraversabilityNet&) = delete;
    TraversabilityNet& operator=(const TraversabilityNet&) = delete;

    const ModelSpec& spec() const { return spec_; }
    int sections() const { return spec_.head.outputs; }
    int feature_size() const { return spec_.head.flattened(); }
    Encoder<T>& encoder() { return *encoder_; }

    /// Encoder map for a (B, 3, H, W) batch.
    Tensor<T> encode(const Tensor<T>& images, const ForwardContext& ctx);
    /// Flattened post-pooling features, shape (B, 4096, 1, 1).
    Tensor<T> shared_features(const Tensor<T>& images, const ForwardContext& ctx);
    /// Raw (unbounded) scores from shared features, shape (B, k, 1, 1).
    Tensor<T> regress(const Tensor<T>& features, const ForwardContext& ctx);
    Tensor<T> forward_traversability(const Tensor<T>& images, const ForwardContext& ctx);
    /// Target-domain probability per sample, shape (B, 1, 1, 1).
    Tensor<T> forward_domain(const Tensor<T>& features, const ForwardContext& ctx);

    /// Returns the gradient w.r.t. the shared features.
    Tensor<T> backward_regress(const Tensor<T>& grad_scores);
    /// Returns the (reversed) gradient w.r.t. the shared features.
    Tensor<T> backward_domain(const Tensor<T>& grad_probs);
    /// Propagates a feature gradient through the head trunk and encoder.
    void backward_features(const Tensor<T>& grad_features);

    /// Encoder and head layers before the feature tap.
    std::vector<Parameter<T>*> trunk_parameters();
    std::vector<Parameter<T>*> regressor_parameters();
    std::vector<Parameter<T>*> domain_parameters();
    /// Everything the regression loss trains (trunk + regressor).
    std::vector<Parameter<T>*> regression_parameters();
    std::vector<Parameter<T>*> all_parameters();
    std::vector<Buffer<T>*> buffers();

    void zero_grad();
    double reversal_scale() const { return grl_->scale(); }
    void set_reversal_scale(double s) { grl_->set_scale(s); }

private:
    void build(std::uint64_t seed);

    ModelSpec spec_;
    std::unique_ptr<Encoder<T>> encoder_;
    Sequential<T> trunk_{"head"};
    Linear<T>* regressor_ = nullptr;
    Sequential<T> regressor_seq_{"head.fc"};
    Sequential<T> domain_{"domain"};
    GradientReversal<T>* grl_ = nullptr;
    std::array<int, 4> tap_shape_{};
};

std::unique_ptr<Encoder<float>> make_encoder(const EncoderSpec& spec);

extern template class TraversabilityNet<float>;
extern template class TraversabilityNet<double>;

}  // namespace travnet
