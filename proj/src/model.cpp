#include "travnet/model.hpp"

#include "travnet/rng.hpp"

namespace travnet {

std::string to_string(EncoderKind kind) {
    switch (kind) {
        case EncoderKind::tiny:
            return "tiny";
        case EncoderKind::segmentation_backbone:
            return "segmentation_backbone";
    }
    return "unknown";
}

EncoderKind encoder_kind_from_string(const std::string& s) {
    if (s == "tiny") {
        return EncoderKind::tiny;
    }
    if (s == "segmentation_backbone") {
        return EncoderKind::segmentation_backbone;
    }
    throw ConfigError(fmt::format("unknown encoder kind '{}'", s));
}

void to_json(nlohmann::json& j, const ModelSpec& spec) {
    j = nlohmann::json{
        {"encoder",
         {{"kind", to_string(spec.encoder.kind)},
          {"output_channels", spec.encoder.output_channels},
          {"tiny_widths", spec.encoder.tiny_widths}}},
        {"head",
         {{"reduce_channels", spec.head.reduce_channels},
          {"pooled_h", spec.head.pooled_h},
          {"pooled_w", spec.head.pooled_w},
          {"outputs", spec.head.outputs},
          {"bn_momentum", spec.head.bn_momentum}}},
        {"domain",
         {{"hidden1", spec.domain.hidden1},
          {"hidden2", spec.domain.hidden2},
          {"reversal_scale", spec.domain.reversal_scale}}},
        {"input_short_side", spec.input_short_side},
    };
}

void from_json(const nlohmann::json& j, ModelSpec& spec) {
    spec = ModelSpec{};
    const auto& e = j.at("encoder");
    spec.encoder.kind = encoder_kind_from_string(e.at("kind").get<std::string>());
    spec.encoder.output_channels = e.at("output_channels").get<int>();
    spec.encoder.tiny_widths = e.at("tiny_widths").get<std::vector<int>>();
    const auto& h = j.at("head");
    spec.head.reduce_channels = h.at("reduce_channels").get<int>();
    spec.head.pooled_h = h.at("pooled_h").get<int>();
    spec.head.pooled_w = h.at("pooled_w").get<int>();
    spec.head.outputs = h.at("outputs").get<int>();
    spec.head.bn_momentum = h.value("bn_momentum", 0.1);
    const auto& d = j.at("domain");
    spec.domain.hidden1 = d.at("hidden1").get<int>();
    spec.domain.hidden2 = d.at("hidden2").get<int>();
    spec.domain.reversal_scale = d.value("reversal_scale", 1.0);
    spec.input_short_side = j.value("input_short_side", 128);
}

template <typename T>
TraversabilityNet<T>::TraversabilityNet(ModelSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
    if (spec_.encoder.kind != EncoderKind::tiny) {
        throw ConfigError("a segmentation backbone must be supplied through the adapter constructor");
    }
    encoder_ = std::make_unique<TinyEncoder<T>>(spec_.encoder);
    build(seed);
}

template <typename T>
TraversabilityNet<T>::TraversabilityNet(ModelSpec spec, std::unique_ptr<Encoder<T>> encoder, std::uint64_t seed)
    : spec_(std::move(spec)), encoder_(std::move(encoder)) {
    if (!encoder_) {
        throw ConfigError("encoder must not be null");
    }
    spec_.encoder.kind = encoder_->kind();
    spec_.encoder.output_channels = encoder_->output_channels();
    build(seed);
}

template <typename T>
void TraversabilityNet<T>::build(std::uint64_t seed) {
    const HeadSpec& head = spec_.head;
    if (head.outputs < 1 || head.reduce_channels < 1 || head.pooled_h < 1 || head.pooled_w < 1) {
        throw ConfigError("invalid head configuration");
    }
    const int channels = encoder_->output_channels();
    trunk_.template add<BatchNorm2d<T>>("head.bn", channels, head.bn_momentum);
    trunk_.template add<Conv2d<T>>("head.reduce", channels, head.reduce_channels, 1);
    trunk_.template add<ReLU<T>>("head.relu");
    trunk_.template add<AdaptiveAvgPool2d<T>>("head.pool", head.pooled_h, head.pooled_w);
    regressor_ = &regressor_seq_.template add<Linear<T>>("head.fc", head.flattened(), head.outputs);

    const DomainClassifierSpec& dom = spec_.domain;
    grl_ = &domain_.template add<GradientReversal<T>>("domain.reversal", dom.reversal_scale);
    domain_.template add<Linear<T>>("domain.fc1", head.flattened(), dom.hidden1);
    domain_.template add<ReLU<T>>("domain.relu1");
    domain_.template add<Linear<T>>("domain.fc2", dom.hidden1, dom.hidden2);
    domain_.template add<ReLU<T>>("domain.relu2");
    domain_.template add<Linear<T>>("domain.fc3", dom.hidden2, 1);
    domain_.template add<Sigmoid<T>>("domain.sigmoid");

    Rng model_rng(derive_seed(seed, seed_stream::model_init));
    encoder_->initialize(model_rng);
    trunk_.initialize(model_rng);
    regressor_seq_.initialize(model_rng);
    Rng domain_rng(derive_seed(seed, seed_stream::domain_init));
    domain_.initialize(domain_rng);
}

template <typename T>
Tensor<T> TraversabilityNet<T>::encode(const Tensor<T>& images, const ForwardContext& ctx) {
    return encoder_->forward(images, ctx);
}

template <typename T>
Tensor<T> TraversabilityNet<T>::shared_features(const Tensor<T>& images, const ForwardContext& ctx) {
    Tensor<T> pooled = trunk_.forward(encode(images, ctx), ctx);
    tap_shape_ = pooled.shape();
    Tensor<T> flat(pooled.n(), static_cast<int>(pooled.sample_size()), 1, 1);
    flat.storage() = std::move(pooled.storage());
    return flat;
}

template <typename T>
Tensor<T> TraversabilityNet<T>::regress(const Tensor<T>& features, const ForwardContext& ctx) {
    return regressor_seq_.forward(features, ctx);
}

template <typename T>
Tensor<T> TraversabilityNet<T>::forward_traversability(const Tensor<T>& images, const ForwardContext& ctx) {
    return regress(shared_features(images, ctx), ctx);
}

template <typename T>
Tensor<T> TraversabilityNet<T>::forward_domain(const Tensor<T>& features, const ForwardContext& ctx) {
    if (static_cast<int>(features.sample_size()) != feature_size()) {
        throw ConfigError(fmt::format("domain classifier expects {} features, got {}", feature_size(),
                                      features.sample_size()));
    }
    return domain_.forward(features, ctx);
}

template <typename T>
Tensor<T> TraversabilityNet<T>::backward_regress(const Tensor<T>& grad_scores) {
    return regressor_seq_.backward(grad_scores);
}

template <typename T>
Tensor<T> TraversabilityNet<T>::backward_domain(const Tensor<T>& grad_probs) {
    return domain_.backward(grad_probs);
}

template <typename T>
void TraversabilityNet<T>::backward_features(const Tensor<T>& grad_features) {
    Tensor<T> g(tap_shape_[0], tap_shape_[1], tap_shape_[2], tap_shape_[3]);
    if (g.size() != grad_features.size()) {
        throw ConfigError("feature gradient does not match the latest forward pass");
    }
    g.storage() = grad_features.storage();
    Tensor<T> g_map = trunk_.backward(g);
    if (encoder_->trainable()) {
        encoder_->backward(g_map);
    }
}

template <typename T>
std::vector<Parameter<T>*> TraversabilityNet<T>::trunk_parameters() {
    std::vector<Parameter<T>*> out;
    encoder_->collect_parameters(out);
    trunk_.collect_parameters(out);
    return out;
}

template <typename T>
std::vector<Parameter<T>*> TraversabilityNet<T>::regressor_parameters() {
    std::vector<Parameter<T>*> out;
    regressor_seq_.collect_parameters(out);
    return out;
}

template <typename T>
std::vector<Parameter<T>*> TraversabilityNet<T>::domain_parameters() {
    std::vector<Parameter<T>*> out;
    domain_.collect_parameters(out);
    return out;
}

template <typename T>
std::vector<Parameter<T>*> TraversabilityNet<T>::regression_parameters() {
    auto out = trunk_parameters();
    auto reg = regressor_parameters();
    out.insert(out.end(), reg.begin(), reg.end());
    return out;
}

template <typename T>
std::vector<Parameter<T>*> TraversabilityNet<T>::all_parameters() {
    auto out = regression_parameters();
    auto dom = domain_parameters();
    out.insert(out.end(), dom.begin(), dom.end());
    return out;
}

template <typename T>
std::vector<Buffer<T>*> TraversabilityNet<T>::buffers() {
    std::vector<Buffer<T>*> out;
    encoder_->collect_buffers(out);
    trunk_.collect_buffers(out);
    return out;
}

template <typename T>
void TraversabilityNet<T>::zero_grad() {
    for (auto* p : all_parameters()) {
        p->zero_grad();
    }
}

std::unique_ptr<Encoder<float>> make_encoder(const EncoderSpec& spec) {
    if (spec.kind != EncoderKind::tiny) {
        throw ConfigError("only the tiny encoder can be constructed from a spec alone");
    }
    return std::make_unique<TinyEncoder<float>>(spec);
}

template class TraversabilityNet<float>;
template class TraversabilityNet<double>;

}  // namespace travnet
