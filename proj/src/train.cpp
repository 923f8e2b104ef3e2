#include "travnet/train.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "travnet/dataset.hpp"
#include "travnet/image_io.hpp"
#include "travnet/rng.hpp"

namespace travnet {

std::string to_string(SelectionMetric m) { return m == SelectionMetric::train_mae ? "train_mae" : "train_loss"; }

SelectionMetric selection_metric_from_string(const std::string& s) {
    if (s == "train_mae") {
        return SelectionMetric::train_mae;
    }
    if (s == "train_loss") {
        return SelectionMetric::train_loss;
    }
    throw ConfigError(fmt::format("unknown selection metric '{}'", s));
}

nlohmann::json to_json(const EpochRecord& r) {
    nlohmann::json j = {{"epoch", r.epoch}, {"train_mae", r.train_mae}, {"train_loss", r.train_loss},
                        {"timestamp", r.timestamp}};
    if (r.domain_acc) {
        j["domain_acc"] = *r.domain_acc;
    }
    if (r.domain_loss) {
        j["domain_loss"] = *r.domain_loss;
    }
    return j;
}

void TrainConfig::validate() const {
    if (epochs < 1 || batch_size < 1) {
        throw ConfigError("epochs and batch size must be positive");
    }
    if (!(main_optimizer.lr > 0.0) || !(domain_optimizer.lr > 0.0)) {
        throw ConfigError("learning rates must be positive");
    }
    loss.validate();
}

nlohmann::json to_json(const TrainConfig& cfg) {
    return {{"epochs", cfg.epochs},
            {"batch_size", cfg.batch_size},
            {"main_optimizer",
             {{"lr", cfg.main_optimizer.lr},
              {"beta1", cfg.main_optimizer.beta1},
              {"beta2", cfg.main_optimizer.beta2},
              {"eps", cfg.main_optimizer.eps}}},
            {"domain_optimizer", {{"lr", cfg.domain_optimizer.lr}, {"momentum", cfg.domain_optimizer.momentum}}},
            {"loss",
             {{"alpha", cfg.loss.alpha}, {"lambda", cfg.loss.lambda}, {"safety_enabled", cfg.loss.safety_enabled}}},
            {"seed", cfg.seed},
            {"checkpoint_metric", to_string(cfg.checkpoint_metric)}};
}

int select_best_epoch(const std::vector<EpochRecord>& log, SelectionMetric metric) {
    if (log.empty()) {
        throw ConfigError("empty epoch log");
    }
    int best = log.front().epoch;
    double best_value = std::numeric_limits<double>::infinity();
    for (const auto& r : log) {
        const double v = metric == SelectionMetric::train_mae ? r.train_mae : r.train_loss;
        if (v < best_value) {
            best_value = v;
            best = r.epoch;
        }
    }
    return best;
}

std::vector<ImageFrame> prepare_frames(const std::vector<ImageFrame>& frames, int short_side) {
    std::vector<ImageFrame> out;
    out.reserve(frames.size());
    for (const auto& f : frames) {
        out.push_back(resize_short_side(f, short_side));
    }
    return out;
}

LabeledSet prepare_set(const LabeledSet& set, int short_side) {
    LabeledSet out = set;
    for (auto& s : out) {
        s.frame = resize_short_side(s.frame, short_side);
    }
    return out;
}

namespace {

std::vector<std::size_t> shuffled(std::size_t n, Rng& rng) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
    }
    return order;
}

void check_shapes(const LabeledSet& set, int k) {
    if (set.empty()) {
        throw ConfigError("training set is empty");
    }
    const ImageFrame& first = set.front().frame;
    for (const auto& s : set) {
        if (s.scores.size() != k) {
            throw ConfigError(fmt::format("sample '{}' has {} scores, model predicts {}", s.id, s.scores.size(), k));
        }
        if (s.frame.height != first.height || s.frame.width != first.width || s.frame.channels != 3) {
            throw ConfigError("all training frames must share one size after resizing");
        }
    }
}

class Trainer {
public:
    Trainer(const TrainConfig& cfg, const ModelSpec& spec, const LabeledSet& source)
        : cfg_(cfg),
          model_(std::make_unique<TraversabilityNet<float>>(spec, cfg.seed)),
          source_(prepare_set(source, spec.input_short_side)),
          reg_params_(model_->regression_parameters()),
          adam_(reg_params_, cfg.main_optimizer),
          batch_rng_(derive_seed(cfg.seed, seed_stream::regression_batches)) {
        cfg_.validate();
        check_shapes(source_, model_->sections());
    }

    void enable_adaptation(const std::vector<ImageFrame>& target) {
        if (target.empty()) {
            throw ConfigError("adaptation needs at least one target frame");
        }
        if (cfg_.batch_size < 2) {
            throw ConfigError("adaptation needs a batch size of at least 2");
        }
        target_ = prepare_frames(target, model_->spec().input_short_side);
        const ImageFrame& ref = source_.front().frame;
        for (const auto& f : target_) {
            if (f.height != ref.height || f.width != ref.width) {
                throw ConfigError("target frames must match the source frame size after resizing");
            }
        }
        sgd_ = std::make_unique<SgdMomentum<float>>(model_->domain_parameters(), cfg_.domain_optimizer);
        domain_rng_ = Rng(derive_seed(cfg_.seed, seed_stream::domain_batches));
    }

    TrainResult run() {
        TrainResult result;
        double best_value = std::numeric_limits<double>::infinity();
        for (int epoch = 1; epoch <= cfg_.epochs; ++epoch) {
            EpochRecord rec = run_epoch(epoch);
            const double v = cfg_.checkpoint_metric == SelectionMetric::train_mae ? rec.train_mae : rec.train_loss;
            if (v < best_value) {
                best_value = v;
                result.best_epoch = epoch;
                result.checkpoint = capture_checkpoint(*model_, &adam_, sgd_.get());
                result.checkpoint.epoch = epoch;
                result.checkpoint.seed = cfg_.seed;
                result.checkpoint.metadata = {{"train_config", to_json(cfg_)},
                                              {"adaptation", sgd_ != nullptr},
                                              {"train_mae", rec.train_mae}};
            }
            if (cfg_.on_epoch) {
                cfg_.on_epoch(rec);
            }
            if (cfg_.inspect) {
                cfg_.inspect(rec, *model_);
            }
            result.log.push_back(std::move(rec));
        }
        restore_checkpoint(*model_, result.checkpoint);
        result.model = std::move(model_);
        return result;
    }

private:
    EpochRecord run_epoch(int epoch) {
        const auto order = shuffled(source_.size(), batch_rng_);
        const int k = model_->sections();
        double loss_sum = 0.0;
        double abs_err_sum = 0.0;
        double domain_loss_sum = 0.0;
        std::size_t domain_correct = 0;
        std::size_t domain_seen = 0;
        const auto batch = static_cast<std::size_t>(cfg_.batch_size);
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t end = std::min(order.size(), start + batch);
            std::vector<const ImageFrame*> frames;
            ScoreMatrix targets(static_cast<Eigen::Index>(end - start), k);
            for (std::size_t i = start; i < end; ++i) {
                const LabeledSample& s = source_[order[i]];
                frames.push_back(&s.frame);
                for (int j = 0; j < k; ++j) {
                    targets(static_cast<Eigen::Index>(i - start), j) = s.scores[j];
                }
            }
            model_->zero_grad();

            // Regression on the source batch.
            const Tensor<float> images = stack_frames<float>(std::span<const ImageFrame* const>(frames));
            const ScoreMatrix pred = to_score_matrix(model_->forward_traversability(images, kTrain));
            const double norm = cfg_.loss.lambda > 0.0 ? squared_norm(reg_params_) : 0.0;
            const double loss = safety_loss(targets, pred, cfg_.loss, norm);
            if (!std::isfinite(loss)) {
                throw DivergenceError(fmt::format("non-finite training loss at epoch {}, batch {}", epoch,
                                                  start / batch));
            }
            loss_sum += loss;
            for (Eigen::Index i = 0; i < pred.size(); ++i) {
                const double p = std::min(1.0, std::max(0.0, pred.data()[i]));
                abs_err_sum += std::abs(targets.data()[i] - p);
            }
            const Tensor<float> grad_features =
                model_->backward_regress(to_tensor<float>(safety_loss_grad(targets, pred, cfg_.loss)));
            model_->backward_features(grad_features);

            if (sgd_) {
                const auto [dloss, correct, seen] = domain_pass(epoch);
                domain_loss_sum += dloss;
                domain_correct += correct;
                domain_seen += seen;
            }

            add_l2_gradient(reg_params_, cfg_.loss.lambda);
            adam_.step();
            if (sgd_) {
                sgd_->step();
            }
        }
        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss_sum;
        rec.train_mae = abs_err_sum / static_cast<double>(source_.size() * static_cast<std::size_t>(k));
        if (sgd_) {
            rec.domain_loss = domain_loss_sum;
            rec.domain_acc = static_cast<double>(domain_correct) / static_cast<double>(domain_seen);
        }
        rec.timestamp = utc_timestamp();
        return rec;
    }

    std::tuple<double, std::size_t, std::size_t> domain_pass(int epoch) {
        const int n_source = cfg_.batch_size / 2;
        const int n_target = cfg_.batch_size - n_source;
        std::vector<const ImageFrame*> frames;
        std::vector<double> labels;
        for (int i = 0; i < n_source; ++i) {
            frames.push_back(&source_[static_cast<std::size_t>(domain_rng_() % source_.size())].frame);
            labels.push_back(0.0);
        }
        for (int i = 0; i < n_target; ++i) {
            frames.push_back(&target_[static_cast<std::size_t>(domain_rng_() % target_.size())]);
            labels.push_back(1.0);
        }
        // Batch statistics of the mixed batch, running statistics left untouched.
        const ForwardContext ctx{Phase::train, false};
        const Tensor<float> images = stack_frames<float>(std::span<const ImageFrame* const>(frames));
        const Tensor<float> features = model_->shared_features(images, ctx);
        const Tensor<float> probs = model_->forward_domain(features, ctx);
        std::vector<double> p(probs.size());
        std::size_t correct = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = probs[i];
            correct += static_cast<std::size_t>((p[i] > 0.5) == (labels[i] == 1.0));
        }
        const double loss = domain_bce_loss(p, labels);
        if (!std::isfinite(loss)) {
            throw DivergenceError(fmt::format("non-finite domain loss at epoch {}", epoch));
        }
        const std::vector<double> g = domain_bce_grad(p, labels);
        Tensor<float> grad_probs(probs.n(), 1, 1, 1);
        for (std::size_t i = 0; i < g.size(); ++i) {
            grad_probs[i] = static_cast<float>(g[i]);
        }
        model_->backward_features(model_->backward_domain(grad_probs));
        return {loss, correct, p.size()};
    }

    TrainConfig cfg_;
    std::unique_ptr<TraversabilityNet<float>> model_;
    LabeledSet source_;
    std::vector<ImageFrame> target_;
    std::vector<Parameter<float>*> reg_params_;
    Adam<float> adam_;
    std::unique_ptr<SgdMomentum<float>> sgd_;
    Rng batch_rng_;
    Rng domain_rng_;
};

}  // namespace

TrainResult train_supervised(const LabeledSet& train_set, const TrainConfig& cfg, const ModelSpec& spec) {
    Trainer trainer(cfg, spec, train_set);
    return trainer.run();
}

TrainResult train_adaptation(const AdaptationSetup& setup, const TrainConfig& cfg, const ModelSpec& spec) {
    Trainer trainer(cfg, spec, setup.source);
    trainer.enable_adaptation(setup.target);
    return trainer.run();
}

ScoreMatrix predict_raw(TraversabilityNet<float>& model, const std::vector<ImageFrame>& frames, int batch_size) {
    if (batch_size < 1) {
        throw ConfigError("batch size must be positive");
    }
    const int k = model.sections();
    ScoreMatrix out(static_cast<Eigen::Index>(frames.size()), k);
    const std::vector<ImageFrame> prepared = prepare_frames(frames, model.spec().input_short_side);
    for (std::size_t start = 0; start < prepared.size(); start += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(prepared.size(), start + static_cast<std::size_t>(batch_size));
        std::vector<const ImageFrame*> batch;
        for (std::size_t i = start; i < end; ++i) {
            batch.push_back(&prepared[i]);
        }
        const Tensor<float> raw =
            model.forward_traversability(stack_frames<float>(std::span<const ImageFrame* const>(batch)), kEval);
        for (std::size_t i = 0; i < end - start; ++i) {
            for (int j = 0; j < k; ++j) {
                out(static_cast<Eigen::Index>(start + i), j) = raw.at(static_cast<int>(i), j, 0, 0);
            }
        }
    }
    return out;
}

std::vector<TraversabilityVector> predict(TraversabilityNet<float>& model, const std::vector<ImageFrame>& frames,
                                          int batch_size) {
    const ScoreMatrix raw = predict_raw(model, frames, batch_size);
    std::vector<TraversabilityVector> out;
    out.reserve(frames.size());
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
        std::vector<double> row(raw.row(i).data(), raw.row(i).data() + raw.cols());
        out.push_back(clamp_scores(row));
    }
    return out;
}

double evaluate_mae(TraversabilityNet<float>& model, const LabeledSet& set) {
    if (set.empty()) {
        throw ConfigError("cannot evaluate on an empty dataset");
    }
    std::vector<ImageFrame> frames;
    frames.reserve(set.size());
    for (const auto& s : set) {
        frames.push_back(s.frame);
    }
    const auto preds = predict(model, frames);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (set[i].scores.size() != preds[i].size()) {
            throw ConfigError("ground truth and prediction differ in section count");
        }
        for (int j = 0; j < preds[i].size(); ++j) {
            sum += std::abs(set[i].scores[j] - preds[i][j]);
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

double domain_accuracy(TraversabilityNet<float>& model, const std::vector<ImageFrame>& source,
                       const std::vector<ImageFrame>& target) {
    if (source.empty() && target.empty()) {
        throw ConfigError("no frames for domain accuracy");
    }
    std::size_t correct = 0;
    auto run = [&](const std::vector<ImageFrame>& frames, bool is_target) {
        const auto prepared = prepare_frames(frames, model.spec().input_short_side);
        for (std::size_t start = 0; start < prepared.size(); start += 32) {
            const std::size_t end = std::min(prepared.size(), start + 32);
            std::vector<const ImageFrame*> batch;
            for (std::size_t i = start; i < end; ++i) {
                batch.push_back(&prepared[i]);
            }
            const Tensor<float> feats =
                model.shared_features(stack_frames<float>(std::span<const ImageFrame* const>(batch)), kEval);
            const Tensor<float> p = model.forward_domain(feats, kEval);
            for (std::size_t i = 0; i < p.size(); ++i) {
                correct += static_cast<std::size_t>((p[i] > 0.5f) == is_target);
            }
        }
    };
    run(source, false);
    run(target, true);
    return static_cast<double>(correct) / static_cast<double>(source.size() + target.size());
}

void append_epoch_log(const std::filesystem::path& path, const EpochRecord& record) {
    std::ofstream out(path, std::ios::app);
    if (!out) {
        throw DataError(fmt::format("cannot append to epoch log {}", path.string()));
    }
    out << to_json(record).dump() << '\n';
}

std::vector<EpochRecord> read_epoch_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("cannot open epoch log {}", path.string()));
    }
    std::vector<EpochRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto j = nlohmann::json::parse(line);
        EpochRecord r;
        r.epoch = j.at("epoch").get<int>();
        r.train_mae = j.at("train_mae").get<double>();
        r.train_loss = j.at("train_loss").get<double>();
        if (j.contains("domain_acc")) {
            r.domain_acc = j.at("domain_acc").get<double>();
        }
        if (j.contains("domain_loss")) {
            r.domain_loss = j.at("domain_loss").get<double>();
        }
        r.timestamp = j.value("timestamp", std::string{});
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace travnet
