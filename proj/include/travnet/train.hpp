#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "travnet/checkpoint.hpp"
#include "travnet/losses.hpp"
#include "travnet/model.hpp"
#include "travnet/optim.hpp"

namespace travnet {

/// Training loss became non-finite.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LabeledSample {
    ImageFrame frame;
    TraversabilityVector scores;
    std::string domain;
    std::string id;
};
using LabeledSet = std::vector<LabeledSample>;

/// How "best training accuracy" is read when choosing the epoch to keep.
enum class SelectionMetric { train_mae, train_loss };

std::string to_string(SelectionMetric m);
SelectionMetric selection_metric_from_string(const std::string& s);

struct EpochRecord {
    int epoch = 0;  // 1-based
    double train_mae = 0.0;
    double train_loss = 0.0;
    std::optional<double> domain_acc;
    std::optional<double> domain_loss;
    std::string timestamp;
};

nlohmann::json to_json(const EpochRecord& r);

struct TrainConfig {
    int epochs = 200;
    int batch_size = 16;
    AdamConfig main_optimizer{};
    SgdConfig domain_optimizer{};
    LossConfig loss{};
    std::uint64_t seed = 0;
    SelectionMetric checkpoint_metric = SelectionMetric::train_mae;
    // Called after every epoch, e.g. to append to an epoch log.
    std::function<void(const EpochRecord&)> on_epoch;
    // Called after every epoch with the live model, e.g. for held-out probes.
    // Must not change parameters or buffers.
    std::function<void(const EpochRecord&, TraversabilityNet<float>&)> inspect;

    void validate() const;
};

nlohmann::json to_json(const TrainConfig& cfg);

/// Source frames carry labels; target frames are images only. Source maps to
/// domain label 0, target to 1.
struct AdaptationSetup {
    LabeledSet source;
    std::vector<ImageFrame> target;
};

struct TrainResult {
    std::unique_ptr<TraversabilityNet<float>> model;  // weights of the selected epoch
    Checkpoint checkpoint;                            // same weights plus optimizer state
    int best_epoch = 0;
    std::vector<EpochRecord> log;
};

/// Supervised training with the safety-preserving loss on every sample.
TrainResult train_supervised(const LabeledSet& train_set, const TrainConfig& cfg, const ModelSpec& spec);

/// Source regression plus domain classification through the gradient-reversal
/// layer. Per step: regression gradients on a source batch, domain gradients on
/// a half-source/half-target batch, then the main optimizer steps encoder + head
/// and the domain optimizer steps the classifier. The domain pass does not move
/// batch-norm running statistics, so reversal_scale = 0 reproduces
/// train_supervised exactly for the regression path.
TrainResult train_adaptation(const AdaptationSetup& setup, const TrainConfig& cfg, const ModelSpec& spec);

/// Picks the epoch with the lowest selection metric (earliest on ties).
int select_best_epoch(const std::vector<EpochRecord>& log, SelectionMetric metric);

/// Resizes frames so the short side matches the model input.
std::vector<ImageFrame> prepare_frames(const std::vector<ImageFrame>& frames, int short_side);
LabeledSet prepare_set(const LabeledSet& set, int short_side);

/// Raw network outputs (batch x k) in evaluation mode.
ScoreMatrix predict_raw(TraversabilityNet<float>& model, const std::vector<ImageFrame>& frames,
                        int batch_size = 32);
/// Clamped predictions, one vector per frame.
std::vector<TraversabilityVector> predict(TraversabilityNet<float>& model, const std::vector<ImageFrame>& frames,
                                          int batch_size = 32);

/// Mean over frames and sections of |t - clamp(prediction)|.
double evaluate_mae(TraversabilityNet<float>& model, const LabeledSet& set);

/// Fraction of frames the domain classifier labels correctly (p > 0.5 means target).
double domain_accuracy(TraversabilityNet<float>& model, const std::vector<ImageFrame>& source,
                       const std::vector<ImageFrame>& target);

/// Appends one JSON line per record.
void append_epoch_log(const std::filesystem::path& path, const EpochRecord& record);
std::vector<EpochRecord> read_epoch_log(const std::filesystem::path& path);

}  // namespace travnet
