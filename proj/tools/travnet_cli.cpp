// travnet command-line tool.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "travnet/annotation_server.hpp"
#include "travnet/checkpoint.hpp"
#include "travnet/dataset.hpp"
#include "travnet/eval.hpp"
#include "travnet/image_io.hpp"
#include "travnet/loader.hpp"
#include "travnet/nav.hpp"
#include "travnet/synthworld.hpp"
#include "travnet/train.hpp"

namespace fs = std::filesystem;
using namespace travnet;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Resolved options of the subcommand, written next to its outputs so the run
// can be repeated with `travnet <subcommand> --config <file>`.
void write_run_config(const CLI::App& sub, const fs::path& path) {
    if (!path.parent_path().empty()) {
        fs::create_directories(path.parent_path());
    }
    write_file_atomic(path, fmt::format("# travnet {}\n{}", sub.get_name(), sub.config_to_str(true, false)));
}

void add_config(CLI::App& sub) {
    sub.set_config("--config", "", "Read options from a TOML/INI file; command-line flags win");
}

std::vector<std::string> domains_of(const LabeledSet& set) {
    std::vector<std::string> out;
    for (const auto& s : set) {
        out.push_back(s.domain);
    }
    return out;
}

std::vector<TraversabilityVector> scores_of(const LabeledSet& set) {
    std::vector<TraversabilityVector> out;
    for (const auto& s : set) {
        out.push_back(s.scores);
    }
    return out;
}

std::vector<ImageFrame> frames_of(const LabeledSet& set) {
    std::vector<ImageFrame> out;
    for (const auto& s : set) {
        out.push_back(s.frame);
    }
    return out;
}

fs::path overlay_name(const std::string& image_path) {
    return fs::path(image_path).stem().string() + "_overlay.png";
}

// ---- select-frames ------------------------------------------------------------

struct SelectOptions {
    std::string manifest;
    std::string out;
    SelectionConfig cfg;
};

int run_select(const CLI::App& sub, const SelectOptions& o) {
    o.cfg.validate();
    const auto records = read_manifest(o.manifest);
    auto kept = select_frames(records, o.cfg);
    // Keep image paths valid relative to the output manifest.
    const fs::path in_dir = fs::absolute(o.manifest).parent_path();
    const fs::path out_dir = fs::absolute(o.out).parent_path();
    for (auto& r : kept) {
        r.image_path = fs::relative(in_dir / r.image_path, out_dir).generic_string();
    }
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
    }
    write_manifest(o.out, kept);
    write_run_config(sub, fs::path(o.out).string() + ".run.toml");
    std::cout << fmt::format("kept {} of {} frames\n", kept.size(), records.size());
    return 0;
}

// ---- synth-gen ----------------------------------------------------------------

struct SynthOptions {
    int n = 100;
    std::string style = "asphalt_like";
    std::uint64_t seed = 0;
    int height = 128;
    int width = 227;
    int max_obstacles = 4;
    double noise = 0.02;
    int k = kDefaultSections;
    std::string out_dir;
};

int run_synth(const CLI::App& sub, const SynthOptions& o) {
    if (o.n < 1) {
        throw ConfigError("--n must be positive");
    }
    const GroundStyle style = ground_style_from_string(o.style);
    SceneDistribution dist;
    dist.height = o.height;
    dist.width = o.width;
    dist.max_obstacles = o.max_obstacles;
    dist.noise_level = o.noise;
    const fs::path out(o.out_dir);
    fs::create_directories(out / "images");
    fs::create_directories(out / "annotations");
    const auto samples = generate_domain_set(o.n, style, o.seed, dist, o.k);
    std::vector<FrameRecord> records;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::string rel = fmt::format("images/scene_{:05d}.png", i);
        save_image(out / rel, samples[i].frame);
        FrameRecord r;
        r.image_path = rel;
        r.pose.x = static_cast<double>(i);  // one meter apart, so frame selection keeps all
        r.pose.frame_index = static_cast<std::int64_t>(i);
        r.pose.timestamp = 0.1 * static_cast<double>(i);
        r.domain = samples[i].domain;
        records.push_back(r);
        Annotation a;
        a.image_path = rel;
        a.k = o.k;
        a.cutoff_y = ground_truth_cutoffs(samples[i].spec, o.k);
        a.annotator_id = "synthworld";
        a.created_at = "1970-01-01T00:00:00Z";
        write_annotation_atomic(out / "annotations" / annotation_filename(rel), a);
    }
    write_manifest(out / "manifest.jsonl", records);
    write_run_config(sub, out / "run_config.toml");
    std::cout << fmt::format("wrote {} {} scenes to {}\n", samples.size(), to_string(style), out.string());
    return 0;
}

// ---- train / adapt ----------------------------------------------------------------

struct TrainOptions {
    std::string manifest;
    std::string annotations;
    std::string target;  // adapt only
    std::string out_dir;
    int epochs = 200;
    int batch = 16;
    double alpha = 1.5;
    double lambda = 5e-4;
    bool no_safety = false;
    double lr = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double domain_lr = 1e-3;
    double momentum = 0.9;
    double reversal_scale = 1.0;
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
    int input_short_side = 128;
    std::string metric = "train_mae";
};

void add_train_options(CLI::App& sub, TrainOptions& o) {
    sub.add_option("--out-dir", o.out_dir, "Directory for checkpoint, epoch log, split and run config")->required();
    sub.add_option("--epochs", o.epochs, "Training epochs")->capture_default_str();
    sub.add_option("--batch", o.batch, "Batch size")->capture_default_str();
    sub.add_option("--alpha", o.alpha, "Weight of the unsafe-overestimate penalty")->capture_default_str();
    sub.add_option("--lambda", o.lambda, "L2 weight on encoder and head parameters")->capture_default_str();
    sub.add_flag("--no-safety", o.no_safety, "Plain squared error (alpha ignored)");
    sub.add_option("--lr", o.lr, "Adam learning rate")->capture_default_str();
    sub.add_option("--beta1", o.beta1)->capture_default_str();
    sub.add_option("--beta2", o.beta2)->capture_default_str();
    sub.add_option("--seed", o.seed, "Seed for split, initialization and batch order")->capture_default_str();
    sub.add_option("--train-fraction", o.train_fraction, "Fraction of frames used for training; the rest is held out")
        ->capture_default_str();
    sub.add_option("--input-short-side", o.input_short_side, "Frames are resized so the short side has this length")
        ->capture_default_str();
    sub.add_option("--checkpoint-metric", o.metric, "train_mae or train_loss")->capture_default_str();
}

TrainConfig make_train_config(const TrainOptions& o) {
    TrainConfig cfg;
    cfg.epochs = o.epochs;
    cfg.batch_size = o.batch;
    cfg.loss.alpha = o.alpha;
    cfg.loss.lambda = o.lambda;
    cfg.loss.safety_enabled = !o.no_safety;
    cfg.main_optimizer.lr = o.lr;
    cfg.main_optimizer.beta1 = o.beta1;
    cfg.main_optimizer.beta2 = o.beta2;
    cfg.domain_optimizer.lr = o.domain_lr;
    cfg.domain_optimizer.momentum = o.momentum;
    cfg.seed = o.seed;
    cfg.checkpoint_metric = selection_metric_from_string(o.metric);
    cfg.validate();
    return cfg;
}

// Splits a labeled set and records which ids went where.
std::pair<LabeledSet, LabeledSet> split_and_record(const LabeledSet& all, double fraction, std::uint64_t seed,
                                                   const fs::path& path) {
    std::pair<LabeledSet, LabeledSet> parts;
    if (fraction >= 1.0) {
        parts.first = all;
    } else {
        parts = split_train_test(all, fraction, seed);
    }
    nlohmann::json j = {{"fraction", fraction}, {"seed", seed}, {"train", nlohmann::json::array()},
                        {"test", nlohmann::json::array()}};
    for (const auto& s : parts.first) {
        j["train"].push_back(s.id);
    }
    for (const auto& s : parts.second) {
        j["test"].push_back(s.id);
    }
    write_file_atomic(path, j.dump(2) + "\n");
    return parts;
}

void finish_training(const TrainResult& result, const fs::path& out) {
    save_checkpoint(out / "checkpoint.trv", result.checkpoint);
    std::cout << fmt::format("best epoch {} (train MAE {:.4f}); checkpoint {}\n", result.best_epoch,
                             result.log[static_cast<std::size_t>(result.best_epoch - 1)].train_mae,
                             (out / "checkpoint.trv").string());
}

int run_train(const CLI::App& sub, const TrainOptions& o) {
    const TrainConfig base = make_train_config(o);
    if (!(o.train_fraction > 0.0 && o.train_fraction <= 1.0)) {
        throw ConfigError("--train-fraction must be in (0, 1]");
    }
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    write_run_config(sub, out / "run_config.toml");
    const LabeledSet all = load_labeled_set(o.manifest, o.annotations);
    ModelSpec spec;
    spec.input_short_side = o.input_short_side;
    spec.head.outputs = all.empty() ? kDefaultSections : all.front().scores.size();
    auto [train_set, test_set] = split_and_record(all, o.train_fraction, o.seed, out / "split.json");
    const fs::path log_path = out / "epochs.jsonl";
    fs::remove(log_path);
    TrainConfig cfg = base;
    cfg.on_epoch = [&](const EpochRecord& r) { append_epoch_log(log_path, r); };
    const auto result = train_supervised(prepare_set(train_set, o.input_short_side), cfg, spec);
    finish_training(result, out);
    return 0;
}

int run_adapt(const CLI::App& sub, const TrainOptions& o) {
    const TrainConfig base = make_train_config(o);
    if (!(o.train_fraction > 0.0 && o.train_fraction <= 1.0)) {
        throw ConfigError("--train-fraction must be in (0, 1]");
    }
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    write_run_config(sub, out / "run_config.toml");
    const LabeledSet source = load_labeled_set(o.manifest, o.annotations);
    // Target annotations are never opened.
    const std::vector<ImageFrame> target = load_frames(o.target);
    ModelSpec spec;
    spec.input_short_side = o.input_short_side;
    spec.head.outputs = source.empty() ? kDefaultSections : source.front().scores.size();
    spec.domain.reversal_scale = o.reversal_scale;
    auto [train_set, test_set] = split_and_record(source, o.train_fraction, o.seed, out / "split.json");
    const fs::path log_path = out / "epochs.jsonl";
    fs::remove(log_path);
    TrainConfig cfg = base;
    cfg.on_epoch = [&](const EpochRecord& r) { append_epoch_log(log_path, r); };
    AdaptationSetup setup{prepare_set(train_set, o.input_short_side), prepare_frames(target, o.input_short_side)};
    const auto result = train_adaptation(setup, cfg, spec);
    finish_training(result, out);
    return 0;
}

// ---- eval ---------------------------------------------------------------------

struct EvalOptionsCli {
    std::string checkpoint;
    std::string manifest;
    std::string annotations;
    std::string split;
    std::string subset = "test";
    std::string out_dir;
    std::string overlays;
    double unsafe_tolerance = 0.0;
};

int run_eval(const CLI::App& sub, const EvalOptionsCli& o) {
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    write_run_config(sub, out / "run_config.toml");
    const Checkpoint ckpt = load_checkpoint(o.checkpoint);
    auto model = instantiate(ckpt);
    LabeledSet set = load_labeled_set(o.manifest, o.annotations);
    if (!o.split.empty()) {
        std::ifstream in(o.split);
        if (!in) {
            throw DataError(fmt::format("cannot open split file {}", o.split));
        }
        const auto j = nlohmann::json::parse(in);
        if (!j.contains(o.subset)) {
            throw ConfigError(fmt::format("split file has no '{}' subset", o.subset));
        }
        const auto ids = j.at(o.subset).get<std::vector<std::string>>();
        std::map<std::string, const LabeledSample*> by_id;
        for (const auto& s : set) {
            by_id[s.id] = &s;
        }
        LabeledSet chosen;
        for (const auto& id : ids) {
            const auto it = by_id.find(id);
            if (it == by_id.end()) {
                throw DataError(fmt::format("split entry {} is not in the manifest", id));
            }
            chosen.push_back(*it->second);
        }
        set = std::move(chosen);
    }
    if (set.empty()) {
        throw ConfigError("nothing to evaluate");
    }
    const LabeledSet prepared = prepare_set(set, ckpt.spec.input_short_side);
    const auto predictions = predict(*model, frames_of(prepared));
    EvalOptions eo;
    eo.unsafe_tolerance = o.unsafe_tolerance;
    EvalReport report = compute_report(predictions, scores_of(set), domains_of(set), eo);
    report.config["checkpoint_epoch"] = ckpt.epoch;
    report.config["subset"] = o.split.empty() ? "all" : o.subset;
    write_file_atomic(out / "report.json", serialize_report(report));
    if (!o.overlays.empty()) {
        fs::create_directories(o.overlays);
        for (std::size_t i = 0; i < set.size(); ++i) {
            const auto& s = set[i];
            const auto layout = split_sections(s.frame, s.scores.size());
            save_image(fs::path(o.overlays) / overlay_name(s.id),
                       render_overlay(s.frame, s.scores, predictions[i], layout));
        }
    }
    std::cout << fmt::format("MAE {:.4f} over {} frames, unsafe rate {:.4f}\n", report.mae_all, report.n_frames,
                             report.unsafe_rate);
    return 0;
}

// ---- infer --------------------------------------------------------------------

struct InferOptions {
    std::string checkpoint;
    std::vector<std::string> images;
    std::string overlay;
    std::string out;
};

int run_infer(const CLI::App& sub, const InferOptions& o) {
    const Checkpoint ckpt = load_checkpoint(o.checkpoint);
    auto model = instantiate(ckpt);
    std::vector<ImageFrame> frames;
    for (const auto& p : o.images) {
        frames.push_back(load_image(p));
    }
    const auto predictions = predict(*model, prepare_frames(frames, ckpt.spec.input_short_side));
    std::string lines;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        lines += nlohmann::json{{"image", o.images[i]}, {"scores", predictions[i].values()}}.dump() + "\n";
    }
    std::cout << lines;
    if (!o.out.empty()) {
        if (const auto dir = fs::path(o.out).parent_path(); !dir.empty()) {
            fs::create_directories(dir);
        }
        write_file_atomic(o.out, lines);
        write_run_config(sub, o.out + ".run.toml");
    }
    if (!o.overlay.empty()) {
        fs::create_directories(o.overlay);
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const int k = predictions[i].size();
            // No annotation at inference: the truth tint is empty (all ones).
            save_image(fs::path(o.overlay) / overlay_name(o.images[i]),
                       render_overlay(frames[i], TraversabilityVector::filled(k, 1.0), predictions[i],
                                      split_sections(frames[i], k)));
        }
    }
    return 0;
}

// ---- navigate-sim -------------------------------------------------------------

struct NavOptions {
    std::string world = "wall_right_gap";
    std::string checkpoint;
    std::string out_dir;
    bool render = false;
    int steps = 400;
    double dt = 0.1;
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;
    NavConfig nav;
};

int run_navigate(const CLI::App& sub, const NavOptions& o) {
    o.nav.validate();
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    write_run_config(sub, out / "run_config.toml");
    const PlanarWorld world = world_preset(o.world);
    Perception perception = oracle_perception(o.nav.k);
    std::unique_ptr<TraversabilityNet<float>> model;
    int short_side = world.image_height;
    if (!o.checkpoint.empty()) {
        const Checkpoint ckpt = load_checkpoint(o.checkpoint);
        model = instantiate(ckpt);
        short_side = ckpt.spec.input_short_side;
        if (model->sections() != o.nav.k) {
            throw ConfigError(fmt::format("checkpoint predicts {} sections, --k is {}", model->sections(), o.nav.k));
        }
        perception = [&model, short_side](const SceneSpec& spec) {
            return predict(*model, {resize_short_side(render(spec), short_side)}).front();
        };
    }
    PoseStamped start;
    start.x = o.x;
    start.y = o.y;
    start.yaw = normalize_yaw(o.yaw);
    SimOptions so;
    so.steps = o.steps;
    so.dt = o.dt;
    const Trajectory traj = simulate(perception, world, start, o.nav, so);
    std::string lines;
    for (const auto& s : traj.steps) {
        lines += to_json(s).dump() + "\n";
    }
    write_file_atomic(out / "trajectory.jsonl", lines);
    if (o.render) {
        save_image(out / "trajectory.png", render_trajectory(world, traj));
    }
    const auto& last = traj.steps.back().pose;
    std::cout << fmt::format("{} steps, final pose ({:.2f}, {:.2f}, {:.1f} deg){}{}\n", traj.steps.size(), last.x,
                             last.y, last.yaw, traj.halted ? ", halted" : "", traj.collided ? ", COLLIDED" : "");
    return 0;
}

// ---- annotate-serve -------------------------------------------------------------

int run_serve(const CLI::App& sub, AnnotationServerConfig cfg, const std::string& run_config) {
    if (!run_config.empty()) {
        write_run_config(sub, run_config);
    }
    AnnotationServer server(std::move(cfg));
    const int port = server.bind();
    std::cout << fmt::format("serving on http://{}:{}/\n", sub.get_option("--host")->as<std::string>(), port)
              << std::flush;
    server.serve();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Traversability estimation toolkit"};
    app.require_subcommand(1);

    // select-frames
    SelectOptions sel;
    auto* s_sel = app.add_subcommand("select-frames", "Drop near-duplicate frames by pose");
    add_config(*s_sel);
    s_sel->add_option("--manifest", sel.manifest, "Input manifest (JSON lines)")->required();
    s_sel->add_option("--theta-th", sel.cfg.theta_th, "Yaw threshold, degrees")->capture_default_str();
    s_sel->add_option("--dist-th", sel.cfg.dist_th, "Distance threshold, meters")->capture_default_str();
    s_sel->add_option("--comb", sel.cfg.comb_threshold, "Keep a frame when the combined motion exceeds this")
        ->capture_default_str();
    s_sel->add_option("--out", sel.out, "Output manifest")->required();

    // synth-gen
    SynthOptions syn;
    auto* s_syn = app.add_subcommand("synth-gen", "Generate synthetic scenes with exact annotations");
    add_config(*s_syn);
    s_syn->add_option("--n", syn.n, "Number of scenes")->capture_default_str();
    s_syn->add_option("--style", syn.style, "asphalt_like or grass_like")->capture_default_str();
    s_syn->add_option("--seed", syn.seed)->capture_default_str();
    s_syn->add_option("--height", syn.height)->capture_default_str();
    s_syn->add_option("--width", syn.width)->capture_default_str();
    s_syn->add_option("--max-obstacles", syn.max_obstacles)->capture_default_str();
    s_syn->add_option("--noise", syn.noise, "Std-dev of pixel noise")->capture_default_str();
    s_syn->add_option("--k", syn.k, "Sections per frame")->capture_default_str();
    s_syn->add_option("--out-dir", syn.out_dir)->required();

    // train
    TrainOptions tr;
    auto* s_tr = app.add_subcommand("train", "Supervised training with the safety-preserving loss");
    add_config(*s_tr);
    s_tr->add_option("--manifest", tr.manifest)->required();
    s_tr->add_option("--annotations", tr.annotations, "Annotation directory")->required();
    add_train_options(*s_tr, tr);

    // adapt
    TrainOptions ad;
    auto* s_ad = app.add_subcommand("adapt", "Source training with gradient-reversal domain adaptation");
    add_config(*s_ad);
    s_ad->add_option("--source", ad.manifest, "Source manifest (annotated)")->required();
    s_ad->add_option("--source-annotations", ad.annotations, "Source annotation directory")->required();
    s_ad->add_option("--target", ad.target, "Target manifest (images only)")->required();
    add_train_options(*s_ad, ad);
    s_ad->add_option("--domain-lr", ad.domain_lr, "Domain classifier learning rate")->capture_default_str();
    s_ad->add_option("--momentum", ad.momentum, "Domain classifier momentum")->capture_default_str();
    s_ad->add_option("--reversal-scale", ad.reversal_scale, "Gradient reversal multiplier")->capture_default_str();

    // eval
    EvalOptionsCli ev;
    auto* s_ev = app.add_subcommand("eval", "MAE and safety report for a checkpoint");
    add_config(*s_ev);
    s_ev->add_option("--checkpoint", ev.checkpoint)->required();
    s_ev->add_option("--manifest", ev.manifest)->required();
    s_ev->add_option("--annotations", ev.annotations)->required();
    s_ev->add_option("--split", ev.split, "split.json written by train/adapt");
    s_ev->add_option("--subset", ev.subset, "Subset of the split file")->capture_default_str();
    s_ev->add_option("--unsafe-tolerance", ev.unsafe_tolerance)->capture_default_str();
    s_ev->add_option("--overlays", ev.overlays, "Directory for overlay images");
    s_ev->add_option("--out-dir", ev.out_dir)->required();

    // infer
    InferOptions inf;
    auto* s_inf = app.add_subcommand("infer", "Predict scores for images");
    add_config(*s_inf);
    s_inf->add_option("--checkpoint", inf.checkpoint)->required();
    s_inf->add_option("images", inf.images, "Image files")->required();
    s_inf->add_option("--overlay", inf.overlay, "Directory for overlay images");
    s_inf->add_option("--out", inf.out, "Also write the JSON lines to this file");

    // navigate-sim
    NavOptions nav;
    auto* s_nav = app.add_subcommand("navigate-sim", "Closed-loop planar simulation of the velocity mapper");
    add_config(*s_nav);
    s_nav->add_option("--world", nav.world, "open, wall_right_gap or dead_end")->capture_default_str();
    s_nav->add_option("--checkpoint", nav.checkpoint, "Model perception (oracle ground truth when omitted)");
    s_nav->add_option("--steps", nav.steps)->capture_default_str();
    s_nav->add_option("--dt", nav.dt)->capture_default_str();
    s_nav->add_option("--x", nav.x)->capture_default_str();
    s_nav->add_option("--y", nav.y)->capture_default_str();
    s_nav->add_option("--yaw", nav.yaw)->capture_default_str();
    s_nav->add_option("--v-max", nav.nav.v_max)->capture_default_str();
    s_nav->add_option("--full-speed-score", nav.nav.full_speed_score)->capture_default_str();
    s_nav->add_option("--stop-score", nav.nav.stop_score)->capture_default_str();
    s_nav->add_option("--fov", nav.nav.fov)->capture_default_str();
    s_nav->add_option("--k", nav.nav.k)->capture_default_str();
    s_nav->add_option("--angular-gain", nav.nav.angular_gain)->capture_default_str();
    s_nav->add_flag("--render", nav.render, "Write trajectory.png");
    s_nav->add_option("--out-dir", nav.out_dir)->required();

    // annotate-serve
    AnnotationServerConfig srv;
    std::string manifest, annotations, static_dir, serve_run_config;
    auto* s_srv = app.add_subcommand("annotate-serve", "Serve the annotation UI and its data API");
    add_config(*s_srv);
    s_srv->add_option("--manifest", manifest)->required();
    s_srv->add_option("--annotations", annotations)->required();
    s_srv->add_option("--static-dir", static_dir, "UI assets");
    s_srv->add_option("--host", srv.host)->capture_default_str();
    s_srv->add_option("--port", srv.port)->capture_default_str();
    s_srv->add_option("--k", srv.k)->capture_default_str();
    s_srv->add_option("--run-config", serve_run_config, "Where to write the resolved configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*s_sel) {
            return run_select(*s_sel, sel);
        }
        if (*s_syn) {
            return run_synth(*s_syn, syn);
        }
        if (*s_tr) {
            return run_train(*s_tr, tr);
        }
        if (*s_ad) {
            return run_adapt(*s_ad, ad);
        }
        if (*s_ev) {
            return run_eval(*s_ev, ev);
        }
        if (*s_inf) {
            return run_infer(*s_inf, inf);
        }
        if (*s_nav) {
            return run_navigate(*s_nav, nav);
        }
        if (*s_srv) {
            srv.manifest = manifest;
            srv.annotations_dir = annotations;
            if (!static_dir.empty()) {
                srv.static_dir = static_dir;
            }
            return run_serve(*s_srv, srv, serve_run_config);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
