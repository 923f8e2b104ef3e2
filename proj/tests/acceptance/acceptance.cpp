// Acceptance checks. Run one criterion by name, or "all"; each prints a
// single PASS/FAIL line and the exit status reports whether all passed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "travnet/checkpoint.hpp"
#include "travnet/eval.hpp"
#include "travnet/losses.hpp"
#include "travnet/model.hpp"
#include "travnet/nav.hpp"
#include "travnet/synthworld.hpp"
#include "travnet/train.hpp"

using namespace travnet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (failures.size() < 5) {
                failures.push_back(what);
            }
        }
    }
};

struct Criterion {
    std::string name;
    double time_limit_s;
    std::function<Outcome()> run;
};

std::string g_cli;  // path of the travnet executable, for the determinism check

// ---- loss suite ------------------------------------------------------------

Outcome loss_suite() {
    Outcome out;
    auto one = [](double v) {
        ScoreMatrix m(1, 1);
        m(0, 0) = v;
        return m;
    };
    LossConfig cfg;
    cfg.alpha = 1.5;
    cfg.lambda = 0.0;
    const double safe = safety_loss(one(0.8), one(0.6), cfg);
    const double unsafe = safety_loss(one(0.6), one(0.8), cfg);
    out.expect(std::abs(safe - 0.04) <= 1e-9, fmt::format("safe case {} != 0.04", safe));
    out.expect(std::abs(unsafe - 0.10) <= 1e-9, fmt::format("unsafe case {} != 0.10", unsafe));

    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> bd(1, 32), kd(1, 12);
    std::uniform_real_distribution<double> tu(0.0, 1.0), pu(-0.5, 1.5);
    LossConfig plain;
    plain.alpha = 0.0;
    plain.lambda = 0.0;
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        ScoreMatrix t(bd(rng), kd(rng));
        ScoreMatrix p(t.rows(), t.cols());
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            t.data()[i] = tu(rng);
            p.data()[i] = pu(rng);
        }
        mismatches += safety_loss(t, p, plain) != mse_loss(t, p) ? 1 : 0;
    }
    out.expect(mismatches == 0, fmt::format("{} of 1000 batches differ from mse", mismatches));
    out.detail = fmt::format("safe={:.12f} unsafe={:.12f} alpha0_mismatches={}/1000", safe, unsafe, mismatches);
    return out;
}

// ---- gradient reversal -----------------------------------------------------

Outcome gradient_reversal() {
    Outcome out;
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 256);
    GradientReversal<double> grl;
    double worst = 0.0;
    double worst_entry = 0.0;
    int not_identity = 0;
    // Objective after the layer: L(y) = sum_i w_i * y_i^3 / 3, so dL/dy = w * y^2.
    for (int trial = 0; trial < 100; ++trial) {
        const int n = dim(rng);
        Tensor<double> x(1, n, 1, 1), w(1, n, 1, 1);
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] = g(rng);
            w[static_cast<std::size_t>(i)] = g(rng);
        }
        const Tensor<double> y = grl.forward(x, kTrain);
        not_identity += y == x ? 0 : 1;
        Tensor<double> dy = y;
        for (std::size_t i = 0; i < dy.size(); ++i) {
            dy[i] = w[i] * y[i] * y[i];
        }
        const Tensor<double> dx = grl.backward(dy);
        auto objective = [&](const Tensor<double>& in) {
            const Tensor<double> o = grl.forward(in, kTrain);
            double s = 0.0;
            for (std::size_t i = 0; i < o.size(); ++i) {
                s += w[i] * o[i] * o[i] * o[i] / 3.0;
            }
            return s;
        };
        // Relative error of the whole gradient vector. Per-entry ratios are
        // dominated by rounding in the summed objective wherever w * x^2 is tiny.
        double diff2 = 0.0, ref2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            Tensor<double> xp = x, xm = x;
            const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
            xp[i] += h;
            xm[i] -= h;
            const double fd = (objective(xp) - objective(xm)) / (2 * h);
            diff2 += (dx[i] + fd) * (dx[i] + fd);
            ref2 += fd * fd;
            worst_entry = std::max(worst_entry, std::abs(dx[i] + fd) / std::max(1e-8, std::abs(fd)));
        }
        worst = std::max(worst, std::sqrt(diff2) / std::max(1e-12, std::sqrt(ref2)));
    }
    out.expect(not_identity == 0, fmt::format("forward altered {} vectors", not_identity));
    out.expect(worst < 1e-4, fmt::format("worst relative error {:.3g}", worst));

    // The same relation at the network's feature tap: backward_domain returns
    // minus the derivative of the classifier output w.r.t. the shared features.
    ModelSpec spec;
    TraversabilityNet<double> net(spec, 5);
    double worst_tap = 0.0;
    std::uniform_int_distribution<int> pick(0, spec.head.flattened() - 1);
    for (int trial = 0; trial < 5; ++trial) {
        Tensor<double> f(1, spec.head.flattened(), 1, 1);
        for (auto& v : f.storage()) {
            v = std::max(0.0, g(rng));
        }
        net.forward_domain(f, kEval);
        const Tensor<double> back = net.backward_domain(Tensor<double>(1, 1, 1, 1, 1.0));
        for (int probe = 0; probe < 20; ++probe) {
            const auto i = static_cast<std::size_t>(pick(rng));
            Tensor<double> fp = f, fm = f;
            fp[i] += 1e-6;
            fm[i] -= 1e-6;
            const double fd = (net.forward_domain(fp, kEval)[0] - net.forward_domain(fm, kEval)[0]) / 2e-6;
            worst_tap = std::max(worst_tap, std::abs(back[i] + fd) / std::max(1e-9, std::abs(fd)));
        }
    }
    out.expect(worst_tap < 1e-4, fmt::format("feature tap relative error {:.3g}", worst_tap));
    out.detail = fmt::format(
        "identity_forward={}/100 worst_vector_rel_err={:.2e} (worst single entry {:.2e}) feature_tap_rel_err={:.2e}",
        100 - not_identity, worst, worst_entry, worst_tap);
    return out;
}

// ---- shape contract --------------------------------------------------------

Outcome shape_contract() {
    Outcome out;
    TraversabilityNet<float> net(ModelSpec{}, 1);
    Tensor<float> x(16, 3, 128, 227, 0.5f);
    const auto map = net.encode(x, kEval);
    out.expect(map.shape() == std::array<int, 4>{16, 2048, 17, 29},
               fmt::format("encoder map {}x{}x{}x{}", map.n(), map.c(), map.h(), map.w()));
    const auto y = net.forward_traversability(x, kEval);
    out.expect(y.n() == 16 && y.sample_size() == 9, fmt::format("head output {}x{}", y.n(), y.sample_size()));
    std::vector<std::string> sizes;
    for (auto [b, h, w] : {std::tuple{1, 64, 113}, std::tuple{3, 96, 160}, std::tuple{2, 128, 128},
                           std::tuple{4, 200, 90}, std::tuple{2, 33, 47}}) {
        const auto o = net.forward_traversability(Tensor<float>(b, 3, h, w, 0.25f), kEval);
        out.expect(o.n() == b && o.sample_size() == 9, fmt::format("{}x{} gave {}x{}", h, w, o.n(), o.sample_size()));
        sizes.push_back(fmt::format("{}x{}", h, w));
    }
    out.detail = fmt::format("128x227 -> {}x{} map -> (16, {}); also {}", map.h(), map.w(), y.sample_size(),
                             fmt::join(sizes, ","));
    return out;
}

// ---- frame selection -------------------------------------------------------

Outcome frame_selection() {
    Outcome out;
    const double wrap = angular_difference(170.0, -170.0, 40.0);
    out.expect(wrap == 0.5, fmt::format("170/-170 gave {}", wrap));
    std::mt19937_64 rng(1000);
    const SelectionConfig cfg;
    int mismatches = 0;
    int wrapped = 0;
    std::size_t frames = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto trace = oracle::random_trace(rng);
        frames += trace.size();
        for (std::size_t i = 1; i < trace.size(); ++i) {
            wrapped += std::abs(trace[i].pose.yaw - trace[i - 1].pose.yaw) > 180.0 ? 1 : 0;
        }
        const auto kept = select_frames(trace, cfg);
        const auto expect = oracle::select_frames(trace, cfg);
        bool same = kept.size() == expect.size();
        for (std::size_t i = 0; same && i < kept.size(); ++i) {
            same = kept[i] == trace[expect[i]];
        }
        mismatches += same ? 0 : 1;
    }
    out.expect(mismatches == 0, fmt::format("{} traces differ from the oracle", mismatches));
    out.expect(wrapped > 0, "no trace crossed the +-180 seam");
    out.detail = fmt::format("traces=1000 frames={} seam_crossings={} mismatches={} dtheta(170,-170)={}", frames,
                             wrapped, mismatches, wrap);
    return out;
}

// ---- synthetic oracle ------------------------------------------------------

Outcome synthetic_oracle() {
    Outcome out;
    std::mt19937_64 rng(500);
    int mismatches = 0;
    for (int i = 0; i < 250; ++i) {
        const SceneSpec spec = oracle::random_scene(rng);
        mismatches += ground_truth(spec, 9).values() == oracle::rasterized_scores(spec, 9) ? 0 : 1;
    }
    SceneDistribution d;
    for (const auto& s : generate_domain_set(250, GroundStyle::grass_like, 500, d)) {
        mismatches += s.scores.values() == oracle::rasterized_scores(s.spec, 9) ? 0 : 1;
    }
    out.expect(mismatches == 0, fmt::format("{} of 500 scenes differ", mismatches));
    out.detail = fmt::format("scenes=500 (250 free-form, 250 generated 128x227) mismatches={}", mismatches);
    return out;
}

// ---- synthetic benchmark helpers ------------------------------------------

SceneDistribution benchmark_scenes() {
    SceneDistribution d;
    d.height = 64;
    d.width = 113;
    return d;
}

LabeledSet labeled(std::vector<SyntheticSample> samples) {
    LabeledSet out;
    for (auto& s : samples) {
        out.push_back({std::move(s.frame), s.scores, s.domain, ""});
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

EvalReport report_on(TraversabilityNet<float>& model, const LabeledSet& test) {
    std::vector<TraversabilityVector> truth;
    std::vector<std::string> domains;
    for (const auto& s : test) {
        truth.push_back(s.scores);
        domains.push_back(s.domain);
    }
    return compute_report(predict(model, frames_of(test)), truth, domains);
}

const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};

// ---- safety direction ------------------------------------------------------

Outcome safety_direction() {
    Outcome out;
    ModelSpec spec;
    spec.input_short_side = 64;
    int wins = 0;
    std::vector<std::string> rows;
    for (std::uint64_t seed : kSeeds) {
        const auto train = labeled(generate_domain_set(400, GroundStyle::asphalt_like, seed, benchmark_scenes()));
        const auto test = labeled(generate_domain_set(100, GroundStyle::asphalt_like, seed + 1000, benchmark_scenes()));
        EvalReport reports[2];
        int slot = 0;
        for (double alpha : {0.0, 1.5}) {
            TrainConfig cfg;
            cfg.epochs = 10;
            cfg.seed = seed;
            cfg.loss.alpha = alpha;
            auto result = train_supervised(train, cfg, spec);
            reports[slot++] = report_on(*result.model, test);
        }
        const bool win = reports[1].unsafe_rate < reports[0].unsafe_rate;
        wins += win ? 1 : 0;
        rows.push_back(fmt::format("s{}: unsafe {:.3f}->{:.3f} mae {:.3f}->{:.3f}", seed, reports[0].unsafe_rate,
                                   reports[1].unsafe_rate, reports[0].mae_all, reports[1].mae_all));
        std::fprintf(stderr, "safety %s\n", rows.back().c_str());
    }
    const int need = static_cast<int>(kSeeds.size()) / 2 + 1;
    out.expect(wins >= need, fmt::format("alpha=1.5 less unsafe in only {}/{} seeds", wins, kSeeds.size()));
    out.detail = fmt::format("alpha 0 -> 1.5, lower unsafe_rate in {}/{} seeds; {}", wins, kSeeds.size(),
                             fmt::join(rows, "; "));
    return out;
}

// ---- adaptation direction --------------------------------------------------

Outcome adaptation_direction() {
    Outcome out;
    int mae_wins = 0;
    int acc_wins = 0;
    std::vector<std::string> rows;
    for (std::uint64_t seed : kSeeds) {
        const auto source = labeled(generate_domain_set(200, GroundStyle::asphalt_like, seed, benchmark_scenes()));
        const auto target = labeled(generate_domain_set(200, GroundStyle::grass_like, seed + 500, benchmark_scenes()));
        const auto source_test =
            labeled(generate_domain_set(100, GroundStyle::asphalt_like, seed + 1000, benchmark_scenes()));
        const auto target_test =
            labeled(generate_domain_set(100, GroundStyle::grass_like, seed + 2000, benchmark_scenes()));
        double mae[2];
        double acc[2];
        int slot = 0;
        // Scale 0 trains the classifier as a probe on features the encoder
        // learned without adaptation; scale 1 is the adapted model.
        for (double scale : {0.0, 1.0}) {
            ModelSpec spec;
            spec.input_short_side = 64;
            spec.domain.reversal_scale = scale;
            TrainConfig cfg;
            cfg.epochs = 15;
            cfg.seed = seed;
            cfg.domain_optimizer.lr = 1e-4;
            auto result = train_adaptation({source, frames_of(target)}, cfg, spec);
            mae[slot] = evaluate_mae(*result.model, target_test);
            acc[slot] = domain_accuracy(*result.model, frames_of(source_test), frames_of(target_test));
            ++slot;
        }
        mae_wins += mae[1] < mae[0] ? 1 : 0;
        acc_wins += std::abs(acc[1] - 0.5) < std::abs(acc[0] - 0.5) ? 1 : 0;
        rows.push_back(fmt::format("s{}: target_mae {:.3f}->{:.3f} domain_acc {:.3f}->{:.3f}", seed, mae[0], mae[1],
                                   acc[0], acc[1]));
        std::fprintf(stderr, "adaptation %s\n", rows.back().c_str());
    }
    const int need = static_cast<int>(kSeeds.size()) / 2 + 1;
    out.expect(mae_wins >= need, fmt::format("target MAE improved in only {}/{} seeds", mae_wins, kSeeds.size()));
    out.expect(acc_wins >= need,
               fmt::format("domain accuracy moved toward 0.5 in only {}/{} seeds", acc_wins, kSeeds.size()));
    out.detail = fmt::format("target MAE lower in {0}/{2}, held-out domain accuracy nearer 0.5 in {1}/{2}; {3}",
                             mae_wins, acc_wins, kSeeds.size(), fmt::join(rows, "; "));
    return out;
}

// ---- navigation contract ---------------------------------------------------

Outcome navigation_contract() {
    Outcome out;
    NavConfig cfg;
    cfg.v_max = 0.7;
    for (double s : {0.5, 0.5000001, 0.8, 1.0}) {
        out.expect(linear_velocity(s, cfg) == cfg.v_max, fmt::format("score {} not at v_max", s));
    }
    for (double s : {0.1, 0.0999999, 0.05, 0.0}) {
        out.expect(linear_velocity(s, cfg) == 0.0, fmt::format("score {} not stopped", s));
    }

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> level(0, 5);
    const std::vector<std::function<double(double)>> transforms{
        [](double x) { return x * x * x; }, [](double x) { return std::sqrt(x); },
        [](double x) { return 0.1 + 0.8 * x; }, [](double x) { return std::log1p(x) / std::log(2.0); }};
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> s(9);
        for (auto& v : s) {
            v = trial % 4 == 0 ? level(rng) / 5.0 : u(rng);
        }
        const double base = steering_target(TraversabilityVector(s), cfg);
        for (const auto& f : transforms) {
            std::vector<double> t(9);
            for (std::size_t i = 0; i < 9; ++i) {
                t[i] = f(s[i]);
            }
            violations += steering_target(TraversabilityVector(t), cfg) == base ? 0 : 1;
        }
    }
    out.expect(violations == 0, fmt::format("{} steering changes under monotone transforms", violations));

    const PlanarWorld world = world_preset("dead_end");
    const NavConfig nav;
    const auto traj = simulate(oracle_perception(nav.k), world, PoseStamped{}, nav);
    bool outside = true;
    for (const auto& step : traj.steps) {
        outside = outside && !world.occupied(step.pose.x, step.pose.y);
    }
    const auto& last = traj.steps.back();
    out.expect(traj.halted, "episode did not halt");
    out.expect(!traj.collided, "episode collided");
    out.expect(last.command.linear == 0.0, "final command is not zero velocity");
    out.expect(outside, "trajectory entered an obstacle");
    out.detail = fmt::format("endpoints exact; monotone invariance 1000 vectors x {} transforms, violations={}; "
                             "dead_end halted at step {} x={:.3f} v={} collided={}",
                             transforms.size(), violations, traj.steps.size() - 1, last.pose.x, last.command.linear,
                             traj.collided);
    return out;
}

// ---- determinism -----------------------------------------------------------

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// Epoch logs carry wall-clock timestamps; everything else must match byte for byte.
std::string comparable_bytes(const fs::path& p) {
    std::string bytes = read_bytes(p);
    if (p.filename() != "epochs.jsonl") {
        return bytes;
    }
    std::istringstream in(bytes);
    std::string line, outs;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        j.erase("timestamp");
        outs += j.dump() + "\n";
    }
    return outs;
}

std::map<std::string, std::string> digest_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) {
            out[fs::relative(e.path(), root).generic_string()] = fnv1a_hex(comparable_bytes(e.path()));
        }
    }
    return out;
}

Outcome determinism() {
    Outcome out;
    if (g_cli.empty() || !fs::exists(g_cli)) {
        out.expect(false, "travnet executable not given (--cli)");
        return out;
    }
    const std::vector<std::pair<std::string, std::string>> steps{
        {"synth-gen", "synth-gen --n 24 --style asphalt_like --seed 3 --height 48 --width 85 --out-dir src"},
        {"synth-gen", "synth-gen --n 16 --style grass_like --seed 4 --height 48 --width 85 --out-dir tgt"},
        {"select-frames", "select-frames --manifest src/manifest.jsonl --dist-th 1.5 --out sel/manifest.jsonl"},
        {"train", "train --manifest src/manifest.jsonl --annotations src/annotations --out-dir train "
                  "--epochs 3 --batch 8 --seed 7 --input-short-side 48"},
        {"adapt", "adapt --source src/manifest.jsonl --source-annotations src/annotations "
                  "--target tgt/manifest.jsonl --out-dir adapt --epochs 3 --batch 8 --seed 7 --input-short-side 48"},
        {"eval", "eval --checkpoint train/checkpoint.trv --manifest src/manifest.jsonl --annotations src/annotations "
                 "--split train/split.json --overlays eval/overlays --out-dir eval"},
        {"eval", "eval --checkpoint adapt/checkpoint.trv --manifest tgt/manifest.jsonl --annotations tgt/annotations "
                 "--out-dir eval_target"},
        {"infer", "infer --checkpoint adapt/checkpoint.trv tgt/images/scene_00000.png tgt/images/scene_00003.png "
                  "--overlay infer/overlays --out infer/scores.jsonl"},
        {"navigate-sim", "navigate-sim --world wall_right_gap --steps 60 --render --out-dir nav_oracle"},
        {"navigate-sim", "navigate-sim --world dead_end --checkpoint train/checkpoint.trv --steps 40 "
                         "--out-dir nav_model"},
    };
    const fs::path base = fs::temp_directory_path() / "travnet_determinism";
    fs::remove_all(base);
    std::map<std::string, std::string> digests[2];
    for (int run = 0; run < 2; ++run) {
        const fs::path dir = base / fmt::format("run{}", run);
        fs::create_directories(dir);
        for (const auto& [name, args] : steps) {
            const std::string cmd =
                fmt::format("cd '{}' && '{}' {} > '{}.log' 2>&1", dir.string(), g_cli, args, name);
            const int rc = std::system(cmd.c_str());
            out.expect(rc == 0, fmt::format("run {}: '{}' exited with {}", run, name, rc));
        }
        digests[run] = digest_tree(dir);
    }
    int differing = 0;
    for (const auto& [file, digest] : digests[0]) {
        if (file.ends_with(".log")) {
            continue;
        }
        const auto it = digests[1].find(file);
        const bool same = it != digests[1].end() && it->second == digest;
        out.expect(same, fmt::format("{} differs between runs", file));
        differing += same ? 0 : 1;
    }
    out.expect(digests[0].size() == digests[1].size(), "runs produced different file sets");
    std::map<std::string, int> per_command;
    for (const auto& [name, args] : steps) {
        ++per_command[name];
    }
    out.detail = fmt::format("{} subcommand invocations ({} distinct), {} artifacts compared, {} differ",
                             steps.size(), per_command.size(), digests[0].size(), differing);
    return out;
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {"loss_suite", 5, loss_suite},
        {"gradient_reversal", 10, gradient_reversal},
        {"shape_contract", 30, shape_contract},
        {"frame_selection", 10, frame_selection},
        {"synthetic_oracle", 30, synthetic_oracle},
        {"safety_direction", 15 * 60, safety_direction},
        {"adaptation_direction", 20 * 60, adaptation_direction},
        {"navigation_contract", 60, navigation_contract},
        {"determinism", 10 * 60, determinism},
    };
    return all;
}

bool run(const Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = c.run();
    } catch (const std::exception& e) {
        o.expect(false, fmt::format("exception: {}", e.what()));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.expect(secs <= c.time_limit_s, fmt::format("took {:.1f}s, limit {:.0f}s", secs, c.time_limit_s));
    std::string line = fmt::format("{} {} ({:.1f}s): {}", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail);
    if (!o.pass) {
        line += fmt::format(" | {}", fmt::join(o.failures, "; "));
    }
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> names;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--cli" && i + 1 < argc) {
            g_cli = argv[++i];
        } else {
            names.push_back(a);
        }
    }
    if (names.empty()) {
        std::fprintf(stderr, "usage: travnet_acceptance <criterion|all>... [--cli path]\ncriteria:");
        for (const auto& c : criteria()) {
            std::fprintf(stderr, " %s", c.name.c_str());
        }
        std::fprintf(stderr, "\n");
        return 2;
    }
    bool ok = true;
    for (const auto& n : names) {
        bool found = false;
        for (const auto& c : criteria()) {
            if (n == "all" || n == c.name) {
                found = true;
                ok = run(c) && ok;
            }
        }
        if (!found) {
            std::fprintf(stderr, "unknown criterion '%s'\n", n.c_str());
            return 2;
        }
    }
    return ok ? 0 : 1;
}
