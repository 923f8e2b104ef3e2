#include "travnet/nav.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace travnet {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

void NavConfig::validate() const {
    if (!(v_max > 0.0) || !(fov > 0.0) || k < 1) {
        throw ConfigError("v_max, fov and k must be positive");
    }
    if (!(stop_score >= 0.0 && stop_score < full_speed_score && full_speed_score <= 1.0)) {
        throw ConfigError("need 0 <= stop_score < full_speed_score <= 1");
    }
}

double center_score(const TraversabilityVector& scores) {
    const int k = scores.size();
    if (k < 1) {
        throw ConfigError("empty score vector");
    }
    if (k % 2 == 1) {
        return scores[k / 2];
    }
    return 0.5 * (scores[k / 2 - 1] + scores[k / 2]);
}

double linear_velocity(double center, const NavConfig& cfg) {
    cfg.validate();
    if (center >= cfg.full_speed_score) {
        return cfg.v_max;
    }
    if (center <= cfg.stop_score) {
        return 0.0;
    }
    return cfg.v_max * (center - cfg.stop_score) / (cfg.full_speed_score - cfg.stop_score);
}

double steering_target(const TraversabilityVector& scores, const NavConfig& cfg) {
    cfg.validate();
    const int k = scores.size();
    if (k < 1) {
        throw ConfigError("empty score vector");
    }
    const double mid = 0.5 * (k - 1);
    int best = 0;
    for (int i = 1; i < k; ++i) {
        if (scores[i] > scores[best]) {
            best = i;
        } else if (scores[i] == scores[best] && std::abs(i - mid) < std::abs(best - mid)) {
            best = i;
        }
    }
    return ((best + 0.5) / k - 0.5) * cfg.fov;
}

VelocityCommand velocity_command(const TraversabilityVector& scores, const NavConfig& cfg) {
    return {linear_velocity(center_score(scores), cfg), steering_target(scores, cfg)};
}

bool PlanarWorld::occupied(double x, double y) const {
    return std::any_of(boxes.begin(), boxes.end(), [&](const WorldBox& b) { return b.contains(x, y); });
}

double PlanarWorld::ray_distance(double x, double y, double deg) const {
    const double dx = std::cos(deg * kDegToRad);
    const double dy = std::sin(deg * kDegToRad);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : boxes) {
        if (b.contains(x, y)) {
            return 0.0;
        }
        // slab test
        double t0 = 0.0;
        double t1 = std::numeric_limits<double>::infinity();
        const double origin[2] = {x, y};
        const double dir[2] = {dx, dy};
        const double lo[2] = {b.x_min, b.y_min};
        const double hi[2] = {b.x_max, b.y_max};
        bool hit = true;
        for (int a = 0; a < 2; ++a) {
            if (std::abs(dir[a]) < 1e-12) {
                if (origin[a] < lo[a] || origin[a] > hi[a]) {
                    hit = false;
                    break;
                }
                continue;
            }
            double ta = (lo[a] - origin[a]) / dir[a];
            double tb = (hi[a] - origin[a]) / dir[a];
            if (ta > tb) {
                std::swap(ta, tb);
            }
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1) {
                hit = false;
                break;
            }
        }
        if (hit) {
            best = std::min(best, t0);
        }
    }
    return best;
}

SceneSpec PlanarWorld::view(const PoseStamped& pose, double fov) const {
    SceneSpec spec;
    spec.height = image_height;
    spec.width = image_width;
    spec.ground = ground;
    spec.noise_level = noise_level;
    spec.seed = static_cast<std::uint64_t>(pose.frame_index);
    int run_start = 0;
    int run_rows = 0;
    auto flush = [&](int end) {
        if (run_rows > 0) {
            Obstacle o;
            o.x0 = run_start;
            o.x1 = end;
            o.y0 = 0;
            o.y1 = run_rows;
            o.color = {0.55f, 0.27f, 0.07f};
            spec.obstacles.push_back(o);
        }
    };
    for (int c = 0; c < image_width; ++c) {
        const double bearing = ((c + 0.5) / image_width - 0.5) * fov;
        const double d = ray_distance(pose.x, pose.y, pose.yaw - bearing);
        int rows = 0;  // obstacle occupies rows [0, rows)
        if (d < max_range) {
            rows = static_cast<int>(std::ceil(image_height * (1.0 - d / max_range)));
            rows = std::clamp(rows, 1, image_height);
        }
        if (c == 0) {
            run_rows = rows;
        } else if (rows != run_rows) {
            flush(c);
            run_start = c;
            run_rows = rows;
        }
    }
    flush(image_width);
    return spec;
}

PlanarWorld world_preset(const std::string& name) {
    PlanarWorld w;
    if (name == "open") {
        return w;
    }
    if (name == "wall_right_gap") {
        // wall ahead and a wall closing the left side; free space to the right (-y)
        w.boxes = {{3.0, -1.0, 3.5, 6.0}, {-1.0, 1.5, 3.5, 2.0}};
        return w;
    }
    if (name == "dead_end") {
        w.boxes = {{-1.0, 0.6, 3.0, 1.0}, {-1.0, -1.0, 3.0, -0.6}, {3.0, -1.0, 3.4, 1.0}};
        return w;
    }
    throw ConfigError(fmt::format("unknown world preset '{}'", name));
}

nlohmann::json to_json(const TrajectoryStep& s) {
    return {{"frame_index", s.pose.frame_index},
            {"t", s.pose.timestamp},
            {"x", s.pose.x},
            {"y", s.pose.y},
            {"yaw", s.pose.yaw},
            {"linear", s.command.linear},
            {"angular_target", s.command.angular_target},
            {"scores", s.scores.values()}};
}

Perception oracle_perception(int k) {
    return [k](const SceneSpec& spec) { return ground_truth(spec, k); };
}

Trajectory simulate(const Perception& perception, const PlanarWorld& world, PoseStamped pose, const NavConfig& cfg,
                    const SimOptions& options) {
    cfg.validate();
    if (options.steps < 1 || !(options.dt > 0.0)) {
        throw ConfigError("simulation needs positive steps and dt");
    }
    Trajectory traj;
    for (int step = 0; step < options.steps; ++step) {
        pose.frame_index = step;
        pose.timestamp = step * options.dt;
        const TraversabilityVector scores = perception(world.view(pose, cfg.fov));
        if (scores.size() != cfg.k) {
            throw ConfigError("perception returned the wrong number of sections");
        }
        const VelocityCommand cmd = velocity_command(scores, cfg);
        traj.steps.push_back({pose, cmd, scores});
        if (cmd.linear == 0.0 && options.stop_on_halt) {
            traj.halted = true;
            break;
        }
        pose.x += cmd.linear * std::cos(pose.yaw * kDegToRad) * options.dt;
        pose.y += cmd.linear * std::sin(pose.yaw * kDegToRad) * options.dt;
        pose.yaw = normalize_yaw(pose.yaw - cfg.angular_gain * cmd.angular_target * options.dt);
        if (world.occupied(pose.x, pose.y)) {
            traj.collided = true;
            traj.steps.push_back({pose, {}, TraversabilityVector::filled(cfg.k, 0.0)});
            break;
        }
    }
    return traj;
}

ImageFrame render_trajectory(const PlanarWorld& world, const Trajectory& traj, int pixels_per_meter) {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool first = true;
    auto grow = [&](double x, double y) {
        if (first) {
            x0 = x1 = x;
            y0 = y1 = y;
            first = false;
        }
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    };
    for (const auto& b : world.boxes) {
        grow(b.x_min, b.y_min);
        grow(b.x_max, b.y_max);
    }
    for (const auto& s : traj.steps) {
        grow(s.pose.x, s.pose.y);
    }
    x0 -= 0.5, y0 -= 0.5, x1 += 0.5, y1 += 0.5;
    const int w = std::max(1, static_cast<int>(std::ceil((x1 - x0) * pixels_per_meter)));
    const int h = std::max(1, static_cast<int>(std::ceil((y1 - y0) * pixels_per_meter)));
    ImageFrame img(3, h, w, 1.0f);
    auto to_px = [&](double x, double y) {
        return std::pair<int, int>{static_cast<int>((x - x0) * pixels_per_meter),
                                   h - 1 - static_cast<int>((y - y0) * pixels_per_meter)};
    };
    auto paint = [&](int px, int py, std::array<float, 3> c) {
        if (px >= 0 && px < w && py >= 0 && py < h) {
            for (int ch = 0; ch < 3; ++ch) {
                img.at(ch, py, px) = c[static_cast<std::size_t>(ch)];
            }
        }
    };
    for (const auto& b : world.boxes) {
        const auto [ax, ay] = to_px(b.x_min, b.y_max);
        const auto [bx, by] = to_px(b.x_max, b.y_min);
        for (int py = ay; py <= by; ++py) {
            for (int px = ax; px <= bx; ++px) {
                paint(px, py, {0.4f, 0.4f, 0.4f});
            }
        }
    }
    for (const auto& s : traj.steps) {
        const auto [px, py] = to_px(s.pose.x, s.pose.y);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                paint(px + dx, py + dy, {0.9f, 0.1f, 0.1f});
            }
        }
    }
    if (!traj.steps.empty()) {
        const auto [px, py] = to_px(traj.steps.front().pose.x, traj.steps.front().pose.y);
        for (int dy = -2; dy <= 2; ++dy) {
            for (int dx = -2; dx <= 2; ++dx) {
                paint(px + dx, py + dy, {0.1f, 0.2f, 0.9f});
            }
        }
    }
    return img;
}

}  // namespace travnet
