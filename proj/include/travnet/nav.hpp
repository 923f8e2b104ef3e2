#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "travnet/core.hpp"
#include "travnet/synthworld.hpp"

namespace travnet {

struct NavConfig {
    double v_max = 1.0;             // m/s
    double full_speed_score = 0.5;  // center score at or above this drives at v_max
    double stop_score = 0.1;        // center score at or below this stops the robot
    double fov = 85.0;              // horizontal field of view, degrees
    int k = kDefaultSections;
    double angular_gain = 1.0;      // 1/s, turn rate = gain * bearing

    void validate() const;
};

struct VelocityCommand {
    double linear = 0.0;          // m/s
    double angular_target = 0.0;  // degrees from the camera axis, positive to the right

    bool operator==(const VelocityCommand&) const = default;
};

/// Score that drives the linear speed: the middle section, or the mean of the
/// two middle sections when k is even.
double center_score(const TraversabilityVector& scores);

/// 0 at or below stop_score, v_max at or above full_speed_score, linear in between.
double linear_velocity(double center_score, const NavConfig& cfg);

/// Bearing of the most traversable section's center, ((i + 0.5) / k - 0.5) * fov.
/// Exact ties go to the section nearest the center, then to the leftmost.
double steering_target(const TraversabilityVector& scores, const NavConfig& cfg);

VelocityCommand velocity_command(const TraversabilityVector& scores, const NavConfig& cfg);

/// Axis-aligned box on the ground plane, meters.
struct WorldBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    bool contains(double x, double y) const { return x >= x_min && x <= x_max && y >= y_min && y <= y_max; }
};

/// Planar world seen through a forward camera. Each image column looks along one
/// bearing of the field of view; free distance d along that ray is drawn as an
/// obstacle column whose lower edge sits at score d / max_range.
struct PlanarWorld {
    std::vector<WorldBox> boxes;
    double max_range = 5.0;  // m, free distance that maps to score 1
    int image_height = 128;
    int image_width = 227;
    GroundStyle ground = GroundStyle::asphalt_like;
    double noise_level = 0.0;

    bool occupied(double x, double y) const;
    /// Distance to the first box along a ray from (x, y) at heading `deg` (CCW from +x).
    double ray_distance(double x, double y, double deg) const;
    /// Camera view at a pose, as a scene the generator can render.
    SceneSpec view(const PoseStamped& pose, double fov) const;
};

/// Named layouts: "open", "wall_right_gap" (wall ahead, corridor to the right),
/// "dead_end" (narrow corridor closed ahead).
PlanarWorld world_preset(const std::string& name);

struct TrajectoryStep {
    PoseStamped pose;
    VelocityCommand command;
    TraversabilityVector scores;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    bool collided = false;
    bool halted = false;
};

nlohmann::json to_json(const TrajectoryStep& s);

/// Maps a rendered scene to scores (oracle ground truth or a trained model).
using Perception = std::function<TraversabilityVector(const SceneSpec&)>;

Perception oracle_perception(int k);

struct SimOptions {
    int steps = 400;
    double dt = 0.1;           // s
    bool stop_on_halt = true;  // end the episode at the first zero-speed command
};

/// Unicycle rollout: per step, perceive, command, then advance the pose by
/// (v cos yaw, v sin yaw) * dt and yaw -= gain * bearing * dt.
Trajectory simulate(const Perception& perception, const PlanarWorld& world, PoseStamped start,
                    const NavConfig& cfg, const SimOptions& options = {});

/// Top-down picture of the world and path (boxes gray, path red, start blue).
ImageFrame render_trajectory(const PlanarWorld& world, const Trajectory& traj, int pixels_per_meter = 40);

}  // namespace travnet
