#include "parkour/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace parkour {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

Vec3 ray_direction(double world_yaw, double pitch_rad) {
    const double c = std::cos(pitch_rad);
    return {c * std::cos(world_yaw), std::sin(pitch_rad), c * std::sin(world_yaw)};
}

}  // namespace

void SensorConfig::validate() const {
    if (forward_ray_count < 2)
        throw std::invalid_argument("sensors.forward_ray_count: must be >= 2");
    if (!(max_distance > 0.0))
        throw std::invalid_argument("sensors.max_distance: must be positive");
    if (!(fan_degrees > 0.0))
        throw std::invalid_argument("sensors.fan_degrees: must be positive");
    if (episode_timeout_ticks < 1)
        throw std::invalid_argument("sensors.episode_timeout_ticks: must be >= 1");
    if (!(speed_normalizer > 0.0))
        throw std::invalid_argument("sensors.speed_normalizer: must be positive");
    if (ground_ray_count != static_cast<int>(ground_ray_pitch_degrees.size()) ||
        ground_ray_count != static_cast<int>(ground_ray_yaw_degrees.size()))
        throw std::invalid_argument("sensors.ground_ray_*: angle lists must match ground_ray_count");
    if (ceiling_ray_count != static_cast<int>(ceiling_ray_pitch_degrees.size()) ||
        ceiling_ray_count != static_cast<int>(ceiling_ray_yaw_degrees.size()))
        throw std::invalid_argument("sensors.ceiling_ray_*: angle lists must match ceiling_ray_count");
    const int total = forward_ray_count + ground_ray_count + ceiling_ray_count + 9;
    if (total != kInputWidth)
        throw std::invalid_argument("sensors: ray counts plus 9 scalars must total " +
                                    std::to_string(kInputWidth) + ", got " +
                                    std::to_string(total));
}

double cast_ray(const Vec3& origin, const Vec3& direction, const Course& course,
                double max_distance) {
    if (std::abs(direction.length() - 1.0) > 1e-9)
        throw std::invalid_argument("cast_ray: direction must be a unit vector");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    int cx = static_cast<int>(std::floor(origin.x));
    int cy = static_cast<int>(std::floor(origin.y));
    int cz = static_cast<int>(std::floor(origin.z));

    // Parametric distance to the next cell boundary on each axis, and the
    // distance between successive boundaries.
    double t_max_x, t_max_y, t_max_z;
    double t_delta_x, t_delta_y, t_delta_z;
    int step_x, step_y, step_z;

    auto setup_axis = [](double pos, double dir, int cell, double& t_max, double& t_delta,
                         int& step) {
        if (dir > 0.0) {
            step = 1;
            t_delta = 1.0 / dir;
            t_max = (static_cast<double>(cell) + 1.0 - pos) / dir;
        } else if (dir < 0.0) {
            step = -1;
            t_delta = -1.0 / dir;
            t_max = (pos - static_cast<double>(cell)) / -dir;
        } else {
            step = 0;
            t_delta = kInf;
            t_max = kInf;
        }
    };
    setup_axis(origin.x, direction.x, cx, t_max_x, t_delta_x, step_x);
    setup_axis(origin.y, direction.y, cy, t_max_y, t_delta_y, step_y);
    setup_axis(origin.z, direction.z, cz, t_max_z, t_delta_z, step_z);

    double entry = 0.0;  // distance at which the ray entered the current cell
    while (entry <= max_distance) {
        if (block_at(course, cx, cy, cz) != BlockKind::Air)
            return 1.0 - entry / max_distance;
        if (t_max_x <= t_max_y && t_max_x <= t_max_z) {
            entry = t_max_x;
            t_max_x += t_delta_x;
            cx += step_x;
        } else if (t_max_y <= t_max_z) {
            entry = t_max_y;
            t_max_y += t_delta_y;
            cy += step_y;
        } else {
            entry = t_max_z;
            t_max_z += t_delta_z;
            cz += step_z;
        }
    }
    return 0.0;
}

InputVector sense(const AgentState& state, const Course& course, const SensorConfig& config) {
    if (!state.alive) throw std::logic_error("sense: agent is dead");

    const double heading = course.axis_angle() + state.yaw;
    const Vec3 forward{std::cos(heading), 0.0, std::sin(heading)};
    const Vec3 right{std::sin(heading), 0.0, -std::cos(heading)};
    const Vec3 eye = state.position + Vec3{0.0, config.eye_height, 0.0};

    InputVector input;
    int idx = 0;

    // Forward fan, uniformly spanning fan_degrees centered on the heading.
    const double fan = config.fan_degrees * kDegToRad;
    for (int i = 0; i < config.forward_ray_count; ++i) {
        const double rel =
            (static_cast<double>(i) / (config.forward_ray_count - 1) - 0.5) * fan;
        input[idx++] = cast_ray(eye, ray_direction(heading + rel, 0.0), course,
                                config.max_distance);
    }
    for (int i = 0; i < config.ground_ray_count; ++i) {
        const double yaw = heading + config.ground_ray_yaw_degrees[static_cast<size_t>(i)] * kDegToRad;
        const double pitch = config.ground_ray_pitch_degrees[static_cast<size_t>(i)] * kDegToRad;
        input[idx++] = cast_ray(eye, ray_direction(yaw, pitch), course, config.max_distance);
    }
    for (int i = 0; i < config.ceiling_ray_count; ++i) {
        const double yaw = heading + config.ceiling_ray_yaw_degrees[static_cast<size_t>(i)] * kDegToRad;
        const double pitch = config.ceiling_ray_pitch_degrees[static_cast<size_t>(i)] * kDegToRad;
        input[idx++] = cast_ray(eye, ray_direction(yaw, pitch), course, config.max_distance);
    }

    // Goal offset and velocity, rotated into the agent frame (forward = +X,
    // right = +Z) and normalized.
    const Vec3 offset = course.goal_center() - state.position;
    input[idx++] = clamp_unit(offset.dot(forward) / config.max_distance);
    input[idx++] = clamp_unit(offset.y / config.max_distance);
    input[idx++] = clamp_unit(offset.dot(right) / config.max_distance);
    input[idx++] = clamp_unit(state.velocity.dot(forward) / config.speed_normalizer);
    input[idx++] = clamp_unit(state.velocity.y / config.speed_normalizer);
    input[idx++] = clamp_unit(state.velocity.dot(right) / config.speed_normalizer);

    input[idx++] = state.on_ground ? 1.0 : 0.0;
    input[idx++] = std::clamp(offset.length() / config.max_distance, 0.0, 1.0);
    input[idx++] = std::clamp(static_cast<double>(state.tick) / config.episode_timeout_ticks,
                              0.0, 1.0);
    return input;
}

}  // namespace parkour
