// Builds the policy's 33-entry input vector: a fan of forward rays, pitched
// ground/ceiling rays, and goal-relative plus proprioceptive scalars, all
// normalized into [-1, 1] ranges.
#pragma once

#include <array>
#include <vector>

#include "parkour/physics.hpp"
#include "parkour/world.hpp"

namespace parkour {

inline constexpr int kInputWidth = 33;

// Input vector layout.
inline constexpr int kForwardRayBegin = 0;   // 19 rays, -90..+90 degrees
inline constexpr int kGroundRayBegin = 19;   // 3 downward-pitched rays
inline constexpr int kCeilingRayBegin = 22;  // 2 upward-pitched rays
inline constexpr int kGoalOffsetBegin = 24;  // goal offset in the agent frame
inline constexpr int kVelocityBegin = 27;    // velocity in the agent frame
inline constexpr int kOnGroundIndex = 30;
inline constexpr int kGoalDistanceIndex = 31;
inline constexpr int kClockIndex = 32;

struct SensorConfig {
    int forward_ray_count = 19;
    double fan_degrees = 180.0;
    double max_distance = 10.0;
    int ground_ray_count = 3;
    int ceiling_ray_count = 2;
    double eye_height = 1.62;
    int episode_timeout_ticks = 400;  // clock normalizer; wired to the episode timeout
    double speed_normalizer = 0.39;   // wired to physics sprint_speed

    // Ground rays are forward-centered at three pitches so the floor edge is
    // sampled at staggered lookahead distances; single-elevation strips give
    // a yawed 45-degree fan nothing useful to hit.
    std::vector<double> ground_ray_pitch_degrees{-75.0, -55.0, -40.0};
    std::vector<double> ground_ray_yaw_degrees{0.0, 0.0, 0.0};
    std::vector<double> ceiling_ray_pitch_degrees{45.0, 45.0};
    std::vector<double> ceiling_ray_yaw_degrees{-15.0, 15.0};

    void validate() const;
};

struct InputVector {
    std::array<double, kInputWidth> values{};

    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
};

// Walks the voxel grid cell by cell along the ray. Returns
// 1 - hit_distance / max_distance for the first occupied cell whose entry
// lies within max_distance, and 0 on a miss. The direction must be a unit
// vector (within 1e-9); otherwise throws std::invalid_argument.
double cast_ray(const Vec3& origin, const Vec3& direction, const Course& course,
                double max_distance);

// Emits the full 33-entry input vector for a living agent. Throws
// std::logic_error for a dead one.
InputVector sense(const AgentState& state, const Course& course, const SensorConfig& config);

}  // namespace parkour
