// Tick-based player kinematics over a voxel course: locked sprint, strafing,
// jumping, gravity, axis-separated AABB collision, goal and void detection.
#pragma once

#include <optional>

#include "parkour/geom.hpp"
#include "parkour/world.hpp"

namespace parkour {

struct PhysicsConfig {
    int tick_rate = 20;             // ticks per second
    double sprint_speed = 0.39;     // blocks per tick; calibrated so max_jump_span() == 4
    double jump_velocity = 0.42;    // blocks per tick, applied on takeoff
    double gravity = 0.08;          // blocks per tick^2
    double vertical_drag = 0.98;    // per-tick multiplier on vertical velocity
    double max_yaw_per_tick = 0.26; // radians, scale for the policy's yaw delta
    double strafe_speed_fraction = 0.6;
    double player_half_width = 0.3;
    double player_height = 1.8;
    // Death plane; when absent the course supplies it (elevation - 5).
    std::optional<double> void_y;

    void validate() const;
    double effective_void_y(const Course& course) const {
        return void_y ? *void_y : course.void_y();
    }
};

// The four per-tick control outputs.
struct ActionCommand {
    bool jump = false;
    bool strafe_left = false;
    bool strafe_right = false;
    double yaw_delta = 0.0;  // in [-1, 1], scaled by max_yaw_per_tick
};

struct AgentState {
    Vec3 position;      // feet center, world frame
    Vec3 velocity;      // blocks per tick, world frame
    double yaw = 0.0;   // radians relative to the course axis; 0 faces the goal
    bool on_ground = false;
    int tick = 0;
    bool alive = true;
    bool reached_goal = false;
};

Aabb player_aabb(const Vec3& position, const PhysicsConfig& config);

// Agent centered on the middle Start cell, facing the goal, at rest.
AgentState spawn(const Course& course, const PhysicsConfig& config);

// Advances the state one tick. Throws std::logic_error if the agent is
// already dead or has reached the goal.
AgentState step(const AgentState& state, const ActionCommand& action, const Course& course,
                const PhysicsConfig& config);

// True if a scripted controller (run straight, hold jump from some tick,
// optionally hold one strafe key) can cross a gap of the given width on a
// synthetic two-platform course. Brute-forces all jump ticks and the three
// strafe modes.
bool gap_clearable(int gap, const PhysicsConfig& config);

// Largest clearable gap width under gap_clearable, probing widths 1..8.
int max_jump_span(const PhysicsConfig& config);

}  // namespace parkour
