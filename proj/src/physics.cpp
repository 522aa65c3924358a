#include "parkour/physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parkour {

namespace {

// Slack for face-contact comparisons so an agent resting exactly on a block
// boundary keeps colliding with it despite rounding.
constexpr double kContactEps = 1e-9;

bool solid(BlockKind k) { return k != BlockKind::Air; }

double axis_component(const Vec3& v, int axis) {
    return axis == 0 ? v.x : (axis == 1 ? v.y : v.z);
}

void set_axis(Vec3& v, int axis, double value) {
    if (axis == 0) v.x = value;
    else if (axis == 1) v.y = value;
    else v.z = value;
}

// Sweeps the player box along one axis, clamping the displacement against
// every solid block in the swept region. Returns true when the motion was
// blocked (displacement shortened).
bool sweep_axis(Vec3& position, Vec3& velocity, int axis, const Course& course,
                const PhysicsConfig& config) {
    const double wanted = axis_component(velocity, axis);
    if (wanted == 0.0) return false;

    const Aabb box = player_aabb(position, config);
    Aabb swept = box;
    if (wanted > 0.0) set_axis(swept.hi, axis, axis_component(box.hi, axis) + wanted);
    else set_axis(swept.lo, axis, axis_component(box.lo, axis) + wanted);

    const int x0 = static_cast<int>(std::floor(swept.lo.x)) - 1;
    const int x1 = static_cast<int>(std::floor(swept.hi.x)) + 1;
    const int y0 = static_cast<int>(std::floor(swept.lo.y)) - 1;
    const int y1 = static_cast<int>(std::floor(swept.hi.y)) + 1;
    const int z0 = static_cast<int>(std::floor(swept.lo.z)) - 1;
    const int z1 = static_cast<int>(std::floor(swept.hi.z)) + 1;

    double allowed = wanted;
    for (int bx = x0; bx <= x1; ++bx) {
        for (int by = y0; by <= y1; ++by) {
            for (int bz = z0; bz <= z1; ++bz) {
                if (!solid(block_at(course, bx, by, bz))) continue;
                const Aabb block{{static_cast<double>(bx), static_cast<double>(by),
                                  static_cast<double>(bz)},
                                 {bx + 1.0, by + 1.0, bz + 1.0}};
                // Overlap on the two perpendicular axes, shrunk by the contact
                // slack so mere face contact does not count.
                bool overlaps = true;
                for (int other = 0; other < 3; ++other) {
                    if (other == axis) continue;
                    if (axis_component(box.lo, other) + kContactEps >=
                            axis_component(block.hi, other) ||
                        axis_component(box.hi, other) - kContactEps <=
                            axis_component(block.lo, other)) {
                        overlaps = false;
                        break;
                    }
                }
                if (!overlaps) continue;
                if (wanted > 0.0) {
                    const double face = axis_component(block.lo, axis);
                    const double lead = axis_component(box.hi, axis);
                    if (lead <= face + kContactEps && lead + allowed > face)
                        allowed = face - lead;
                } else {
                    const double face = axis_component(block.hi, axis);
                    const double lead = axis_component(box.lo, axis);
                    if (lead >= face - kContactEps && lead + allowed < face)
                        allowed = face - lead;
                }
            }
        }
    }

    set_axis(position, axis, axis_component(position, axis) + allowed);
    if (allowed != wanted) {
        set_axis(velocity, axis, 0.0);
        return true;
    }
    return false;
}

bool touches_goal_column(const Vec3& position, const Course& course,
                         const PhysicsConfig& config) {
    const Aabb local = course.world_box_to_local(player_aabb(position, config));
    const double g = static_cast<double>(course.goal_index);
    const double elev = static_cast<double>(course.cell_elevation);
    const Aabb column{{g, elev, 0.0}, {g + 1.0, elev + 1.0 + kGoalColumnHeight, 1.0}};
    return local.touches(column);
}

double wrap_angle(double a) {
    return std::remainder(a, 2.0 * M_PI);
}

Course make_gap_course(int gap) {
    // [SSS][BBBB][gap air][BBBB][G]
    Course course;
    course.config.cell_count = kStartLength + 4 + gap + 4 + 1;
    course.config.max_gap = std::max(gap, 4);
    course.cells.assign(static_cast<size_t>(course.config.cell_count), BlockKind::Solid);
    for (int i = 0; i < kStartLength; ++i) course.cells[static_cast<size_t>(i)] = BlockKind::Start;
    for (int i = 0; i < gap; ++i)
        course.cells[static_cast<size_t>(kStartLength + 4 + i)] = BlockKind::Air;
    course.cells.back() = BlockKind::Goal;
    course.goal_index = course.config.cell_count - 1;
    course.course_id = "synthetic-gap-" + std::to_string(gap);
    return course;
}

// Run forward with a given strafe mode, holding jump from jump_tick onward.
bool scripted_run_reaches_goal(const Course& course, const PhysicsConfig& config,
                               int jump_tick, int strafe_mode) {
    AgentState state = spawn(course, config);
    const int tick_budget = 40 * (course.cell_count() + 8);
    while (state.alive && !state.reached_goal && state.tick < tick_budget) {
        ActionCommand action;
        action.jump = state.tick >= jump_tick;
        action.strafe_left = strafe_mode == 1;
        action.strafe_right = strafe_mode == 2;
        state = step(state, action, course, config);
    }
    return state.reached_goal;
}

}  // namespace

void PhysicsConfig::validate() const {
    if (tick_rate <= 0) throw std::invalid_argument("physics.tick_rate: must be positive");
    if (!(sprint_speed > 0.0)) throw std::invalid_argument("physics.sprint_speed: must be positive");
    if (!(jump_velocity > 0.0)) throw std::invalid_argument("physics.jump_velocity: must be positive");
    if (!(gravity > 0.0)) throw std::invalid_argument("physics.gravity: must be positive");
    if (!(vertical_drag > 0.0)) throw std::invalid_argument("physics.vertical_drag: must be positive");
    if (!(max_yaw_per_tick > 0.0))
        throw std::invalid_argument("physics.max_yaw_per_tick: must be positive");
    if (!(strafe_speed_fraction > 0.0) || strafe_speed_fraction > 1.0)
        throw std::invalid_argument("physics.strafe_speed_fraction: must lie in (0, 1]");
    if (!(player_half_width > 0.0))
        throw std::invalid_argument("physics.player_half_width: must be positive");
    if (!(player_height > 0.0))
        throw std::invalid_argument("physics.player_height: must be positive");
}

Aabb player_aabb(const Vec3& position, const PhysicsConfig& config) {
    return {{position.x - config.player_half_width, position.y,
             position.z - config.player_half_width},
            {position.x + config.player_half_width, position.y + config.player_height,
             position.z + config.player_half_width}};
}

AgentState spawn(const Course& course, const PhysicsConfig& config) {
    (void)config;
    AgentState state;
    state.position = course.surface_center(course.spawn_cell());
    state.velocity = {};
    state.yaw = 0.0;
    state.on_ground = true;
    state.tick = 0;
    state.alive = true;
    state.reached_goal = false;
    return state;
}

AgentState step(const AgentState& state, const ActionCommand& action, const Course& course,
                const PhysicsConfig& config) {
    if (!state.alive || state.reached_goal)
        throw std::logic_error("step: agent is dead or already finished");

    AgentState next = state;

    // 1. Turn.
    const double yaw_delta = std::clamp(action.yaw_delta, -1.0, 1.0);
    next.yaw = wrap_angle(state.yaw + yaw_delta * config.max_yaw_per_tick);

    // 2. Locked sprint: the horizontal direction blends forward with strafe,
    //    then is renormalized so ground speed is always sprint_speed.
    const double heading = course.axis_angle() + next.yaw;
    const Vec3 forward{std::cos(heading), 0.0, std::sin(heading)};
    const Vec3 right{std::sin(heading), 0.0, -std::cos(heading)};
    double lateral = 0.0;
    if (action.strafe_left != action.strafe_right)  // both held cancels
        lateral = action.strafe_right ? config.strafe_speed_fraction
                                      : -config.strafe_speed_fraction;
    const Vec3 dir = (forward + right * lateral).normalized();
    next.velocity.x = dir.x * config.sprint_speed;
    next.velocity.z = dir.z * config.sprint_speed;

    // 3. Takeoff only from the ground.
    if (action.jump && state.on_ground) next.velocity.y = config.jump_velocity;

    // 4. Gravity, then drag.
    next.velocity.y = (next.velocity.y - config.gravity) * config.vertical_drag;

    // 5. Axis-separated collision. Horizontal axes resolve before vertical so
    //    a jump that crosses the ledge on its landing tick still lands.
    sweep_axis(next.position, next.velocity, 0, course, config);
    sweep_axis(next.position, next.velocity, 2, course, config);
    const bool falling = next.velocity.y < 0.0;
    const bool blocked_y = sweep_axis(next.position, next.velocity, 1, course, config);
    next.on_ground = falling && blocked_y;

    // 6. Goal contact.
    if (touches_goal_column(next.position, course, config)) next.reached_goal = true;

    // 7. Void.
    if (next.position.y < config.effective_void_y(course)) next.alive = false;

    // 8. Clock.
    next.tick = state.tick + 1;
    return next;
}

bool gap_clearable(int gap, const PhysicsConfig& config) {
    const Course course = make_gap_course(gap);
    const int max_jump_tick = 80;
    for (int strafe_mode = 0; strafe_mode < 3; ++strafe_mode) {
        for (int jump_tick = 0; jump_tick <= max_jump_tick; ++jump_tick) {
            if (scripted_run_reaches_goal(course, config, jump_tick, strafe_mode)) return true;
        }
    }
    return false;
}

int max_jump_span(const PhysicsConfig& config) {
    int span = 0;
    for (int gap = 1; gap <= 8; ++gap) {
        if (gap_clearable(gap, config)) span = gap;
    }
    return span;
}

}  // namespace parkour
