#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parkour/rng.hpp"
#include "parkour/sensing.hpp"
#include "parkour/world.hpp"

using namespace parkour;

namespace {

Course solid_course(int cells) {
    CdrConfig config;
    config.cell_count = cells;
    config.block_probability = 1.0;
    return generate_course(config, 1);
}

// Fine sampling along the ray; first sample inside an occupied cell wins.
double sample_ray(const Vec3& origin, const Vec3& dir, const Course& course, double maxd) {
    for (double t = 0.0; t <= maxd; t += 1e-3) {
        const Vec3 p = origin + dir * t;
        if (block_at(course, static_cast<int>(std::floor(p.x)),
                     static_cast<int>(std::floor(p.y)),
                     static_cast<int>(std::floor(p.z))) != BlockKind::Air)
            return 1.0 - t / maxd;
    }
    return 0.0;
}

// Feet height that puts the eye midway through the block layer, so
// horizontal rays can see the strip itself.
double band_feet_y(const Course& course, const SensorConfig& config) {
    return course.cell_elevation + 0.5 - config.eye_height;
}

}  // namespace

TEST_CASE("ray formula: exact hit distances and the miss case") {
    Course course = solid_course(30);
    for (int i = kStartLength; i < 15; ++i)
        course.cells[static_cast<size_t>(i)] = BlockKind::Air;  // corridor up to cell 15
    const SensorConfig config;
    const double band_y = course.cell_elevation + 0.5;

    for (double d : {0.0, 2.5, 5.0, 9.99}) {
        const Vec3 origin{15.0 - d, band_y, 0.5};  // cell 15 face sits at x = 15
        const double value = cast_ray(origin, {1.0, 0.0, 0.0}, course, config.max_distance);
        CHECK(value == doctest::Approx(1.0 - d / config.max_distance).epsilon(1e-9));
    }

    // Fired away from the strip: clean miss.
    const Vec3 origin{8.5, band_y, 0.5};
    CHECK(cast_ray(origin, {0.0, 1.0, 0.0}, course, config.max_distance) == 0.0);
    CHECK(cast_ray(origin, {0.0, 0.0, 1.0}, course, config.max_distance) == 0.0);
}

TEST_CASE("ray rejects non-normalized directions") {
    const Course course = solid_course(10);
    CHECK_THROWS_AS(cast_ray({0, 0, 0}, {1.0, 1.0, 0.0}, course, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(cast_ray({0, 0, 0}, {0.5, 0.0, 0.0}, course, 10.0), std::invalid_argument);
}

TEST_CASE("grid walking agrees with a fine sampling oracle") {
    CdrConfig cdr;
    cdr.cell_count = 14;
    Rng rng(31337);
    const double maxd = 10.0;
    for (int trial = 0; trial < 500; ++trial) {
        const Course course = generate_course(cdr, rng.next_u64());
        const Vec3 origin{rng.uniform_range(-2.0, 16.0),
                          course.cell_elevation + rng.uniform_range(-1.5, 2.5),
                          rng.uniform_range(-1.5, 2.5)};
        Vec3 dir{rng.uniform_range(-1.0, 1.0), rng.uniform_range(-1.0, 1.0),
                 rng.uniform_range(-1.0, 1.0)};
        if (dir.length() < 1e-3) continue;
        dir = dir.normalized();
        const double traversed = cast_ray(origin, dir, course, maxd);
        const double sampled = sample_ray(origin, dir, course, maxd);
        // One cell width of slack: the sampler can skip grazing hits.
        CHECK(std::abs(traversed - sampled) <= 1.0 / maxd);
    }
}

TEST_CASE("center forward ray reads a wall five blocks ahead as 0.5") {
    const Course course = solid_course(30);
    const SensorConfig config;
    AgentState state;
    // Hover so the eye sits inside the block layer; the wall is the strip.
    state.position = {10.0 - 5.0, band_feet_y(course, config), 0.5};
    state.yaw = 0.0;
    state.alive = true;
    // Stand before cell 10 with the run of cells 0..9 removed.
    Course gapped = course;
    for (int i = 0; i < 10; ++i) gapped.cells[static_cast<size_t>(i)] = BlockKind::Air;
    gapped.cells[0] = BlockKind::Start;  // keep the course shape legal
    gapped.cells[1] = BlockKind::Start;
    gapped.cells[2] = BlockKind::Start;
    const InputVector input = sense(state, gapped, config);
    CHECK(input[kForwardRayBegin + 9] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("distance entry is zero at the goal") {
    const Course course = solid_course(12);
    const SensorConfig config;
    AgentState state;
    state.position = course.goal_center();
    state.alive = true;
    const InputVector input = sense(state, course, config);
    CHECK(input[kGoalDistanceIndex] == 0.0);
    CHECK(input[kGoalOffsetBegin] == 0.0);
}

TEST_CASE("open void ahead reads zero on forward and ground rays") {
    const Course course = solid_course(10);
    const SensorConfig config;
    AgentState state;
    state.position = {course.cell_count() + 12.0, course.cell_elevation + 1.0, 0.5};
    state.alive = true;
    const InputVector input = sense(state, course, config);
    for (int i = 0; i < config.forward_ray_count; ++i) CHECK(input[kForwardRayBegin + i] == 0.0);
    for (int i = 0; i < config.ground_ray_count; ++i) CHECK(input[kGroundRayBegin + i] == 0.0);
}

TEST_CASE("sensing a dead agent is a contract violation") {
    const Course course = solid_course(10);
    AgentState state;
    state.alive = false;
    CHECK_THROWS_AS(sense(state, course, SensorConfig{}), std::logic_error);
}

TEST_CASE("config validation enforces the 33-entry layout") {
    SensorConfig config;
    config.forward_ray_count = 20;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = SensorConfig{};
    config.ground_ray_pitch_degrees = {-45.0};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    CHECK_NOTHROW(SensorConfig{}.validate());
}

TEST_CASE("input vector is frame invariant under course rotation") {
    CdrConfig cdr;
    cdr.cell_count = 14;
    const SensorConfig config;
    Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        Course along_x = generate_course(cdr, rng.next_u64());
        Course along_z = along_x;
        along_z.axis = CourseAxis::PlusZ;

        const Vec3 local{rng.uniform_range(0.0, 14.0),
                         along_x.cell_elevation + rng.uniform_range(0.2, 3.0),
                         rng.uniform_range(0.0, 1.0)};
        const Vec3 local_vel{rng.uniform_range(-0.5, 0.5), rng.uniform_range(-0.5, 0.5),
                             rng.uniform_range(-0.5, 0.5)};
        AgentState sx;
        sx.position = local;
        sx.velocity = local_vel;
        sx.yaw = rng.uniform_range(-1.0, 1.0);
        sx.on_ground = rng.uniform_double() < 0.5;
        sx.tick = static_cast<int>(rng.uniform_below(400));

        AgentState sz = sx;
        sz.position = along_z.local_to_world(local);
        sz.velocity = along_z.local_to_world(local_vel);

        const InputVector a = sense(sx, along_x, config);
        const InputVector b = sense(sz, along_z, config);
        for (int i = 0; i < kInputWidth; ++i)
            CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
    }
}

TEST_CASE("mirror symmetry at yaw zero") {
    Course course = solid_course(16);
    course.cells[6] = BlockKind::Air;
    course.cells[7] = BlockKind::Air;
    const SensorConfig config;
    AgentState state;
    // Hover inside the gap with the eye at strip level, centered laterally;
    // the geometry is mirror symmetric about z = 0.5.
    state.position = {7.0, band_feet_y(course, config), 0.5};
    state.yaw = 0.0;
    state.alive = true;
    const InputVector input = sense(state, course, config);
    CHECK(input[kForwardRayBegin + 9] > 0.0);
    for (int i = 0; i < config.forward_ray_count; ++i)
        CHECK(input[kForwardRayBegin + i] ==
              doctest::Approx(input[kForwardRayBegin + 18 - i]).epsilon(1e-12));
    CHECK(input[kGoalOffsetBegin + 2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("every entry stays inside its declared range") {
    CdrConfig cdr;
    cdr.cell_count = 18;
    const SensorConfig config;
    Rng rng(808);
    const Course course = generate_course(cdr, 606);
    for (int trial = 0; trial < 100000; ++trial) {
        AgentState state;
        state.position = {rng.uniform_range(-10.0, 30.0),
                          course.cell_elevation + rng.uniform_range(-8.0, 8.0),
                          rng.uniform_range(-10.0, 10.0)};
        state.velocity = {rng.uniform_range(-2.0, 2.0), rng.uniform_range(-4.0, 1.0),
                          rng.uniform_range(-2.0, 2.0)};
        state.yaw = rng.uniform_range(-4.0, 4.0);
        state.on_ground = rng.uniform_double() < 0.5;
        state.tick = static_cast<int>(rng.uniform_below(4000));
        const InputVector input = sense(state, course, config);
        for (int i = 0; i < kCeilingRayBegin + 2; ++i) {
            REQUIRE(input[i] >= 0.0);
            REQUIRE(input[i] <= 1.0);
        }
        for (int i = kGoalOffsetBegin; i < kOnGroundIndex; ++i) {
            REQUIRE(input[i] >= -1.0);
            REQUIRE(input[i] <= 1.0);
        }
        REQUIRE((input[kOnGroundIndex] == 0.0 || input[kOnGroundIndex] == 1.0));
        REQUIRE(input[kGoalDistanceIndex] >= 0.0);
        REQUIRE(input[kGoalDistanceIndex] <= 1.0);
        REQUIRE(input[kClockIndex] >= 0.0);
        REQUIRE(input[kClockIndex] <= 1.0);
        for (int i = 0; i < kInputWidth; ++i) REQUIRE(std::isfinite(input[i]));
    }
}

TEST_CASE("closing on a wall strictly raises the center ray") {
    Course course = solid_course(30);
    for (int i = kStartLength; i < 20; ++i)
        course.cells[static_cast<size_t>(i)] = BlockKind::Air;  // corridor up to cell 20
    const SensorConfig config;
    double prev = -1.0;
    // March the eye toward the face of cell 20 from eight blocks out.
    for (double d = 8.0; d > 0.3; d -= 0.25) {
        AgentState state;
        state.position = {20.0 - d, band_feet_y(course, config), 0.5};
        state.alive = true;
        const InputVector input = sense(state, course, config);
        const double value = input[kForwardRayBegin + 9];
        CHECK(value > prev);
        prev = value;
    }
}
