#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "parkour/rng.hpp"
#include "parkour/world.hpp"

using namespace parkour;

namespace {

int longest_air_run(const Course& course) {
    int run = 0, longest = 0;
    for (BlockKind k : course.cells) {
        run = (k == BlockKind::Air) ? run + 1 : 0;
        longest = std::max(longest, run);
    }
    return longest;
}

}  // namespace

TEST_CASE("degenerate probability one yields a fully solid interior") {
    CdrConfig config;
    config.cell_count = 10;
    config.block_probability = 1.0;
    const Course course = generate_course(config, 42);
    for (int i = kStartLength; i < course.cell_count() - 1; ++i)
        CHECK(course.cells[static_cast<size_t>(i)] == BlockKind::Solid);
    CHECK(course.cells_string() == "SSSBBBBBBG");
}

TEST_CASE("all-air draw is repaired to the hand-enumerated pattern") {
    // With probability zero every interior cell draws Air; scanning from the
    // start, the fifth air cell of the first run must flip to Solid, leaving
    // gaps of 4 and 1 for a 10-cell course.
    CdrConfig config;
    config.cell_count = 10;
    config.block_probability = 0.0;
    const Course course = generate_course(config, 7);
    CHECK(course.cells_string() == "SSS....B.G");
    CHECK(longest_air_run(course) == config.max_gap);
}

TEST_CASE("generation is deterministic in (config, seed)") {
    CdrConfig config;
    const Course a = generate_course(config, 1234);
    const Course b = generate_course(config, 1234);
    CHECK(a.cells == b.cells);
    CHECK(a.course_id == b.course_id);

    const Course c = generate_course(config, 1235);
    CHECK(c.course_id != a.course_id);
}

TEST_CASE("death threshold boundary") {
    CdrConfig config;
    config.death_threshold = 5;
    CHECK_FALSE(should_regenerate(0, config));
    CHECK_FALSE(should_regenerate(4, config));
    CHECK(should_regenerate(5, config));
    CHECK(should_regenerate(9, config));
}

TEST_CASE("cell_count too small is a configuration error") {
    CdrConfig config;
    config.cell_count = kStartLength;  // no room for the goal
    CHECK_THROWS_AS(generate_course(config, 1), std::invalid_argument);
}

TEST_CASE("block_at answers the strip layer and nothing else") {
    CdrConfig config;
    config.cell_count = 8;
    config.block_probability = 1.0;
    const Course course = generate_course(config, 3);
    const int elev = course.cell_elevation;

    CHECK(block_at(course, 4, elev, 0) == BlockKind::Solid);
    CHECK(block_at(course, 0, elev, 0) == BlockKind::Start);
    CHECK(block_at(course, course.goal_index, elev, 0) == BlockKind::Goal);
    // Void below, air above, off-strip laterally.
    CHECK(block_at(course, 4, elev - 1, 0) == BlockKind::Air);
    CHECK(block_at(course, 4, elev - 20, 0) == BlockKind::Air);
    CHECK(block_at(course, 4, elev + 1, 0) == BlockKind::Air);
    CHECK(block_at(course, 4, elev, 1) == BlockKind::Air);
    CHECK(block_at(course, -5, elev, 0) == BlockKind::Air);
    CHECK(block_at(course, course.cell_count(), elev, 0) == BlockKind::Air);
}

TEST_CASE("rotated embedding answers the same cells") {
    CdrConfig config;
    config.cell_count = 8;
    config.block_probability = 1.0;
    Course course = generate_course(config, 3);
    course.axis = CourseAxis::PlusZ;
    const int elev = course.cell_elevation;
    // Cell i sits at world block (-1, elev, i) when rotated onto +Z.
    CHECK(block_at(course, -1, elev, 4) == BlockKind::Solid);
    CHECK(block_at(course, -1, elev, 0) == BlockKind::Start);
    CHECK(block_at(course, -1, elev, course.goal_index) == BlockKind::Goal);
    CHECK(block_at(course, 0, elev, 4) == BlockKind::Air);
}

TEST_CASE("no air run ever exceeds max_gap") {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        CdrConfig config;
        config.cell_count = 5 + static_cast<int>(rng.uniform_below(40));
        config.max_gap = 1 + static_cast<int>(rng.uniform_below(5));
        config.block_probability = rng.uniform_range(0.05, 0.95);
        const Course course = generate_course(config, rng.next_u64());
        CHECK(longest_air_run(course) <= config.max_gap);
        CHECK_NOTHROW(validate_course(course));
    }
}

TEST_CASE("pre-repair solid fraction matches the binomial draw") {
    CdrConfig config;
    config.cell_count = 1000;
    config.block_probability = 0.5;
    int seeds_in_band = 0;
    const int seeds = 100;
    Rng rng(4242);
    for (int s = 0; s < seeds; ++s) {
        const auto cells = detail::draw_cells(config, rng.next_u64());
        int solid = 0;
        const int interior = config.cell_count - kStartLength - 1;
        for (int i = kStartLength; i < config.cell_count - 1; ++i)
            solid += cells[static_cast<size_t>(i)] == BlockKind::Solid;
        const double fraction = static_cast<double>(solid) / interior;
        if (fraction >= 0.45 && fraction <= 0.55) ++seeds_in_band;
    }
    CHECK(seeds_in_band >= 95);
}

TEST_CASE("distinct seeds give distinct geometry") {
    CdrConfig config;  // 20 cells: 16 randomized interior bits
    Rng rng(777);
    int collisions = 0;
    for (int pair = 0; pair < 300; ++pair) {
        const std::uint64_t a = rng.next_u64();
        std::uint64_t b = rng.next_u64();
        if (a == b) ++b;
        if (generate_course(config, a).cells == generate_course(config, b).cells) ++collisions;
    }
    CHECK(collisions == 0);
}

TEST_CASE("course file round-trips bit-exactly") {
    CdrConfig config;
    config.block_probability = 0.37;
    const Course course = generate_course(config, 0xdeadbeef);
    const std::string dumped = course_to_json(course).dump();
    const Course reloaded = course_from_json(nlohmann::json::parse(dumped));
    CHECK(reloaded.cells == course.cells);
    CHECK(reloaded.course_id == course.course_id);
    CHECK(reloaded.seed == course.seed);
    CHECK(reloaded.cell_elevation == course.cell_elevation);
    CHECK(reloaded.config.block_probability == course.config.block_probability);
    CHECK(course_to_json(reloaded).dump() == dumped);
}

TEST_CASE("fixture courses load and validate") {
    const Course two_gap = load_course(std::string(PARKOUR_FIXTURES_DIR) + "/two_gap.json");
    CHECK(two_gap.course_id == "two-gap");
    CHECK(two_gap.cell_count() == 15);
    CHECK(two_gap.start_begin == 0);
    CHECK(two_gap.start_end == 3);
    CHECK(two_gap.goal_index == 14);

    const Course gapless = load_course(std::string(PARKOUR_FIXTURES_DIR) + "/gapless.json");
    CHECK(gapless.course_id == "gapless");
}

TEST_CASE("validation rejects malformed courses") {
    CdrConfig config;
    config.cell_count = 10;
    Course course = generate_course(config, 5);

    Course two_goals = course;
    two_goals.cells[5] = BlockKind::Goal;
    CHECK_THROWS_AS(validate_course(two_goals), std::invalid_argument);

    Course split_start = course;
    split_start.cells[5] = BlockKind::Start;
    CHECK_THROWS_AS(validate_course(split_start), std::invalid_argument);

    Course wide_gap = course;
    for (int i = kStartLength; i < wide_gap.cell_count() - 1; ++i)
        wide_gap.cells[static_cast<size_t>(i)] = BlockKind::Air;
    CHECK_THROWS_AS(validate_course(wide_gap), std::invalid_argument);

    nlohmann::json j = course_to_json(course);
    j["cells"] = "SSSXB....G";
    CHECK_THROWS(course_from_json(j));
}
