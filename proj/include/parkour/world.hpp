// Voxel courses: a single-elevation strip of start platform, solid cells,
// air gaps and one goal block, plus the randomized course generator that
// rebuilds the strip whenever enough agents have died on it.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "parkour/geom.hpp"

namespace parkour {

enum class BlockKind : std::uint8_t { Air, Solid, Start, Goal };

// World-frame direction the course runs along. Serialized courses are always
// PlusX; PlusZ exists so a course can be embedded rotated 90 degrees.
enum class CourseAxis : std::uint8_t { PlusX, PlusZ };

inline constexpr int kStartLength = 3;
inline constexpr int kVoidDepth = 5;        // death plane sits this far below cell_elevation
inline constexpr int kGoalColumnHeight = 2; // goal trigger volume above the surface

struct CdrConfig {
    int cell_count = 20;
    int max_gap = 4;
    double block_probability = 0.5;
    int death_threshold = 10;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct Course {
    std::vector<BlockKind> cells;
    int cell_elevation = 64;
    int start_begin = 0;
    int start_end = kStartLength;  // one past the last Start cell
    int goal_index = 0;
    std::string course_id;
    std::uint64_t seed = 0;
    CdrConfig config;
    CourseAxis axis = CourseAxis::PlusX;

    int cell_count() const { return static_cast<int>(cells.size()); }

    // Angle of the course axis in the world XZ plane (0 or pi/2).
    double axis_angle() const;

    // Course-local frame: cell i spans x in [i, i+1), z in [0, 1),
    // blocks span y in [cell_elevation, cell_elevation + 1).
    Vec3 local_to_world(const Vec3& p) const;
    Vec3 world_to_local(const Vec3& p) const;
    Aabb local_box_to_world(const Aabb& b) const;
    Aabb world_box_to_local(const Aabb& b) const;

    // Center of a cell's walking surface (top face), in world coordinates.
    Vec3 surface_center(int cell) const;
    Vec3 goal_center() const { return surface_center(goal_index); }
    int spawn_cell() const { return start_begin + (start_end - start_begin - 1) / 2; }

    double void_y() const { return static_cast<double>(cell_elevation - kVoidDepth); }

    // S/B/./G encoding of the cell list.
    std::string cells_string() const;
};

// Draws interior cells independently (Solid with block_probability), then
// repairs over-long air runs; deterministic in (config, seed).
Course generate_course(const CdrConfig& config, std::uint64_t seed);

bool should_regenerate(int cumulative_deaths, const CdrConfig& config);

// Block lookup at integer block coordinates; everything outside the strip,
// including the void below, is Air.
BlockKind block_at(const Course& course, int x, int y, int z);

// Throws std::invalid_argument describing the first violated invariant.
void validate_course(const Course& course);

nlohmann::json course_to_json(const Course& course);
Course course_from_json(const nlohmann::json& j);
void save_course(const Course& course, const std::string& path);
Course load_course(const std::string& path);

namespace detail {
// Pre-repair independent draw, exposed for distribution tests.
std::vector<BlockKind> draw_cells(const CdrConfig& config, std::uint64_t seed);
// Solidifies the trailing excess of air runs longer than max_gap,
// scanning from the start platform toward the goal.
void repair_gaps(std::vector<BlockKind>& cells, int max_gap);
}  // namespace detail

}  // namespace parkour
