#include "parkour/world.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "parkour/rng.hpp"

namespace parkour {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

char block_char(BlockKind k) {
    switch (k) {
        case BlockKind::Air: return '.';
        case BlockKind::Solid: return 'B';
        case BlockKind::Start: return 'S';
        case BlockKind::Goal: return 'G';
    }
    return '?';
}

BlockKind block_from_char(char c) {
    switch (c) {
        case '.': return BlockKind::Air;
        case 'B': return BlockKind::Solid;
        case 'S': return BlockKind::Start;
        case 'G': return BlockKind::Goal;
        default:
            throw std::invalid_argument(std::string("course cells: unknown block character '") +
                                        c + "'");
    }
}

std::uint64_t fnv1a_append(std::uint64_t hash, std::uint64_t value) {
    constexpr std::uint64_t kPrime = 1099511628211ULL;
    for (int i = 0; i < 8; ++i) {
        hash ^= (value >> (8 * i)) & 0xffULL;
        hash *= kPrime;
    }
    return hash;
}

// Stable identity over seed plus the parameters that shape geometry.
std::string make_course_id(const CdrConfig& config, std::uint64_t seed) {
    std::uint64_t hash = 14695981039346656037ULL;
    hash = fnv1a_append(hash, seed);
    hash = fnv1a_append(hash, static_cast<std::uint64_t>(config.cell_count));
    hash = fnv1a_append(hash, static_cast<std::uint64_t>(config.max_gap));
    std::uint64_t prob_bits;
    static_assert(sizeof(prob_bits) == sizeof(config.block_probability));
    std::memcpy(&prob_bits, &config.block_probability, sizeof(prob_bits));
    hash = fnv1a_append(hash, prob_bits);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "cdr-%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace

void CdrConfig::validate() const {
    if (cell_count < kStartLength + 1)
        throw std::invalid_argument("cdr.cell_count: too small to hold start region + goal (need >= " +
                                    std::to_string(kStartLength + 1) + ")");
    if (max_gap < 1) throw std::invalid_argument("cdr.max_gap: must be >= 1");
    if (!(block_probability > 0.0) || !(block_probability < 1.0)) {
        // Probability 1.0 is still accepted for the degenerate all-solid case
        // used in tests; only out-of-range values are rejected.
        if (block_probability < 0.0 || block_probability > 1.0 ||
            std::isnan(block_probability))
            throw std::invalid_argument("cdr.block_probability: must lie in [0, 1]");
    }
    if (death_threshold < 1) throw std::invalid_argument("cdr.death_threshold: must be >= 1");
}

double Course::axis_angle() const { return axis == CourseAxis::PlusX ? 0.0 : kHalfPi; }

Vec3 Course::local_to_world(const Vec3& p) const {
    if (axis == CourseAxis::PlusX) return p;
    return {-p.z, p.y, p.x};
}

Vec3 Course::world_to_local(const Vec3& p) const {
    if (axis == CourseAxis::PlusX) return p;
    return {p.z, p.y, -p.x};
}

Aabb Course::local_box_to_world(const Aabb& b) const {
    if (axis == CourseAxis::PlusX) return b;
    return {{-b.hi.z, b.lo.y, b.lo.x}, {-b.lo.z, b.hi.y, b.hi.x}};
}

Aabb Course::world_box_to_local(const Aabb& b) const {
    if (axis == CourseAxis::PlusX) return b;
    return {{b.lo.z, b.lo.y, -b.hi.x}, {b.hi.z, b.hi.y, -b.lo.x}};
}

Vec3 Course::surface_center(int cell) const {
    return local_to_world({cell + 0.5, static_cast<double>(cell_elevation + 1), 0.5});
}

std::string Course::cells_string() const {
    std::string s;
    s.reserve(cells.size());
    for (BlockKind k : cells) s.push_back(block_char(k));
    return s;
}

namespace detail {

std::vector<BlockKind> draw_cells(const CdrConfig& config, std::uint64_t seed) {
    std::vector<BlockKind> cells(static_cast<size_t>(config.cell_count), BlockKind::Air);
    for (int i = 0; i < kStartLength; ++i) cells[i] = BlockKind::Start;
    cells.back() = BlockKind::Goal;
    Rng rng(seed);
    // One independent draw per interior cell, mirroring the two-valued
    // scoreboard randomizer: solid or gap.
    for (int i = kStartLength; i < config.cell_count - 1; ++i) {
        cells[i] = rng.uniform_double() < config.block_probability ? BlockKind::Solid
                                                                   : BlockKind::Air;
    }
    return cells;
}

void repair_gaps(std::vector<BlockKind>& cells, int max_gap) {
    int run = 0;
    for (auto& cell : cells) {
        if (cell == BlockKind::Air) {
            ++run;
            if (run > max_gap) cell = BlockKind::Solid;  // trailing excess
            if (cell != BlockKind::Air) run = 0;
        } else {
            run = 0;
        }
    }
}

}  // namespace detail

Course generate_course(const CdrConfig& config, std::uint64_t seed) {
    config.validate();
    Course course;
    course.cells = detail::draw_cells(config, seed);
    detail::repair_gaps(course.cells, config.max_gap);
    course.start_begin = 0;
    course.start_end = kStartLength;
    course.goal_index = config.cell_count - 1;
    course.seed = seed;
    course.config = config;
    course.course_id = make_course_id(config, seed);
    return course;
}

bool should_regenerate(int cumulative_deaths, const CdrConfig& config) {
    return cumulative_deaths >= config.death_threshold;
}

BlockKind block_at(const Course& course, int x, int y, int z) {
    if (y != course.cell_elevation) return BlockKind::Air;
    const Vec3 center = course.world_to_local({x + 0.5, y + 0.5, z + 0.5});
    const int cell = static_cast<int>(std::floor(center.x));
    if (static_cast<int>(std::floor(center.z)) != 0) return BlockKind::Air;
    if (cell < 0 || cell >= course.cell_count()) return BlockKind::Air;
    return course.cells[static_cast<size_t>(cell)];
}

void validate_course(const Course& course) {
    course.config.validate();
    const int n = course.cell_count();
    if (n != course.config.cell_count)
        throw std::invalid_argument("course: cells length " + std::to_string(n) +
                                    " does not match config.cell_count " +
                                    std::to_string(course.config.cell_count));
    int start_runs = 0, goal_count = 0;
    int first_start = -1, last_start = -1;
    for (int i = 0; i < n; ++i) {
        const BlockKind k = course.cells[static_cast<size_t>(i)];
        if (k == BlockKind::Start) {
            if (i == 0 || course.cells[static_cast<size_t>(i - 1)] != BlockKind::Start)
                ++start_runs;
            if (first_start < 0) first_start = i;
            last_start = i;
        } else if (k == BlockKind::Goal) {
            ++goal_count;
        }
    }
    if (start_runs != 1) throw std::invalid_argument("course: needs exactly one contiguous Start region");
    if (goal_count != 1) throw std::invalid_argument("course: needs exactly one Goal block");
    if (course.start_begin != first_start || course.start_end != last_start + 1)
        throw std::invalid_argument("course: start_region does not match cells");
    if (course.cells[static_cast<size_t>(course.goal_index)] != BlockKind::Goal)
        throw std::invalid_argument("course: goal_index does not point at the Goal block");
    int run = 0;
    for (int i = course.start_end; i < course.goal_index; ++i) {
        if (course.cells[static_cast<size_t>(i)] == BlockKind::Air) {
            if (++run > course.config.max_gap)
                throw std::invalid_argument("course: air run longer than max_gap " +
                                            std::to_string(course.config.max_gap));
        } else {
            run = 0;
        }
    }
}

nlohmann::json course_to_json(const Course& course) {
    return nlohmann::json{
        {"course_id", course.course_id},
        {"seed", course.seed},
        {"cell_elevation", course.cell_elevation},
        {"cells", course.cells_string()},
        {"config",
         {{"cell_count", course.config.cell_count},
          {"max_gap", course.config.max_gap},
          {"block_probability", course.config.block_probability},
          {"death_threshold", course.config.death_threshold}}},
    };
}

Course course_from_json(const nlohmann::json& j) {
    Course course;
    course.course_id = j.at("course_id").get<std::string>();
    course.seed = j.at("seed").get<std::uint64_t>();
    course.cell_elevation = j.at("cell_elevation").get<int>();
    const auto& cj = j.at("config");
    course.config.cell_count = cj.at("cell_count").get<int>();
    course.config.max_gap = cj.at("max_gap").get<int>();
    course.config.block_probability = cj.at("block_probability").get<double>();
    course.config.death_threshold = cj.at("death_threshold").get<int>();
    const std::string cells = j.at("cells").get<std::string>();
    course.cells.reserve(cells.size());
    for (char c : cells) course.cells.push_back(block_from_char(c));
    course.start_begin = -1;
    course.start_end = -1;
    for (int i = 0; i < course.cell_count(); ++i) {
        const BlockKind k = course.cells[static_cast<size_t>(i)];
        if (k == BlockKind::Start) {
            if (course.start_begin < 0) course.start_begin = i;
            course.start_end = i + 1;
        } else if (k == BlockKind::Goal) {
            course.goal_index = i;
        }
    }
    validate_course(course);
    return course;
}

void save_course(const Course& course, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open course file for writing: " + path);
    out << course_to_json(course).dump(2) << '\n';
}

Course load_course(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open course file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("course file " + path + ": " + e.what());
    }
    try {
        return course_from_json(j);
    } catch (const std::exception& e) {
        throw std::runtime_error("course file " + path + ": " + e.what());
    }
}

}  // namespace parkour
