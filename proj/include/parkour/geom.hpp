// Small 3D vector and AABB helpers shared by the simulation modules.
#pragma once

#include <cmath>

namespace parkour {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double length() const { return std::sqrt(dot(*this)); }
    double horizontal_length() const { return std::sqrt(x * x + z * z); }

    Vec3 normalized() const {
        const double len = length();
        return len > 0.0 ? Vec3{x / len, y / len, z / len} : Vec3{};
    }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).length(); }

// Axis-aligned box, min/max corners.
struct Aabb {
    Vec3 lo;
    Vec3 hi;

    // Strict overlap: boxes that merely touch on a face do not intersect.
    bool intersects(const Aabb& o) const {
        return lo.x < o.hi.x && hi.x > o.lo.x && lo.y < o.hi.y && hi.y > o.lo.y &&
               lo.z < o.hi.z && hi.z > o.lo.z;
    }

    // Closed-interval overlap: face contact counts.
    bool touches(const Aabb& o) const {
        return lo.x <= o.hi.x && hi.x >= o.lo.x && lo.y <= o.hi.y && hi.y >= o.lo.y &&
               lo.z <= o.hi.z && hi.z >= o.lo.z;
    }
};

}  // namespace parkour
