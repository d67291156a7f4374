#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace spiralbrick {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 perp() const { return {-y, x}; }  // 90 deg counterclockwise
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec2 xy() const { return {x, y}; }
};

/// Rotation (row-major 3x3) plus translation; maps local points to world.
struct RigidTransform {
    std::array<double, 9> r{1, 0, 0, 0, 1, 0, 0, 0, 1};
    Vec3 t{};

    Vec3 rotate(const Vec3& p) const {
        return {r[0] * p.x + r[1] * p.y + r[2] * p.z,
                r[3] * p.x + r[4] * p.y + r[5] * p.z,
                r[6] * p.x + r[7] * p.y + r[8] * p.z};
    }
    Vec3 apply(const Vec3& p) const { return rotate(p) + t; }
};

struct Polygon2D {
    std::vector<Vec2> vertices;

    std::size_t size() const { return vertices.size(); }
    double area() const;  // positive for counterclockwise order
};

/// Rectangle with half extents a >= b > 0; yaw is the direction of the
/// long (a) axis, normalized to [0, pi).
struct OrientedBox2D {
    Vec2 center{};
    double a = 0.0;
    double b = 0.0;
    double yaw = 0.0;

    double area() const { return 4.0 * a * b; }
    Vec2 long_axis() const { return {std::cos(yaw), std::sin(yaw)}; }
    Vec2 short_axis() const { return long_axis().perp(); }
    std::array<Vec2, 4> corners() const;
    bool contains(const Vec2& p, double tol = 1e-9) const;
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Normalizes a rectangle orientation to [0, pi).
double normalize_half_turn(double yaw);

Vec2 rotate_about(const Vec2& p, const Vec2& center, double angle);

/// Smallest convex polygon containing the input points, counterclockwise,
/// strictly convex (collinear and duplicate points are dropped).
/// Throws DegenerateInput for fewer than 3 distinct points or an
/// all-collinear set.
Polygon2D convex_hull_2d(const std::vector<Vec2>& points);

/// Minimum-area enclosing rectangle of a convex polygon via rotating
/// calipers. One rectangle side is collinear with a hull edge. Square
/// footprints resolve the yaw tie toward the smaller value.
OrientedBox2D min_area_obb(const Polygon2D& hull);

/// True iff the two box interiors intersect (separating axis test over the
/// 4 edge normals). Exact edge or corner contact counts as disjoint.
bool obb_overlap(const OrientedBox2D& a, const OrientedBox2D& b);

}  // namespace spiralbrick
