#include <spiralbrick/geometry.hpp>

#include <spiralbrick/errors.hpp>

#include <algorithm>
#include <limits>

namespace spiralbrick {

double Polygon2D::area() const {
    double twice = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = vertices[i];
        const Vec2& q = vertices[(i + 1) % n];
        twice += p.cross(q);
    }
    return 0.5 * twice;
}

std::array<Vec2, 4> OrientedBox2D::corners() const {
    const Vec2 u = long_axis();
    const Vec2 v = short_axis();
    const Vec2 ea = u * a;
    const Vec2 eb = v * b;
    return {center + ea + eb, center - ea + eb, center - ea - eb, center + ea - eb};
}

bool OrientedBox2D::contains(const Vec2& p, double tol) const {
    const Vec2 d = p - center;
    return std::abs(d.dot(long_axis())) <= a + tol &&
           std::abs(d.dot(short_axis())) <= b + tol;
}

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

double normalize_half_turn(double yaw) {
    yaw = std::fmod(yaw, kPi);
    if (yaw < 0.0) yaw += kPi;
    if (yaw >= kPi) yaw = 0.0;  // fmod rounding at the seam
    return yaw;
}

Vec2 rotate_about(const Vec2& p, const Vec2& center, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Vec2 d = p - center;
    return {center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y};
}

namespace {

constexpr double kDedupeTol = 1e-12;

double cross3(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a - o).cross(b - o);
}

}  // namespace

Polygon2D convex_hull_2d(const std::vector<Vec2>& points) {
    std::vector<Vec2> pts = points;
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) {
                              return std::abs(a.x - b.x) <= kDedupeTol &&
                                     std::abs(a.y - b.y) <= kDedupeTol;
                          }),
              pts.end());

    const std::size_t n = pts.size();
    if (n < 3) throw DegenerateInput("convex_hull_2d: fewer than 3 distinct points");

    // Monotone chain with strict turns, so collinear points never survive.
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross3(hull[k - 2], hull[k - 1], pts[i]) <= kDedupeTol) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross3(hull[k - 2], hull[k - 1], pts[i]) <= kDedupeTol) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);

    if (hull.size() < 3) throw DegenerateInput("convex_hull_2d: points are collinear");
    return Polygon2D{std::move(hull)};
}

namespace {

struct CandidateBox {
    double area = std::numeric_limits<double>::infinity();
    Vec2 center{};
    double half_u = 0.0;  // along the edge direction
    double half_v = 0.0;
    double edge_angle = 0.0;
    double edge_length = 0.0;
};

OrientedBox2D finalize_box(const CandidateBox& c) {
    OrientedBox2D out;
    out.center = c.center;
    if (c.half_u >= c.half_v) {
        out.a = c.half_u;
        out.b = c.half_v;
        out.yaw = normalize_half_turn(c.edge_angle);
    } else {
        out.a = c.half_v;
        out.b = c.half_u;
        out.yaw = normalize_half_turn(c.edge_angle + 0.5 * kPi);
    }
    // Square footprint: both axis choices are valid, keep the smaller yaw.
    if (out.a == out.b) {
        const double alt = normalize_half_turn(out.yaw + 0.5 * kPi);
        if (alt < out.yaw) out.yaw = alt;
    }
    return out;
}

}  // namespace

OrientedBox2D min_area_obb(const Polygon2D& hull) {
    const std::vector<Vec2>& v = hull.vertices;
    const std::size_t n = v.size();
    if (n < 3) throw DegenerateInput("min_area_obb: degenerate hull");

    auto edge_dir = [&](std::size_t i) {
        const Vec2 d = v[(i + 1) % n] - v[i];
        const double len = d.norm();
        if (!(len > 0.0)) throw DegenerateInput("min_area_obb: zero-length hull edge");
        return Vec2{d.x / len, d.y / len};
    };

    // Rotating calipers: support vertices advance monotonically around the
    // hull as the edge sweep rotates, at most one full lap each.
    std::size_t j = 0, k = 0, m = 0;
    {
        const Vec2 u0 = edge_dir(0);
        const Vec2 w0 = u0.perp();
        for (std::size_t i = 1; i < n; ++i) {
            if (v[i].dot(u0) > v[j].dot(u0)) j = i;
            if (v[i].dot(w0) > v[k].dot(w0)) k = i;
            if (v[i].dot(u0) < v[m].dot(u0)) m = i;
        }
    }

    std::vector<CandidateBox> candidates;
    candidates.reserve(n);
    double min_area = std::numeric_limits<double>::infinity();
    const std::size_t cap = 2 * n + 2;  // tie-advance bound per pointer

    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 u = edge_dir(i);
        const Vec2 w = u.perp();

        auto at = [&](std::size_t idx) -> const Vec2& { return v[idx % n]; };
        for (std::size_t g = 0; g < cap && at(j + 1).dot(u) >= at(j).dot(u); ++g) ++j;
        for (std::size_t g = 0; g < cap && at(k + 1).dot(w) >= at(k).dot(w); ++g) ++k;
        for (std::size_t g = 0; g < cap && at(m + 1).dot(u) <= at(m).dot(u); ++g) ++m;

        CandidateBox c;
        const double max_u = at(j).dot(u);
        const double min_u = at(m).dot(u);
        const double max_v = at(k).dot(w);
        const double min_v = v[i].dot(w);  // edge line is the v-minimum for CCW hulls
        c.half_u = 0.5 * (max_u - min_u);
        c.half_v = 0.5 * (max_v - min_v);
        c.area = 4.0 * c.half_u * c.half_v;
        c.center = u * (0.5 * (min_u + max_u)) + w * (0.5 * (min_v + max_v));
        c.edge_angle = std::atan2(u.y, u.x);
        c.edge_length = (v[(i + 1) % n] - v[i]).norm();
        candidates.push_back(c);
        min_area = std::min(min_area, c.area);
    }

    // Area ties at floating-point noise level must resolve the same way for
    // a hull and its rotated copy, so tie-break on the generating edge
    // length (rotation invariant) and only then on the canonical yaw.
    const CandidateBox* best = nullptr;
    for (const CandidateBox& c : candidates) {
        if (c.area > min_area * (1.0 + 1e-13)) continue;
        if (!best) {
            best = &c;
            continue;
        }
        const double len_gap = (c.edge_length - best->edge_length) /
                               std::max(c.edge_length, best->edge_length);
        if (len_gap > 1e-12) {
            best = &c;
        } else if (std::abs(len_gap) <= 1e-12 &&
                   finalize_box(c).yaw < finalize_box(*best).yaw) {
            best = &c;
        }
    }
    return finalize_box(*best);
}

bool obb_overlap(const OrientedBox2D& a, const OrientedBox2D& b) {
    constexpr double kContactTol = 1e-12;
    const Vec2 d = b.center - a.center;
    const std::array<Vec2, 4> axes = {a.long_axis(), a.short_axis(),
                                      b.long_axis(), b.short_axis()};
    const std::array<double, 2> ext_a = {a.a, a.b};
    const std::array<double, 2> ext_b = {b.a, b.b};
    for (const Vec2& axis : axes) {
        const double ra = ext_a[0] * std::abs(axes[0].dot(axis)) +
                          ext_a[1] * std::abs(axes[1].dot(axis));
        const double rb = ext_b[0] * std::abs(axes[2].dot(axis)) +
                          ext_b[1] * std::abs(axes[3].dot(axis));
        if (std::abs(d.dot(axis)) >= ra + rb - kContactTol) return false;
    }
    return true;
}

}  // namespace spiralbrick
