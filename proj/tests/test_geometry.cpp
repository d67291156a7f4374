#include <doctest.h>

#include <spiralbrick/errors.hpp>
#include <spiralbrick/geometry.hpp>

#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace spiralbrick;

namespace {

Polygon2D random_hull(std::mt19937_64& rng, int max_vertices) {
    std::uniform_int_distribution<int> count(6, 3 * max_vertices);
    std::uniform_real_distribution<double> radius(0.2, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    const double cx = shift(rng), cy = shift(rng);
    std::vector<Vec2> pts;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        const double a = angle(rng);
        const double r = radius(rng);
        pts.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
    }
    Polygon2D hull = convex_hull_2d(pts);
    while (int(hull.size()) > max_vertices) {
        pts.clear();
        std::sample(hull.vertices.begin(), hull.vertices.end(),
                    std::back_inserter(pts), std::size_t(max_vertices), rng);
        if (pts.size() < 3) break;
        try {
            hull = convex_hull_2d(pts);
        } catch (const DegenerateInput&) {
            break;
        }
    }
    return hull;
}

}  // namespace

TEST_SUITE("geometry: convex hull") {
    TEST_CASE("interior points are excluded") {
        const std::vector<Vec2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
        const Polygon2D hull = convex_hull_2d(pts);
        CHECK(hull.size() == 4);
        CHECK(oracle::same_vertex_set(hull.vertices,
                                      {{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
        CHECK(hull.area() == doctest::Approx(1.0));
    }

    TEST_CASE("collinear input is degenerate") {
        CHECK_THROWS_AS(convex_hull_2d({{0, 0}, {1, 0}, {2, 0}}), DegenerateInput);
        CHECK_THROWS_AS(convex_hull_2d({{0, 0}, {1, 1}}), DegenerateInput);
    }

    TEST_CASE("disc interior plus extreme boundary points") {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> r(0.0, 0.85);
        std::uniform_real_distribution<double> a(0.0, 2.0 * kPi);
        std::vector<Vec2> pts;
        for (int i = 0; i < 100; ++i) {
            const double rr = r(rng), aa = a(rng);
            pts.push_back({rr * std::cos(aa), rr * std::sin(aa)});
        }
        std::vector<Vec2> extremes;
        for (int k = 0; k < 8; ++k) {
            const double aa = 2.0 * kPi * k / 8.0;
            extremes.push_back({std::cos(aa), std::sin(aa)});
            pts.push_back(extremes.back());
        }
        const Polygon2D hull = convex_hull_2d(pts);
        CHECK(hull.size() == 8);
        CHECK(oracle::same_vertex_set(hull.vertices, extremes));
        CHECK(oracle::same_vertex_set(hull.vertices,
                                      oracle::brute_hull_vertices(pts)));
    }

    TEST_CASE("counterclockwise and strictly convex output") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Vec2> pts;
            for (int i = 0; i < 40; ++i) pts.push_back({u(rng), u(rng)});
            const Polygon2D hull = convex_hull_2d(pts);
            CHECK(hull.area() > 0.0);
            const std::size_t n = hull.size();
            for (std::size_t i = 0; i < n; ++i) {
                const Vec2& a = hull.vertices[i];
                const Vec2& b = hull.vertices[(i + 1) % n];
                const Vec2& c = hull.vertices[(i + 2) % n];
                CHECK((b - a).cross(c - b) > 0.0);
            }
        }
    }

    TEST_CASE("idempotence") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Vec2> pts;
            for (int i = 0; i < 30; ++i) pts.push_back({u(rng), u(rng)});
            const Polygon2D hull = convex_hull_2d(pts);
            const Polygon2D again = convex_hull_2d(hull.vertices);
            CHECK(oracle::same_vertex_set(hull.vertices, again.vertices, 1e-12));
        }
    }
}

TEST_SUITE("geometry: minimum-area box") {
    TEST_CASE("axis-aligned rectangle is its own box") {
        const Polygon2D hull = convex_hull_2d({{0, 0}, {1, 0}, {1, 0.5}, {0, 0.5}});
        const OrientedBox2D box = min_area_obb(hull);
        CHECK(box.center.x == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(box.center.y == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(box.a == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(box.b == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(box.yaw == doctest::Approx(0.0));
    }

    TEST_CASE("rectangle rotated by 30 degrees") {
        const double rot = kPi / 6.0;
        std::vector<Vec2> corners = {{0, 0}, {1, 0}, {1, 0.5}, {0, 0.5}};
        for (Vec2& c : corners) c = rotate_about(c, {0, 0}, rot);
        const OrientedBox2D box = min_area_obb(convex_hull_2d(corners));
        CHECK(box.yaw == doctest::Approx(rot).epsilon(1e-9));
        CHECK(box.a == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(box.b == doctest::Approx(0.25).epsilon(1e-9));
        CHECK(box.center.x == doctest::Approx(0.3080127018922193).epsilon(1e-9));
        CHECK(box.center.y == doctest::Approx(0.4665063509461097).epsilon(1e-9));
    }

    TEST_CASE("never beats the brute-force edge sweep") {
        std::mt19937_64 rng(31337);
        for (int trial = 0; trial < 200; ++trial) {
            const Polygon2D hull = random_hull(rng, 12);
            const OrientedBox2D box = min_area_obb(hull);
            const double brute = oracle::brute_min_box_area(hull);
            CHECK(box.area() == doctest::Approx(brute).epsilon(1e-12));

            double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
            for (const Vec2& p : hull.vertices) {
                min_x = std::min(min_x, p.x);
                max_x = std::max(max_x, p.x);
                min_y = std::min(min_y, p.y);
                max_y = std::max(max_y, p.y);
            }
            CHECK(box.area() <= (max_x - min_x) * (max_y - min_y) + 1e-12);
        }
    }

    TEST_CASE("contains every input point") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<Vec2> pts;
            for (int i = 0; i < 25; ++i) pts.push_back({u(rng), u(rng)});
            const OrientedBox2D box = min_area_obb(convex_hull_2d(pts));
            for (const Vec2& p : pts) CHECK(box.contains(p, 1e-9));
        }
    }

    TEST_CASE("rotation equivariance") {
        std::mt19937_64 rng(555);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::uniform_real_distribution<double> rot(0.0, 2.0 * kPi);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<Vec2> pts;
            for (int i = 0; i < 20; ++i) pts.push_back({u(rng), 0.5 * u(rng)});
            const OrientedBox2D base = min_area_obb(convex_hull_2d(pts));
            const double rho = rot(rng);
            std::vector<Vec2> turned;
            for (const Vec2& p : pts) turned.push_back(rotate_about(p, {0, 0}, rho));
            const OrientedBox2D moved = min_area_obb(convex_hull_2d(turned));
            CHECK(moved.a == doctest::Approx(base.a).epsilon(1e-9));
            CHECK(moved.b == doctest::Approx(base.b).epsilon(1e-9));
            CHECK(moved.area() == doctest::Approx(base.area()).epsilon(1e-12));
            double expect = std::fmod(base.yaw + rho, kPi);
            if (expect < 0) expect += kPi;
            const double diff = std::abs(moved.yaw - expect);
            CHECK(std::min(diff, kPi - diff) < 1e-9);
        }
    }

    TEST_CASE("square footprint resolves the yaw tie to the smaller value") {
        const OrientedBox2D box =
            min_area_obb(convex_hull_2d({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
        CHECK(box.a == doctest::Approx(0.5));
        CHECK(box.b == doctest::Approx(0.5));
        CHECK(box.yaw == doctest::Approx(0.0));
    }
}

TEST_SUITE("geometry: box overlap") {
    TEST_CASE("distant boxes are disjoint") {
        const OrientedBox2D a{{0, 0}, 0.5, 0.5, 0.0};
        const OrientedBox2D b{{3, 0}, 0.5, 0.5, 0.0};
        CHECK_FALSE(obb_overlap(a, b));
    }

    TEST_CASE("identical boxes overlap") {
        const OrientedBox2D a{{0.3, -0.2}, 0.5, 0.25, 0.4};
        CHECK(obb_overlap(a, a));
    }

    TEST_CASE("exact edge contact does not count") {
        const OrientedBox2D a{{0, 0}, 0.5, 0.5, 0.0};
        const OrientedBox2D b{{1.0, 0}, 0.5, 0.5, 0.0};
        CHECK_FALSE(obb_overlap(a, b));
        const OrientedBox2D c{{1.0 - 1e-6, 0}, 0.5, 0.5, 0.0};
        CHECK(obb_overlap(a, c));
    }

    TEST_CASE("rotated overlap") {
        const OrientedBox2D a{{0, 0}, 1.0, 0.1, 0.0};
        const OrientedBox2D b{{0, 0}, 1.0, 0.1, 0.5 * kPi};
        CHECK(obb_overlap(a, b));
        const OrientedBox2D far{{0, 0.5}, 1.0, 0.1, 0.0};
        CHECK_FALSE(obb_overlap(a, far));
    }
}

TEST_SUITE("geometry: rotations") {
    TEST_CASE("quarter turn about the origin") {
        const Vec2 p = rotate_about({1, 0}, {0, 0}, 0.5 * kPi);
        CHECK(p.x == doctest::Approx(0.0));
        CHECK(p.y == doctest::Approx(1.0));
    }

    TEST_CASE("center is a fixed point") {
        const Vec2 p = rotate_about({0.7, -1.2}, {0.7, -1.2}, 2.345);
        CHECK(p.x == doctest::Approx(0.7));
        CHECK(p.y == doctest::Approx(-1.2));
    }

    TEST_CASE("half turn") {
        const Vec2 p = rotate_about({2, 1}, {1, 1}, kPi);
        CHECK(p.x == doctest::Approx(0.0));
        CHECK(p.y == doctest::Approx(1.0));
    }

    TEST_CASE("half-turn normalization") {
        CHECK(normalize_half_turn(kPi) == doctest::Approx(0.0));
        CHECK(normalize_half_turn(-0.1) == doctest::Approx(kPi - 0.1));
        CHECK(normalize_half_turn(kPi + 0.3) == doctest::Approx(0.3));
        CHECK(normalize_half_turn(0.0) == 0.0);
    }
}
