#pragma once

#include <spiralbrick/geometry.hpp>

#include <cstdint>
#include <variant>
#include <vector>

namespace spiralbrick {

/// Brick geometry: l is measured along the brick yaw direction, w across
/// it, h vertically. All meters, all > 0.
struct BrickDims {
    double l = 0.1;
    double w = 0.5;
    double h = 0.025;
};

/// Base made of s straight segments. theta is the angle between consecutive
/// segment directions: pi for the parallel family (antiparallel rows),
/// pi/2 for the orthogonal family (rectangular loop, s = 4).
struct SegmentBaseSpec {
    int segments = 2;
    std::vector<int> blocks;  // B_i per segment
    double theta = kPi;
    double lambda = 0.01;  // gap between bricks inside a segment, meters
};

/// Base walking a closed polygon. turning_angles[i] is the exterior turn
/// after edge i (negative for concave vertices); they must sum to 2*pi.
/// Every edge carries the same block count.
struct PolygonBaseSpec {
    std::vector<double> turning_angles;
    int blocks_per_edge = 1;
    double lambda = 0.01;
};

/// Base following the closed loop formed by y = -f(x) and y = +f(x) over
/// [x_min, x_max], with f zero at both ends. Coefficients are ascending
/// (c0 + c1*x + ...). Bricks lie across the curve; kappa is the corner gap
/// preserved between consecutive bricks.
struct PolynomialBaseSpec {
    std::vector<double> coefficients;
    double x_min = 0.0;
    double x_max = 1.0;
    double kappa = 0.05;
};

using BaseSpec = std::variant<SegmentBaseSpec, PolygonBaseSpec, PolynomialBaseSpec>;

struct ColumnSpec {
    BaseSpec base;
    BrickDims dims;
    int layers = 1;
    double phi = kPi / 45.0;  // per-layer rotation, radians
};

struct BrickPose {
    Vec3 position{};
    double yaw = 0.0;
};

struct Placement {
    int layer = 0;
    int index_in_layer = 0;
    BrickPose pose{};
};

struct ColumnModel {
    ColumnSpec spec;
    std::vector<Placement> placements;  // layer-major, bottom layer first
    double closure_residual = 0.0;
};

struct BaseLayer {
    std::vector<BrickPose> poses;  // z = h/2
    double closure_residual = 0.0;
};

struct ValidationReport {
    struct Overlap {
        int layer;
        int first;
        int second;
    };
    std::vector<Overlap> overlaps;
    double closure_residual = 0.0;
    std::size_t expected_placements = 0;
    std::size_t actual_placements = 0;

    bool counts_consistent() const { return expected_placements == actual_placements; }
    bool ok(double closure_tol = 1e-6) const {
        return overlaps.empty() && counts_consistent() && closure_residual < closure_tol;
    }
};

/// Corner compensation factor 1/tan(theta/2) for 0 < theta <= pi, with the
/// limit value 0 at theta = pi and exactly 1 at theta = pi/2.
double angle_factor(double theta);

/// Segment pitch m = B*l + angle_factor(theta)*w + lambda*(B - 1): the
/// anchor-to-anchor offset along the loop that fits B bricks plus the
/// corner miter clearance.
double segment_margin(int blocks, const BrickDims& dims, double theta, double lambda);

/// Chord spacing m = w*sin((pi - theta)/2) + kappa between consecutive
/// bricks whose yaws differ by theta in [0, pi].
double polynomial_margin(double theta, double w, double kappa);

/// Lays one layer of bricks for the given base family, centered so the
/// centroid of the brick centers is at the origin. z = h/2.
BaseLayer build_base_layer(const BaseSpec& base, const BrickDims& dims);

/// Stacks L copies of the base layer, rotating layer k by k*phi about the
/// origin and lifting it to z = (k + 0.5)*h.
ColumnModel build_column(const ColumnSpec& spec);

/// Scans every layer for footprint overlaps and checks placement counts
/// and loop closure against a rebuild of the base layer.
ValidationReport validate_column(const ColumnModel& model);

/// Footprint rectangle of a placed brick: l along yaw, w across.
OrientedBox2D footprint_box(const BrickPose& pose, const BrickDims& dims);

double poly_eval(const std::vector<double>& coeffs, double x);
std::vector<double> poly_derivative(const std::vector<double>& coeffs);

}  // namespace spiralbrick
