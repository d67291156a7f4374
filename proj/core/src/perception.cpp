#include <spiralbrick/perception.hpp>

#include <spiralbrick/errors.hpp>
#include <spiralbrick/rng.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace spiralbrick {

CameraModel make_topdown_camera(const Vec3& position, int width, int height,
                                double focal) {
    CameraModel cam;
    cam.width = width;
    cam.height = height;
    cam.fx = cam.fy = focal;
    cam.cx = 0.5 * width;
    cam.cy = 0.5 * height;
    // camera x -> world x, camera y -> world -y, camera z (view) -> world -z
    cam.pose.r = {1, 0, 0, 0, -1, 0, 0, 0, -1};
    cam.pose.t = position;
    return cam;
}

namespace {

struct BrickSolid {
    Vec3 center;
    Vec3 axis_l, axis_w, axis_h;
    double half_l, half_w, half_h;
};

BrickSolid make_solid(const BrickPose& pose, const BrickDims& dims) {
    const double c = std::cos(pose.yaw);
    const double s = std::sin(pose.yaw);
    return {pose.position,
            {c, s, 0.0},
            {-s, c, 0.0},
            {0.0, 0.0, 1.0},
            0.5 * dims.l,
            0.5 * dims.w,
            0.5 * dims.h};
}

/// Slab intersection in the brick frame; returns the entry parameter along
/// the (unnormalized) ray or nan when the ray misses.
double ray_box(const Vec3& origin, const Vec3& dir, const BrickSolid& box) {
    const Vec3 rel = origin - box.center;
    double t_near = -std::numeric_limits<double>::infinity();
    double t_far = std::numeric_limits<double>::infinity();
    const Vec3 axes[3] = {box.axis_l, box.axis_w, box.axis_h};
    const double half[3] = {box.half_l, box.half_w, box.half_h};
    for (int i = 0; i < 3; ++i) {
        const double o = rel.dot(axes[i]);
        const double d = dir.dot(axes[i]);
        if (std::abs(d) < 1e-15) {
            if (std::abs(o) > half[i]) return std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        double t0 = (-half[i] - o) / d;
        double t1 = (half[i] - o) / d;
        if (t0 > t1) std::swap(t0, t1);
        t_near = std::max(t_near, t0);
        t_far = std::min(t_far, t1);
        if (t_near > t_far) return std::numeric_limits<double>::quiet_NaN();
    }
    return t_near;
}

}  // namespace

DepthImage render_depth(const std::optional<BrickPose>& brick, const BrickDims& dims,
                        double plane_z, const CameraModel& camera,
                        double noise_sigma, std::uint64_t seed) {
    const Vec3 origin = camera.pose.t;
    const Vec3 view = camera.pose.rotate({0.0, 0.0, 1.0});
    if (std::abs(view.z) < 1e-12 ||
        !((plane_z - origin.z) / view.z > 0.0)) {
        throw GeometryError("render_depth: camera does not face the conveyor plane");
    }

    std::optional<BrickSolid> solid;
    if (brick) solid = make_solid(*brick, dims);

    DepthImage img;
    img.width = camera.width;
    img.height = camera.height;
    img.depths.assign(std::size_t(camera.width) * camera.height, 0.0);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);

    for (int v = 0; v < camera.height; ++v) {
        for (int u = 0; u < camera.width; ++u) {
            // Camera-frame direction with unit z, so the ray parameter is
            // exactly the stored depth.
            const Vec3 dir = camera.pose.rotate(
                {(u - camera.cx) / camera.fx, (v - camera.cy) / camera.fy, 1.0});
            double t_hit = std::numeric_limits<double>::infinity();
            if (std::abs(dir.z) > 1e-15) {
                const double t = (plane_z - origin.z) / dir.z;
                if (t > 0.0) t_hit = t;
            }
            if (solid) {
                const double t = ray_box(origin, dir, *solid);
                if (!std::isnan(t) && t > 0.0 && t < t_hit) t_hit = t;
            }
            if (std::isinf(t_hit)) continue;
            double depth = t_hit;
            if (noise_sigma > 0.0) depth += noise(rng);
            img.at(u, v) = std::max(0.0, depth);
        }
    }
    return img;
}

PointCloud backproject(const DepthImage& depth, const CameraModel& camera) {
    PointCloud cloud;
    cloud.points.reserve(depth.depths.size());
    for (int v = 0; v < depth.height; ++v) {
        for (int u = 0; u < depth.width; ++u) {
            const double z = depth.at(u, v);
            if (z <= 0.0) continue;
            const Vec3 p_cam{(u - camera.cx) * z / camera.fx,
                             (v - camera.cy) * z / camera.fy, z};
            cloud.points.push_back(camera.pose.apply(p_cam));
        }
    }
    return cloud;
}

namespace {

/// Smallest-eigenvalue eigenvector of a symmetric 3x3 matrix (cyclic Jacobi).
Vec3 smallest_eigenvector(double a00, double a01, double a02, double a11,
                          double a12, double a22) {
    double m[3][3] = {{a00, a01, a02}, {a01, a11, a12}, {a02, a12, a22}};
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
        if (off < 1e-18 * (std::abs(m[0][0]) + std::abs(m[1][1]) + std::abs(m[2][2]) + 1e-300)) {
            break;
        }
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (m[p][q] == 0.0) continue;
                const double tau = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int i = 0; i < 3; ++i) {
                    const double mip = m[i][p], miq = m[i][q];
                    m[i][p] = c * mip - s * miq;
                    m[i][q] = s * mip + c * miq;
                }
                for (int i = 0; i < 3; ++i) {
                    const double mpi = m[p][i], mqi = m[q][i];
                    m[p][i] = c * mpi - s * mqi;
                    m[q][i] = s * mpi + c * mqi;
                }
                for (int i = 0; i < 3; ++i) {
                    const double vip = v[i][p], viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }
    int best = 0;
    if (m[1][1] < m[best][best]) best = 1;
    if (m[2][2] < m[best][best]) best = 2;
    return {v[0][best], v[1][best], v[2][best]};
}

PlaneModel canonicalize(PlaneModel plane) {
    const double ax = std::abs(plane.normal.x);
    const double ay = std::abs(plane.normal.y);
    const double az = std::abs(plane.normal.z);
    double lead = plane.normal.z;
    if (ax >= ay && ax >= az) lead = plane.normal.x;
    else if (ay >= az) lead = plane.normal.y;
    if (lead < 0.0) {
        plane.normal = plane.normal * -1.0;
        plane.d = -plane.d;
    }
    return plane;
}

PlaneModel fit_plane_least_squares(const PointCloud& cloud,
                                   const std::vector<std::uint8_t>& mask) {
    Vec3 centroid{};
    std::size_t count = 0;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        if (!mask[i]) continue;
        centroid = centroid + cloud.points[i];
        ++count;
    }
    centroid = centroid * (1.0 / double(count));
    double a00 = 0, a01 = 0, a02 = 0, a11 = 0, a12 = 0, a22 = 0;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        if (!mask[i]) continue;
        const Vec3 d = cloud.points[i] - centroid;
        a00 += d.x * d.x;
        a01 += d.x * d.y;
        a02 += d.x * d.z;
        a11 += d.y * d.y;
        a12 += d.y * d.z;
        a22 += d.z * d.z;
    }
    Vec3 n = smallest_eigenvector(a00, a01, a02, a11, a12, a22);
    const double len = n.norm();
    PlaneModel plane;
    plane.normal = n * (1.0 / len);
    plane.d = plane.normal.dot(centroid);
    return canonicalize(plane);
}

}  // namespace

MlesacResult mlesac_plane(const PointCloud& cloud, const MlesacParams& params) {
    const std::size_t n = cloud.points.size();
    if (n < 3) throw DegenerateInput("mlesac_plane: need at least 3 points");
    if (params.iterations < 1) throw DomainError("mlesac_plane: iterations must be >= 1");
    if (!(params.inlier_sigma > 0.0) || !(params.outlier_width > 0.0)) {
        throw DomainError("mlesac_plane: inlier_sigma and outlier_width must be > 0");
    }

    std::mt19937_64 rng(params.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);

    // Hypotheses are scored on a fixed random subset; the winning plane is
    // refit on the full cloud afterwards.
    std::vector<std::size_t> scoring(n);
    std::iota(scoring.begin(), scoring.end(), 0);
    if (params.scoring_subsample > 0 && n > std::size_t(params.scoring_subsample)) {
        for (std::size_t i = 0; i < std::size_t(params.scoring_subsample); ++i) {
            std::uniform_int_distribution<std::size_t> rest(i, n - 1);
            std::swap(scoring[i], scoring[rest(rng)]);
        }
        scoring.resize(std::size_t(params.scoring_subsample));
    }

    const double sigma = params.inlier_sigma;
    const double gauss_norm = 1.0 / (sigma * std::sqrt(2.0 * kPi));
    const double uniform = 1.0 / params.outlier_width;
    const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);

    PlaneModel best_plane;
    double best_score = std::numeric_limits<double>::infinity();
    bool found = false;
    std::vector<double> gauss(scoring.size());

    for (int it = 0; it < params.iterations; ++it) {
        const Vec3& a = cloud.points[pick(rng)];
        const Vec3& b = cloud.points[pick(rng)];
        const Vec3& c = cloud.points[pick(rng)];
        const Vec3 nvec = (b - a).cross(c - a);
        const double len = nvec.norm();
        if (len < 1e-12) continue;  // collinear or repeated sample

        PlaneModel plane;
        plane.normal = nvec * (1.0 / len);
        plane.d = plane.normal.dot(a);

        for (std::size_t i = 0; i < scoring.size(); ++i) {
            const double r = plane.signed_distance(cloud.points[scoring[i]]);
            gauss[i] = gauss_norm * std::exp(-r * r * inv_two_sigma_sq);
        }
        double gamma = 0.5;
        for (int em = 0; em < params.em_steps; ++em) {
            double acc = 0.0;
            for (const double g : gauss) {
                const double pin = gamma * g;
                acc += pin / (pin + (1.0 - gamma) * uniform);
            }
            gamma = std::clamp(acc / double(gauss.size()), 1e-3, 1.0 - 1e-3);
        }
        double score = 0.0;
        for (const double g : gauss) {
            score -= std::log(gamma * g + (1.0 - gamma) * uniform);
        }
        if (score < best_score) {
            best_score = score;
            best_plane = plane;
            found = true;
        }
    }
    if (!found) throw DegenerateInput("mlesac_plane: every sampled triple was degenerate");

    const double inlier_gate = 1.96 * sigma;
    MlesacResult result;
    result.inliers.assign(n, 0);
    std::size_t inlier_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(best_plane.signed_distance(cloud.points[i])) <= inlier_gate) {
            result.inliers[i] = 1;
            ++inlier_count;
        }
    }
    result.plane = inlier_count >= 3 ? fit_plane_least_squares(cloud, result.inliers)
                                     : canonicalize(best_plane);
    for (std::size_t i = 0; i < n; ++i) {
        result.inliers[i] =
            std::abs(result.plane.signed_distance(cloud.points[i])) <= inlier_gate;
    }
    result.score = best_score;
    return result;
}

PointCloud filter_roi(const PointCloud& cloud, const PlaneModel& plane,
                      double band_min, double band_max) {
    PointCloud out;
    for (const Vec3& p : cloud.points) {
        const double h = plane.signed_distance(p);
        if (h >= band_min && h <= band_max) out.points.push_back(p);
    }
    if (out.points.empty()) {
        throw EmptyResult("filter_roi: no points inside the height band");
    }
    return out;
}

double brick_yaw_from_box(const OrientedBox2D& box, const BrickDims& dims) {
    return dims.w > dims.l ? normalize_half_turn(box.yaw + 0.5 * kPi)
                           : box.yaw;
}

EstimatedPose estimate_brick_pose(const PointCloud& cloud, const PlaneModel& plane,
                                  const BrickDims& dims) {
    const auto t0 = std::chrono::steady_clock::now();
    if (cloud.points.size() < 3) {
        throw EmptyResult("estimate_brick_pose: need at least 3 points");
    }

    // Plane chart anchored at the closest point to the origin, first axis
    // as close to world x as the normal allows.
    const Vec3 n = plane.normal;
    Vec3 e1{1.0 - n.x * n.x, -n.x * n.y, -n.x * n.z};
    if (e1.norm() < 1e-6) e1 = {-n.y * n.x, 1.0 - n.y * n.y, -n.y * n.z};
    e1 = e1 * (1.0 / e1.norm());
    const Vec3 e2 = n.cross(e1);
    const Vec3 origin = n * plane.d;

    std::vector<Vec2> chart;
    chart.reserve(cloud.points.size());
    double height_sum = 0.0;
    for (const Vec3& p : cloud.points) {
        const Vec3 rel = p - origin;
        chart.push_back({rel.dot(e1), rel.dot(e2)});
        height_sum += plane.signed_distance(p);
    }

    OrientedBox2D box;
    try {
        box = min_area_obb(convex_hull_2d(chart));
    } catch (const DegenerateInput& e) {
        throw EmptyResult(std::string("estimate_brick_pose: ") + e.what());
    }

    const double expect_a = 0.5 * std::max(dims.w, dims.l);
    const double expect_b = 0.5 * std::min(dims.w, dims.l);
    if (std::abs(box.a - expect_a) > 0.25 * expect_a ||
        std::abs(box.b - expect_b) > 0.25 * expect_b) {
        throw ShapeMismatch("estimate_brick_pose: footprint extents (" +
                            std::to_string(box.a) + ", " + std::to_string(box.b) +
                            ") deviate more than 25% from the brick");
    }

    EstimatedPose est;
    est.box = box;
    est.z = height_sum / double(cloud.points.size());
    est.timestamp_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    return est;
}

PerceptionConfig default_perception_config(const BrickDims& dims,
                                           const Vec3& camera_position) {
    PerceptionConfig cfg;
    cfg.camera = make_topdown_camera(camera_position);
    cfg.band_min = 0.4 * dims.h;
    cfg.band_max = 2.0 * dims.h;
    return cfg;
}

FrameEstimate estimate_frame(const DepthImage& depth, const CameraModel& camera,
                             const BrickDims& dims, const MlesacParams& params,
                             double band_min, double band_max) {
    const auto t0 = std::chrono::steady_clock::now();
    const PointCloud cloud = backproject(depth, camera);
    const MlesacResult fit = mlesac_plane(cloud, params);
    const PointCloud roi = filter_roi(cloud, fit.plane, band_min, band_max);
    FrameEstimate frame;
    frame.pose = estimate_brick_pose(roi, fit.plane, dims);
    frame.plane = fit.plane;
    frame.pose.timestamp_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
    return frame;
}

}  // namespace spiralbrick
