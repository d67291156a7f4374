#pragma once

#include <spiralbrick/column.hpp>
#include <spiralbrick/geometry.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace spiralbrick {

struct CameraModel {
    double fx = 525.0;
    double fy = 525.0;
    double cx = 320.0;
    double cy = 240.0;
    int width = 640;
    int height = 480;
    RigidTransform pose;  // camera frame -> world
};

/// Camera mounted at `position` looking straight down, camera x along
/// world x. This is the default rig over the conveyor.
CameraModel make_topdown_camera(const Vec3& position, int width = 640,
                                int height = 480, double focal = 525.0);

struct DepthImage {
    int width = 0;
    int height = 0;
    std::vector<double> depths;  // row-major, meters; 0 = no return

    double at(int u, int v) const { return depths[std::size_t(v) * width + u]; }
    double& at(int u, int v) { return depths[std::size_t(v) * width + u]; }
};

struct PointCloud {
    std::vector<Vec3> points;  // world frame
};

/// Plane normal.x = d with unit normal; the sign convention keeps the
/// largest-magnitude normal component positive.
struct PlaneModel {
    Vec3 normal{0.0, 0.0, 1.0};
    double d = 0.0;

    double signed_distance(const Vec3& p) const { return normal.dot(p) - d; }
};

struct MlesacParams {
    int iterations = 200;
    double inlier_sigma = 0.002;   // meters
    double outlier_width = 0.5;    // uniform outlier support, meters
    int em_steps = 5;              // mixing-coefficient refinement per hypothesis
    std::uint64_t seed = 0;
    int scoring_subsample = 20000; // points used for hypothesis scoring, 0 = all
};

struct MlesacResult {
    PlaneModel plane;
    std::vector<std::uint8_t> inliers;  // per input point
    double score = 0.0;                 // negative log-likelihood of the winner
};

struct EstimatedPose {
    OrientedBox2D box;         // on the support plane (chart = world x-y when horizontal)
    double z = 0.0;            // brick top height above the plane
    double timestamp_ms = 0.0; // time spent estimating
};

/// Ray-casts the conveyor plane plus an optional brick cuboid through the
/// pinhole camera. Depth is the camera-frame z of the first hit, with
/// additive Gaussian noise; pixels that hit nothing read 0.
DepthImage render_depth(const std::optional<BrickPose>& brick, const BrickDims& dims,
                        double plane_z, const CameraModel& camera,
                        double noise_sigma, std::uint64_t seed);

/// Pinhole back-projection of every nonzero pixel into the world frame.
PointCloud backproject(const DepthImage& depth, const CameraModel& camera);

/// Robust plane fit scored by the negative log-likelihood of a Gaussian
/// inlier and uniform outlier mixture, mixing weight refined by a few EM
/// steps per hypothesis. The winner is least-squares refit on its inliers.
MlesacResult mlesac_plane(const PointCloud& cloud, const MlesacParams& params);

/// Keeps points whose signed plane distance lies in [band_min, band_max].
PointCloud filter_roi(const PointCloud& cloud, const PlaneModel& plane,
                      double band_min, double band_max);

/// Projects the filtered points into the plane chart and fits the
/// minimum-area rectangle; rejects footprints whose extents deviate more
/// than 25% from the expected brick footprint.
EstimatedPose estimate_brick_pose(const PointCloud& cloud, const PlaneModel& plane,
                                  const BrickDims& dims);

/// Brick yaw (direction of the l edge) recovered from a footprint box.
double brick_yaw_from_box(const OrientedBox2D& box, const BrickDims& dims);

struct PerceptionConfig {
    CameraModel camera;
    MlesacParams mlesac;
    double noise_sigma = 0.002;
    double band_min = 0.01;
    double band_max = 0.05;
};

PerceptionConfig default_perception_config(const BrickDims& dims,
                                           const Vec3& camera_position);

struct FrameEstimate {
    EstimatedPose pose;  // timestamp_ms covers the whole frame pipeline
    PlaneModel plane;
};

/// Full per-frame pipeline: backproject, plane removal, ROI band, box fit.
FrameEstimate estimate_frame(const DepthImage& depth, const CameraModel& camera,
                             const BrickDims& dims, const MlesacParams& params,
                             double band_min, double band_max);

}  // namespace spiralbrick
