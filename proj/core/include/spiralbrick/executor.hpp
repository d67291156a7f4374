#pragma once

#include <spiralbrick/column.hpp>
#include <spiralbrick/perception.hpp>

#include <cstdint>
#include <vector>

namespace spiralbrick {

struct ExecutorConfig {
    double eta = 1.25;              // pre-grasp height offset, meters
    double v_max = 2.0;             // m/s
    double a_max = 4.0;             // m/s^2
    double omega_max = 2.0;         // rad/s
    double descend_clearance = 0.05;
    Vec3 workspace_min{-2.5, -2.5, -0.1};
    Vec3 workspace_max{2.5, 2.5, 3.0};
};

struct ConveyorRegion {
    Vec2 center{0.8, 0.0};
    Vec2 size{0.4, 0.3};
    double plane_z = 0.0;
};

enum class PlanPhase { pre_grasp, grasp_descend, lift, transit, place_descend, retreat };

struct Waypoint {
    Vec3 position;
    double yaw = 0.0;
    bool gripper_closed = false;
    PlanPhase phase = PlanPhase::pre_grasp;
};

struct WaypointPlan {
    int brick_id = 0;
    int layer = 0;
    int index_in_layer = 0;
    BrickPose grasp_pose;  // believed source pose on the conveyor
    BrickPose commanded_target;
    std::vector<Waypoint> waypoints;
};

struct GripperFrame {
    Vec3 position;
    double yaw = 0.0;
    bool closed = false;
};

struct PlacedBrick {
    int layer = 0;
    BrickPose pose;
};

struct KinematicWorld {
    ConveyorRegion conveyor;
    BrickDims dims;
    std::vector<PlacedBrick> placed;
    GripperFrame gripper;
};

Vec3 home_position(const ExecutorConfig& cfg, const ConveyorRegion& conveyor,
                   const BrickDims& dims);

KinematicWorld make_world(const ExecutorConfig& cfg, const ConveyorRegion& conveyor,
                          const BrickDims& dims);

struct ExecutionRecord {
    int brick_id = 0;
    int layer = 0;
    int index_in_layer = 0;
    BrickPose commanded_target;
    BrickPose achieved;
    BrickPose spawn_truth;
    BrickPose spawn_estimate;
    double trajectory_time_s = 0.0;
    double pose_estimate_time_s = 0.0;
    int attempts = 1;
};

struct AssemblyLog {
    std::uint64_t seed = 0;
    std::vector<ExecutionRecord> records;
};

/// Travel time of one straight segment under a trapezoidal velocity profile
/// plus a rate-limited rotation; the segment takes the longer of the two.
double segment_duration(double distance, double angle, const ExecutorConfig& cfg);

/// Six-phase plan: hover over the brick at eta above, descend and grasp at
/// the midpoints of its largest sides, lift, straight transit, place,
/// retreat home. Throws UnreachableTarget for waypoints outside the
/// workspace or targets below already-placed lower layers.
WaypointPlan plan_pick_place(const EstimatedPose& estimated, const BrickPose& target,
                             int target_layer, const ExecutorConfig& cfg,
                             const KinematicWorld& world);

/// Moves the gripper through the plan, placing the brick exactly at the
/// commanded target, and accumulates the trajectory time.
ExecutionRecord execute_plan(const WaypointPlan& plan, KinematicWorld& world,
                             const ExecutorConfig& cfg);

struct AssemblyConfig {
    ExecutorConfig executor;
    PerceptionConfig perception;
    ConveyorRegion conveyor;
    int retries = 3;  // re-renders after a failed estimate
};

/// Runs the full loop for every placement in order: spawn a brick at a
/// seeded random conveyor pose, estimate it from a rendered depth frame,
/// plan, execute, and log one record per brick.
AssemblyLog run_assembly(const ColumnModel& model, const AssemblyConfig& cfg,
                         std::uint64_t seed);

}  // namespace spiralbrick
