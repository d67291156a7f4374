#include <spiralbrick/executor.hpp>

#include <spiralbrick/errors.hpp>
#include <spiralbrick/logging.hpp>
#include <spiralbrick/metrics.hpp>
#include <spiralbrick/rng.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace spiralbrick {

Vec3 home_position(const ExecutorConfig& cfg, const ConveyorRegion& conveyor,
                   const BrickDims& dims) {
    return {conveyor.center.x, conveyor.center.y,
            conveyor.plane_z + 0.5 * dims.h + cfg.eta};
}

KinematicWorld make_world(const ExecutorConfig& cfg, const ConveyorRegion& conveyor,
                          const BrickDims& dims) {
    KinematicWorld world;
    world.conveyor = conveyor;
    world.dims = dims;
    world.gripper.position = home_position(cfg, conveyor, dims);
    world.gripper.yaw = 0.0;
    world.gripper.closed = false;
    return world;
}

double segment_duration(double distance, double angle, const ExecutorConfig& cfg) {
    const double v = cfg.v_max;
    const double a = cfg.a_max;
    double translate;
    if (distance >= v * v / a) {
        translate = distance / v + v / a;
    } else {
        translate = 2.0 * std::sqrt(distance / a);
    }
    const double rotate = angle / cfg.omega_max;
    return std::max(translate, rotate);
}

namespace {

bool inside_workspace(const Vec3& p, const ExecutorConfig& cfg) {
    return p.x >= cfg.workspace_min.x && p.x <= cfg.workspace_max.x &&
           p.y >= cfg.workspace_min.y && p.y <= cfg.workspace_max.y &&
           p.z >= cfg.workspace_min.z && p.z <= cfg.workspace_max.z;
}

double placed_top_below(const KinematicWorld& world, int layer) {
    double top = -std::numeric_limits<double>::infinity();
    for (const PlacedBrick& b : world.placed) {
        if (b.layer < layer) {
            top = std::max(top, b.pose.position.z + 0.5 * world.dims.h);
        }
    }
    return top;
}

}  // namespace

WaypointPlan plan_pick_place(const EstimatedPose& estimated, const BrickPose& target,
                             int target_layer, const ExecutorConfig& cfg,
                             const KinematicWorld& world) {
    const BrickDims& dims = world.dims;
    const double plane_z = world.conveyor.plane_z;

    WaypointPlan plan;
    plan.layer = target_layer;
    plan.commanded_target = target;
    plan.grasp_pose.position = {estimated.box.center.x, estimated.box.center.y,
                                plane_z + estimated.z - 0.5 * dims.h};
    plan.grasp_pose.yaw = brick_yaw_from_box(estimated.box, dims);

    const double top_below = placed_top_below(world, target_layer);
    if (std::isfinite(top_below) &&
        target.position.z - 0.5 * dims.h < top_below - 1e-9) {
        throw UnreachableTarget("plan_pick_place: target sinks below previously "
                                "placed layers");
    }

    const Vec3 p = plan.grasp_pose.position;
    const double grasp_yaw = plan.grasp_pose.yaw;
    const Vec3 q = p + Vec3{0.0, 0.0, cfg.eta};
    Vec3 above_target = target.position + Vec3{0.0, 0.0, cfg.eta};
    if (std::isfinite(top_below)) {
        above_target.z = std::max(above_target.z, top_below + cfg.descend_clearance);
    }
    const Vec3 home = home_position(cfg, world.conveyor, dims);

    plan.waypoints = {
        {q, grasp_yaw, false, PlanPhase::pre_grasp},
        {p, grasp_yaw, true, PlanPhase::grasp_descend},
        {q, grasp_yaw, true, PlanPhase::lift},
        {above_target, target.yaw, true, PlanPhase::transit},
        {target.position, target.yaw, false, PlanPhase::place_descend},
        {above_target, target.yaw, false, PlanPhase::retreat},
        {home, 0.0, false, PlanPhase::retreat},
    };

    for (const Waypoint& wp : plan.waypoints) {
        if (!inside_workspace(wp.position, cfg)) {
            throw UnreachableTarget("plan_pick_place: waypoint (" +
                                    std::to_string(wp.position.x) + ", " +
                                    std::to_string(wp.position.y) + ", " +
                                    std::to_string(wp.position.z) +
                                    ") leaves the workspace");
        }
    }
    return plan;
}

ExecutionRecord execute_plan(const WaypointPlan& plan, KinematicWorld& world,
                             const ExecutorConfig& cfg) {
    const double target_bottom = plan.commanded_target.position.z - 0.5 * world.dims.h;
    const double top_below = placed_top_below(world, plan.layer);
    if (std::isfinite(top_below) && target_bottom < top_below - 1e-9) {
        throw UnreachableTarget("execute_plan: target sinks below previously placed "
                                "layers");
    }

    ExecutionRecord rec;
    rec.brick_id = plan.brick_id;
    rec.layer = plan.layer;
    rec.index_in_layer = plan.index_in_layer;
    rec.commanded_target = plan.commanded_target;

    Vec3 pos = world.gripper.position;
    double yaw = world.gripper.yaw;
    double total = 0.0;
    for (const Waypoint& wp : plan.waypoints) {
        const double dist = (wp.position - pos).norm();
        const double turn = yaw_difference(wp.yaw, yaw);
        total += segment_duration(dist, turn, cfg);
        pos = wp.position;
        yaw = wp.yaw;
        if (wp.phase == PlanPhase::place_descend) {
            world.placed.push_back({plan.layer, plan.commanded_target});
        }
    }
    world.gripper.position = pos;
    world.gripper.yaw = yaw;
    world.gripper.closed = plan.waypoints.back().gripper_closed;

    rec.achieved = plan.commanded_target;  // kinematic placement is exact
    rec.trajectory_time_s = total;
    return rec;
}

AssemblyLog run_assembly(const ColumnModel& model, const AssemblyConfig& cfg,
                         std::uint64_t seed) {
    AssemblyLog log;
    log.seed = seed;
    log.records.reserve(model.placements.size());

    const BrickDims& dims = model.spec.dims;
    KinematicWorld world = make_world(cfg.executor, cfg.conveyor, dims);

    for (std::size_t k = 0; k < model.placements.size(); ++k) {
        const Placement& placement = model.placements[k];

        std::mt19937_64 spawn_rng(derive_seed(seed, 0x5747, k));
        std::uniform_real_distribution<double> ux(-0.5 * cfg.conveyor.size.x,
                                                  0.5 * cfg.conveyor.size.x);
        std::uniform_real_distribution<double> uy(-0.5 * cfg.conveyor.size.y,
                                                  0.5 * cfg.conveyor.size.y);
        std::uniform_real_distribution<double> uyaw(0.0, kPi);
        BrickPose truth;
        truth.position = {cfg.conveyor.center.x + ux(spawn_rng),
                          cfg.conveyor.center.y + uy(spawn_rng),
                          cfg.conveyor.plane_z + 0.5 * dims.h};
        truth.yaw = uyaw(spawn_rng);

        FrameEstimate frame;
        int attempts = 0;
        std::string last_error;
        bool estimated = false;
        for (; attempts <= cfg.retries; ++attempts) {
            const DepthImage depth = render_depth(
                truth, dims, cfg.conveyor.plane_z, cfg.perception.camera,
                cfg.perception.noise_sigma,
                derive_seed(seed, 0x4e01, k * 64 + std::size_t(attempts)));
            MlesacParams params = cfg.perception.mlesac;
            params.seed = derive_seed(seed, 0x9135, k * 64 + std::size_t(attempts));
            try {
                frame = estimate_frame(depth, cfg.perception.camera, dims, params,
                                       cfg.perception.band_min, cfg.perception.band_max);
                estimated = true;
                ++attempts;
                break;
            } catch (const EmptyResult& e) {
                last_error = e.what();
            } catch (const ShapeMismatch& e) {
                last_error = e.what();
            }
            log_warn("brick " + std::to_string(k) + ": estimate attempt " +
                     std::to_string(attempts + 1) + " failed: " + last_error);
        }
        if (!estimated) {
            throw AssemblyError("brick " + std::to_string(k) + " (layer " +
                                std::to_string(placement.layer) +
                                "): pose estimation failed after " +
                                std::to_string(attempts) + " attempts: " + last_error);
        }

        WaypointPlan plan = plan_pick_place(frame.pose, placement.pose,
                                            placement.layer, cfg.executor, world);
        plan.brick_id = int(k);
        plan.index_in_layer = placement.index_in_layer;

        ExecutionRecord rec = execute_plan(plan, world, cfg.executor);
        rec.spawn_truth = truth;
        rec.spawn_estimate = plan.grasp_pose;
        rec.pose_estimate_time_s = frame.pose.timestamp_ms / 1000.0;
        rec.attempts = attempts;
        log.records.push_back(rec);
        log_debug("brick " + std::to_string(k) + " placed, trajectory " +
                  std::to_string(rec.trajectory_time_s) + " s");
    }
    return log;
}

}  // namespace spiralbrick
