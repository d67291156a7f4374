#include <doctest.h>

#include <spiralbrick/config.hpp>
#include <spiralbrick/errors.hpp>
#include <spiralbrick/executor.hpp>
#include <spiralbrick/metrics.hpp>
#include <spiralbrick/serialize.hpp>

#include <cmath>
#include <random>
#include <regex>

using namespace spiralbrick;

namespace {

const BrickDims kTallDims{0.1, 0.5, 0.1};  // h chosen so grasp center sits at 0.05

EstimatedPose estimate_at(double x, double y, double yaw_long_axis, double h) {
    EstimatedPose est;
    est.box.center = {x, y};
    est.box.a = 0.25;
    est.box.b = 0.05;
    est.box.yaw = normalize_half_turn(yaw_long_axis);
    est.z = h;  // top height above the plane
    return est;
}

std::string scrub_wall_times(std::string text) {
    return std::regex_replace(
        text, std::regex("\"pose_estimate_time_s\": [-+0-9.eE]+"),
        "\"pose_estimate_time_s\": 0");
}

}  // namespace

TEST_SUITE("executor: timing") {
    TEST_CASE("trapezoidal and triangular profiles") {
        ExecutorConfig cfg;
        cfg.v_max = 0.5;
        cfg.a_max = 1.0;
        CHECK(segment_duration(1.0, 0.0, cfg) == doctest::Approx(2.5).epsilon(1e-12));
        cfg.v_max = 1.0;
        CHECK(segment_duration(0.25, 0.0, cfg) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(segment_duration(0.0, 0.0, cfg) == 0.0);
    }

    TEST_CASE("rotation-limited segments") {
        ExecutorConfig cfg;
        cfg.omega_max = 1.0;
        CHECK(segment_duration(0.0, 0.5 * kPi, cfg) ==
              doctest::Approx(0.5 * kPi).epsilon(1e-12));
        // long rotation dominates a short hop
        CHECK(segment_duration(0.01, 1.5, cfg) == doctest::Approx(1.5));
    }

    TEST_CASE("monotonic in distance and angle") {
        ExecutorConfig cfg;
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> d(0.0, 3.0);
        std::uniform_real_distribution<double> a(0.0, 0.5 * kPi);
        for (int i = 0; i < 300; ++i) {
            double d1 = d(rng), d2 = d(rng);
            if (d1 > d2) std::swap(d1, d2);
            double a1 = a(rng), a2 = a(rng);
            if (a1 > a2) std::swap(a1, a2);
            CHECK(segment_duration(d1, a1, cfg) <= segment_duration(d2, a1, cfg));
            CHECK(segment_duration(d1, a1, cfg) <= segment_duration(d1, a2, cfg));
        }
    }
}

TEST_SUITE("executor: planning") {
    TEST_CASE("pre-grasp point sits eta above the grasp") {
        ExecutorConfig cfg;  // eta = 1.25
        KinematicWorld world = make_world(cfg, ConveyorRegion{}, kTallDims);
        const BrickPose target{{0.0, 0.0, 0.05}, 0.0};
        const WaypointPlan plan =
            plan_pick_place(estimate_at(0.4, -0.3, 0.5 * kPi, 0.1), target, 0, cfg,
                            world);
        REQUIRE(plan.waypoints.size() == 7);
        const Waypoint& pre = plan.waypoints[0];
        CHECK(pre.position.x == doctest::Approx(0.4));
        CHECK(pre.position.y == doctest::Approx(-0.3));
        CHECK(pre.position.z == doctest::Approx(1.30));
        CHECK_FALSE(pre.gripper_closed);
        const Waypoint& grasp = plan.waypoints[1];
        CHECK(grasp.position.z == doctest::Approx(0.05));
        CHECK(grasp.gripper_closed);
    }

    TEST_CASE("plan runs through the six phases in order") {
        ExecutorConfig cfg;
        KinematicWorld world = make_world(cfg, ConveyorRegion{}, kTallDims);
        const WaypointPlan plan = plan_pick_place(
            estimate_at(0.8, 0.0, 0.0, 0.1), {{0.1, 0.1, 0.05}, 0.3}, 0, cfg, world);
        const PlanPhase expected[7] = {
            PlanPhase::pre_grasp,     PlanPhase::grasp_descend, PlanPhase::lift,
            PlanPhase::transit,       PlanPhase::place_descend, PlanPhase::retreat,
            PlanPhase::retreat};
        REQUIRE(plan.waypoints.size() == 7);
        for (int i = 0; i < 7; ++i) CHECK(plan.waypoints[i].phase == expected[i]);
    }

    TEST_CASE("transit samples stay on the straight line") {
        ExecutorConfig cfg;
        KinematicWorld world = make_world(cfg, ConveyorRegion{}, kTallDims);
        const WaypointPlan plan = plan_pick_place(
            estimate_at(0.7, 0.1, 0.2, 0.1), {{-0.2, 0.3, 0.05}, 1.0}, 0, cfg, world);
        const Vec3 a = plan.waypoints[2].position;
        const Vec3 b = plan.waypoints[3].position;
        for (int i = 1; i < 10; ++i) {
            const double t = i / 10.0;
            const Vec3 sample = a + (b - a) * t;
            const Vec3 cross = (sample - a).cross(b - a);
            CHECK(cross.norm() <= 1e-12 * (b - a).norm());
        }
    }

    TEST_CASE("grasp yaw equals the estimated brick yaw modulo pi") {
        ExecutorConfig cfg;
        KinematicWorld world = make_world(cfg, ConveyorRegion{}, kTallDims);
        const EstimatedPose est = estimate_at(0.8, 0.0, 1.1, 0.1);
        const WaypointPlan plan =
            plan_pick_place(est, {{0.0, 0.0, 0.05}, 0.0}, 0, cfg, world);
        const double brick_yaw = brick_yaw_from_box(est.box, kTallDims);
        CHECK(yaw_difference(plan.waypoints[0].yaw, brick_yaw) ==
              doctest::Approx(0.0));
        CHECK(yaw_difference(plan.waypoints[0].yaw, plan.grasp_pose.yaw) ==
              doctest::Approx(0.0));
    }

    TEST_CASE("targets outside the workspace are unreachable") {
        ExecutorConfig cfg;
        KinematicWorld world = make_world(cfg, ConveyorRegion{}, kTallDims);
        CHECK_THROWS_AS(plan_pick_place(estimate_at(0.8, 0.0, 0.0, 0.1),
                                        {{5.0, 0.0, 0.05}, 0.0}, 0, cfg, world),
                        UnreachableTarget);
    }

    TEST_CASE("targets below already placed layers are unreachable") {
        ExecutorConfig cfg;
        KinematicWorld world = make_world(cfg, ConveyorRegion{}, kTallDims);
        world.placed.push_back({0, {{0.0, 0.0, 0.05}, 0.0}});
        CHECK_THROWS_AS(plan_pick_place(estimate_at(0.8, 0.0, 0.0, 0.1),
                                        {{0.3, 0.0, 0.05}, 0.0}, 1, cfg, world),
                        UnreachableTarget);
    }
}

TEST_SUITE("executor: execution") {
    TEST_CASE("kinematic placement is exact and deterministic") {
        ExecutorConfig cfg;
        const BrickPose target{{0.1, -0.1, 0.05}, 0.7};
        KinematicWorld w1 = make_world(cfg, ConveyorRegion{}, kTallDims);
        const WaypointPlan plan =
            plan_pick_place(estimate_at(0.8, 0.05, 0.3, 0.1), target, 0, cfg, w1);
        const ExecutionRecord r1 = execute_plan(plan, w1, cfg);
        CHECK(r1.achieved.position.x == target.position.x);
        CHECK(r1.achieved.position.y == target.position.y);
        CHECK(r1.achieved.position.z == target.position.z);
        CHECK(r1.achieved.yaw == target.yaw);
        REQUIRE(w1.placed.size() == 1);
        CHECK(w1.placed[0].pose.position.x == target.position.x);

        KinematicWorld w2 = make_world(cfg, ConveyorRegion{}, kTallDims);
        const ExecutionRecord r2 = execute_plan(plan, w2, cfg);
        CHECK(r1.trajectory_time_s == r2.trajectory_time_s);
        CHECK(r1.trajectory_time_s > 0.0);
    }

    TEST_CASE("longer transits never take less time") {
        ExecutorConfig cfg;
        double previous = 0.0;
        for (int i = 0; i < 5; ++i) {
            const BrickPose target{{-0.1 - 0.3 * i, 0.0, 0.05}, 0.0};
            KinematicWorld world = make_world(cfg, ConveyorRegion{}, kTallDims);
            const WaypointPlan plan =
                plan_pick_place(estimate_at(0.8, 0.0, 0.0, 0.1), target, 0, cfg, world);
            const ExecutionRecord rec = execute_plan(plan, world, cfg);
            CHECK(rec.trajectory_time_s >= previous);
            previous = rec.trajectory_time_s;
        }
    }

    TEST_CASE("gripper returns home after the plan") {
        ExecutorConfig cfg;
        KinematicWorld world = make_world(cfg, ConveyorRegion{}, kTallDims);
        const Vec3 home = home_position(cfg, world.conveyor, kTallDims);
        const WaypointPlan plan = plan_pick_place(
            estimate_at(0.8, 0.0, 0.0, 0.1), {{0.0, 0.2, 0.05}, 0.1}, 0, cfg, world);
        execute_plan(plan, world, cfg);
        CHECK(world.gripper.position.x == doctest::Approx(home.x));
        CHECK(world.gripper.position.y == doctest::Approx(home.y));
        CHECK(world.gripper.position.z == doctest::Approx(home.z));
        CHECK_FALSE(world.gripper.closed);
    }
}

TEST_SUITE("executor: assembly runs") {
    RunConfig small_run() {
        RunConfig cfg = preset_config("paper_square");
        cfg.column.base = PolygonBaseSpec{
            {0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi}, 1, cfg.lambda};
        cfg.column.layers = 2;
        cfg.perception.noise_sigma = 0.0;
        return cfg;
    }

    TEST_CASE("one record per placement, errors tiny when noiseless") {
        const RunConfig cfg = small_run();
        const ColumnModel model = build_column(cfg.column);
        REQUIRE(model.placements.size() == 8);
        const AssemblyLog log = run_assembly(model, assembly_config(cfg), 2020);
        REQUIRE(log.records.size() == 8);
        for (const ExecutionRecord& rec : log.records) {
            CHECK(position_error(rec.spawn_estimate.position, rec.spawn_truth.position) <
                  1e-3);
            CHECK(yaw_difference(rec.spawn_estimate.yaw, rec.spawn_truth.yaw) < 0.01);
            CHECK(rec.achieved.position.z == rec.commanded_target.position.z);
            CHECK(rec.trajectory_time_s > 0.0);
            CHECK(rec.attempts == 1);
        }
    }

    TEST_CASE("same seed reproduces the log except wall-clock fields") {
        const RunConfig cfg = small_run();
        const ColumnModel model = build_column(cfg.column);
        const AssemblyLog a = run_assembly(model, assembly_config(cfg), 99);
        const AssemblyLog b = run_assembly(model, assembly_config(cfg), 99);
        CHECK(scrub_wall_times(log_to_json(a)) == scrub_wall_times(log_to_json(b)));
        const AssemblyLog c = run_assembly(model, assembly_config(cfg), 100);
        CHECK(scrub_wall_times(log_to_json(a)) != scrub_wall_times(log_to_json(c)));
    }

    TEST_CASE("world ends with every brick placed and none interpenetrating") {
        const RunConfig cfg = small_run();
        const ColumnModel model = build_column(cfg.column);
        KinematicWorld world = make_world(cfg.executor, cfg.conveyor, cfg.column.dims);
        const AssemblyLog log = run_assembly(model, assembly_config(cfg), 5);
        CHECK(log.records.size() == model.placements.size());
        for (std::size_t i = 0; i < log.records.size(); ++i) {
            CHECK(log.records[i].achieved.position.z ==
                  model.placements[i].pose.position.z);
            world.placed.push_back(
                {log.records[i].layer, log.records[i].achieved});
        }
        for (std::size_t i = 0; i < world.placed.size(); ++i) {
            for (std::size_t j = i + 1; j < world.placed.size(); ++j) {
                if (world.placed[i].layer != world.placed[j].layer) continue;
                CHECK_FALSE(obb_overlap(
                    footprint_box(world.placed[i].pose, cfg.column.dims),
                    footprint_box(world.placed[j].pose, cfg.column.dims)));
            }
        }
    }
}
