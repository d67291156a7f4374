#include <doctest.h>

#include <spiralbrick/errors.hpp>
#include <spiralbrick/metrics.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace spiralbrick;
namespace fs = std::filesystem;

namespace {

AssemblyLog synthetic_log(std::size_t records, std::uint64_t seed) {
    AssemblyLog log;
    log.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.01, 0.01);
    std::uniform_real_distribution<double> yaw(0.0, kPi);
    std::uniform_real_distribution<double> t(0.05, 8.0);
    for (std::size_t i = 0; i < records; ++i) {
        ExecutionRecord rec;
        rec.brick_id = int(i);
        rec.layer = int(i / 8);
        rec.spawn_truth = {{0.8 + u(rng), u(rng), 0.0125}, yaw(rng)};
        rec.spawn_estimate = {{0.8 + u(rng), u(rng), 0.0125}, yaw(rng)};
        rec.commanded_target = {{u(rng), u(rng), 0.0125}, yaw(rng)};
        rec.achieved = rec.commanded_target;
        rec.pose_estimate_time_s = t(rng) / 20.0;
        rec.trajectory_time_s = t(rng);
        log.records.push_back(rec);
    }
    return log;
}

}  // namespace

TEST_SUITE("metrics: error measures") {
    TEST_CASE("position error examples") {
        CHECK(position_error({0, 0, 0}, {0.003, 0.004, 0}) ==
              doctest::Approx(0.005).epsilon(1e-12));
        CHECK(position_error({1, 2, 3}, {1, 2, 3}) == 0.0);
        CHECK(position_error({1, 0, 0}, {0, 0, 0}) == 1.0);
    }

    TEST_CASE("position error is a metric on sampled triples") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int i = 0; i < 200; ++i) {
            const Vec3 a{u(rng), u(rng), u(rng)};
            const Vec3 b{u(rng), u(rng), u(rng)};
            const Vec3 c{u(rng), u(rng), u(rng)};
            CHECK(position_error(a, b) >= 0.0);
            CHECK(position_error(a, b) == position_error(b, a));
            CHECK(position_error(a, a) == 0.0);
            CHECK(position_error(a, c) <=
                  position_error(a, b) + position_error(b, c) + 1e-12);
        }
    }

    TEST_CASE("yaw difference examples") {
        CHECK(yaw_difference(0.1, 0.1 + kPi) == doctest::Approx(0.0));
        CHECK(yaw_difference(0.0, 0.5 * kPi) == doctest::Approx(0.5 * kPi));
        CHECK(yaw_difference(0.02, -0.03) == doctest::Approx(0.05).epsilon(1e-9));
    }

    TEST_CASE("yaw difference symmetry, periodicity, range") {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(-10.0, 10.0);
        for (int i = 0; i < 500; ++i) {
            const double a = u(rng), b = u(rng);
            const double d = yaw_difference(a, b);
            CHECK(d >= 0.0);
            CHECK(d <= 0.5 * kPi + 1e-12);
            CHECK(d == doctest::Approx(yaw_difference(b, a)).epsilon(1e-9));
            CHECK(yaw_difference(a + kPi, b) == doctest::Approx(d).epsilon(1e-9));
            CHECK(yaw_difference(a, b + kPi) == doctest::Approx(d).epsilon(1e-9));
        }
    }
}

TEST_SUITE("metrics: aggregation") {
    TEST_CASE("single record collapses the aggregates") {
        const AssemblyLog log = synthetic_log(1, 3);
        const MetricsSummary s = aggregate(log);
        REQUIRE(s.size() == 1);
        CHECK(s.position_stats.mean == s.position_stats.min);
        CHECK(s.position_stats.mean == s.position_stats.max);
        CHECK(s.traj_time_stats.mean == s.traj_time_s[0]);
    }

    TEST_CASE("series lengths follow the log") {
        const MetricsSummary s = aggregate(synthetic_log(136, 4));
        CHECK(s.size() == 136);
        CHECK(s.position_error_m.size() == 136);
        CHECK(s.orientation_diff_rad.size() == 136);
        CHECK(s.pose_time_s.size() == 136);
        CHECK(s.traj_time_s.size() == 136);
        for (const double v : s.orientation_diff_rad) {
            CHECK(v >= 0.0);
            CHECK(v <= 0.5 * kPi + 1e-12);
        }
    }

    TEST_CASE("identical estimates give zero errors") {
        AssemblyLog log = synthetic_log(10, 7);
        for (ExecutionRecord& rec : log.records) rec.spawn_estimate = rec.spawn_truth;
        const MetricsSummary s = aggregate(log);
        CHECK(s.position_stats.max == 0.0);
        CHECK(s.orientation_stats.max == 0.0);
    }

    TEST_CASE("empty log is rejected") {
        CHECK_THROWS_AS(aggregate(AssemblyLog{}), EmptyLog);
    }
}

TEST_SUITE("metrics: files") {
    TEST_CASE("csv has a header plus one row per brick") {
        const MetricsSummary s = aggregate(synthetic_log(136, 8));
        std::ostringstream out;
        emit_csv(s, out);
        const std::string text = out.str();
        std::size_t lines = 0;
        for (const char c : text) lines += (c == '\n');
        CHECK(lines == 137);
    }

    TEST_CASE("csv round trip is a fixed point") {
        const MetricsSummary s = aggregate(synthetic_log(40, 9));
        std::ostringstream first;
        emit_csv(s, first);
        std::istringstream back(first.str());
        const MetricsSummary reparsed = parse_metrics_csv(back);
        std::ostringstream second;
        emit_csv(reparsed, second);
        CHECK(first.str() == second.str());
        REQUIRE(reparsed.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(reparsed.position_error_m[i] ==
                  doctest::Approx(s.position_error_m[i]).epsilon(1e-8));
        }
    }

    TEST_CASE("four plot files named by metric") {
        const MetricsSummary s = aggregate(synthetic_log(20, 10));
        const fs::path dir = fs::temp_directory_path() / "spiralbrick_plots_test";
        fs::remove_all(dir);
        const auto files = emit_svg_plots(s, dir);
        REQUIRE(files.size() == 4);
        CHECK(files[0].filename() == "position_error.svg");
        CHECK(files[1].filename() == "orientation_diff.svg");
        CHECK(files[2].filename() == "pose_time.svg");
        CHECK(files[3].filename() == "trajectory_time.svg");
        for (const auto& f : files) {
            CHECK(fs::exists(f));
            std::ifstream in(f);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            CHECK(text.find("<svg") != std::string::npos);
            CHECK(text.find("<polyline") != std::string::npos);
        }
        fs::remove_all(dir);
    }

    TEST_CASE("aggregates table lists all four metrics") {
        const MetricsSummary s = aggregate(synthetic_log(5, 11));
        std::ostringstream out;
        emit_aggregates_csv(s, out);
        const std::string text = out.str();
        CHECK(text.find("position_error_m") != std::string::npos);
        CHECK(text.find("orientation_diff_deg") != std::string::npos);
        CHECK(text.find("pose_time_s") != std::string::npos);
        CHECK(text.find("traj_time_s") != std::string::npos);
    }
}
