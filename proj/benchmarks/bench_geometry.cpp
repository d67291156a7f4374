#include <benchmark/benchmark.h>

#include <spiralbrick/column.hpp>
#include <spiralbrick/config.hpp>
#include <spiralbrick/geometry.hpp>

#include <random>
#include <vector>

using namespace spiralbrick;

namespace {

std::vector<Vec2> random_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), 0.4 * u(rng)});
    return pts;
}

}  // namespace

static void ConvexHull(benchmark::State& state) {
    const auto pts = random_points(std::size_t(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(convex_hull_2d(pts));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(ConvexHull)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

static void MinAreaBox(benchmark::State& state) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> a(0.0, 2.0 * kPi);
    std::vector<Vec2> ring;
    for (int i = 0; i < int(state.range(0)); ++i) {
        const double t = a(rng);
        ring.push_back({std::cos(t), 0.5 * std::sin(t)});
    }
    const Polygon2D hull = convex_hull_2d(ring);
    for (auto _ : state) {
        benchmark::DoNotOptimize(min_area_obb(hull));
    }
}
BENCHMARK(MinAreaBox)->Arg(64)->Arg(512)->Arg(4096);

static void BuildSquareColumn(benchmark::State& state) {
    const RunConfig cfg = preset_config("paper_square");
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_column(cfg.column));
    }
}
BENCHMARK(BuildSquareColumn);

static void BuildPolynomialColumn(benchmark::State& state) {
    const RunConfig cfg = preset_config("paper_polynomial");
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_column(cfg.column));
    }
}
BENCHMARK(BuildPolynomialColumn);
