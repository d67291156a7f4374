#include <benchmark/benchmark.h>

#include <spiralbrick/perception.hpp>

using namespace spiralbrick;

namespace {

const BrickDims kDims{0.1, 0.5, 0.025};

DepthImage frame(double noise) {
    const CameraModel cam = make_topdown_camera({0.8, 0.0, 1.0});
    const BrickPose brick{{0.85, 0.05, 0.5 * kDims.h}, 0.6};
    return render_depth(brick, kDims, 0.0, cam, noise, 99);
}

}  // namespace

static void RenderDepthFrame(benchmark::State& state) {
    const CameraModel cam = make_topdown_camera({0.8, 0.0, 1.0});
    const BrickPose brick{{0.85, 0.05, 0.5 * kDims.h}, 0.6};
    for (auto _ : state) {
        benchmark::DoNotOptimize(render_depth(brick, kDims, 0.0, cam, 0.002, 99));
    }
}
BENCHMARK(RenderDepthFrame)->Unit(benchmark::kMillisecond);

static void Backproject(benchmark::State& state) {
    const CameraModel cam = make_topdown_camera({0.8, 0.0, 1.0});
    const DepthImage img = frame(0.002);
    for (auto _ : state) {
        benchmark::DoNotOptimize(backproject(img, cam));
    }
}
BENCHMARK(Backproject)->Unit(benchmark::kMillisecond);

static void MlesacPlane(benchmark::State& state) {
    const CameraModel cam = make_topdown_camera({0.8, 0.0, 1.0});
    const PointCloud cloud = backproject(frame(0.002), cam);
    MlesacParams params;
    params.seed = 5;
    params.scoring_subsample = int(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mlesac_plane(cloud, params));
    }
}
BENCHMARK(MlesacPlane)->Arg(5000)->Arg(20000)->Arg(0)->Unit(benchmark::kMillisecond);

static void FullFrameEstimate(benchmark::State& state) {
    const CameraModel cam = make_topdown_camera({0.8, 0.0, 1.0});
    const DepthImage img = frame(0.002);
    MlesacParams params;
    params.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            estimate_frame(img, cam, kDims, params, 0.4 * kDims.h, 2.0 * kDims.h));
    }
}
BENCHMARK(FullFrameEstimate)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
