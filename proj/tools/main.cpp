#include <spiralbrick/column.hpp>
#include <spiralbrick/config.hpp>
#include <spiralbrick/errors.hpp>
#include <spiralbrick/executor.hpp>
#include <spiralbrick/io.hpp>
#include <spiralbrick/metrics.hpp>
#include <spiralbrick/perception.hpp>
#include <spiralbrick/rng.hpp>
#include <spiralbrick/serialize.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace spiralbrick;

namespace {

struct ConfigSource {
    std::string config_path;
    std::string preset;
};

void add_config_options(CLI::App* cmd, ConfigSource& src) {
    auto* config = cmd->add_option("--config", src.config_path,
                                   "Path to a JSON run configuration");
    auto* preset =
        cmd->add_option("--preset", src.preset,
                        "Built-in configuration (see `spiralbrick presets`)");
    config->excludes(preset);
}

RunConfig load_config(const ConfigSource& src) {
    if (!src.config_path.empty()) return parse_config_file(src.config_path);
    if (!src.preset.empty()) return preset_config(src.preset);
    return preset_config("paper_defaults");
}

void apply_overrides(RunConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::optional<double>& noise,
                     const std::optional<int>& retries, const std::string& out) {
    if (seed) cfg.seed = *seed;
    if (noise) cfg.perception.noise_sigma = *noise;
    if (retries) cfg.retries = *retries;
    if (!out.empty()) cfg.out_dir = out;
}

int run_generate(const RunConfig& cfg, bool obj, bool svg) {
    const ColumnModel model = build_column(cfg.column);
    const ValidationReport report = validate_column(model);

    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    save_text(dir / "model.json", model_to_json(model));
    if (obj) write_obj(model, dir / "model.obj");
    if (svg) write_svg_topview(model, -1, dir / "topview.svg");

    std::cout << "model: " << model.placements.size() << " bricks in "
              << cfg.column.layers << " layers\n"
              << "closure residual: " << report.closure_residual << " m\n"
              << "footprint overlaps: " << report.overlaps.size() << "\n"
              << "written: " << (dir / "model.json").string() << "\n";
    if (!report.ok()) {
        std::cerr << "error: InvalidSpec: generated model failed validation\n";
        return 1;
    }
    return 0;
}

int run_estimate(const RunConfig& cfg, const std::string& cloud_path, bool synthetic,
                 const std::string& pose_text, double noise, std::uint64_t seed,
                 bool save_depth) {
    const BrickDims& dims = cfg.column.dims;
    MlesacParams params = cfg.perception.mlesac;
    params.seed = derive_seed(seed, 0x9135, 0);

    FrameEstimate frame;
    if (synthetic) {
        double x = 0.0, y = 0.0, yaw = 0.0;
        char comma;
        std::istringstream ss(pose_text);
        if (!(ss >> x >> comma >> y >> comma >> yaw)) {
            throw ParseError("--pose expects 'x,y,yaw'");
        }
        BrickPose truth;
        truth.position = {x, y, cfg.conveyor.plane_z + 0.5 * dims.h};
        truth.yaw = yaw;
        const DepthImage depth =
            render_depth(truth, dims, cfg.conveyor.plane_z, cfg.perception.camera,
                         noise, derive_seed(seed, 0x4e01, 0));
        if (save_depth) {
            fs::create_directories(cfg.out_dir);
            write_pgm(depth, fs::path(cfg.out_dir) / "depth.pgm");
        }
        frame = estimate_frame(depth, cfg.perception.camera, dims, params,
                               cfg.perception.band_min, cfg.perception.band_max);
    } else {
        const PointCloud cloud = read_cloud(cloud_path);
        const auto t0 = std::chrono::steady_clock::now();
        const MlesacResult fit = mlesac_plane(cloud, params);
        const PointCloud roi =
            filter_roi(cloud, fit.plane, cfg.perception.band_min, cfg.perception.band_max);
        frame.pose = estimate_brick_pose(roi, fit.plane, dims);
        frame.plane = fit.plane;
        frame.pose.timestamp_ms = std::chrono::duration<double, std::milli>(
                                      std::chrono::steady_clock::now() - t0)
                                      .count();
    }

    const double yaw = brick_yaw_from_box(frame.pose.box, dims);
    char line[256];
    std::snprintf(line, sizeof line,
                  "estimate: x=%.6f y=%.6f yaw=%.6f top_height=%.6f time_ms=%.3f\n",
                  frame.pose.box.center.x, frame.pose.box.center.y, yaw, frame.pose.z,
                  frame.pose.timestamp_ms);
    std::cout << line;

    fs::create_directories(cfg.out_dir);
    std::ostringstream doc;
    doc << "{\n  \"schema\": \"spiralbrick/estimate/1\",\n";
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "  \"x\": %.12g,\n  \"y\": %.12g,\n  \"yaw\": %.12g,\n"
                  "  \"top_height\": %.12g,\n  \"half_extents\": [%.12g, %.12g],\n"
                  "  \"time_ms\": %.12g\n}\n",
                  frame.pose.box.center.x, frame.pose.box.center.y, yaw, frame.pose.z,
                  frame.pose.box.a, frame.pose.box.b, frame.pose.timestamp_ms);
    doc << buf;
    save_text(fs::path(cfg.out_dir) / "estimate.json", doc.str());
    return 0;
}

int run_simulate(const RunConfig& cfg, bool save_clouds) {
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    save_text(dir / "config.json", config_to_json(cfg));

    const ColumnModel model = build_column(cfg.column);
    save_text(dir / "model.json", model_to_json(model));

    AssemblyConfig asmcfg = assembly_config(cfg);
    const AssemblyLog log = run_assembly(model, asmcfg, cfg.seed);
    save_text(dir / "log.json", log_to_json(log));

    if (save_clouds) {
        const fs::path clouds = dir / "clouds";
        fs::create_directories(clouds);
        for (const ExecutionRecord& rec : log.records) {
            const DepthImage depth = render_depth(
                rec.spawn_truth, cfg.column.dims, cfg.conveyor.plane_z,
                cfg.perception.camera, cfg.perception.noise_sigma,
                derive_seed(cfg.seed, 0x4e01,
                            std::size_t(rec.brick_id) * 64 +
                                std::size_t(rec.attempts - 1)));
            const PointCloud cloud = backproject(depth, cfg.perception.camera);
            char name[32];
            std::snprintf(name, sizeof name, "brick_%04d.ply", rec.brick_id);
            write_ply(cloud, clouds / name);
        }
    }

    const MetricsSummary summary = aggregate(log);
    std::cout << "simulated " << log.records.size() << " bricks\n"
              << "mean position error: " << summary.position_stats.mean << " m\n"
              << "mean pose time: " << summary.pose_time_stats.mean << " s\n"
              << "mean trajectory time: " << summary.traj_time_stats.mean << " s\n"
              << "run directory: " << dir.string() << "\n";
    return 0;
}

int run_report(const std::string& run_dir) {
    const fs::path dir(run_dir);
    const AssemblyLog log = log_from_json(load_text(dir / "log.json"));
    const MetricsSummary summary = aggregate(log);

    const fs::path report = dir / "report";
    fs::create_directories(report);
    emit_csv(summary, report / "metrics.csv");
    {
        std::ofstream out(report / "aggregates.csv");
        if (!out) throw IoError("cannot open aggregates.csv");
        emit_aggregates_csv(summary, out);
    }
    const auto plots = emit_svg_plots(summary, report);

    std::cout << "report: " << summary.size() << " bricks\n"
              << "  position error mean/max: " << summary.position_stats.mean << " / "
              << summary.position_stats.max << " m\n"
              << "  orientation diff mean/max: "
              << summary.orientation_stats.mean * 180.0 / kPi << " / "
              << summary.orientation_stats.max * 180.0 / kPi << " deg\n"
              << "  pose time mean: " << summary.pose_time_stats.mean << " s\n"
              << "  trajectory time mean: " << summary.traj_time_stats.mean << " s\n"
              << "  files: " << (report / "metrics.csv").string() << " + "
              << plots.size() << " plots\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spiral brick column toolkit: model generation, depth-based pose "
                 "estimation, and pick-and-place simulation"};
    app.require_subcommand(1);

    ConfigSource src;
    std::optional<std::uint64_t> seed;
    std::optional<double> noise;
    std::optional<int> retries;
    std::string out;
    bool obj = false, svg = false, save_clouds = false, save_depth = false;
    bool synthetic = false;
    std::string cloud_path, pose_text = "0.8,0,0";
    std::string run_dir;

    auto* generate = app.add_subcommand("generate", "Build a column model and export it");
    add_config_options(generate, src);
    generate->add_option("--out", out, "Output directory");
    generate->add_flag("--obj", obj, "Also write a triangulated OBJ mesh");
    generate->add_flag("--svg", svg, "Also write a top-view SVG");

    auto* estimate =
        app.add_subcommand("estimate", "Estimate a brick pose from a point cloud "
                                       "or a synthetic scene");
    add_config_options(estimate, src);
    estimate->add_option("--cloud", cloud_path, "Input point cloud (.ply or .csv)");
    estimate->add_flag("--synthetic", synthetic, "Render a synthetic scene instead");
    estimate->add_option("--pose", pose_text, "Synthetic brick pose as x,y,yaw");
    estimate->add_option("--noise", noise, "Depth noise sigma in meters");
    estimate->add_option("--seed", seed, "Seed override");
    estimate->add_option("--out", out, "Output directory");
    estimate->add_flag("--save-depth", save_depth, "Write the synthetic depth as PGM");

    auto* simulate =
        app.add_subcommand("simulate", "Run the full pick-and-place assembly loop");
    add_config_options(simulate, src);
    simulate->add_option("--out", out, "Run directory");
    simulate->add_option("--seed", seed, "Seed override");
    simulate->add_option("--noise", noise, "Depth noise sigma override");
    simulate->add_option("--retries", retries, "Estimate retries per brick");
    simulate->add_flag("--save-clouds", save_clouds, "Persist per-brick point clouds");

    auto* report = app.add_subcommand("report", "Compute metrics files from a run "
                                                "directory");
    report->add_option("run_dir", run_dir, "Directory produced by simulate")
        ->required();

    auto* presets = app.add_subcommand("presets", "List built-in configurations");

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets->parsed()) {
            for (const std::string& name : preset_names()) std::cout << name << "\n";
            return 0;
        }
        if (report->parsed()) return run_report(run_dir);

        RunConfig cfg = load_config(src);
        apply_overrides(cfg, seed, noise, retries, out);

        if (generate->parsed()) return run_generate(cfg, obj, svg);
        if (estimate->parsed()) {
            if (!synthetic && cloud_path.empty()) {
                throw ParseError("estimate: provide --cloud FILE or --synthetic");
            }
            return run_estimate(cfg, cloud_path, synthetic, pose_text,
                                noise.value_or(cfg.perception.noise_sigma), cfg.seed,
                                save_depth);
        }
        if (simulate->parsed()) return run_simulate(cfg, save_clouds);
    } catch (const Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: Unexpected: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
