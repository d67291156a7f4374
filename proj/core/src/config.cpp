#include <spiralbrick/config.hpp>

#include <spiralbrick/errors.hpp>

#include "json_detail.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

namespace spiralbrick {

using detail::Json;

namespace {

constexpr const char* kConfigSchema = "spiralbrick/config/1";

void validate_config(const RunConfig& cfg, std::vector<std::string>& errs) {
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) errs.push_back(msg);
    };

    const BrickDims& d = cfg.column.dims;
    require(d.l > 0.0, "dims.l: must be > 0");
    require(d.w > 0.0, "dims.w: must be > 0");
    require(d.h > 0.0, "dims.h: must be > 0");
    require(cfg.column.layers >= 1, "column.layers: must be >= 1");
    require(std::isfinite(cfg.column.phi), "column.phi: must be finite");
    require(cfg.lambda >= 0.0, "margins.lambda: must be >= 0");
    require(cfg.kappa >= 0.0, "margins.kappa: must be >= 0");

    if (const auto* seg = std::get_if<SegmentBaseSpec>(&cfg.column.base)) {
        const bool parallel = std::abs(seg->theta - kPi) <= 1e-9;
        const char* fam = parallel ? "column.parallel" : "column.orthogonal";
        require(seg->segments >= 2, std::string(fam) + ".segments: must be >= 2");
        require(int(seg->blocks.size()) == seg->segments,
                std::string(fam) + ".blocks: expected one count per segment");
        for (int b : seg->blocks) {
            if (b < 1) {
                errs.push_back(std::string(fam) + ".blocks: every count must be >= 1");
                break;
            }
        }
        if (parallel && !seg->blocks.empty()) {
            for (int b : seg->blocks) {
                if (b != seg->blocks.front()) {
                    errs.push_back("column.parallel.blocks: all segments must carry "
                                   "equal counts");
                    break;
                }
            }
        }
        if (!parallel) {
            require(seg->segments == 4,
                    "column.orthogonal.segments: orthogonal loops need exactly 4");
            if (seg->blocks.size() == 4) {
                require(seg->blocks[0] == seg->blocks[2] &&
                            seg->blocks[1] == seg->blocks[3],
                        "column.orthogonal.blocks: opposite segments must be equal "
                        "(B1=B3, B2=B4)");
            }
        }
    } else if (const auto* poly = std::get_if<PolygonBaseSpec>(&cfg.column.base)) {
        require(poly->turning_angles.size() >= 3,
                "column.polygon: needs >= 3 edges (turning_angles or edges)");
        require(poly->blocks_per_edge >= 1,
                "column.polygon.blocks_per_edge: must be >= 1");
        if (poly->turning_angles.size() >= 3) {
            const double total = std::accumulate(poly->turning_angles.begin(),
                                                 poly->turning_angles.end(), 0.0);
            require(std::abs(total - 2.0 * kPi) <= 1e-9,
                    "column.polygon.turning_angles: must sum to 2*pi");
        }
    } else if (const auto* curve = std::get_if<PolynomialBaseSpec>(&cfg.column.base)) {
        require(!curve->coefficients.empty(),
                "column.polynomial.coefficients: must not be empty");
        require(curve->x_max > curve->x_min,
                "column.polynomial.domain: x_max must exceed x_min");
        if (!curve->coefficients.empty() && curve->x_max > curve->x_min) {
            require(std::abs(poly_eval(curve->coefficients, curve->x_min)) <= 1e-9 &&
                        std::abs(poly_eval(curve->coefficients, curve->x_max)) <= 1e-9,
                    "column.polynomial: f must vanish at both domain ends");
        }
    }

    const ExecutorConfig& ex = cfg.executor;
    require(ex.eta > 0.0, "executor.eta: must be > 0");
    require(ex.v_max > 0.0, "executor.v_max: must be > 0");
    require(ex.a_max > 0.0, "executor.a_max: must be > 0");
    require(ex.omega_max > 0.0, "executor.omega_max: must be > 0");
    require(ex.descend_clearance >= 0.0, "executor.descend_clearance: must be >= 0");
    require(ex.workspace_min.x < ex.workspace_max.x &&
                ex.workspace_min.y < ex.workspace_max.y &&
                ex.workspace_min.z < ex.workspace_max.z,
            "executor.workspace: min must be below max on every axis");

    require(cfg.conveyor.size.x > 0.0 && cfg.conveyor.size.y > 0.0,
            "conveyor.size: must be > 0");

    const CameraModel& cam = cfg.perception.camera;
    require(cam.width > 0 && cam.height > 0,
            "perception.camera: width and height must be > 0");
    require(cam.fx > 0.0 && cam.fy > 0.0, "perception.camera: fx and fy must be > 0");
    require(cam.cx >= 0.0 && cam.cx < cam.width,
            "perception.camera.cx: must lie in [0, width)");
    require(cam.cy >= 0.0 && cam.cy < cam.height,
            "perception.camera.cy: must lie in [0, height)");

    const MlesacParams& ml = cfg.perception.mlesac;
    require(ml.iterations >= 1, "perception.mlesac.iterations: must be >= 1");
    require(ml.inlier_sigma > 0.0, "perception.mlesac.inlier_sigma: must be > 0");
    require(ml.outlier_width > 0.0, "perception.mlesac.outlier_width: must be > 0");
    require(ml.em_steps >= 0, "perception.mlesac.em_steps: must be >= 0");
    require(ml.scoring_subsample >= 0,
            "perception.mlesac.scoring_subsample: must be >= 0");
    require(cfg.perception.noise_sigma >= 0.0, "perception.noise_sigma: must be >= 0");
    require(cfg.perception.band_min < cfg.perception.band_max,
            "perception.band: min must be below max");
    require(cfg.retries >= 0, "retries: must be >= 0");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!j.contains("schema") || j.at("schema") != kConfigSchema) {
        throw ParseError(std::string("config: expected schema '") + kConfigSchema + "'");
    }

    std::vector<std::string> errs;
    RunConfig cfg;
    try {
        cfg.seed = j.value("seed", std::uint64_t(42));
        cfg.out_dir = j.value("out", std::string("spiralbrick_run"));
        cfg.retries = j.value("retries", 3);

        if (j.contains("dims")) cfg.column.dims = detail::dims_from(j.at("dims"));
        if (j.contains("margins")) {
            cfg.lambda = j.at("margins").value("lambda", cfg.lambda);
            cfg.kappa = j.at("margins").value("kappa", cfg.kappa);
        }

        if (!j.contains("column")) {
            errs.push_back("column: section is required");
        } else {
            const Json& col = j.at("column");
            cfg.column.layers = col.value("layers", 17);
            cfg.column.phi = col.value("phi", kPi / 45.0);

            int families = 0;
            for (const char* key : {"parallel", "orthogonal", "polygon", "polynomial"}) {
                if (col.contains(key)) ++families;
            }
            if (families != 1) {
                errs.push_back("column: exactly one base family must be present "
                               "(found " + std::to_string(families) + ")");
            } else {
                cfg.column.base = detail::base_from(col, cfg.lambda, cfg.kappa);
            }
        }

        if (j.contains("executor")) {
            const Json& ex = j.at("executor");
            cfg.executor.eta = ex.value("eta", cfg.executor.eta);
            cfg.executor.v_max = ex.value("v_max", cfg.executor.v_max);
            cfg.executor.a_max = ex.value("a_max", cfg.executor.a_max);
            cfg.executor.omega_max = ex.value("omega_max", cfg.executor.omega_max);
            cfg.executor.descend_clearance =
                ex.value("descend_clearance", cfg.executor.descend_clearance);
            if (ex.contains("workspace")) {
                cfg.executor.workspace_min =
                    detail::vec3_from(ex.at("workspace").at("min"));
                cfg.executor.workspace_max =
                    detail::vec3_from(ex.at("workspace").at("max"));
            }
        }

        if (j.contains("conveyor")) {
            const Json& cv = j.at("conveyor");
            if (cv.contains("center")) cfg.conveyor.center = detail::vec2_from(cv.at("center"));
            if (cv.contains("size")) cfg.conveyor.size = detail::vec2_from(cv.at("size"));
            cfg.conveyor.plane_z = cv.value("plane_z", 0.0);
        }

        cfg.perception = default_perception_config(
            cfg.column.dims, {cfg.conveyor.center.x, cfg.conveyor.center.y,
                              cfg.conveyor.plane_z + 1.0});
        if (j.contains("perception")) {
            const Json& pc = j.at("perception");
            cfg.perception.noise_sigma = pc.value("noise_sigma", 0.002);
            if (pc.contains("band")) {
                cfg.perception.band_min = pc.at("band").at(0).get<double>();
                cfg.perception.band_max = pc.at("band").at(1).get<double>();
            }
            if (pc.contains("camera")) {
                const Json& cam = pc.at("camera");
                CameraModel& c = cfg.perception.camera;
                c.width = cam.value("width", c.width);
                c.height = cam.value("height", c.height);
                const double focal = cam.value("fx", c.fx);
                c = make_topdown_camera(
                    cam.contains("position") ? detail::vec3_from(cam.at("position"))
                                             : c.pose.t,
                    c.width, c.height, focal);
                c.fx = cam.value("fx", c.fx);
                c.fy = cam.value("fy", c.fy);
                c.cx = cam.value("cx", c.cx);
                c.cy = cam.value("cy", c.cy);
            }
            if (pc.contains("mlesac")) {
                const Json& ml = pc.at("mlesac");
                MlesacParams& p = cfg.perception.mlesac;
                p.iterations = ml.value("iterations", p.iterations);
                p.inlier_sigma = ml.value("inlier_sigma", p.inlier_sigma);
                p.outlier_width = ml.value("outlier_width", p.outlier_width);
                p.em_steps = ml.value("em_steps", p.em_steps);
                p.scoring_subsample = ml.value("scoring_subsample", p.scoring_subsample);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }

    validate_config(cfg, errs);
    if (!errs.empty()) throw ValidationError(errs);
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

std::string config_to_json(const RunConfig& cfg) {
    Json j;
    j["schema"] = kConfigSchema;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out_dir;
    j["dims"] = detail::dims_json(cfg.column.dims);
    j["margins"] = Json{{"lambda", cfg.lambda}, {"kappa", cfg.kappa}};

    Json col = detail::base_json(cfg.column.base, false);
    Json column;
    column["layers"] = cfg.column.layers;
    column["phi"] = cfg.column.phi;
    for (auto& [key, value] : col.items()) column[key] = value;
    j["column"] = column;

    const ExecutorConfig& ex = cfg.executor;
    j["executor"] = Json{{"eta", ex.eta},
                         {"v_max", ex.v_max},
                         {"a_max", ex.a_max},
                         {"omega_max", ex.omega_max},
                         {"descend_clearance", ex.descend_clearance},
                         {"workspace", Json{{"min", detail::vec3_json(ex.workspace_min)},
                                            {"max", detail::vec3_json(ex.workspace_max)}}}};
    j["conveyor"] = Json{{"center", detail::vec2_json(cfg.conveyor.center)},
                         {"size", detail::vec2_json(cfg.conveyor.size)},
                         {"plane_z", cfg.conveyor.plane_z}};

    const CameraModel& cam = cfg.perception.camera;
    const MlesacParams& ml = cfg.perception.mlesac;
    j["perception"] =
        Json{{"noise_sigma", cfg.perception.noise_sigma},
             {"band", Json::array({cfg.perception.band_min, cfg.perception.band_max})},
             {"camera", Json{{"width", cam.width},
                             {"height", cam.height},
                             {"fx", cam.fx},
                             {"fy", cam.fy},
                             {"cx", cam.cx},
                             {"cy", cam.cy},
                             {"position", detail::vec3_json(cam.pose.t)}}},
             {"mlesac", Json{{"iterations", ml.iterations},
                             {"inlier_sigma", ml.inlier_sigma},
                             {"outlier_width", ml.outlier_width},
                             {"em_steps", ml.em_steps},
                             {"scoring_subsample", ml.scoring_subsample}}}};
    j["retries"] = cfg.retries;
    return j.dump(2) + "\n";
}

std::vector<std::string> preset_names() {
    return {"paper_defaults", "paper_parallel", "paper_orthogonal",
            "paper_triangle", "paper_square", "paper_decagon", "paper_polynomial"};
}

RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    cfg.column.dims = {0.1, 0.5, 0.025};
    cfg.column.layers = 17;
    cfg.column.phi = kPi / 45.0;
    cfg.lambda = 0.01;
    cfg.kappa = 0.05;
    cfg.perception = default_perception_config(
        cfg.column.dims,
        {cfg.conveyor.center.x, cfg.conveyor.center.y, cfg.conveyor.plane_z + 1.0});

    if (name == "paper_parallel") {
        cfg.column.base = SegmentBaseSpec{2, {3, 3}, kPi, cfg.lambda};
    } else if (name == "paper_orthogonal") {
        cfg.column.base = SegmentBaseSpec{4, {2, 1, 2, 1}, 0.5 * kPi, cfg.lambda};
    } else if (name == "paper_triangle") {
        cfg.column.base =
            PolygonBaseSpec{{2.0 * kPi / 3.0, 2.0 * kPi / 3.0, 2.0 * kPi / 3.0}, 2,
                            cfg.lambda};
    } else if (name == "paper_square" || name == "paper_defaults") {
        cfg.column.base = PolygonBaseSpec{
            {0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi}, 2, cfg.lambda};
    } else if (name == "paper_decagon") {
        const double t = 0.5 * kPi;
        cfg.column.base =
            PolygonBaseSpec{{t, -t, t, t, -t, t, t, -t, t, t}, 1, cfg.lambda};
    } else if (name == "paper_polynomial") {
        cfg.column.base = PolynomialBaseSpec{{0.0, 1.0, -0.5}, 0.0, 2.0, cfg.kappa};
    } else {
        throw ParseError("unknown preset '" + name + "'");
    }
    return cfg;
}

AssemblyConfig assembly_config(const RunConfig& cfg) {
    return {cfg.executor, cfg.perception, cfg.conveyor, cfg.retries};
}

}  // namespace spiralbrick
