#pragma once

#include <spiralbrick/column.hpp>
#include <spiralbrick/errors.hpp>
#include <spiralbrick/geometry.hpp>

#include <json.hpp>

#include <string>

namespace spiralbrick::detail {

using Json = nlohmann::ordered_json;

inline Json vec3_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }
inline Json vec2_json(const Vec2& v) { return Json::array({v.x, v.y}); }

inline Vec3 vec3_from(const Json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}
inline Vec2 vec2_from(const Json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline Json pose_json(const BrickPose& p) {
    return Json{{"position", vec3_json(p.position)}, {"yaw", p.yaw}};
}
inline BrickPose pose_from(const Json& j) {
    return {vec3_from(j.at("position")), j.at("yaw").get<double>()};
}

inline Json dims_json(const BrickDims& d) {
    return Json{{"l", d.l}, {"w", d.w}, {"h", d.h}};
}
inline BrickDims dims_from(const Json& j) {
    return {j.at("l").get<double>(), j.at("w").get<double>(), j.at("h").get<double>()};
}

/// Family object keyed by family name. Margins are embedded only where the
/// document is self-contained (model files); configs carry them top-level.
inline Json base_json(const BaseSpec& base, bool include_margins) {
    Json j;
    if (const auto* seg = std::get_if<SegmentBaseSpec>(&base)) {
        const bool parallel = std::abs(seg->theta - kPi) <= 1e-9;
        Json body{{"segments", seg->segments}, {"blocks", seg->blocks}};
        if (include_margins) body["lambda"] = seg->lambda;
        j[parallel ? "parallel" : "orthogonal"] = body;
    } else if (const auto* poly = std::get_if<PolygonBaseSpec>(&base)) {
        Json body{{"turning_angles", poly->turning_angles},
                  {"blocks_per_edge", poly->blocks_per_edge}};
        if (include_margins) body["lambda"] = poly->lambda;
        j["polygon"] = body;
    } else if (const auto* curve = std::get_if<PolynomialBaseSpec>(&base)) {
        Json body{{"coefficients", curve->coefficients},
                  {"domain", Json::array({curve->x_min, curve->x_max})}};
        if (include_margins) body["kappa"] = curve->kappa;
        j["polynomial"] = body;
    }
    return j;
}

/// Parses a family object (one of parallel/orthogonal/polygon/polynomial)
/// applying the given margins.
inline BaseSpec base_from(const Json& j, double lambda, double kappa) {
    if (j.contains("parallel") || j.contains("orthogonal")) {
        const bool parallel = j.contains("parallel");
        const Json& body = parallel ? j.at("parallel") : j.at("orthogonal");
        SegmentBaseSpec seg;
        seg.theta = parallel ? kPi : 0.5 * kPi;
        seg.lambda = body.value("lambda", lambda);
        if (body.contains("segments")) seg.segments = body.at("segments").get<int>();
        if (body.contains("blocks")) {
            const Json& blocks = body.at("blocks");
            if (blocks.is_number_integer()) {
                if (!body.contains("segments")) {
                    throw ParseError("segment base: 'segments' required when "
                                     "'blocks' is a single count");
                }
                seg.blocks.assign(std::size_t(seg.segments), blocks.get<int>());
            } else {
                seg.blocks = blocks.get<std::vector<int>>();
                if (!body.contains("segments")) seg.segments = int(seg.blocks.size());
            }
        }
        return seg;
    }
    if (j.contains("polygon")) {
        const Json& body = j.at("polygon");
        PolygonBaseSpec poly;
        poly.lambda = body.value("lambda", lambda);
        poly.blocks_per_edge = body.value("blocks_per_edge", 1);
        if (body.contains("turning_angles")) {
            poly.turning_angles = body.at("turning_angles").get<std::vector<double>>();
        } else if (body.contains("edges")) {
            const int n = body.at("edges").get<int>();
            if (n >= 3) {
                poly.turning_angles.assign(std::size_t(n), 2.0 * kPi / double(n));
            }
        }
        return poly;
    }
    if (j.contains("polynomial")) {
        const Json& body = j.at("polynomial");
        PolynomialBaseSpec curve;
        curve.kappa = body.value("kappa", kappa);
        if (body.contains("coefficients")) {
            curve.coefficients = body.at("coefficients").get<std::vector<double>>();
        }
        if (body.contains("domain")) {
            curve.x_min = body.at("domain").at(0).get<double>();
            curve.x_max = body.at("domain").at(1).get<double>();
        }
        return curve;
    }
    throw ParseError("column: no base family "
                     "(parallel/orthogonal/polygon/polynomial) present");
}

}  // namespace spiralbrick::detail
