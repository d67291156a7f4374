#include <spiralbrick/serialize.hpp>

#include <spiralbrick/errors.hpp>

#include "json_detail.hpp"

#include <fstream>
#include <sstream>

namespace spiralbrick {

using detail::Json;

namespace {

constexpr const char* kModelSchema = "spiralbrick/model/1";
constexpr const char* kLogSchema = "spiralbrick/log/1";

Json parse_document(const std::string& text, const char* what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

void check_schema(const Json& j, const char* expected, const char* what) {
    if (!j.contains("schema") || j.at("schema") != expected) {
        throw ParseError(std::string(what) + ": expected schema '" + expected + "'");
    }
}

}  // namespace

std::string model_to_json(const ColumnModel& model) {
    Json j;
    j["schema"] = kModelSchema;
    j["spec"] = Json{{"dims", detail::dims_json(model.spec.dims)},
                     {"layers", model.spec.layers},
                     {"phi", model.spec.phi},
                     {"base", detail::base_json(model.spec.base, true)}};
    j["closure_residual"] = model.closure_residual;
    Json placements = Json::array();
    for (const Placement& p : model.placements) {
        placements.push_back(Json{{"layer", p.layer},
                                  {"index", p.index_in_layer},
                                  {"position", detail::vec3_json(p.pose.position)},
                                  {"yaw", p.pose.yaw}});
    }
    j["placements"] = std::move(placements);
    return j.dump(2) + "\n";
}

ColumnModel model_from_json(const std::string& text) {
    const Json j = parse_document(text, "model document");
    check_schema(j, kModelSchema, "model document");
    try {
        ColumnModel model;
        const Json& spec = j.at("spec");
        model.spec.dims = detail::dims_from(spec.at("dims"));
        model.spec.layers = spec.at("layers").get<int>();
        model.spec.phi = spec.at("phi").get<double>();
        model.spec.base = detail::base_from(spec.at("base"), 0.01, 0.05);
        model.closure_residual = j.value("closure_residual", 0.0);
        for (const Json& p : j.at("placements")) {
            model.placements.push_back({p.at("layer").get<int>(),
                                        p.at("index").get<int>(),
                                        {detail::vec3_from(p.at("position")),
                                         p.at("yaw").get<double>()}});
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model document: ") + e.what());
    }
}

std::string log_to_json(const AssemblyLog& log) {
    Json j;
    j["schema"] = kLogSchema;
    j["seed"] = log.seed;
    Json records = Json::array();
    for (const ExecutionRecord& r : log.records) {
        records.push_back(Json{{"brick_id", r.brick_id},
                               {"layer", r.layer},
                               {"index", r.index_in_layer},
                               {"commanded_target", detail::pose_json(r.commanded_target)},
                               {"achieved", detail::pose_json(r.achieved)},
                               {"spawn_truth", detail::pose_json(r.spawn_truth)},
                               {"spawn_estimate", detail::pose_json(r.spawn_estimate)},
                               {"trajectory_time_s", r.trajectory_time_s},
                               {"pose_estimate_time_s", r.pose_estimate_time_s},
                               {"attempts", r.attempts}});
    }
    j["records"] = std::move(records);
    return j.dump(2) + "\n";
}

AssemblyLog log_from_json(const std::string& text) {
    const Json j = parse_document(text, "log document");
    check_schema(j, kLogSchema, "log document");
    try {
        AssemblyLog log;
        log.seed = j.value("seed", std::uint64_t(0));
        for (const Json& r : j.at("records")) {
            ExecutionRecord rec;
            rec.brick_id = r.at("brick_id").get<int>();
            rec.layer = r.at("layer").get<int>();
            rec.index_in_layer = r.at("index").get<int>();
            rec.commanded_target = detail::pose_from(r.at("commanded_target"));
            rec.achieved = detail::pose_from(r.at("achieved"));
            rec.spawn_truth = detail::pose_from(r.at("spawn_truth"));
            rec.spawn_estimate = detail::pose_from(r.at("spawn_estimate"));
            rec.trajectory_time_s = r.at("trajectory_time_s").get<double>();
            rec.pose_estimate_time_s = r.at("pose_estimate_time_s").get<double>();
            rec.attempts = r.value("attempts", 1);
            log.records.push_back(rec);
        }
        return log;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("log document: ") + e.what());
    }
}

void save_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(text.data(), std::streamsize(text.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

std::string load_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace spiralbrick
