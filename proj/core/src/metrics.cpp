#include <spiralbrick/metrics.hpp>

#include <spiralbrick/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace spiralbrick {

double position_error(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

double yaw_difference(double a, double b) {
    double d = std::fmod(a - b, kPi);
    if (d < 0.0) d += kPi;
    return std::min(d, kPi - d);
}

SeriesStats series_stats(const std::vector<double>& series) {
    SeriesStats s;
    if (series.empty()) return s;
    s.min = s.max = series.front();
    double sum = 0.0;
    for (const double v : series) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        sum += v;
    }
    s.mean = sum / double(series.size());
    return s;
}

MetricsSummary aggregate(const AssemblyLog& log) {
    if (log.records.empty()) throw EmptyLog("aggregate: assembly log has no records");

    MetricsSummary s;
    for (const ExecutionRecord& rec : log.records) {
        s.brick_ids.push_back(rec.brick_id);
        s.layers.push_back(rec.layer);
        s.position_error_m.push_back(
            position_error(rec.spawn_estimate.position, rec.spawn_truth.position));
        s.orientation_diff_rad.push_back(
            yaw_difference(rec.spawn_estimate.yaw, rec.spawn_truth.yaw));
        s.pose_time_s.push_back(rec.pose_estimate_time_s);
        s.traj_time_s.push_back(rec.trajectory_time_s);
    }
    s.position_stats = series_stats(s.position_error_m);
    s.orientation_stats = series_stats(s.orientation_diff_rad);
    s.pose_time_stats = series_stats(s.pose_time_s);
    s.traj_time_stats = series_stats(s.traj_time_s);
    return s;
}

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string fmt2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

constexpr double kRadToDeg = 180.0 / kPi;

}  // namespace

void emit_csv(const MetricsSummary& summary, std::ostream& out) {
    out << "brick_id,layer,position_error_m,orientation_diff_deg,pose_time_s,"
           "traj_time_s\n";
    for (std::size_t i = 0; i < summary.size(); ++i) {
        out << summary.brick_ids[i] << ',' << summary.layers[i] << ','
            << fmt9(summary.position_error_m[i]) << ','
            << fmt9(summary.orientation_diff_rad[i] * kRadToDeg) << ','
            << fmt9(summary.pose_time_s[i]) << ',' << fmt9(summary.traj_time_s[i])
            << '\n';
    }
}

void emit_csv(const MetricsSummary& summary, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("emit_csv: cannot open " + path.string());
    emit_csv(summary, out);
    if (!out) throw IoError("emit_csv: write failed for " + path.string());
}

MetricsSummary parse_metrics_csv(std::istream& in) {
    MetricsSummary s;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("metrics csv: missing header");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 6) {
            throw ParseError("metrics csv line " + std::to_string(lineno) +
                             ": expected 6 fields, got " + std::to_string(cells.size()));
        }
        try {
            s.brick_ids.push_back(std::stoi(cells[0]));
            s.layers.push_back(std::stoi(cells[1]));
            s.position_error_m.push_back(std::stod(cells[2]));
            s.orientation_diff_rad.push_back(std::stod(cells[3]) / kRadToDeg);
            s.pose_time_s.push_back(std::stod(cells[4]));
            s.traj_time_s.push_back(std::stod(cells[5]));
        } catch (const std::exception&) {
            throw ParseError("metrics csv line " + std::to_string(lineno) +
                             ": malformed number");
        }
    }
    s.position_stats = series_stats(s.position_error_m);
    s.orientation_stats = series_stats(s.orientation_diff_rad);
    s.pose_time_stats = series_stats(s.pose_time_s);
    s.traj_time_stats = series_stats(s.traj_time_s);
    return s;
}

void emit_aggregates_csv(const MetricsSummary& summary, std::ostream& out) {
    out << "metric,mean,min,max\n";
    auto row = [&](const char* name, const SeriesStats& st, double scale) {
        out << name << ',' << fmt9(st.mean * scale) << ',' << fmt9(st.min * scale)
            << ',' << fmt9(st.max * scale) << '\n';
    };
    row("position_error_m", summary.position_stats, 1.0);
    row("orientation_diff_deg", summary.orientation_stats, kRadToDeg);
    row("pose_time_s", summary.pose_time_stats, 1.0);
    row("traj_time_s", summary.traj_time_stats, 1.0);
}

namespace {

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& y_label, const std::vector<double>& series,
                      double scale) {
    std::ofstream out(path);
    if (!out) throw IoError("emit_svg_plots: cannot open " + path.string());

    const double width = 720.0, height = 400.0;
    const double ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;

    double y_max = 0.0;
    for (const double v : series) y_max = std::max(y_max, v * scale);
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.05;
    const std::size_t n = series.size();

    auto px = [&](std::size_t i) {
        return ml + (n > 1 ? plot_w * double(i) / double(n - 1) : 0.5 * plot_w);
    };
    auto py = [&](double v) { return mt + plot_h * (1.0 - v * scale / y_max); };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n"
        << "<text x=\"" << fmt2(width / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // axes
    out << "<line x1=\"" << fmt2(ml) << "\" y1=\"" << fmt2(mt) << "\" x2=\"" << fmt2(ml)
        << "\" y2=\"" << fmt2(mt + plot_h) << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << fmt2(ml) << "\" y1=\"" << fmt2(mt + plot_h) << "\" x2=\""
        << fmt2(ml + plot_w) << "\" y2=\"" << fmt2(mt + plot_h)
        << "\" stroke=\"black\"/>\n";

    for (int t = 0; t <= 5; ++t) {
        const double v = y_max * t / 5.0;
        const double yy = mt + plot_h * (1.0 - double(t) / 5.0);
        char label[40];
        std::snprintf(label, sizeof label, "%.3g", v);
        out << "<line x1=\"" << fmt2(ml - 4) << "\" y1=\"" << fmt2(yy) << "\" x2=\""
            << fmt2(ml) << "\" y2=\"" << fmt2(yy) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fmt2(ml - 8) << "\" y=\"" << fmt2(yy + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << label << "</text>\n";
    }
    const int x_ticks = std::min<std::size_t>(n, 6);
    for (int t = 0; t < x_ticks; ++t) {
        const std::size_t i =
            x_ticks > 1 ? std::size_t(double(t) * double(n - 1) / (x_ticks - 1)) : 0;
        const double x = px(i);
        out << "<line x1=\"" << fmt2(x) << "\" y1=\"" << fmt2(mt + plot_h) << "\" x2=\""
            << fmt2(x) << "\" y2=\"" << fmt2(mt + plot_h + 4) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fmt2(x) << "\" y=\"" << fmt2(mt + plot_h + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << i << "</text>\n";
    }
    out << "<text x=\"" << fmt2(ml + plot_w / 2) << "\" y=\"" << fmt2(height - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           "brick index</text>\n"
        << "<text x=\"16\" y=\"" << fmt2(mt + plot_h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 " << fmt2(mt + plot_h / 2) << ")\">" << y_label
        << "</text>\n";

    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out << ' ';
        out << fmt2(px(i)) << ',' << fmt2(py(series[i]));
    }
    out << "\"/>\n</svg>\n";
    if (!out) throw IoError("emit_svg_plots: write failed for " + path.string());
}

}  // namespace

std::vector<std::filesystem::path> emit_svg_plots(const MetricsSummary& summary,
                                                  const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> files = {
        dir / "position_error.svg",
        dir / "orientation_diff.svg",
        dir / "pose_time.svg",
        dir / "trajectory_time.svg",
    };
    write_line_chart(files[0], "Position Error", "position error [m]",
                     summary.position_error_m, 1.0);
    write_line_chart(files[1], "Orientation Difference", "orientation diff [deg]",
                     summary.orientation_diff_rad, kRadToDeg);
    write_line_chart(files[2], "Pose Estimation Time", "pose time [s]",
                     summary.pose_time_s, 1.0);
    write_line_chart(files[3], "Trajectory Time", "trajectory time [s]",
                     summary.traj_time_s, 1.0);
    return files;
}

}  // namespace spiralbrick
