#pragma once

#include <spiralbrick/executor.hpp>
#include <spiralbrick/geometry.hpp>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace spiralbrick {

/// Euclidean distance between two points.
double position_error(const Vec3& a, const Vec3& b);

/// Smallest difference between two rectangle orientations: min over k of
/// |a - b + k*pi|, always in [0, pi/2].
double yaw_difference(double a, double b);

struct SeriesStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

SeriesStats series_stats(const std::vector<double>& series);

struct MetricsSummary {
    std::vector<int> brick_ids;
    std::vector<int> layers;
    std::vector<double> position_error_m;
    std::vector<double> orientation_diff_rad;
    std::vector<double> pose_time_s;
    std::vector<double> traj_time_s;
    SeriesStats position_stats;
    SeriesStats orientation_stats;
    SeriesStats pose_time_stats;
    SeriesStats traj_time_stats;

    std::size_t size() const { return brick_ids.size(); }
};

/// Per-brick error and timing series from an assembly log, in brick order.
/// Errors compare the perception estimate against the ground-truth spawn
/// pose. Throws EmptyLog for an empty log.
MetricsSummary aggregate(const AssemblyLog& log);

/// CSV with one header line and one row per brick; orientation is emitted
/// in degrees, values carry 9 significant digits.
void emit_csv(const MetricsSummary& summary, std::ostream& out);
void emit_csv(const MetricsSummary& summary, const std::filesystem::path& path);

/// Parses a CSV produced by emit_csv back into a summary (aggregates are
/// recomputed).
MetricsSummary parse_metrics_csv(std::istream& in);

void emit_aggregates_csv(const MetricsSummary& summary, std::ostream& out);

/// One SVG line chart per metric; returns the four file paths.
std::vector<std::filesystem::path> emit_svg_plots(const MetricsSummary& summary,
                                                  const std::filesystem::path& dir);

}  // namespace spiralbrick
