#pragma once

#include <spiralbrick/column.hpp>
#include <spiralbrick/perception.hpp>

#include <filesystem>
#include <iosfwd>

namespace spiralbrick {

/// Triangulated ASCII OBJ: 8 vertices and 12 faces per brick, world
/// coordinates.
void write_obj(const ColumnModel& model, std::ostream& out);
void write_obj(const ColumnModel& model, const std::filesystem::path& path);

/// Top view as plain SVG 1.1: one footprint rectangle per brick, fill
/// graded by layer index. layer = -1 draws every layer.
void write_svg_topview(const ColumnModel& model, int layer, std::ostream& out);
void write_svg_topview(const ColumnModel& model, int layer,
                       const std::filesystem::path& path);

// ---- point clouds ---------------------------------------------------------

void write_ply(const PointCloud& cloud, std::ostream& out);
void write_ply(const PointCloud& cloud, const std::filesystem::path& path);
PointCloud read_ply(std::istream& in);
PointCloud read_ply(const std::filesystem::path& path);

void write_cloud_csv(const PointCloud& cloud, std::ostream& out);
PointCloud read_cloud_csv(std::istream& in);

/// Reads a cloud by extension: .ply or .csv.
PointCloud read_cloud(const std::filesystem::path& path);

// ---- depth images ---------------------------------------------------------

/// 16-bit binary PGM, millimeter quantization, big-endian samples.
void write_pgm(const DepthImage& depth, std::ostream& out);
void write_pgm(const DepthImage& depth, const std::filesystem::path& path);
DepthImage read_pgm(std::istream& in);

void write_depth_csv(const DepthImage& depth, std::ostream& out);
DepthImage read_depth_csv(std::istream& in);

}  // namespace spiralbrick
