#include <spiralbrick/io.hpp>

#include <spiralbrick/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace spiralbrick {

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return in;
}

}  // namespace

// ---- OBJ -------------------------------------------------------------------

void write_obj(const ColumnModel& model, std::ostream& out) {
    out << "# spiralbrick column, " << model.placements.size() << " bricks\n";
    const BrickDims& d = model.spec.dims;
    std::size_t base = 1;  // OBJ indices are 1-based
    for (const Placement& pl : model.placements) {
        const double c = std::cos(pl.pose.yaw);
        const double s = std::sin(pl.pose.yaw);
        const Vec3& ctr = pl.pose.position;
        for (int corner = 0; corner < 8; ++corner) {
            const double sl = (corner & 1) ? 0.5 * d.l : -0.5 * d.l;
            const double sw = (corner & 2) ? 0.5 * d.w : -0.5 * d.w;
            const double sh = (corner & 4) ? 0.5 * d.h : -0.5 * d.h;
            const double x = ctr.x + c * sl - s * sw;
            const double y = ctr.y + s * sl + c * sw;
            const double z = ctr.z + sh;
            out << "v " << fmt9(x) << ' ' << fmt9(y) << ' ' << fmt9(z) << '\n';
        }
        // Two triangles per cuboid face, outward winding.
        static const int faces[12][3] = {
            {0, 2, 1}, {1, 2, 3},  // bottom
            {4, 5, 6}, {5, 7, 6},  // top
            {0, 1, 4}, {1, 5, 4},  // -w side
            {2, 6, 3}, {3, 6, 7},  // +w side
            {0, 4, 2}, {2, 4, 6},  // -l side
            {1, 3, 5}, {3, 7, 5},  // +l side
        };
        for (const auto& f : faces) {
            out << "f " << base + f[0] << ' ' << base + f[1] << ' ' << base + f[2]
                << '\n';
        }
        base += 8;
    }
}

void write_obj(const ColumnModel& model, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_obj(model, out);
    if (!out) throw IoError("write failed: " + path.string());
}

// ---- SVG top view -----------------------------------------------------------

namespace {

std::string layer_color(int layer, int layers) {
    // blue (bottom) to red (top)
    const double t = layers > 1 ? double(layer) / double(layers - 1) : 0.0;
    const int r = int(std::lround(31 + t * (214 - 31)));
    const int g = int(std::lround(119 + t * (39 - 119)));
    const int b = int(std::lround(180 + t * (40 - 180)));
    char buf[24];
    std::snprintf(buf, sizeof buf, "rgb(%d,%d,%d)", r, g, b);
    return buf;
}

}  // namespace

void write_svg_topview(const ColumnModel& model, int layer, std::ostream& out) {
    double extent = 0.1;
    for (const Placement& pl : model.placements) {
        const OrientedBox2D box = footprint_box(pl.pose, model.spec.dims);
        for (const Vec2& c : box.corners()) {
            extent = std::max({extent, std::abs(c.x), std::abs(c.y)});
        }
    }
    extent *= 1.05;
    const double size = 640.0;
    const double scale = size / (2.0 * extent);
    auto sx = [&](double x) { return (x + extent) * scale; };
    auto sy = [&](double y) { return (extent - y) * scale; };
    auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
        << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << " " << size
        << "\">\n<rect width=\"" << size << "\" height=\"" << size
        << "\" fill=\"white\"/>\n";
    for (const Placement& pl : model.placements) {
        if (layer >= 0 && pl.layer != layer) continue;
        const OrientedBox2D box = footprint_box(pl.pose, model.spec.dims);
        out << "<polygon points=\"";
        bool first = true;
        for (const Vec2& c : box.corners()) {
            if (!first) out << ' ';
            first = false;
            out << fmt(sx(c.x)) << ',' << fmt(sy(c.y));
        }
        out << "\" fill=\"" << layer_color(pl.layer, model.spec.layers)
            << "\" fill-opacity=\"0.6\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    }
    out << "</svg>\n";
}

void write_svg_topview(const ColumnModel& model, int layer,
                       const std::filesystem::path& path) {
    auto out = open_out(path);
    write_svg_topview(model, layer, out);
    if (!out) throw IoError("write failed: " + path.string());
}

// ---- PLY --------------------------------------------------------------------

void write_ply(const PointCloud& cloud, std::ostream& out) {
    out << "ply\nformat ascii 1.0\nelement vertex " << cloud.points.size()
        << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
    for (const Vec3& p : cloud.points) {
        out << fmt9(p.x) << ' ' << fmt9(p.y) << ' ' << fmt9(p.z) << '\n';
    }
}

void write_ply(const PointCloud& cloud, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_ply(cloud, out);
    if (!out) throw IoError("write failed: " + path.string());
}

PointCloud read_ply(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "ply") {
        throw ParseError("ply: missing magic line");
    }
    std::size_t count = 0;
    bool ascii = false;
    while (std::getline(in, line)) {
        if (line.rfind("format ", 0) == 0) {
            ascii = line.find("ascii") != std::string::npos;
        } else if (line.rfind("element vertex ", 0) == 0) {
            count = std::stoul(line.substr(15));
        } else if (line == "end_header") {
            break;
        }
    }
    if (!ascii) throw ParseError("ply: only ascii format is supported");
    PointCloud cloud;
    cloud.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vec3 p;
        if (!(in >> p.x >> p.y >> p.z)) {
            throw ParseError("ply: truncated vertex list at row " + std::to_string(i));
        }
        cloud.points.push_back(p);
    }
    return cloud;
}

PointCloud read_ply(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_ply(in);
}

void write_cloud_csv(const PointCloud& cloud, std::ostream& out) {
    out << "x,y,z\n";
    for (const Vec3& p : cloud.points) {
        out << fmt9(p.x) << ',' << fmt9(p.y) << ',' << fmt9(p.z) << '\n';
    }
}

PointCloud read_cloud_csv(std::istream& in) {
    PointCloud cloud;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("x,", 0) == 0) continue;  // header
        std::stringstream row(line);
        std::string cell;
        Vec3 p;
        double* coord[3] = {&p.x, &p.y, &p.z};
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(row, cell, ',')) {
                throw ParseError("cloud csv line " + std::to_string(lineno) +
                                 ": expected 3 fields");
            }
            try {
                *coord[i] = std::stod(cell);
            } catch (const std::exception&) {
                throw ParseError("cloud csv line " + std::to_string(lineno) +
                                 ": malformed number '" + cell + "'");
            }
        }
        cloud.points.push_back(p);
    }
    return cloud;
}

PointCloud read_cloud(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".ply") return read_ply(path);
    if (ext == ".csv") {
        auto in = open_in(path);
        return read_cloud_csv(in);
    }
    throw ParseError("read_cloud: unsupported extension '" + ext +
                     "' (expected .ply or .csv)");
}

// ---- PGM --------------------------------------------------------------------

void write_pgm(const DepthImage& depth, std::ostream& out) {
    out << "P5\n" << depth.width << " " << depth.height << "\n65535\n";
    for (const double d : depth.depths) {
        const long mm = std::lround(std::clamp(d, 0.0, 65.535) * 1000.0);
        const unsigned value = unsigned(std::clamp(mm, 0L, 65535L));
        out.put(char((value >> 8) & 0xff));
        out.put(char(value & 0xff));
    }
}

void write_pgm(const DepthImage& depth, const std::filesystem::path& path) {
    auto out = open_out(path, true);
    write_pgm(depth, out);
    if (!out) throw IoError("write failed: " + path.string());
}

DepthImage read_pgm(std::istream& in) {
    std::string magic;
    in >> magic;
    if (magic != "P5") throw ParseError("pgm: expected P5 magic");
    int width = 0, height = 0, maxval = 0;
    in >> width >> height >> maxval;
    if (!in || width <= 0 || height <= 0) throw ParseError("pgm: bad header");
    if (maxval != 65535) throw ParseError("pgm: expected 16-bit maxval 65535");
    in.get();  // single whitespace after header
    DepthImage img;
    img.width = width;
    img.height = height;
    img.depths.resize(std::size_t(width) * height);
    for (double& d : img.depths) {
        const int hi = in.get();
        const int lo = in.get();
        if (hi < 0 || lo < 0) throw ParseError("pgm: truncated pixel data");
        d = double((hi << 8) | lo) / 1000.0;
    }
    return img;
}

void write_depth_csv(const DepthImage& depth, std::ostream& out) {
    for (int v = 0; v < depth.height; ++v) {
        for (int u = 0; u < depth.width; ++u) {
            if (u) out << ',';
            out << fmt9(depth.at(u, v));
        }
        out << '\n';
    }
}

DepthImage read_depth_csv(std::istream& in) {
    DepthImage img;
    std::string line;
    std::vector<double> row_values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        row_values.clear();
        while (std::getline(row, cell, ',')) row_values.push_back(std::stod(cell));
        if (img.width == 0) {
            img.width = int(row_values.size());
        } else if (int(row_values.size()) != img.width) {
            throw ParseError("depth csv: ragged rows");
        }
        img.depths.insert(img.depths.end(), row_values.begin(), row_values.end());
        ++img.height;
    }
    return img;
}

}  // namespace spiralbrick
