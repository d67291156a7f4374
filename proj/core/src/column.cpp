#include <spiralbrick/column.hpp>

#include <spiralbrick/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace spiralbrick {

double angle_factor(double theta) {
    if (!(theta > 0.0) || theta > kPi + 1e-15) {
        throw DomainError("angle_factor: theta must be in (0, pi], got " +
                          std::to_string(theta));
    }
    if (theta >= kPi) return 0.0;        // parallel limit
    if (theta == 0.5 * kPi) return 1.0;  // orthogonal anchor
    return std::tan(0.5 * (kPi - theta));
}

double segment_margin(int blocks, const BrickDims& dims, double theta, double lambda) {
    if (blocks < 1) throw DomainError("segment_margin: blocks must be >= 1");
    if (!(dims.l > 0.0) || !(dims.w > 0.0)) {
        throw DomainError("segment_margin: brick dimensions must be > 0");
    }
    return blocks * dims.l + angle_factor(theta) * dims.w + lambda * (blocks - 1);
}

double polynomial_margin(double theta, double w, double kappa) {
    if (!(theta >= 0.0) || theta > kPi + 1e-15) {
        throw DomainError("polynomial_margin: theta must be in [0, pi], got " +
                          std::to_string(theta));
    }
    return w * std::sin(0.5 * (kPi - theta)) + kappa;
}

double poly_eval(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
    std::vector<double> d;
    for (std::size_t i = 1; i < coeffs.size(); ++i) d.push_back(coeffs[i] * double(i));
    return d;
}

OrientedBox2D footprint_box(const BrickPose& pose, const BrickDims& dims) {
    OrientedBox2D box;
    box.center = pose.position.xy();
    if (dims.w > dims.l) {
        box.a = 0.5 * dims.w;
        box.b = 0.5 * dims.l;
        box.yaw = normalize_half_turn(pose.yaw + 0.5 * kPi);
    } else {
        box.a = 0.5 * dims.l;
        box.b = 0.5 * dims.w;
        box.yaw = normalize_half_turn(pose.yaw);
    }
    return box;
}

namespace {

void check_dims(const BrickDims& d) {
    if (!(d.l > 0.0) || !(d.w > 0.0) || !(d.h > 0.0)) {
        throw InvalidSpec("dims: l, w, h must all be > 0");
    }
}

// ---- closed loop of brick strips (polygon / orthogonal families) --------

struct LoopEdge {
    int blocks;
    double turn_after;  // exterior turn at the edge's end vertex
};

double miter_setback(double turn, double w) {
    const double mag = std::abs(turn);
    if (mag >= kPi - 1e-9) {
        throw InvalidSpec("turning angle of +/-pi makes a hairpin corner");
    }
    if (mag == 0.0) return 0.0;
    return 0.5 * w * angle_factor(kPi - mag);
}

/// Least-norm nonnegative per-edge stretches with sum(delta_k * u_k) = c.
/// Solved through the 2-D dual: minimize F(nu) = 0.5*sum(max(0, u.nu)^2) - c.nu,
/// whose gradient is U*delta(nu) - c with delta_k = max(0, u_k.nu).
std::vector<double> solve_stretch(const std::vector<Vec2>& dirs, const Vec2& c) {
    const std::size_t n = dirs.size();
    std::vector<double> delta(n, 0.0);
    const double scale = 1.0 + c.norm();
    if (c.norm() <= 1e-14 * scale) return delta;

    auto eval = [&](const Vec2& nu, Vec2& grad, double h[3]) {
        double f = -c.dot(nu);
        grad = Vec2{-c.x, -c.y};
        h[0] = h[1] = h[2] = 0.0;
        for (const Vec2& u : dirs) {
            const double s = u.dot(nu);
            if (s > 0.0) {
                f += 0.5 * s * s;
                grad = grad + u * s;
                h[0] += u.x * u.x;
                h[1] += u.x * u.y;
                h[2] += u.y * u.y;
            }
        }
        return f;
    };

    Vec2 nu = c;  // any point with the right general direction
    Vec2 grad;
    double h[3];
    double f = eval(nu, grad, h);
    for (int iter = 0; iter < 200; ++iter) {
        if (grad.norm() <= 1e-13 * scale) break;
        const double reg = 1e-12 * (1.0 + h[0] + h[2]);
        const double det = (h[0] + reg) * (h[2] + reg) - h[1] * h[1];
        Vec2 step{-((h[2] + reg) * grad.x - h[1] * grad.y) / det,
                  -((h[0] + reg) * grad.y - h[1] * grad.x) / det};
        double t = 1.0;
        Vec2 cand_grad;
        double cand_h[3];
        for (int ls = 0; ls < 60; ++ls) {
            const Vec2 cand = nu + step * t;
            const double cf = eval(cand, cand_grad, cand_h);
            if (cf <= f) {
                nu = cand;
                f = cf;
                grad = cand_grad;
                std::copy(cand_h, cand_h + 3, h);
                break;
            }
            t *= 0.5;
        }
        if (nu.norm() > 1e9 * scale) {
            throw ClosureError("loop cannot be closed by stretching edges");
        }
    }
    if (grad.norm() > 1e-9 * scale) {
        throw ClosureError("edge stretch solver did not close the loop (residual " +
                           std::to_string(grad.norm()) + " m)");
    }
    for (std::size_t k = 0; k < n; ++k) delta[k] = std::max(0.0, dirs[k].dot(nu));
    return delta;
}

BaseLayer build_edge_loop(const std::vector<LoopEdge>& edges, const BrickDims& dims,
                          double lambda, bool allow_stretch) {
    const std::size_t n = edges.size();
    std::vector<double> heading(n);
    std::vector<Vec2> dir(n);
    std::vector<double> nominal(n);

    double psi = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        heading[k] = psi;
        dir[k] = {std::cos(psi), std::sin(psi)};
        const double turn_in = edges[(k + n - 1) % n].turn_after;
        const double strip = edges[k].blocks * dims.l + lambda * (edges[k].blocks - 1);
        nominal[k] = strip + miter_setback(turn_in, dims.w) +
                     miter_setback(edges[k].turn_after, dims.w);
        psi += edges[k].turn_after;
    }

    Vec2 drift{};
    for (std::size_t k = 0; k < n; ++k) drift = drift + dir[k] * nominal[k];

    std::vector<double> stretch(n, 0.0);
    if (allow_stretch) {
        stretch = solve_stretch(dir, Vec2{-drift.x, -drift.y});
    }

    BaseLayer layer;
    Vec2 vertex{};
    for (std::size_t k = 0; k < n; ++k) {
        const double turn_in = edges[(k + n - 1) % n].turn_after;
        const double offset = miter_setback(turn_in, dims.w) + 0.5 * stretch[k];
        for (int j = 0; j < edges[k].blocks; ++j) {
            const double along = offset + 0.5 * dims.l + j * (dims.l + lambda);
            const Vec2 c = vertex + dir[k] * along;
            layer.poses.push_back({{c.x, c.y, 0.5 * dims.h}, heading[k]});
        }
        vertex = vertex + dir[k] * (nominal[k] + stretch[k]);
    }
    layer.closure_residual = vertex.norm();
    if (layer.closure_residual > 1e-6) {
        throw ClosureError("loop fails to close: residual " +
                           std::to_string(layer.closure_residual) + " m");
    }
    return layer;
}

// ---- parallel family -----------------------------------------------------

BaseLayer build_parallel(const SegmentBaseSpec& spec, const BrickDims& dims) {
    const int s = spec.segments;
    const int blocks = spec.blocks.front();
    const double m = segment_margin(blocks, dims, kPi, spec.lambda);
    const double lateral = dims.w + spec.lambda;

    // Serpentine ring: antiparallel rows climbing one lateral step each,
    // with the final anchor step returning to the start.
    BaseLayer layer;
    Vec2 anchor{};
    double residual_x = 0.0, residual_y = 0.0;
    for (int i = 0; i < s; ++i) {
        const bool forward = (i % 2 == 0);
        const Vec2 u = forward ? Vec2{1.0, 0.0} : Vec2{-1.0, 0.0};
        const double yaw = forward ? 0.0 : kPi;
        for (int j = 0; j < blocks; ++j) {
            const Vec2 c = anchor + u * (j * (dims.l + spec.lambda));
            layer.poses.push_back({{c.x, c.y, 0.5 * dims.h}, yaw});
        }
        if (i + 1 < s) {
            anchor = anchor + u * m + Vec2{0.0, lateral};
        } else {
            anchor = anchor + u * m + Vec2{0.0, -double(s - 1) * lateral};
        }
        residual_x = anchor.x;
        residual_y = anchor.y;
    }
    layer.closure_residual = std::hypot(residual_x, residual_y);
    if (layer.closure_residual > 1e-6) {
        throw ClosureError("parallel loop does not close (odd segment count leaves "
                           "residual " + std::to_string(layer.closure_residual) + " m)");
    }
    return layer;
}

BaseLayer build_segment_base(const SegmentBaseSpec& spec, const BrickDims& dims) {
    if (spec.segments < 2) throw InvalidSpec("segments: must be >= 2");
    if (int(spec.blocks.size()) != spec.segments) {
        throw InvalidSpec("blocks: expected one count per segment");
    }
    for (int b : spec.blocks) {
        if (b < 1) throw InvalidSpec("blocks: every segment needs >= 1 block");
    }
    if (spec.lambda < 0.0) throw InvalidSpec("lambda: must be >= 0");

    const bool parallel = std::abs(spec.theta - kPi) <= 1e-9;
    const bool orthogonal = std::abs(spec.theta - 0.5 * kPi) <= 1e-9;
    if (!parallel && !orthogonal) {
        throw InvalidSpec("theta: segment bases support pi (parallel) and pi/2 "
                          "(orthogonal); use a polygon base for other loops");
    }

    if (parallel) {
        for (int b : spec.blocks) {
            if (b != spec.blocks.front()) {
                throw InvalidSpec("blocks: parallel segments must carry equal counts");
            }
        }
        return build_parallel(spec, dims);
    }

    if (spec.segments != 4) {
        throw InvalidSpec("segments: orthogonal loops close only with 4 segments");
    }
    if (spec.blocks[0] != spec.blocks[2] || spec.blocks[1] != spec.blocks[3]) {
        throw InvalidSpec("blocks: orthogonal loops need opposite segments equal "
                          "(B1=B3, B2=B4)");
    }
    std::vector<LoopEdge> edges;
    for (int b : spec.blocks) edges.push_back({b, 0.5 * kPi});
    return build_edge_loop(edges, dims, spec.lambda, /*allow_stretch=*/false);
}

BaseLayer build_polygon_base(const PolygonBaseSpec& spec, const BrickDims& dims) {
    if (spec.turning_angles.size() < 3) {
        throw InvalidSpec("turning_angles: a polygon base needs >= 3 edges");
    }
    if (spec.blocks_per_edge < 1) throw InvalidSpec("blocks_per_edge: must be >= 1");
    if (spec.lambda < 0.0) throw InvalidSpec("lambda: must be >= 0");
    const double total = std::accumulate(spec.turning_angles.begin(),
                                         spec.turning_angles.end(), 0.0);
    if (std::abs(total - 2.0 * kPi) > 1e-9) {
        throw InvalidSpec("turning_angles: must sum to 2*pi (got " +
                          std::to_string(total) + ")");
    }
    std::vector<LoopEdge> edges;
    for (double turn : spec.turning_angles) edges.push_back({spec.blocks_per_edge, turn});
    return build_edge_loop(edges, dims, spec.lambda, /*allow_stretch=*/true);
}

// ---- polynomial family ----------------------------------------------------

struct LoopCurve {
    std::vector<Vec2> points;   // closed polyline, points[0] reused as wrap
    std::vector<double> x;      // source x per point
    std::vector<bool> upper;    // which half each point sits on
    std::vector<double> arc;    // cumulative length, arc[0] = 0
    double total = 0.0;
    std::vector<double> dcoef;  // f'

    Vec2 at(double s) const;
    double tangent(double s) const;
};

Vec2 LoopCurve::at(double s) const {
    s = std::fmod(s, total);
    if (s < 0.0) s += total;
    const auto it = std::upper_bound(arc.begin(), arc.end(), s);
    std::size_t i = (it == arc.begin()) ? 0 : std::size_t(it - arc.begin() - 1);
    if (i >= points.size() - 1) i = points.size() - 2;
    const double seg = arc[i + 1] - arc[i];
    const double t = seg > 0.0 ? (s - arc[i]) / seg : 0.0;
    return points[i] + (points[i + 1] - points[i]) * t;
}

double LoopCurve::tangent(double s) const {
    s = std::fmod(s, total);
    if (s < 0.0) s += total;
    const auto it = std::upper_bound(arc.begin(), arc.end(), s);
    std::size_t i = (it == arc.begin()) ? 0 : std::size_t(it - arc.begin() - 1);
    if (i >= points.size() - 1) i = points.size() - 2;
    const double seg = arc[i + 1] - arc[i];
    const double t = seg > 0.0 ? (s - arc[i]) / seg : 0.0;
    const double xi = x[i] + (x[i + 1] - x[i]) * t;
    const double slope = poly_eval(dcoef, xi);
    // Lower half runs left to right, upper half right to left.
    return upper[i] ? std::atan2(-slope, -1.0) : std::atan2(-slope, 1.0);
}

LoopCurve sample_loop(const PolynomialBaseSpec& spec) {
    constexpr int kSamplesPerHalf = 4096;
    LoopCurve c;
    c.dcoef = poly_derivative(spec.coefficients);
    const double x0 = spec.x_min, x1 = spec.x_max;
    const double dx = (x1 - x0) / kSamplesPerHalf;

    for (int i = 0; i <= kSamplesPerHalf; ++i) {
        const double xi = x0 + i * dx;
        c.points.push_back({xi, -poly_eval(spec.coefficients, xi)});
        c.x.push_back(xi);
        c.upper.push_back(false);
    }
    for (int i = 1; i <= kSamplesPerHalf; ++i) {
        const double xi = x1 - i * dx;
        c.points.push_back({xi, poly_eval(spec.coefficients, xi)});
        c.x.push_back(xi);
        c.upper.push_back(true);
    }
    c.points.push_back(c.points.front());  // wrap segment closes the loop
    c.x.push_back(c.x.front());
    c.upper.push_back(true);

    c.arc.resize(c.points.size(), 0.0);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        c.arc[i] = c.arc[i - 1] + (c.points[i] - c.points[i - 1]).norm();
    }
    c.total = c.arc.back();
    return c;
}

/// First arc position past `from` whose chord distance to `origin` reaches
/// `target`, or nan if the walk would pass `limit`.
double chord_crossing(const LoopCurve& curve, const Vec2& origin, double from,
                      double target, double limit) {
    const double step = std::max(curve.total / double(curve.points.size() - 1),
                                 target / 64.0);
    double lo = from;
    double hi = from;
    while (true) {
        hi = std::min(lo + step, limit);
        if ((curve.at(hi) - origin).norm() >= target) break;
        if (hi >= limit) return std::numeric_limits<double>::quiet_NaN();
        lo = hi;
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((curve.at(mid) - origin).norm() >= target) hi = mid;
        else lo = mid;
    }
    return hi;
}

BaseLayer build_polynomial_base(const PolynomialBaseSpec& spec, const BrickDims& dims) {
    if (spec.coefficients.empty()) throw InvalidSpec("coefficients: must not be empty");
    if (!(spec.x_max > spec.x_min + 1e-12)) {
        throw InvalidSpec("domain: x_max must exceed x_min");
    }
    if (spec.kappa < 0.0) throw InvalidSpec("kappa: must be >= 0");
    const double f0 = poly_eval(spec.coefficients, spec.x_min);
    const double f1 = poly_eval(spec.coefficients, spec.x_max);
    if (std::abs(f0) > 1e-9 || std::abs(f1) > 1e-9) {
        throw InvalidSpec("domain: f must vanish at both domain ends so the two "
                          "halves join into a closed loop");
    }

    const LoopCurve curve = sample_loop(spec);
    BaseLayer layer;
    layer.closure_residual = std::max(std::abs(f0), std::abs(f1)) * 2.0;

    auto pose_at = [&](double s) {
        const Vec2 p = curve.at(s);
        const double yaw = wrap_angle(curve.tangent(s) + 0.5 * kPi);
        return BrickPose{{p.x, p.y, 0.5 * dims.h}, yaw};
    };
    auto yaw_gap = [&](double sa, double sb) {
        return std::abs(wrap_angle(curve.tangent(sb) - curve.tangent(sa)));
    };

    const double s0 = curve.total * 0.25;  // mid lower half, away from corners
    const double s_end = s0 + curve.total;
    double s_cur = s0;
    layer.poses.push_back(pose_at(s_cur));
    double theta_prev = 0.0;

    for (int guard = 0; guard < 100000; ++guard) {
        const Vec2 origin = curve.at(s_cur);
        double margin = polynomial_margin(theta_prev, dims.w, spec.kappa);
        double s_next = std::numeric_limits<double>::quiet_NaN();
        double theta = theta_prev;
        // The chord length and the inter-brick angle couple implicitly;
        // a short fixed-point run settles them together.
        for (int it = 0; it < 32; ++it) {
            s_next = chord_crossing(curve, origin, s_cur, margin, s_end);
            if (std::isnan(s_next)) break;
            theta = yaw_gap(s_cur, s_next);
            const double refined = polynomial_margin(theta, dims.w, spec.kappa);
            if (std::abs(refined - margin) < 1e-9) break;
            margin = refined;
        }
        if (std::isnan(s_next)) break;

        // Stop before crowding the first brick across the wrap. The chord
        // is direction-blind, so only guard the final approach.
        if (s_end - s_next < 0.5 * curve.total) {
            const Vec2 first = curve.at(s0);
            const double wrap_theta = yaw_gap(s_next, s0);
            if ((curve.at(s_next) - first).norm() <
                polynomial_margin(wrap_theta, dims.w, spec.kappa)) {
                break;
            }
        }
        layer.poses.push_back(pose_at(s_next));
        theta_prev = theta;
        s_cur = s_next;
    }
    return layer;
}

Vec2 centroid_of(const std::vector<BrickPose>& poses) {
    Vec2 c{};
    for (const BrickPose& p : poses) c = c + p.position.xy();
    return c * (1.0 / double(poses.size()));
}

BaseLayer build_family(const SegmentBaseSpec& s, const BrickDims& d) {
    return build_segment_base(s, d);
}
BaseLayer build_family(const PolygonBaseSpec& s, const BrickDims& d) {
    return build_polygon_base(s, d);
}
BaseLayer build_family(const PolynomialBaseSpec& s, const BrickDims& d) {
    return build_polynomial_base(s, d);
}

}  // namespace

BaseLayer build_base_layer(const BaseSpec& base, const BrickDims& dims) {
    check_dims(dims);
    BaseLayer layer = std::visit(
        [&](const auto& spec) { return build_family(spec, dims); }, base);
    const Vec2 c = centroid_of(layer.poses);
    for (BrickPose& p : layer.poses) {
        p.position.x -= c.x;
        p.position.y -= c.y;
    }
    return layer;
}

ColumnModel build_column(const ColumnSpec& spec) {
    if (spec.layers < 1) throw InvalidSpec("layers: must be >= 1");
    const BaseLayer base = build_base_layer(spec.base, spec.dims);

    ColumnModel model;
    model.spec = spec;
    model.closure_residual = base.closure_residual;
    model.placements.reserve(std::size_t(spec.layers) * base.poses.size());
    for (int k = 0; k < spec.layers; ++k) {
        const double angle = k * spec.phi;
        const double z = (k + 0.5) * spec.dims.h;
        for (std::size_t i = 0; i < base.poses.size(); ++i) {
            const BrickPose& b = base.poses[i];
            const Vec2 xy = rotate_about(b.position.xy(), {0.0, 0.0}, angle);
            model.placements.push_back(
                {k, int(i), {{xy.x, xy.y, z}, b.yaw + angle}});
        }
    }
    return model;
}

ValidationReport validate_column(const ColumnModel& model) {
    ValidationReport report;
    report.actual_placements = model.placements.size();
    if (model.placements.empty()) {
        report.expected_placements = 0;
        return report;
    }

    try {
        const BaseLayer base = build_base_layer(model.spec.base, model.spec.dims);
        report.expected_placements = base.poses.size() * std::size_t(model.spec.layers);
        report.closure_residual = base.closure_residual;
    } catch (const Error&) {
        report.expected_placements = 0;
        report.closure_residual = std::numeric_limits<double>::infinity();
    }

    std::vector<std::pair<int, OrientedBox2D>> boxes;
    boxes.reserve(model.placements.size());
    for (std::size_t i = 0; i < model.placements.size(); ++i) {
        boxes.emplace_back(model.placements[i].layer,
                           footprint_box(model.placements[i].pose, model.spec.dims));
    }
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        for (std::size_t j = i + 1; j < boxes.size(); ++j) {
            if (boxes[i].first != boxes[j].first) continue;
            if (obb_overlap(boxes[i].second, boxes[j].second)) {
                report.overlaps.push_back({boxes[i].first, int(i), int(j)});
            }
        }
    }
    return report;
}

}  // namespace spiralbrick
