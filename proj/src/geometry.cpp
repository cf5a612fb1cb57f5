#include "bignet/geometry.hpp"

#include <algorithm>
#include <array>

#include "bignet/error.hpp"

namespace bignet {

void Box::include(Point p) {
    xmin = std::min(xmin, p.x);
    ymin = std::min(ymin, p.y);
    xmax = std::max(xmax, p.x);
    ymax = std::max(ymax, p.y);
}

void Box::include(const Box& other) {
    if (other.empty()) return;
    xmin = std::min(xmin, other.xmin);
    ymin = std::min(ymin, other.ymin);
    xmax = std::max(xmax, other.xmax);
    ymax = std::max(ymax, other.ymax);
}

Point CubicSegment::eval(double t) const {
    const double u = 1.0 - t;
    const double b0 = u * u * u;
    const double b1 = 3.0 * u * u * t;
    const double b2 = 3.0 * u * t * t;
    const double b3 = t * t * t;
    return {b0 * p0.x + b1 * p1.x + b2 * p2.x + b3 * p3.x,
            b0 * p0.y + b1 * p1.y + b2 * p2.y + b3 * p3.y};
}

std::pair<CubicSegment, CubicSegment> CubicSegment::split(double t) const {
    const Point a = lerp(p0, p1, t);
    const Point b = lerp(p1, p2, t);
    const Point c = lerp(p2, p3, t);
    const Point ab = lerp(a, b, t);
    const Point bc = lerp(b, c, t);
    const Point mid = lerp(ab, bc, t);
    return {CubicSegment{p0, a, ab, mid}, CubicSegment{mid, bc, c, p3}};
}

double CubicSegment::control_length() const {
    return distance(p0, p1) + distance(p1, p2) + distance(p2, p3);
}

CubicSegment elevate_line(Point a, Point b) {
    return {a, a + (1.0 / 3.0) * (b - a), a + (2.0 / 3.0) * (b - a), b};
}

CubicSegment elevate_quadratic(Point a, Point q, Point b) {
    return {a, a + (2.0 / 3.0) * (q - a), b + (2.0 / 3.0) * (q - b), b};
}

namespace {

// Roots in (0, 1) of the derivative of a 1-D cubic Bezier with coefficients
// v0..v3. The derivative is 3 * (a t^2 + b t + c).
int derivative_roots(double v0, double v1, double v2, double v3, std::array<double, 2>& out) {
    const double a = -v0 + 3.0 * v1 - 3.0 * v2 + v3;
    const double b = 2.0 * (v0 - 2.0 * v1 + v2);
    const double c = v1 - v0;
    int n = 0;
    auto push = [&](double t) {
        if (t > 0.0 && t < 1.0) out[n++] = t;
    };
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (scale == 0.0) return 0;
    if (std::abs(a) <= 1e-12 * scale) {
        if (b != 0.0) push(-c / b);
        return n;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return 0;
    const double sq = std::sqrt(disc);
    // Numerically stable quadratic roots.
    const double q = -0.5 * (b + std::copysign(sq, b));
    push(q / a);
    if (q != 0.0) push(c / q);
    return n;
}

}  // namespace

Box curve_bbox(const CubicSegment& seg) {
    Box box;
    box.include(seg.p0);
    box.include(seg.p3);
    std::array<double, 2> roots{};
    int n = derivative_roots(seg.p0.x, seg.p1.x, seg.p2.x, seg.p3.x, roots);
    for (int i = 0; i < n; ++i) box.include(seg.eval(roots[i]));
    n = derivative_roots(seg.p0.y, seg.p1.y, seg.p2.y, seg.p3.y, roots);
    for (int i = 0; i < n; ++i) box.include(seg.eval(roots[i]));
    return box;
}

void Chunk::refresh_bbox() {
    bbox = Box{};
    for (const auto& s : segments) bbox.include(curve_bbox(s));
}

Chunk make_chunk(int id, std::vector<CubicSegment> segments, bool closed) {
    if (segments.empty()) throw ContractError("chunk " + std::to_string(id) + " has no segments");
    for (const auto& s : segments) {
        if (!s.finite()) throw ContractError("chunk " + std::to_string(id) + " has non-finite coordinates");
    }
    auto join = [&](Point& next_start, Point end, const char* what) {
        const double gap = distance(next_start, end);
        if (gap <= kContinuityTolerance) return;
        if (gap <= kSnapTolerance) {
            next_start = end;
            return;
        }
        throw ContractError("chunk " + std::to_string(id) + ": " + what + " gap " + std::to_string(gap));
    };
    for (std::size_t k = 1; k < segments.size(); ++k) {
        join(segments[k].p0, segments[k - 1].p3, "segment endpoint");
    }
    if (closed) join(segments.back().p3, segments.front().p0, "closing");
    Chunk chunk{id, std::move(segments), closed, {}};
    chunk.refresh_bbox();
    return chunk;
}

Box VectorImage::bounds() const {
    Box box;
    for (const auto& c : chunks) box.include(c.bbox);
    return box;
}

std::size_t VectorImage::segment_count() const {
    std::size_t n = 0;
    for (const auto& c : chunks) n += c.segments.size();
    return n;
}

VectorImage normalize_height(const VectorImage& img) {
    const Box box = img.bounds();
    if (box.empty() || !(box.height() > 0.0)) {
        throw DegenerateImageError("image '" + img.source_id + "' has zero height");
    }
    const double scale = 1.0 / box.height();
    const Point origin{box.xmin, box.ymin};
    VectorImage out = img;
    transform_points(out, [&](Point p) { return scale * (p - origin); });
    out.normalized = true;
    return out;
}

namespace {

void bisect_until(const CubicSegment& seg, double max_len, int depth, std::vector<CubicSegment>& out) {
    if (seg.control_length() <= max_len || depth >= 48) {
        out.push_back(seg);
        return;
    }
    auto [left, right] = seg.split(0.5);
    bisect_until(left, max_len, depth + 1, out);
    bisect_until(right, max_len, depth + 1, out);
}

}  // namespace

VectorImage resegment(const VectorImage& img, double max_len) {
    if (!(max_len > 0.0)) throw ContractError("resegment: max_len must be positive");
    VectorImage out = img;
    for (auto& chunk : out.chunks) {
        std::vector<CubicSegment> segs;
        segs.reserve(chunk.segments.size());
        for (const auto& s : chunk.segments) bisect_until(s, max_len, 0, segs);
        chunk.segments = std::move(segs);
        chunk.refresh_bbox();
    }
    return out;
}

}  // namespace bignet
