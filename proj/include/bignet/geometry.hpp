#pragma once

// Document model: images are lists of chunks, chunks are ordered chains of
// cubic Bezier segments.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bignet {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
    friend Point operator*(Point p, double s) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point a, Point b) = default;

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline Point lerp(Point a, Point b, double t) { return a + t * (b - a); }

/// Axis-aligned box. An empty box has xmin > xmax.
struct Box {
    double xmin = INFINITY;
    double ymin = INFINITY;
    double xmax = -INFINITY;
    double ymax = -INFINITY;

    bool empty() const { return xmin > xmax || ymin > ymax; }
    double width() const { return empty() ? 0.0 : xmax - xmin; }
    double height() const { return empty() ? 0.0 : ymax - ymin; }
    double cx() const { return 0.5 * (xmin + xmax); }
    double cy() const { return 0.5 * (ymin + ymax); }
    double area() const { return width() * height(); }

    void include(Point p);
    void include(const Box& other);
};

struct CubicSegment {
    Point p0, p1, p2, p3;

    friend bool operator==(const CubicSegment&, const CubicSegment&) = default;

    Point eval(double t) const;
    /// de Casteljau split at t.
    std::pair<CubicSegment, CubicSegment> split(double t) const;
    /// Length of the control polygon p0-p1-p2-p3.
    double control_length() const;
    /// Same curve traversed from p3 to p0.
    CubicSegment reversed() const { return {p3, p2, p1, p0}; }
    bool finite() const { return p0.finite() && p1.finite() && p2.finite() && p3.finite(); }
};

/// Degree elevation of a straight line to a cubic.
CubicSegment elevate_line(Point a, Point b);
/// Degree elevation of a quadratic Bezier (a, q, b) to a cubic.
CubicSegment elevate_quadratic(Point a, Point q, Point b);

/// Exact bounding box of the curve (endpoints plus interior extrema).
Box curve_bbox(const CubicSegment& seg);

inline constexpr double kContinuityTolerance = 1e-9;
inline constexpr double kSnapTolerance = 1e-6;

struct Chunk {
    int id = 0;
    std::vector<CubicSegment> segments;
    bool closed = false;
    Box bbox;

    void refresh_bbox();
};

/// Builds a chunk and enforces its invariants: at least one finite segment,
/// consecutive endpoints shared, and last end = first start when closed.
/// Endpoint gaps up to kSnapTolerance are repaired by snapping; larger gaps
/// throw ContractError.
Chunk make_chunk(int id, std::vector<CubicSegment> segments, bool closed);

struct VectorImage {
    std::vector<Chunk> chunks;
    std::optional<int> label;
    std::string source_id;
    bool normalized = false;

    Box bounds() const;
    std::size_t segment_count() const;
};

/// Uniform scale to unit height, then translate the min corner to the origin.
/// Throws DegenerateImageError when the image has no positive height.
VectorImage normalize_height(const VectorImage& img);

/// Bisects segments until every control polygon is at most max_len long.
VectorImage resegment(const VectorImage& img, double max_len);

/// Applies fn to every control point of every segment and refreshes bboxes.
template <class Fn>
void transform_points(VectorImage& img, Fn&& fn) {
    for (auto& chunk : img.chunks) {
        for (auto& s : chunk.segments) {
            s.p0 = fn(s.p0);
            s.p1 = fn(s.p1);
            s.p2 = fn(s.p2);
            s.p3 = fn(s.p3);
        }
        chunk.refresh_bbox();
    }
}

}  // namespace bignet
