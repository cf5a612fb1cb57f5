#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "bignet/geometry.hpp"
#include "bignet/rng.hpp"
#include "bignet/trace.hpp"

namespace testsupport {

using namespace bignet;

inline std::filesystem::path source_dir() { return BIGNET_SOURCE_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("bignet_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Direct Bernstein evaluation, independent of the de Casteljau code under test.
inline Point bernstein(const CubicSegment& s, double t) {
    const double u = 1.0 - t;
    const double b0 = u * u * u, b1 = 3 * u * u * t, b2 = 3 * u * t * t, b3 = t * t * t;
    return {b0 * s.p0.x + b1 * s.p1.x + b2 * s.p2.x + b3 * s.p3.x, b0 * s.p0.y + b1 * s.p1.y + b2 * s.p2.y + b3 * s.p3.y};
}

inline CubicSegment random_segment(Rng& rng, double lo = -5.0, double hi = 5.0) {
    auto p = [&] { return Point{rng.uniform(lo, hi), rng.uniform(lo, hi)}; };
    return {p(), p(), p(), p()};
}

// Closed chain of random cubics with shared endpoints.
inline Chunk random_chunk(Rng& rng, int id, int segments, double lo, double hi) {
    std::vector<Point> anchors;
    for (int i = 0; i < segments; ++i) anchors.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
    std::vector<CubicSegment> segs;
    for (int i = 0; i < segments; ++i) {
        const Point a = anchors[i];
        const Point b = anchors[(i + 1) % segments];
        segs.push_back({a, {rng.uniform(lo, hi), rng.uniform(lo, hi)}, {rng.uniform(lo, hi), rng.uniform(lo, hi)}, b});
    }
    return make_chunk(id, std::move(segs), true);
}

inline VectorImage random_image(Rng& rng, int max_chunks, int max_segments) {
    VectorImage img;
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_chunks)));
    for (int c = 0; c < n; ++c) {
        const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_segments)));
        img.chunks.push_back(random_chunk(rng, c, k, 0.0, 10.0));
    }
    return normalize_height(img);
}

// Distance from p to a polyline approximation of the chunk with `samples`
// points per segment.
inline double distance_to_chunk(Point p, const Chunk& c, int samples = 400) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : c.segments) {
        Point prev = bernstein(s, 0.0);
        for (int i = 1; i <= samples; ++i) {
            const Point cur = bernstein(s, static_cast<double>(i) / samples);
            const Point d = cur - prev;
            const double len2 = d.x * d.x + d.y * d.y;
            double t = len2 > 0 ? ((p.x - prev.x) * d.x + (p.y - prev.y) * d.y) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            best = std::min(best, distance(p, prev + t * d));
            prev = cur;
        }
    }
    return best;
}

// Scanline stroke rasterizer: marks every pixel whose center lies within
// `half_width` pixels of any curve of the image (in pixel units after
// scaling by `scale` and offsetting by `margin`).
inline EdgeBitmap rasterize(const VectorImage& img, double scale, int margin, double half_width) {
    const Box b = img.bounds();
    const int w = static_cast<int>(std::ceil(b.width() * scale)) + 2 * margin;
    const int h = static_cast<int>(std::ceil(b.height() * scale)) + 2 * margin;
    EdgeBitmap bmp(w, h);
    auto to_px = [&](Point p) { return Point{(p.x - b.xmin) * scale + margin, (p.y - b.ymin) * scale + margin}; };
    for (const auto& c : img.chunks) {
        for (const auto& s : c.segments) {
            const double len = s.control_length() * scale;
            const int steps = std::max(2, static_cast<int>(std::ceil(len * 4)));
            for (int i = 0; i <= steps; ++i) {
                const Point q = to_px(bernstein(s, static_cast<double>(i) / steps));
                const int r = static_cast<int>(std::ceil(half_width)) + 1;
                for (int y = static_cast<int>(q.y) - r; y <= static_cast<int>(q.y) + r; ++y) {
                    for (int x = static_cast<int>(q.x) - r; x <= static_cast<int>(q.x) + r; ++x) {
                        if (std::hypot(x + 0.5 - q.x, y + 0.5 - q.y) <= half_width) bmp.set(x, y);
                    }
                }
            }
        }
    }
    return bmp;
}

// Largest distance from a contour point to its fitted chunk.
inline double max_fit_error(const Contour& c, const Chunk& fit) {
    double worst = 0.0;
    for (const auto& p : c.points) worst = std::max(worst, distance_to_chunk(p, fit, 200));
    return worst;
}

// Cohen kappa restricted to samples whose prediction and truth both lie in
// {a, b}, counted by hand.
inline double kappa_oracle(const std::vector<int>& p, const std::vector<int>& t, int a, int b) {
    double n = 0, agree = 0, pa = 0, ta = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const bool keep = (p[i] == a || p[i] == b) && (t[i] == a || t[i] == b);
        if (!keep) continue;
        n += 1;
        agree += p[i] == t[i];
        pa += p[i] == a;
        ta += t[i] == a;
    }
    if (n < 2) return std::nan("");
    const double po = agree / n;
    const double pe = (pa / n) * (ta / n) + (1 - pa / n) * (1 - ta / n);
    if (1 - pe <= 0) return std::nan("");
    return (po - pe) / (1 - pe);
}

// Length of the flat top edge of the frame: the span of segment endpoints
// lying on the frame's top line.
inline double flat_top_length(const Chunk& frame) {
    const double top = frame.bbox.ymin;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : frame.segments) {
        for (Point p : {s.p0, s.p3}) {
            if (std::abs(p.y - top) < 1e-12) {
                lo = std::min(lo, p.x);
                hi = std::max(hi, p.x);
            }
        }
    }
    return hi - lo;
}

}  // namespace testsupport
