#include "bignet/trace.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

#include "bignet/error.hpp"
#include "bignet/parallel.hpp"

namespace bignet {

EdgeBitmap::EdgeBitmap(int w, int h) : width(w), height(h) {
    if (w < 0 || h < 0) throw ContractError("bitmap dimensions must be non-negative");
    bits.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
}

void EdgeBitmap::set(int x, int y, bool v) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
}

std::size_t EdgeBitmap::count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

// --- PBM -------------------------------------------------------------------

namespace {

class PbmReader {
public:
    explicit PbmReader(std::string_view s) : s_(s) {}

    void skip_space() {
        while (pos_ < s_.size()) {
            if (s_[pos_] == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    int integer() {
        skip_space();
        const std::size_t start = pos_;
        long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > (1L << 20)) throw ParseError("PBM dimension too large", start);
            ++pos_;
        }
        if (pos_ == start) throw ParseError("expected integer in PBM header", start);
        return static_cast<int>(v);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

EdgeBitmap read_pbm(std::string_view bytes) {
    PbmReader r(bytes);
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '1' && bytes[1] != '4')) {
        throw ParseError("not a P1/P4 PBM file", 0);
    }
    const bool binary = bytes[1] == '4';
    r.pos_ = 2;
    const int w = r.integer();
    const int h = r.integer();
    EdgeBitmap bmp(w, h);
    if (binary) {
        if (r.pos_ >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[r.pos_]))) {
            throw ParseError("missing whitespace after PBM header", r.pos_);
        }
        ++r.pos_;
        const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
        if (bytes.size() - r.pos_ < row_bytes * static_cast<std::size_t>(h)) {
            throw ParseError("truncated P4 raster", bytes.size());
        }
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const auto byte = static_cast<unsigned char>(bytes[r.pos_ + y * row_bytes + x / 8]);
                bmp.set(x, y, (byte >> (7 - x % 8)) & 1u);
            }
        }
    } else {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                r.skip_space();
                if (r.pos_ >= bytes.size()) throw ParseError("truncated P1 raster", r.pos_);
                const char c = bytes[r.pos_++];
                if (c != '0' && c != '1') throw ParseError("invalid P1 pixel", r.pos_ - 1);
                bmp.set(x, y, c == '1');
            }
        }
    }
    return bmp;
}

std::string write_pbm(const EdgeBitmap& bmp, bool binary) {
    std::string out = binary ? "P4\n" : "P1\n";
    out += std::to_string(bmp.width) + " " + std::to_string(bmp.height) + "\n";
    if (binary) {
        const std::size_t row_bytes = (static_cast<std::size_t>(bmp.width) + 7) / 8;
        for (int y = 0; y < bmp.height; ++y) {
            std::string row(row_bytes, '\0');
            for (int x = 0; x < bmp.width; ++x) {
                if (bmp.at(x, y)) row[x / 8] = static_cast<char>(row[x / 8] | (0x80 >> (x % 8)));
            }
            out += row;
        }
    } else {
        for (int y = 0; y < bmp.height; ++y) {
            for (int x = 0; x < bmp.width; ++x) {
                out += bmp.at(x, y) ? '1' : '0';
                out += (x + 1 == bmp.width) ? '\n' : ' ';
            }
        }
    }
    return out;
}

// --- contours ----------------------------------------------------------------

namespace {

// Index order is counter-clockwise as displayed: E, NE, N, NW, W, SW, S, SE.
constexpr std::array<int, 8> kDx{1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy{0, -1, -1, -1, 0, 1, 1, 1};

struct Component {
    int start_x = 0;
    int start_y = 0;
    std::size_t pixels = 0;
};

std::vector<Component> label_components(const EdgeBitmap& bmp) {
    std::vector<int> label(bmp.bits.size(), -1);
    std::vector<Component> comps;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < bmp.height; ++y) {
        for (int x = 0; x < bmp.width; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * bmp.width + x;
            if (!bmp.bits[idx] || label[idx] >= 0) continue;
            const int id = static_cast<int>(comps.size());
            Component comp{x, y, 0};
            label[idx] = id;
            stack.assign(1, {x, y});
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                ++comp.pixels;
                for (int d = 0; d < 8; ++d) {
                    const int nx = cx + kDx[d];
                    const int ny = cy + kDy[d];
                    if (!bmp.at(nx, ny)) continue;
                    const std::size_t nidx = static_cast<std::size_t>(ny) * bmp.width + nx;
                    if (label[nidx] >= 0) continue;
                    label[nidx] = id;
                    stack.emplace_back(nx, ny);
                }
            }
            comps.push_back(comp);
        }
    }
    return comps;
}

Contour moore_trace(const EdgeBitmap& bmp, int sx, int sy) {
    Contour contour;
    auto push = [&](int x, int y) { contour.points.push_back({x + 0.5, y + 0.5}); };
    push(sx, sy);

    // The start is the first pixel of its component in raster order, so its
    // west neighbour is background.
    auto step = [&](int x, int y, int search) -> int {
        for (int k = 0; k < 8; ++k) {
            const int d = (search + k) % 8;
            if (bmp.at(x + kDx[d], y + kDy[d])) return d;
        }
        return -1;
    };
    auto next_search = [](int d) { return (d % 2 == 0) ? (d + 6) % 8 : (d + 5) % 8; };

    const int first = step(sx, sy, 4);
    if (first < 0) {
        push(sx, sy);  // isolated pixel: degenerate two-point contour
        return contour;
    }
    const int second_x = sx + kDx[first];
    const int second_y = sy + kDy[first];
    int x = second_x;
    int y = second_y;
    int d = first;
    const std::size_t limit = 4 * bmp.bits.size() + 8;
    for (std::size_t guard = 0; guard < limit; ++guard) {
        const int nd = step(x, y, next_search(d));
        const int nx = x + kDx[nd];
        const int ny = y + kDy[nd];
        if (x == sx && y == sy && nx == second_x && ny == second_y) break;
        push(x, y);
        x = nx;
        y = ny;
        d = nd;
    }
    if (contour.points.size() == 1) push(second_x, second_y);
    return contour;
}

}  // namespace

std::vector<Contour> extract_contours(const EdgeBitmap& bmp, int min_pixels) {
    std::vector<Contour> out;
    for (const auto& comp : label_components(bmp)) {
        if (comp.pixels < static_cast<std::size_t>(std::max(min_pixels, 0))) continue;
        out.push_back(moore_trace(bmp, comp.start_x, comp.start_y));
    }
    return out;
}

// --- cubic fitting -------------------------------------------------------------

namespace {

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double norm(Point a) { return std::hypot(a.x, a.y); }

Point unit(Point a) {
    const double n = norm(a);
    return n > 0.0 ? (1.0 / n) * a : Point{0.0, 0.0};
}

class CubicFitter {
public:
    CubicFitter(std::span<const Point> pts, double max_err) : pts_(pts), max_err_(max_err) {}

    void fit(std::size_t first, std::size_t last, Point t1, Point t2) {
        const std::size_t n = last - first + 1;
        if (n == 2) {
            out.push_back(elevate_line(pts_[first], pts_[last]));
            return;
        }
        std::vector<double> u = chord_params(first, last);
        CubicSegment bez = generate(first, last, u, t1, t2);
        auto [err, split] = max_error(first, last, bez, u);
        if (err <= max_err_) {
            out.push_back(bez);
            return;
        }
        if (err <= 4.0 * max_err_) {
            for (int pass = 0; pass < 4; ++pass) {
                reparameterize(first, last, bez, u);
                bez = generate(first, last, u, t1, t2);
                std::tie(err, split) = max_error(first, last, bez, u);
                if (err <= max_err_) {
                    out.push_back(bez);
                    return;
                }
            }
        }
        split = std::clamp(split, first + 1, last - 1);
        Point center = unit(pts_[split - 1] - pts_[split + 1]);
        if (norm(center) == 0.0) center = unit(pts_[split - 1] - pts_[split]);
        fit(first, split, t1, center);
        fit(split, last, -1.0 * center, t2);
    }

    std::vector<CubicSegment> out;

private:
    std::vector<double> chord_params(std::size_t first, std::size_t last) const {
        std::vector<double> u(last - first + 1, 0.0);
        for (std::size_t i = first + 1; i <= last; ++i) {
            u[i - first] = u[i - first - 1] + distance(pts_[i], pts_[i - 1]);
        }
        const double total = u.back();
        for (auto& v : u) v = total > 0.0 ? v / total : 0.0;
        return u;
    }

    // Least-squares cubic with fixed end tangent directions.
    CubicSegment generate(std::size_t first, std::size_t last, const std::vector<double>& u, Point t1, Point t2) const {
        const Point p0 = pts_[first];
        const Point p3 = pts_[last];
        double c00 = 0, c01 = 0, c11 = 0, x0 = 0, x1 = 0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double t = u[i];
            const double s = 1.0 - t;
            const double b0 = s * s * s, b1 = 3 * s * s * t, b2 = 3 * s * t * t, b3 = t * t * t;
            const Point a1 = b1 * t1;
            const Point a2 = b2 * t2;
            c00 += dot(a1, a1);
            c01 += dot(a1, a2);
            c11 += dot(a2, a2);
            const Point tmp = pts_[first + i] - ((b0 + b1) * p0 + (b2 + b3) * p3);
            x0 += dot(a1, tmp);
            x1 += dot(a2, tmp);
        }
        const double det = c00 * c11 - c01 * c01;
        const double seg_len = distance(p0, p3);
        double alpha_l = 0.0;
        double alpha_r = 0.0;
        if (std::abs(det) > 1e-12 * std::max(1.0, c00 * c11)) {
            alpha_l = (x0 * c11 - x1 * c01) / det;
            alpha_r = (c00 * x1 - c01 * x0) / det;
        }
        const double eps = 1e-6 * seg_len;
        if (alpha_l < eps || alpha_r < eps) {
            alpha_l = alpha_r = seg_len / 3.0;
        }
        return {p0, p0 + alpha_l * t1, p3 + alpha_r * t2, p3};
    }

    std::pair<double, std::size_t> max_error(std::size_t first, std::size_t last, const CubicSegment& bez,
                                             const std::vector<double>& u) const {
        double worst = 0.0;
        std::size_t at = (first + last) / 2;
        for (std::size_t i = first + 1; i < last; ++i) {
            const double d = distance(bez.eval(u[i - first]), pts_[i]);
            if (d > worst) {
                worst = d;
                at = i;
            }
        }
        return {worst, at};
    }

    void reparameterize(std::size_t first, std::size_t last, const CubicSegment& b, std::vector<double>& u) const {
        const Point d1[3] = {3.0 * (b.p1 - b.p0), 3.0 * (b.p2 - b.p1), 3.0 * (b.p3 - b.p2)};
        const Point d2[2] = {2.0 * (d1[1] - d1[0]), 2.0 * (d1[2] - d1[1])};
        for (std::size_t i = first; i <= last; ++i) {
            double& t = u[i - first];
            const double s = 1.0 - t;
            const Point q = b.eval(t);
            const Point q1 = s * s * d1[0] + 2 * s * t * d1[1] + t * t * d1[2];
            const Point q2 = s * d2[0] + t * d2[1];
            const Point diff = q - pts_[i];
            const double num = dot(diff, q1);
            const double den = dot(q1, q1) + dot(diff, q2);
            if (den != 0.0) t = std::clamp(t - num / den, 0.0, 1.0);
        }
    }

    std::span<const Point> pts_;
    double max_err_;
};

// Indices whose turning angle, measured over a window of `k` points on each
// side, exceeds the threshold; keeps only local maxima.
std::vector<std::size_t> find_corners(std::span<const Point> pts, bool closed, double threshold_rad) {
    const std::size_t n = pts.size();
    const std::size_t k = 2;
    std::vector<double> angle(n, 0.0);
    if (n < 3) return {};
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t prev;
        std::size_t next;
        if (closed) {
            prev = (i + n - std::min(k, n - 1)) % n;
            next = (i + std::min(k, n - 1)) % n;
        } else {
            if (i == 0 || i + 1 == n) continue;
            prev = i >= k ? i - k : 0;
            next = std::min(i + k, n - 1);
        }
        const Point a = pts[i] - pts[prev];
        const Point b = pts[next] - pts[i];
        const double na = norm(a), nb = norm(b);
        if (na == 0.0 || nb == 0.0) continue;
        angle[i] = std::acos(std::clamp(dot(a, b) / (na * nb), -1.0, 1.0));
    }
    std::vector<std::size_t> corners;
    for (std::size_t i = 0; i < n; ++i) {
        if (angle[i] <= threshold_rad) continue;
        // Local maximum; on a plateau the last index wins.
        bool is_max = true;
        for (std::size_t off = 1; off <= k; ++off) {
            if (closed || i >= off) {
                if (angle[closed ? (i + n - off) % n : i - off] > angle[i]) is_max = false;
            }
            if (closed || i + off < n) {
                if (angle[closed ? (i + off) % n : i + off] >= angle[i]) is_max = false;
            }
        }
        if (is_max) corners.push_back(i);
    }
    return corners;
}

}  // namespace

Chunk fit_cubics(const Contour& contour, double max_err, int id) {
    if (!(max_err > 0.0)) throw ContractError("fit_cubics: max_err must be positive");
    if (contour.points.size() < 2) throw ContractError("fit_cubics: contour needs at least 2 points");

    std::vector<Point> pts;
    pts.reserve(contour.points.size() + 1);
    for (const Point& p : contour.points) {
        if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    }
    if (contour.closed && pts.size() > 1 && pts.back() == pts.front()) pts.pop_back();
    if (pts.size() == 1) {
        const Point p = pts.front();
        return make_chunk(id, {CubicSegment{p, p, p, p}}, contour.closed);
    }

    const bool closed = contour.closed && pts.size() > 2;
    const double threshold = std::numbers::pi / 3.0;
    std::vector<std::size_t> corners = find_corners(pts, closed, threshold);

    std::vector<Point> seq;
    std::vector<std::size_t> breaks;  // indices into seq that are fixed boundaries
    if (closed) {
        const std::size_t n = pts.size();
        const std::size_t start = corners.empty() ? 0 : corners.front();
        for (std::size_t i = 0; i <= n; ++i) seq.push_back(pts[(start + i) % n]);
        breaks.push_back(0);
        for (std::size_t c : corners) {
            const std::size_t rel = (c + n - start) % n;
            if (rel != 0) breaks.push_back(rel);
        }
        breaks.push_back(n);
    } else {
        seq = pts;
        breaks.push_back(0);
        for (std::size_t c : corners) breaks.push_back(c);
        breaks.push_back(seq.size() - 1);
    }

    CubicFitter fitter(seq, max_err);
    const std::size_t m = seq.size();
    const bool smooth_loop = closed && corners.empty();
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const std::size_t first = breaks[b];
        const std::size_t last = breaks[b + 1];
        Point t1 = unit(seq[first + 1] - seq[first]);
        Point t2 = unit(seq[last - 1] - seq[last]);
        if (smooth_loop) {
            // Seam of a corner-free loop: use the centered tangent on both sides.
            const Point centered = unit(seq[1] - seq[m - 2]);
            if (norm(centered) > 0.0) {
                t1 = centered;
                t2 = -1.0 * centered;
            }
        }
        fitter.fit(first, last, t1, t2);
    }
    return make_chunk(id, std::move(fitter.out), contour.closed);
}

VectorImage trace_bitmap(const EdgeBitmap& bmp, const TraceOptions& opts) {
    const std::vector<Contour> contours = extract_contours(bmp, opts.min_pixels);
    std::vector<Chunk> chunks(contours.size());
    parallel_for(contours.size(), opts.jobs, [&](std::size_t i) {
        chunks[i] = fit_cubics(contours[i], opts.max_err, static_cast<int>(i));
    });
    VectorImage img;
    img.chunks = std::move(chunks);
    return normalize_height(img);
}

}  // namespace bignet
