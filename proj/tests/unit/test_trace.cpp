#include "doctest.h"
#include "support.hpp"

#include <numbers>
#include <set>

#include "bignet/error.hpp"
#include "bignet/svg.hpp"
#include "bignet/synth.hpp"

using namespace bignet;
using namespace testsupport;

namespace {

EdgeBitmap block(int w, int h, int x0, int y0, int bw, int bh) {
    EdgeBitmap b(w, h);
    for (int y = y0; y < y0 + bh; ++y) {
        for (int x = x0; x < x0 + bw; ++x) b.set(x, y);
    }
    return b;
}

// Signed area with y down: negative for counter-clockwise as displayed.
double shoelace(const std::vector<Point>& pts) {
    double a = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point p = pts[i], q = pts[(i + 1) % pts.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

}  // namespace

TEST_CASE("empty bitmap has no contours and cannot be traced") {
    EdgeBitmap b(8, 8);
    CHECK(extract_contours(b, 1).empty());
    CHECK_THROWS_AS(trace_bitmap(b), DegenerateImageError);
}

TEST_CASE("3x3 block yields its 8 border pixels counter-clockwise") {
    const auto b = block(7, 7, 2, 2, 3, 3);
    const auto cs = extract_contours(b, 1);
    REQUIRE(cs.size() == 1);
    const auto& pts = cs[0].points;
    REQUIRE(pts.size() == 8);
    std::set<std::pair<double, double>> seen;
    for (const auto& p : pts) seen.insert({p.x, p.y});
    std::set<std::pair<double, double>> expected;
    for (int y = 2; y <= 4; ++y) {
        for (int x = 2; x <= 4; ++x) {
            if (x == 3 && y == 3) continue;
            expected.insert({x + 0.5, y + 0.5});
        }
    }
    CHECK(seen == expected);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point d = pts[(i + 1) % pts.size()] - pts[i];
        CHECK(std::max(std::abs(d.x), std::abs(d.y)) == 1.0);
    }
    CHECK(shoelace(pts) < 0.0);
}

TEST_CASE("two disjoint blocks give two contours in raster order") {
    auto b = block(20, 10, 1, 1, 3, 3);
    for (int y = 5; y < 8; ++y) {
        for (int x = 12; x < 16; ++x) b.set(x, y);
    }
    const auto cs = extract_contours(b, 1);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].points[0].x < cs[1].points[0].x);
}

TEST_CASE("despeckle is monotone in min_pixels") {
    Rng rng(4);
    EdgeBitmap b(64, 64);
    for (int i = 0; i < 300; ++i) b.set(static_cast<int>(rng.below(64)), static_cast<int>(rng.below(64)));
    std::size_t prev = extract_contours(b, 0).size();
    for (int m = 1; m <= 12; ++m) {
        const std::size_t cur = extract_contours(b, m).size();
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("PBM round trip in both encodings") {
    auto b = block(13, 5, 2, 1, 4, 3);
    b.set(12, 4);
    for (bool binary : {true, false}) {
        const auto back = read_pbm(write_pbm(b, binary));
        CHECK(back.width == 13);
        CHECK(back.height == 5);
        CHECK(back.bits == b.bits);
    }
    CHECK(read_pbm("P1\n# comment\n2 2\n1 0\n0 1\n").count() == 2);
    CHECK_THROWS_AS(read_pbm("P4\n8 2\n"), ParseError);
    CHECK_THROWS_AS(read_pbm("P2\n1 1\n0\n"), ParseError);
}

TEST_CASE("fit_cubics on collinear points is one exact segment") {
    Contour c;
    c.closed = false;
    for (int i = 0; i < 10; ++i) c.points.push_back({2.0 * i, 1.0 + i});
    const auto chunk = fit_cubics(c, 0.5);
    CHECK(chunk.segments.size() == 1);
    CHECK(max_fit_error(c, chunk) < 1e-9);
}

TEST_CASE("fit_cubics on two points is a straight segment") {
    Contour c;
    c.closed = false;
    c.points = {{1, 1}, {4, 5}};
    const auto chunk = fit_cubics(c, 1.0);
    REQUIRE(chunk.segments.size() == 1);
    CHECK(chunk.segments[0].p0 == Point{1, 1});
    CHECK(chunk.segments[0].p3 == Point{4, 5});
    CHECK(distance(chunk.segments[0].p1, Point{2, 7.0 / 3.0}) < 1e-12);
}

TEST_CASE("fit_cubics on a sampled circle") {
    Contour c;
    for (int i = 0; i < 64; ++i) {
        const double a = 2 * std::numbers::pi * i / 64;
        c.points.push_back({150 + 100 * std::cos(a), 150 - 100 * std::sin(a)});
    }
    const auto chunk = fit_cubics(c, 1.0);
    CHECK(chunk.closed);
    CHECK(chunk.segments.size() <= 8);
    CHECK(max_fit_error(c, chunk) <= 1.0);
}

TEST_CASE("filled rectangle traces to its aspect ratio") {
    const auto b = block(140, 90, 20, 15, 100, 60);
    const auto img = trace_bitmap(b);
    REQUIRE(img.chunks.size() == 1);
    const Box box = img.chunks[0].bbox;
    // Border pixel centers span 99 x 59 px; allow 2 px of quantization.
    const double traced_w = box.width() * 59.0;
    CHECK(std::abs(traced_w - 99.0) <= 2.0);
    CHECK(std::abs(box.width() / box.height() - 100.0 / 60.0) <= 2.0 / 60.0);
}

TEST_CASE("fit error contract on 20 synthetic shapes") {
    Rng rng(17);
    for (int shape = 0; shape < 20; ++shape) {
        EdgeBitmap b(160, 160);
        const double cx = 80, cy = 80;
        const double rx = rng.uniform(25, 70), ry = rng.uniform(25, 70);
        const int lobes = 2 + static_cast<int>(rng.below(5));
        const double amp = rng.uniform(0.0, 0.25);
        for (int y = 0; y < 160; ++y) {
            for (int x = 0; x < 160; ++x) {
                const double dx = (x + 0.5 - cx) / rx, dy = (y + 0.5 - cy) / ry;
                const double a = std::atan2(dy, dx);
                if (std::hypot(dx, dy) <= 1.0 + amp * std::sin(lobes * a)) b.set(x, y);
            }
        }
        const double max_err = shape % 2 ? 1.5 : 0.75;
        for (const auto& c : extract_contours(b, 4)) {
            const auto chunk = fit_cubics(c, max_err);
            CHECK(max_fit_error(c, chunk) <= max_err + 1e-9);
        }
    }
}

TEST_CASE("tracing is deterministic across job counts") {
    Rng rng(6);
    EdgeBitmap b(96, 96);
    for (int k = 0; k < 6; ++k) {
        const int x0 = static_cast<int>(rng.below(70)), y0 = static_cast<int>(rng.below(70));
        for (int y = y0; y < y0 + 20; ++y) {
            for (int x = x0; x < x0 + 15; ++x) b.set(x, y);
        }
    }
    TraceOptions one, four;
    four.jobs = 4;
    CHECK(write_svg(trace_bitmap(b, one)) == write_svg(trace_bitmap(b, one)));
    CHECK(write_svg(trace_bitmap(b, one)) == write_svg(trace_bitmap(b, four)));
}

TEST_CASE("rasterized synthetic phone traces back to a similar chunk count") {
    const auto rs = load_ruleset(source_dir() / "rules" / "apple.json");
    for (std::uint64_t seed : {0u, 1u, 2u}) {
        const auto img = build_phone(sample_params(rs, seed), rs);
        const auto bmp = rasterize(img, 512.0, 4, 0.75);
        const auto traced = trace_bitmap(bmp);
        const double ratio = static_cast<double>(traced.chunks.size()) / static_cast<double>(img.chunks.size());
        INFO("source chunks " << img.chunks.size() << ", traced " << traced.chunks.size());
        CHECK(ratio >= 0.7);
        CHECK(ratio <= 1.3);
    }
}
