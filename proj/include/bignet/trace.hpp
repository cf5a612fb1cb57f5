#pragma once

// Bitmap-to-curve vectorization: 8-connected border following followed by
// piecewise least-squares cubic fitting.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bignet/geometry.hpp"

namespace bignet {

/// Row-major binary raster; true marks an edge pixel.
struct EdgeBitmap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    EdgeBitmap() = default;
    EdgeBitmap(int w, int h);

    bool at(int x, int y) const {
        return x >= 0 && y >= 0 && x < width && y < height && bits[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v = true);
    std::size_t count() const;
};

/// Reads P1 (ASCII) or P4 (binary) PBM. 1 = black = edge pixel.
EdgeBitmap read_pbm(std::string_view bytes);
std::string write_pbm(const EdgeBitmap& bmp, bool binary = true);

/// Ordered border points in pixel-center coordinates.
struct Contour {
    std::vector<Point> points;
    bool closed = true;
};

struct TraceOptions {
    double max_err = 1.5;
    int min_pixels = 4;
    int jobs = 1;
};

/// One counter-clockwise (as displayed, y down) outer border per 8-connected
/// component, in raster discovery order. Components smaller than min_pixels
/// are dropped.
std::vector<Contour> extract_contours(const EdgeBitmap& bmp, int min_pixels);

/// Piecewise cubic fit with maximum point deviation <= max_err. Points where
/// the contour turns by more than 60 degrees are kept as segment boundaries.
Chunk fit_cubics(const Contour& contour, double max_err, int id = 0);

/// extract_contours, fit_cubics per contour, then normalize_height.
VectorImage trace_bitmap(const EdgeBitmap& bmp, const TraceOptions& opts = {});

}  // namespace bignet
