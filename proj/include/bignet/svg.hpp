#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bignet/geometry.hpp"

namespace bignet {

inline constexpr const char* kImportantChunkColor = "#FF0000";
inline constexpr const char* kImportantCurveColor = "#0000FF";
inline constexpr const char* kDefaultStrokeColor = "#000000";

/// Highlighting applied by write_svg. Curves are addressed as
/// (chunk index, segment index).
struct SvgStyle {
    std::set<int> important_chunks;
    std::set<std::pair<int, int>> important_curves;
};

/// Subpaths of one `d` attribute, each already elevated to cubics.
struct PathChunk {
    std::vector<CubicSegment> segments;
    bool closed = false;
};

/// Parses absolute M/L/C/Q/Z path data. Byte offsets in errors refer to `d`.
std::vector<PathChunk> parse_path_data(std::string_view d);

/// Parses an SVG document into a VectorImage: one chunk per subpath.
/// Overlay paths written for important curves (class="important-curve") are
/// decoration and are skipped.
VectorImage parse_svg(std::string_view text);

/// One <path> per chunk with absolute M/C/Z commands at 9 significant digits.
std::string write_svg(const VectorImage& img, const SvgStyle& style = {});

VectorImage read_svg_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace bignet
