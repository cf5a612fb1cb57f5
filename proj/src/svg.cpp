#include "bignet/svg.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "bignet/error.hpp"

namespace bignet {

namespace {

class PathScanner {
public:
    explicit PathScanner(std::string_view d) : d_(d) {}

    void skip_separators() {
        while (pos_ < d_.size() && (std::isspace(static_cast<unsigned char>(d_[pos_])) || d_[pos_] == ',')) ++pos_;
    }

    bool done() {
        skip_separators();
        return pos_ >= d_.size();
    }

    std::optional<char> command() {
        skip_separators();
        if (pos_ < d_.size() && std::isalpha(static_cast<unsigned char>(d_[pos_])) && d_[pos_] != 'e' && d_[pos_] != 'E') {
            return d_[pos_++];
        }
        return std::nullopt;
    }

    bool number_ahead() {
        skip_separators();
        if (pos_ >= d_.size()) return false;
        const char c = d_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
    }

    double number() {
        skip_separators();
        const std::size_t start = pos_;
        std::size_t p = pos_;
        if (p < d_.size() && d_[p] == '+') ++p;
        double value = 0.0;
        const auto [end, ec] = std::from_chars(d_.data() + p, d_.data() + d_.size(), value);
        if (ec != std::errc{} || end == d_.data() + p) {
            throw ParseError("expected number in path data", start);
        }
        pos_ = static_cast<std::size_t>(end - d_.data());
        if (!std::isfinite(value)) throw ParseError("non-finite number in path data", start);
        return value;
    }

    Point point() {
        const double x = number();
        const double y = number();
        return {x, y};
    }

    std::size_t pos() const { return pos_; }

private:
    std::string_view d_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<PathChunk> parse_path_data(std::string_view d) {
    PathScanner scan(d);
    std::vector<PathChunk> out;
    PathChunk current;
    bool in_subpath = false;
    Point cursor{};
    Point start{};
    char cmd = 0;

    auto flush = [&] {
        if (!current.segments.empty()) out.push_back(std::move(current));
        current = PathChunk{};
    };
    auto add = [&](const CubicSegment& seg) {
        if (!in_subpath || current.closed) {
            // Drawing after Z continues from the subpath start as a new chunk.
            flush();
            in_subpath = true;
        }
        current.segments.push_back(seg);
        cursor = seg.p3;
    };

    while (!scan.done()) {
        const std::size_t at = scan.pos();
        if (auto c = scan.command()) {
            cmd = *c;
            switch (cmd) {
                case 'M': case 'L': case 'C': case 'Q': case 'Z': case 'z':
                    break;
                default:
                    throw UnsupportedFeatureError(std::string("unsupported path command '") + cmd +
                                                  "' at byte " + std::to_string(at));
            }
        } else if (cmd == 0) {
            throw ParseError("path data must start with a command", at);
        } else if (cmd == 'Z' || cmd == 'z') {
            throw ParseError("unexpected number after Z", at);
        }
        switch (cmd) {
            case 'M':
                flush();
                cursor = start = scan.point();
                in_subpath = true;
                cmd = 'L';  // further coordinate pairs are implicit linetos
                break;
            case 'L': {
                const Point p = scan.point();
                add(elevate_line(cursor, p));
                break;
            }
            case 'C': {
                const Point c1 = scan.point();
                const Point c2 = scan.point();
                const Point p = scan.point();
                add(CubicSegment{cursor, c1, c2, p});
                break;
            }
            case 'Q': {
                const Point q = scan.point();
                const Point p = scan.point();
                add(elevate_quadratic(cursor, q, p));
                break;
            }
            case 'Z':
            case 'z':
                if (!current.segments.empty() && !current.closed) {
                    if (distance(cursor, start) > kContinuityTolerance) {
                        current.segments.push_back(elevate_line(cursor, start));
                    } else {
                        current.segments.back().p3 = start;
                    }
                    current.closed = true;
                }
                cursor = start;
                break;
            default:
                break;
        }
    }
    flush();
    return out;
}

namespace {

using boost::property_tree::ptree;

void collect_paths(const ptree& node, std::vector<const ptree*>& out) {
    for (const auto& [name, child] : node) {
        if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
        if (name == "path") out.push_back(&child);
        collect_paths(child, out);
    }
}

std::optional<int> chunk_id_from(const std::string& id) {
    constexpr std::string_view prefix = "chunk-";
    if (id.rfind(prefix, 0) != 0) return std::nullopt;
    int value = 0;
    const char* first = id.data() + prefix.size();
    const char* last = id.data() + id.size();
    const auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || end != last) return std::nullopt;
    return value;
}

std::size_t line_offset(std::string_view text, unsigned long line) {
    std::size_t offset = 0;
    for (unsigned long l = 1; l < line && offset < text.size(); ++offset) {
        if (text[offset] == '\n') ++l;
    }
    return offset;
}

}  // namespace

VectorImage parse_svg(std::string_view text) {
    ptree tree;
    try {
        std::istringstream in{std::string(text)};
        boost::property_tree::read_xml(in, tree);
    } catch (const boost::property_tree::xml_parser_error& e) {
        throw ParseError("malformed XML: " + e.message(), line_offset(text, e.line()));
    }
    std::vector<const ptree*> paths;
    collect_paths(tree, paths);

    VectorImage img;
    int next_id = 0;
    for (std::size_t k = 0; k < paths.size(); ++k) {
        const ptree& p = *paths[k];
        const std::string cls = p.get<std::string>("<xmlattr>.class", "");
        if (cls == "important-curve") continue;
        const std::string d = p.get<std::string>("<xmlattr>.d", "");
        std::vector<PathChunk> subpaths;
        try {
            subpaths = parse_path_data(d);
        } catch (const ParseError& e) {
            throw ParseError("path " + std::to_string(k) + ": " + e.detail(), e.offset());
        }
        const auto declared = chunk_id_from(p.get<std::string>("<xmlattr>.id", ""));
        for (auto& sub : subpaths) {
            const int id = (declared && subpaths.size() == 1) ? *declared : next_id;
            img.chunks.push_back(make_chunk(id, std::move(sub.segments), sub.closed));
            next_id = std::max(next_id, id) + 1;
        }
    }
    return img;
}

namespace {

void append_number(std::string& out, double v) {
    if (v == 0.0) v = 0.0;  // drop negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out += buf;
}

void append_point(std::string& out, Point p) {
    append_number(out, p.x);
    out += ' ';
    append_number(out, p.y);
}

std::string segments_to_d(std::span<const CubicSegment> segs, bool closed) {
    std::string d = "M ";
    append_point(d, segs.front().p0);
    for (const auto& s : segs) {
        d += " C ";
        append_point(d, s.p1);
        d += ' ';
        append_point(d, s.p2);
        d += ' ';
        append_point(d, s.p3);
    }
    if (closed) d += " Z";
    return d;
}

}  // namespace

std::string write_svg(const VectorImage& img, const SvgStyle& style) {
    const Box box = img.bounds();
    const double x0 = box.empty() ? 0.0 : box.xmin;
    const double y0 = box.empty() ? 0.0 : box.ymin;
    const double w = box.empty() ? 0.0 : box.width();
    const double h = box.empty() ? 1.0 : box.height();
    const double stroke_width = 0.003 * (h > 0.0 ? h : 1.0);

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    append_number(out, x0);
    out += ' ';
    append_number(out, y0);
    out += ' ';
    append_number(out, w);
    out += ' ';
    append_number(out, h);
    out += "\">\n";
    std::string sw;
    append_number(sw, stroke_width);

    for (std::size_t ci = 0; ci < img.chunks.size(); ++ci) {
        const Chunk& c = img.chunks[ci];
        const bool important = style.important_chunks.count(static_cast<int>(ci)) > 0;
        out += "  <path id=\"chunk-" + std::to_string(c.id) + "\"";
        if (important) out += " class=\"important-chunk\"";
        out += " fill=\"none\" stroke=\"";
        out += important ? kImportantChunkColor : kDefaultStrokeColor;
        out += "\" stroke-width=\"" + sw + "\" d=\"" + segments_to_d(c.segments, c.closed) + "\"/>\n";
    }
    for (const auto& [ci, si] : style.important_curves) {
        if (ci < 0 || static_cast<std::size_t>(ci) >= img.chunks.size()) continue;
        const auto& segs = img.chunks[static_cast<std::size_t>(ci)].segments;
        if (si < 0 || static_cast<std::size_t>(si) >= segs.size()) continue;
        out += "  <path class=\"important-curve\" data-chunk=\"" + std::to_string(img.chunks[static_cast<std::size_t>(ci)].id) +
               "\" data-curve=\"" + std::to_string(si) + "\" fill=\"none\" stroke=\"" + kImportantCurveColor +
               "\" stroke-width=\"" + sw + "\" d=\"" +
               segments_to_d(std::span<const CubicSegment>(&segs[static_cast<std::size_t>(si)], 1), false) + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

VectorImage read_svg_file(const std::filesystem::path& path) {
    VectorImage img = parse_svg(read_text_file(path));
    img.source_id = path.filename().string();
    return img;
}

}  // namespace bignet
