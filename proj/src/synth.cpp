#include "bignet/synth.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "bignet/error.hpp"
#include "bignet/parallel.hpp"
#include "bignet/rng.hpp"
#include "bignet/svg.hpp"

namespace bignet {

// --- rule sets -------------------------------------------------------------------

const std::map<std::string, std::vector<std::string>>& rule_kind_params() {
    static const std::map<std::string, std::vector<std::string>> kinds{
        {"outer_frame", {"frame_width", "frame_height", "frame_fillet"}},
        {"inner_edge", {"plane_gap"}},
        {"screen", {"screen_gap", "screen_fillet", "screen_chin"}},
        {"notch", {"notch_width", "notch_height", "notch_shoulder_fillet", "notch_corner_fillet"}},
        {"notch_lenses",
         {"lens_radius", "lens_offset_x", "lens_offset_y", "lens_spacing", "sensor_radius", "circle_count",
          "circle_arrangement"}},
        {"notch_speaker", {"speaker_width", "speaker_height", "speaker_inset", "speaker_position"}},
        {"apple_buttons",
         {"button_depth", "button_fillet", "mute_y", "mute_length", "volume_y", "volume_length", "volume_gap",
          "power_y", "power_length", "mute_switch", "volume_style"}},
        {"punch_hole", {"punch_radius", "punch_offset_y", "punch_corner_x", "punch_pair_spacing", "lens_layout"}},
        {"lens_ring", {"punch_ring_width"}},
        {"bezel_speaker", {"speaker_width", "speaker_height", "speaker_offset_y"}},
        {"samsung_buttons",
         {"button_depth", "button_fillet", "volume_y", "volume_length", "power_y", "power_length", "bixby_y",
          "bixby_length"}},
    };
    return kinds;
}

const ContinuousParam* BrandRuleSet::find_continuous(std::string_view name) const {
    for (const auto& c : continuous) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const DiscreteParam* BrandRuleSet::find_discrete(std::string_view name) const {
    for (const auto& d : discrete) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

bool BrandRuleSet::has_rule(std::string_view kind) const {
    return std::any_of(rules.begin(), rules.end(), [&](const RuleDescriptor& r) { return r.kind == kind; });
}

void BrandRuleSet::validate() const {
    const std::string where = "rule set '" + brand + "'";
    for (const auto& c : continuous) {
        if (!(c.min < c.max)) throw ContractError(where + ": empty range for '" + c.name + "'");
        if (!std::isfinite(c.default_value)) throw ContractError(where + ": non-finite default for '" + c.name + "'");
    }
    for (const auto& d : discrete) {
        if (d.options.empty()) throw ContractError(where + ": discrete '" + d.name + "' has no options");
        if (d.default_index < 0 || d.default_index >= static_cast<int>(d.options.size())) {
            throw ContractError(where + ": default option out of range for '" + d.name + "'");
        }
    }
    const auto& kinds = rule_kind_params();
    for (const auto& r : rules) {
        const auto it = kinds.find(r.kind);
        if (it == kinds.end()) throw ContractError(where + ": unknown rule kind '" + r.kind + "'");
        for (const auto& p : r.params) {
            if (!declares(p)) throw ContractError(where + ": rule " + r.id + " references undeclared '" + p + "'");
        }
        for (const auto& needed : it->second) {
            if (std::find(r.params.begin(), r.params.end(), needed) == r.params.end()) {
                throw ContractError(where + ": rule " + r.id + " (" + r.kind + ") does not list '" + needed + "'");
            }
        }
    }
    for (const auto& reg : regulations) {
        for (const auto& [name, coef] : reg.terms) {
            if (!declares(name)) {
                throw ContractError(where + ": regulation '" + reg.name + "' references undeclared '" + name + "'");
            }
        }
    }
    if (!has_rule("outer_frame")) throw ContractError(where + ": an outer_frame rule is required");
}

double Regulation::lhs(const PhoneParams& p) const {
    double s = constant;
    for (const auto& [name, coef] : terms) s += coef * p.get(name);
    return s;
}

bool Regulation::holds(const PhoneParams& p) const {
    const double v = lhs(p);
    switch (op) {
        case Op::le: return v <= 0.0;
        case Op::lt: return v < 0.0;
        case Op::ge: return v >= 0.0;
        case Op::gt: return v > 0.0;
    }
    return false;
}

namespace {

Regulation::Op parse_op(const std::string& s) {
    if (s == "<=") return Regulation::Op::le;
    if (s == "<") return Regulation::Op::lt;
    if (s == ">=") return Regulation::Op::ge;
    if (s == ">") return Regulation::Op::gt;
    throw ContractError("unknown regulation operator '" + s + "'");
}

const char* op_text(Regulation::Op op) {
    switch (op) {
        case Regulation::Op::le: return "<=";
        case Regulation::Op::lt: return "<";
        case Regulation::Op::ge: return ">=";
        case Regulation::Op::gt: return ">";
    }
    return "<=";
}

}  // namespace

BrandRuleSet ruleset_from_json(std::string_view text) {
    BrandRuleSet rs;
    try {
        const auto j = nlohmann::json::parse(text);
        rs.brand = j.at("brand").get<std::string>();
        rs.label = j.at("label").get<int>();
        for (const auto& c : j.at("continuous")) {
            ContinuousParam p;
            p.name = c.at("name").get<std::string>();
            p.min = c.at("min").get<double>();
            p.max = c.at("max").get<double>();
            p.default_value = c.value("default", 0.5 * (p.min + p.max));
            p.unit = c.value("unit", std::string("mm"));
            rs.continuous.push_back(std::move(p));
        }
        for (const auto& d : j.value("discrete", nlohmann::json::array())) {
            DiscreteParam p;
            p.name = d.at("name").get<std::string>();
            p.options = d.at("options").get<std::vector<std::string>>();
            p.default_index = d.value("default", 0);
            rs.discrete.push_back(std::move(p));
        }
        for (const auto& r : j.value("regulations", nlohmann::json::array())) {
            Regulation reg;
            reg.name = r.at("name").get<std::string>();
            for (const auto& [name, coef] : r.at("terms").items()) reg.terms.emplace_back(name, coef.get<double>());
            reg.constant = r.value("constant", 0.0);
            reg.op = parse_op(r.at("op").get<std::string>());
            rs.regulations.push_back(std::move(reg));
        }
        for (const auto& r : j.at("rules")) {
            RuleDescriptor d;
            d.id = r.at("id").get<std::string>();
            d.kind = r.at("kind").get<std::string>();
            d.params = r.at("params").get<std::vector<std::string>>();
            rs.rules.push_back(std::move(d));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ContractError(std::string("invalid rule set JSON: ") + e.what());
    }
    rs.validate();
    return rs;
}

std::string ruleset_to_json(const BrandRuleSet& rs) {
    nlohmann::ordered_json j;
    j["brand"] = rs.brand;
    j["label"] = rs.label;
    j["continuous"] = nlohmann::ordered_json::array();
    for (const auto& c : rs.continuous) {
        j["continuous"].push_back(
            {{"name", c.name}, {"min", c.min}, {"max", c.max}, {"default", c.default_value}, {"unit", c.unit}});
    }
    j["discrete"] = nlohmann::ordered_json::array();
    for (const auto& d : rs.discrete) {
        j["discrete"].push_back({{"name", d.name}, {"options", d.options}, {"default", d.default_index}});
    }
    j["regulations"] = nlohmann::ordered_json::array();
    for (const auto& r : rs.regulations) {
        nlohmann::ordered_json terms = nlohmann::ordered_json::object();
        for (const auto& [name, coef] : r.terms) terms[name] = coef;
        j["regulations"].push_back({{"name", r.name}, {"terms", terms}, {"constant", r.constant}, {"op", op_text(r.op)}});
    }
    j["rules"] = nlohmann::ordered_json::array();
    for (const auto& r : rs.rules) j["rules"].push_back({{"id", r.id}, {"kind", r.kind}, {"params", r.params}});
    return j.dump(2) + "\n";
}

BrandRuleSet load_ruleset(const std::filesystem::path& path) {
    try {
        return ruleset_from_json(read_text_file(path));
    } catch (const ContractError& e) {
        throw ContractError(path.string() + ": " + e.what());
    }
}

// --- parameters ------------------------------------------------------------------

double PhoneParams::get(std::string_view name) const {
    const auto it = values.find(std::string(name));
    if (it == values.end()) throw ConstructionError("parameter '" + std::string(name) + "' has no value");
    return it->second;
}

PhoneParams default_params(const BrandRuleSet& rs) {
    PhoneParams p;
    p.brand = rs.brand;
    for (const auto& c : rs.continuous) p.values[c.name] = c.default_value;
    for (const auto& d : rs.discrete) p.values[d.name] = d.default_index;
    return p;
}

std::vector<std::string> violated_regulations(const BrandRuleSet& rs, const PhoneParams& p) {
    std::vector<std::string> out;
    for (const auto& r : rs.regulations) {
        if (!r.holds(p)) out.push_back(r.name);
    }
    return out;
}

PhoneParams sample_params(const BrandRuleSet& rs, std::uint64_t seed) {
    constexpr int kMaxRejections = 1000;
    Rng rng(derive_seed(seed, 0x5A3D1E));
    PhoneParams p;
    p.brand = rs.brand;
    p.seed = seed;
    std::string first_violation;
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        for (const auto& c : rs.continuous) p.values[c.name] = rng.uniform(c.min, c.max);
        for (const auto& d : rs.discrete) p.values[d.name] = static_cast<double>(rng.below(d.options.size()));
        const auto bad = std::find_if(rs.regulations.begin(), rs.regulations.end(),
                                      [&](const Regulation& r) { return !r.holds(p); });
        if (bad == rs.regulations.end()) return p;
        if (first_violation.empty()) first_violation = bad->name;
    }
    throw InfeasibleRulesetError("rule set '" + rs.brand + "': " + std::to_string(kMaxRejections) +
                                 " consecutive rejections; first violated regulation '" + first_violation + "'");
}

// --- construction ----------------------------------------------------------------

namespace {

constexpr double kButtonClearance = 1.0;  // mm between frame and side buttons
constexpr double kGeomEps = 1e-9;

class Outline {
public:
    explicit Outline(Point start) : start_(start), cursor_(start) {}

    void line_to(Point p) {
        if (distance(cursor_, p) > kGeomEps) segs_.push_back(elevate_line(cursor_, p));
        cursor_ = p;
    }

    /// Circular arc around c (angles in radians, y down so increasing angle is
    /// clockwise on screen), split into pieces of at most 90 degrees.
    void arc(Point c, double r, double a0, double a1) {
        if (r <= kGeomEps) return;
        const double sweep = a1 - a0;
        const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(sweep) / (std::numbers::pi / 2) - 1e-9)));
        const double theta = sweep / pieces;
        const double k = 4.0 / 3.0 * std::tan(theta / 4.0);
        for (int i = 0; i < pieces; ++i) {
            const double s = a0 + i * theta;
            const double e = s + theta;
            const Point p0 = cursor_;
            const Point p3 = c + r * Point{std::cos(e), std::sin(e)};
            const Point p1 = c + r * Point{std::cos(s), std::sin(s)} + k * r * Point{-std::sin(s), std::cos(s)};
            const Point p2 = p3 - k * r * Point{-std::sin(e), std::cos(e)};
            segs_.push_back({p0, p1, p2, p3});
            cursor_ = p3;
        }
    }

    Chunk close(int id) {
        line_to(start_);
        if (segs_.empty()) throw ConstructionError("empty outline");
        segs_.back().p3 = start_;
        return make_chunk(id, std::move(segs_), true);
    }

private:
    Point start_;
    Point cursor_;
    std::vector<CubicSegment> segs_;
};

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& what) {
    if (!ok) throw ConstructionError(what);
}

Chunk rounded_rect(int id, double x0, double y0, double w, double h, double r, const std::string& what) {
    require(w > kGeomEps && h > kGeomEps, what + ": non-positive size");
    require(r >= 0.0 && r <= 0.5 * std::min(w, h) + kGeomEps, what + ": fillet does not fit");
    r = std::min(r, 0.5 * std::min(w, h));
    Outline o({x0 + r, y0});
    o.line_to({x0 + w - r, y0});
    o.arc({x0 + w - r, y0 + r}, r, -kPi / 2, 0.0);
    o.line_to({x0 + w, y0 + h - r});
    o.arc({x0 + w - r, y0 + h - r}, r, 0.0, kPi / 2);
    o.line_to({x0 + r, y0 + h});
    o.arc({x0 + r, y0 + h - r}, r, kPi / 2, kPi);
    o.line_to({x0, y0 + r});
    o.arc({x0 + r, y0 + r}, r, kPi, 1.5 * kPi);
    return o.close(id);
}

Chunk circle(int id, Point c, double r, const std::string& what) {
    require(r > kGeomEps, what + ": non-positive radius");
    Outline o({c.x, c.y - r});
    o.arc(c, r, -kPi / 2, 1.5 * kPi);
    return o.close(id);
}

struct NotchSpec {
    double width, height, shoulder, corner;
};

// Screen outline with a notch cut into the middle of its top edge.
Chunk notched_screen(int id, double x0, double y0, double w, double h, double r, const NotchSpec& n) {
    require(w > kGeomEps && h > kGeomEps, "screen: non-positive size");
    require(r >= 0.0 && r <= 0.5 * std::min(w, h) + kGeomEps, "screen: fillet does not fit");
    const double cx = x0 + 0.5 * w;
    const double left = cx - 0.5 * n.width;
    const double right = cx + 0.5 * n.width;
    require(n.width > kGeomEps && n.height > kGeomEps, "notch: non-positive size");
    require(n.shoulder >= 0.0 && n.corner >= 0.0, "notch: negative fillet");
    require(left - n.shoulder >= x0 + r - kGeomEps, "notch: wider than the screen's straight top edge");
    require(n.height - n.corner >= n.shoulder - kGeomEps, "notch: fillets exceed notch height");
    require(n.corner <= 0.5 * n.width + kGeomEps, "notch: corner fillet exceeds half the notch width");
    require(n.height < h, "notch: deeper than the screen");
    Outline o({x0 + r, y0});
    o.line_to({left - n.shoulder, y0});
    o.arc({left - n.shoulder, y0 + n.shoulder}, n.shoulder, -kPi / 2, 0.0);
    o.line_to({left, y0 + n.height - n.corner});
    o.arc({left + n.corner, y0 + n.height - n.corner}, n.corner, kPi, kPi / 2);
    o.line_to({right - n.corner, y0 + n.height});
    o.arc({right - n.corner, y0 + n.height - n.corner}, n.corner, kPi / 2, 0.0);
    o.line_to({right, y0 + n.shoulder});
    o.arc({right + n.shoulder, y0 + n.shoulder}, n.shoulder, kPi, 1.5 * kPi);
    o.line_to({x0 + w - r, y0});
    o.arc({x0 + w - r, y0 + r}, r, -kPi / 2, 0.0);
    o.line_to({x0 + w, y0 + h - r});
    o.arc({x0 + w - r, y0 + h - r}, r, 0.0, kPi / 2);
    o.line_to({x0 + r, y0 + h});
    o.arc({x0 + r, y0 + h - r}, r, kPi / 2, kPi);
    o.line_to({x0, y0 + r});
    o.arc({x0 + r, y0 + r}, r, kPi, 1.5 * kPi);
    return o.close(id);
}

Chunk stadium(int id, Point center, double w, double h, const std::string& what) {
    require(w > kGeomEps && h > kGeomEps, what + ": non-positive size");
    return rounded_rect(id, center.x - 0.5 * w, center.y - 0.5 * h, w, h, 0.5 * std::min(w, h), what);
}

class PhoneBuilder {
public:
    PhoneBuilder(const PhoneParams& p, const BrandRuleSet& rs) : p_(p), rs_(rs) {}

    VectorImage build() {
        require(rs_.has_rule("outer_frame"), "rule set lacks an outer frame");
        const double W = v("frame_width");
        const double H = v("frame_height");
        const double rf = v("frame_fillet");
        frame_w_ = W;
        chunks_.push_back(rounded_rect(next_id(), 0.0, 0.0, W, H, rf, "outer frame"));

        double inset = 0.0;
        if (rs_.has_rule("inner_edge")) {
            const double g1 = v("plane_gap");
            require(g1 > 0.0 && g1 < rf, "inner edge: gap must be positive and below the frame fillet");
            chunks_.push_back(rounded_rect(next_id(), g1, g1, W - 2 * g1, H - 2 * g1, rf - g1, "inner edge"));
            inset = g1;
        }
        if (rs_.has_rule("screen")) {
            const double g2 = v("screen_gap");
            require(g2 > 0.0, "screen: gap must be positive");
            const double side = opt("screen_side_extra");
            const double top = opt("screen_top_extra");
            screen_x0_ = inset + g2 + side;
            screen_y0_ = inset + g2 + top;
            screen_w_ = W - 2.0 * screen_x0_;
            const double screen_h = H - screen_y0_ - (inset + g2 + v("screen_chin"));
            const double rs = v("screen_fillet");
            if (rs_.has_rule("notch")) {
                notch_ = NotchSpec{v("notch_width"), v("notch_height"), v("notch_shoulder_fillet"),
                                   v("notch_corner_fillet")};
                chunks_.push_back(notched_screen(next_id(), screen_x0_, screen_y0_, screen_w_, screen_h, rs, *notch_));
            } else {
                chunks_.push_back(rounded_rect(next_id(), screen_x0_, screen_y0_, screen_w_, screen_h, rs, "screen"));
            }
        } else {
            screen_x0_ = screen_y0_ = inset;
            screen_w_ = W - 2.0 * inset;
        }
        plane_ = inset;

        if (rs_.has_rule("notch_lenses")) notch_lenses();
        if (rs_.has_rule("punch_hole")) punch_holes();
        if (rs_.has_rule("notch_speaker")) notch_speaker();
        if (rs_.has_rule("bezel_speaker")) bezel_speaker();
        if (rs_.has_rule("apple_buttons")) apple_buttons(H);
        if (rs_.has_rule("samsung_buttons")) samsung_buttons();

        VectorImage img;
        img.chunks = std::move(chunks_);
        img.label = rs_.label;
        img.source_id = p_.brand + "-" + std::to_string(p_.seed);
        return img;
    }

private:
    double v(const char* name) const { return p_.get(name); }
    double opt(const char* name) const {
        const auto it = p_.values.find(name);
        return it == p_.values.end() ? 0.0 : it->second;
    }
    int option(const char* name) const {
        const double x = v(name);
        const DiscreteParam* d = rs_.find_discrete(name);
        const int n = d ? static_cast<int>(d->options.size()) : 0;
        const int idx = static_cast<int>(std::lround(x));
        require(idx >= 0 && (n == 0 || idx < n), std::string("option out of range for '") + name + "'");
        return idx;
    }
    int next_id() const { return static_cast<int>(chunks_.size()); }

    void notch_lenses() {
        const int count = option("circle_count");
        const int arrangement = option("circle_arrangement");
        const double lens_x = 0.5 * frame_w_ + v("lens_offset_x");
        const double mirror_x = 0.5 * frame_w_ - v("lens_offset_x");
        const double y = screen_y0_ + v("lens_offset_y");
        const double spacing = v("lens_spacing");
        // Slot order: left group grows outward from lens_x, right group mirrors it.
        const Point slots[4] = {{lens_x, y}, {lens_x - spacing, y}, {mirror_x, y}, {mirror_x + spacing, y}};
        static constexpr int kLeftFirst[4] = {0, 1, 2, 3};
        static constexpr int kMirrored[4] = {0, 2, 1, 3};
        const int* order = arrangement == 0 ? kLeftFirst : kMirrored;
        for (int i = 0; i < std::min(count, 4); ++i) {
            const double r = i == 0 ? v("lens_radius") : v("sensor_radius");
            chunks_.push_back(circle(next_id(), slots[order[i]], r, "lens circle"));
        }
    }

    void punch_holes() {
        const int layout = option("lens_layout");
        const double r = v("punch_radius");
        const double y = screen_y0_ + v("punch_offset_y");
        std::vector<Point> centers;
        if (layout == 0) {
            centers.push_back({0.5 * frame_w_, y});
        } else {
            const double x = screen_x0_ + screen_w_ - v("punch_corner_x");
            centers.push_back({x, y});
            if (layout == 2) centers.push_back({x - v("punch_pair_spacing"), y});
        }
        for (const Point& c : centers) chunks_.push_back(circle(next_id(), c, r, "punch hole"));
        if (rs_.has_rule("lens_ring")) {
            const double ring = v("punch_ring_width");
            require(ring > 0.0, "lens ring: width must be positive");
            for (const Point& c : centers) chunks_.push_back(circle(next_id(), c, r + ring, "lens ring"));
        }
    }

    void notch_speaker() {
        const int position = option("speaker_position");
        double cy;
        if (position == 0) {
            require(notch_.has_value(), "speaker: mid-notch position needs a notch");
            cy = screen_y0_ + 0.5 * notch_->height;
        } else {
            cy = plane_ + v("speaker_inset");
        }
        chunks_.push_back(stadium(next_id(), {0.5 * frame_w_, cy}, v("speaker_width"), v("speaker_height"), "speaker"));
    }

    void bezel_speaker() {
        const double h = v("speaker_height");
        const double cy = v("speaker_offset_y") + 0.5 * h;
        chunks_.push_back(stadium(next_id(), {0.5 * frame_w_, cy}, v("speaker_width"), h, "speaker"));
    }

    void button(bool left, double y, double length, const std::string& what) {
        const double depth = v("button_depth");
        const double x0 = left ? -kButtonClearance - depth : frame_w_ + kButtonClearance;
        chunks_.push_back(rounded_rect(next_id(), x0, y, depth, length, v("button_fillet"), what));
    }

    void apple_buttons(double height) {
        if (option("mute_switch") == 0) button(true, v("mute_y"), v("mute_length"), "mute switch");
        const double vy = v("volume_y");
        const double vl = v("volume_length");
        if (option("volume_style") == 0) {
            button(true, vy, vl, "volume up");
            button(true, vy + vl + v("volume_gap"), vl, "volume down");
        } else {
            button(true, vy, 2.0 * vl + v("volume_gap"), "volume rocker");
        }
        button(false, v("power_y"), v("power_length"), "power button");
        require(v("power_y") + v("power_length") < height, "power button: below the frame");
    }

    void samsung_buttons() {
        button(false, v("volume_y"), v("volume_length"), "volume rocker");
        button(false, v("power_y"), v("power_length"), "power button");
        button(true, v("bixby_y"), v("bixby_length"), "bixby button");
    }

    const PhoneParams& p_;
    const BrandRuleSet& rs_;
    std::vector<Chunk> chunks_;
    double frame_w_ = 0.0;
    double plane_ = 0.0;
    double screen_x0_ = 0.0;
    double screen_y0_ = 0.0;
    double screen_w_ = 0.0;
    std::optional<NotchSpec> notch_;
};

}  // namespace

VectorImage build_phone_mm(const PhoneParams& p, const BrandRuleSet& rs) {
    return PhoneBuilder(p, rs).build();
}

VectorImage build_phone(const PhoneParams& p, const BrandRuleSet& rs) {
    return resegment(normalize_height(build_phone_mm(p, rs)), kHomogenizeMaxLen);
}

DatasetManifest generate_dataset(const std::vector<BrandRuleSet>& rule_sets, int n_per_brand, std::uint64_t seed,
                                 const std::filesystem::path& out_dir, int jobs) {
    if (n_per_brand < 1) throw ContractError("generate_dataset: n_per_brand must be >= 1");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

    const std::size_t n = static_cast<std::size_t>(n_per_brand);
    const std::size_t total = rule_sets.size() * n;
    DatasetManifest m;
    m.base_dir = out_dir;
    m.entries.resize(total);
    parallel_for(total, jobs, [&](std::size_t k) {
        const BrandRuleSet& rs = rule_sets[k / n];
        const std::uint64_t sample_seed = seed + k;
        const PhoneParams p = sample_params(rs, sample_seed);
        VectorImage img = build_phone(p, rs);
        char name[64];
        std::snprintf(name, sizeof name, "_%05zu.svg", k % n);
        const std::string file = rs.brand + name;
        write_text_file(out_dir / file, write_svg(img));
        m.entries[k] = ManifestEntry{file, rs.label, rs.brand, "train", sample_seed};
    });
    m.refresh_classes();
    write_manifest(m, out_dir / "manifest.jsonl");
    return m;
}

std::vector<VariantResult> variant_grid(const PhoneParams& base, const BrandRuleSet& rs,
                                        const std::vector<std::vector<Override>>& grid) {
    for (const auto& point : grid) {
        for (const auto& [name, value] : point) {
            if (!rs.declares(name)) throw ContractError("variant_grid: unknown parameter '" + name + "'");
        }
    }
    std::vector<std::vector<Override>> points = grid;
    if (points.empty()) points.emplace_back();
    std::vector<VariantResult> out;
    out.reserve(points.size());
    for (const auto& point : points) {
        VariantResult r;
        r.overrides = point;
        PhoneParams p = base;
        for (const auto& [name, value] : point) {
            p.values[name] = value;
            p.extrapolated.insert(name);
        }
        try {
            r.image = build_phone(p, rs);
        } catch (const ConstructionError& e) {
            r.error = e.what();
        } catch (const DegenerateImageError& e) {
            r.error = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace bignet
