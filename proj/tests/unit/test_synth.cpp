#include "doctest.h"
#include "support.hpp"

#include <fstream>

#include "bignet/error.hpp"
#include "bignet/manifest.hpp"
#include "bignet/svg.hpp"
#include "bignet/synth.hpp"

using namespace bignet;
using namespace testsupport;

namespace {

BrandRuleSet apple() { return load_ruleset(source_dir() / "rules" / "apple.json"); }
BrandRuleSet samsung() { return load_ruleset(source_dir() / "rules" / "samsung.json"); }

std::string chunk_svg(const Chunk& c) {
    VectorImage one;
    one.chunks.push_back(c);
    return write_svg(one);
}

}  // namespace

TEST_CASE("shipped rule sets have the published parameter counts") {
    const auto a = apple();
    CHECK(a.continuous.size() == 28);
    CHECK(a.discrete.size() == 5);
    CHECK(a.regulations.size() == 6);
    const auto s = samsung();
    CHECK(s.continuous.size() == 25);
    CHECK(s.discrete.size() == 1);
    CHECK(s.regulations.size() == 12);
    CHECK(a.rules.size() == 7);
    CHECK(s.rules.size() == 7);
}

TEST_CASE("rule set JSON round-trips") {
    const auto a = apple();
    const auto back = ruleset_from_json(ruleset_to_json(a));
    CHECK(ruleset_to_json(back) == ruleset_to_json(a));
}

TEST_CASE("invalid rule sets are rejected") {
    auto undeclared = apple();
    undeclared.rules[1].params[0] = "plane_gap_typo";
    CHECK_THROWS_AS(ruleset_from_json(ruleset_to_json(undeclared)), ContractError);
    auto missing = apple();
    missing.rules[0].params.pop_back();
    CHECK_THROWS_AS(missing.validate(), ContractError);

    auto rs = apple();
    rs.continuous[0].max = rs.continuous[0].min;
    CHECK_THROWS_AS(rs.validate(), ContractError);
}

TEST_CASE("sampling is deterministic in the seed") {
    const auto rs = apple();
    CHECK(sample_params(rs, 42).values == sample_params(rs, 42).values);
    CHECK(sample_params(rs, 42).values != sample_params(rs, 43).values);
}

TEST_CASE("unsatisfiable regulation raises infeasible-ruleset error naming it") {
    auto rs = apple();
    rs.regulations.push_back({"screen width < frame inner width", {{"frame_width", 1.0}}, -1000.0, Regulation::Op::ge});
    try {
        sample_params(rs, 1);
        FAIL("expected infeasible rule set");
    } catch (const InfeasibleRulesetError& e) {
        CHECK(std::string(e.what()).find("screen width < frame inner width") != std::string::npos);
    }
}

TEST_CASE("1000 samples satisfy every regulation and stay in range") {
    for (const auto& rs : {apple(), samsung()}) {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const auto p = sample_params(rs, seed);
            // Re-check each predicate from its terms, independently of Regulation::holds.
            for (const auto& reg : rs.regulations) {
                double lhs = reg.constant;
                for (const auto& [name, coef] : reg.terms) lhs += coef * p.values.at(name);
                bool ok = false;
                switch (reg.op) {
                    case Regulation::Op::le: ok = lhs <= 0; break;
                    case Regulation::Op::lt: ok = lhs < 0; break;
                    case Regulation::Op::ge: ok = lhs >= 0; break;
                    case Regulation::Op::gt: ok = lhs > 0; break;
                }
                CHECK_MESSAGE(ok, reg.name);
            }
            for (const auto& c : rs.continuous) {
                CHECK(p.values.at(c.name) >= c.min);
                CHECK(p.values.at(c.name) <= c.max);
            }
        }
    }
}

TEST_CASE("anchor dimensions give the normalized flat-top lengths") {
    const auto a = apple();
    const auto img = build_phone(default_params(a), a);
    const Chunk& frame = img.chunks[0];
    CHECK(frame.bbox.height() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(frame.bbox.width() == doctest::Approx(71.15 / 146.15).epsilon(1e-9));
    CHECK(frame.bbox.width() == doctest::Approx(0.4868).epsilon(1e-4));
    CHECK(flat_top_length(frame) == doctest::Approx((71.15 - 2 * 10.75) / 146.15).epsilon(1e-9));
    CHECK(std::abs(flat_top_length(frame) - 0.34) <= 0.005);

    const auto s = samsung();
    const auto simg = build_phone(default_params(s), s);
    CHECK(flat_top_length(simg.chunks[0]) == doctest::Approx((73.1 - 2 * 7.415) / 154.55).epsilon(1e-9));
    CHECK(std::abs(flat_top_length(simg.chunks[0]) - 0.38) <= 0.005);
}

TEST_CASE("generated images are normalized and valid") {
    for (const auto& rs : {apple(), samsung()}) {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto img = build_phone(sample_params(rs, seed), rs);
            CHECK(img.normalized);
            CHECK(std::abs(img.bounds().height() - 1.0) < 1e-9);
            CHECK(img.label == rs.label);
            for (const auto& c : img.chunks) {
                REQUIRE(!c.segments.empty());
                for (std::size_t k = 0; k + 1 < c.segments.size(); ++k) {
                    CHECK(distance(c.segments[k].p3, c.segments[k + 1].p0) <= 1e-9);
                }
                if (c.closed) CHECK(distance(c.segments.back().p3, c.segments.front().p0) <= 1e-9);
                for (const auto& seg : c.segments) CHECK(seg.control_length() <= kHomogenizeMaxLen + 1e-12);
            }
        }
    }
}

TEST_CASE("same parameters build byte-identical SVG") {
    const auto rs = samsung();
    const auto p = sample_params(rs, 9);
    CHECK(write_svg(build_phone(p, rs)) == write_svg(build_phone(p, rs)));
}

TEST_CASE("negative inset is a construction error") {
    const auto rs = apple();
    auto p = default_params(rs);
    p.set("plane_gap", -1.0);
    CHECK_THROWS_AS(build_phone(p, rs), ConstructionError);
    p = default_params(rs);
    p.set("screen_gap", 40.0);
    CHECK_THROWS_AS(build_phone(p, rs), ConstructionError);
}

TEST_CASE("dataset generation writes balanced, reproducible output") {
    const auto dir1 = scratch_dir("synth1");
    const auto dir2 = scratch_dir("synth2");
    const auto m1 = generate_dataset({apple(), samsung()}, 3, 7, dir1, 2);
    const auto m2 = generate_dataset({apple(), samsung()}, 3, 7, dir2, 1);
    REQUIRE(m1.entries.size() == 6);
    int per[2] = {0, 0};
    for (const auto& e : m1.entries) ++per[e.label];
    CHECK(per[0] == 3);
    CHECK(per[1] == 3);
    CHECK(read_text_file(dir1 / "manifest.jsonl") == read_text_file(dir2 / "manifest.jsonl"));
    for (const auto& e : m1.entries) CHECK(read_text_file(dir1 / e.path) == read_text_file(dir2 / e.path));
    const auto back = read_manifest(dir1 / "manifest.jsonl");
    CHECK(back.entries.size() == 6);
    CHECK(back.class_names == std::vector<std::string>{"apple", "samsung"});
    CHECK(back.entries[4].seed == 7 + 4);
}

TEST_CASE("uniform sampler mean width is near the range midpoint") {
    for (const auto& rs : {apple(), samsung()}) {
        const auto* w = rs.find_continuous("frame_width");
        double sum = 0.0;
        for (std::uint64_t k = 0; k < 1000; ++k) sum += sample_params(rs, k).values.at("frame_width");
        const double mid = 0.5 * (w->min + w->max);
        CHECK(std::abs(sum / 1000.0 - mid) <= 0.01 * mid);
    }
}

TEST_CASE("variant grid examples") {
    const auto rs = apple();
    const auto base = default_params(rs);
    const auto single = variant_grid(base, rs, {});
    REQUIRE(single.size() == 1);
    CHECK(write_svg(*single[0].image) == write_svg(build_phone(base, rs)));

    std::vector<std::vector<Override>> sweep;
    for (double x : {-15.0, -9.0, 0.0, 10.0, 22.0}) sweep.push_back({{"lens_offset_x", x}});
    const auto lens = variant_grid(base, rs, sweep);
    REQUIRE(lens.size() == 5);
    const auto ref = build_phone(base, rs);
    const int circles = static_cast<int>(std::lround(base.get("circle_count")));
    for (const auto& v : lens) {
        REQUIRE(v.image);
        CHECK(v.error.empty());
        REQUIRE(v.image->chunks.size() == ref.chunks.size());
        for (std::size_t c = 0; c < ref.chunks.size(); ++c) {
            const bool is_lens = c >= 3 && c < static_cast<std::size_t>(3 + circles);
            if (!is_lens) CHECK(chunk_svg(v.image->chunks[c]) == chunk_svg(ref.chunks[c]));
        }
    }
    CHECK(chunk_svg(lens[0].image->chunks[3]) != chunk_svg(lens[4].image->chunks[3]));

    std::vector<std::vector<Override>> grid;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) grid.push_back({{"plane_gap", 0.5 + 0.2 * i}, {"screen_gap", 0.5 + 0.3 * j}});
    }
    CHECK(variant_grid(base, rs, grid).size() == 100);

    CHECK_THROWS_AS(variant_grid(base, rs, {{{"no_such_param", 1.0}}}), ContractError);
    const auto bad = variant_grid(base, rs, {{{"plane_gap", -3.0}}});
    CHECK_FALSE(bad[0].image);
    CHECK_FALSE(bad[0].error.empty());
}
