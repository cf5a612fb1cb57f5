#pragma once

// Parametric phone generator. A brand rule set declares continuous and
// discrete parameters, regulations over them, and an ordered list of
// construction rules (R1 outer frame ... R7 side buttons).

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bignet/geometry.hpp"
#include "bignet/manifest.hpp"

namespace bignet {

struct ContinuousParam {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    double default_value = 0.0;
    std::string unit = "mm";
};

struct DiscreteParam {
    std::string name;
    std::vector<std::string> options;
    int default_index = 0;
};

struct PhoneParams;

/// Linear predicate: sum(coef * value) + constant  <op>  0.
struct Regulation {
    enum class Op { le, lt, ge, gt };

    std::string name;
    std::vector<std::pair<std::string, double>> terms;
    double constant = 0.0;
    Op op = Op::le;

    double lhs(const PhoneParams& p) const;
    bool holds(const PhoneParams& p) const;
};

struct RuleDescriptor {
    std::string id;    // "R1" ... "R7"
    std::string kind;  // builder that realizes the rule, e.g. "outer_frame"
    std::vector<std::string> params;
};

struct BrandRuleSet {
    std::string brand;
    int label = 0;
    std::vector<RuleDescriptor> rules;
    std::vector<ContinuousParam> continuous;
    std::vector<DiscreteParam> discrete;
    std::vector<Regulation> regulations;

    /// Throws ContractError when a rule references an undeclared parameter,
    /// a rule kind is unknown or misses a parameter it needs, or a range is empty.
    void validate() const;
    const ContinuousParam* find_continuous(std::string_view name) const;
    const DiscreteParam* find_discrete(std::string_view name) const;
    bool declares(std::string_view name) const { return find_continuous(name) || find_discrete(name); }
    bool has_rule(std::string_view kind) const;
};

BrandRuleSet ruleset_from_json(std::string_view text);
std::string ruleset_to_json(const BrandRuleSet& rs);
BrandRuleSet load_ruleset(const std::filesystem::path& path);

/// Parameter names each rule kind consumes; discrete ones hold option indices.
const std::map<std::string, std::vector<std::string>>& rule_kind_params();

struct PhoneParams {
    std::map<std::string, double> values;  // discrete values are option indices
    std::string brand;
    std::uint64_t seed = 0;
    std::set<std::string> extrapolated;  // overridden outside the sampling process

    double get(std::string_view name) const;
    void set(const std::string& name, double v) { values[name] = v; }
};

/// Anchor values of every declared parameter.
PhoneParams default_params(const BrandRuleSet& rs);

/// Uniform draws with rejection against the regulations; deterministic in seed.
/// Throws InfeasibleRulesetError after 1000 consecutive rejections.
PhoneParams sample_params(const BrandRuleSet& rs, std::uint64_t seed);

/// Names of regulations violated by p (empty when all hold).
std::vector<std::string> violated_regulations(const BrandRuleSet& rs, const PhoneParams& p);

inline constexpr double kHomogenizeMaxLen = 0.05;

/// Applies R1..R7 in mm, normalizes to unit height, and resegments at
/// kHomogenizeMaxLen. Chunk order: frame, inner edge, screen, lens circles,
/// lens rings, speaker, buttons. Throws ConstructionError on inconsistent
/// geometry. Regulations are not checked here.
VectorImage build_phone(const PhoneParams& p, const BrandRuleSet& rs);

/// Same as build_phone but stops before normalization (mm units).
VectorImage build_phone_mm(const PhoneParams& p, const BrandRuleSet& rs);

/// Writes n_per_brand SVGs per rule set plus manifest.jsonl into out_dir.
/// Sample k (counted across brands in order) uses seed + k.
DatasetManifest generate_dataset(const std::vector<BrandRuleSet>& rule_sets, int n_per_brand, std::uint64_t seed,
                                 const std::filesystem::path& out_dir, int jobs = 1);

using Override = std::pair<std::string, double>;

struct VariantResult {
    std::vector<Override> overrides;
    std::optional<VectorImage> image;
    std::string error;  // set when construction failed
};

/// One image per grid point, each point being a set of overrides applied to
/// `base`. An empty grid yields the base image.
std::vector<VariantResult> variant_grid(const PhoneParams& base, const BrandRuleSet& rs,
                                        const std::vector<std::vector<Override>>& grid);

}  // namespace bignet
