// Command-line front end for the whole pipeline.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "bignet/error.hpp"
#include "bignet/explain.hpp"
#include "bignet/manifest.hpp"
#include "bignet/metrics.hpp"
#include "bignet/parallel.hpp"
#include "bignet/svg.hpp"
#include "bignet/synth.hpp"
#include "bignet/trace.hpp"
#include "bignet/train.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace bignet;

namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

// "a:b:n" is an inclusive linspace, anything else a comma list.
std::vector<double> parse_values(const std::string& spec) {
    std::vector<double> out;
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) throw ContractError("not a number: '" + s + "'");
        return v;
    };
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ContractError("range must look like lo:hi:count, got '" + spec + "'");
        const double lo = number(parts[0]), hi = number(parts[1]);
        const int n = static_cast<int>(number(parts[2]));
        if (n < 1) throw ContractError("range count must be at least 1");
        for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
        return out;
    }
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
    if (out.empty()) throw ContractError("empty value list");
    return out;
}

PdpAxis parse_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ContractError("axis must look like name=values, got '" + spec + "'");
    return {spec.substr(0, eq), parse_values(spec.substr(eq + 1))};
}

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::vector<std::size_t> select_split(const DatasetManifest& m, const std::string& split) {
    if (split == "all") {
        std::vector<std::size_t> all(m.entries.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return all;
    }
    auto idx = m.indices_of(split);
    if (idx.empty()) throw SplitError("manifest has no '" + split + "' samples");
    return idx;
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

VectorImage read_input_image(const fs::path& path, std::optional<int> label) {
    VectorImage img = normalize_height(read_svg_file(path));
    img.source_id = path.filename().string();
    img.label = label;
    return img;
}

std::string matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& names, bool counts = false) {
    std::string out = "class";
    for (const auto& n : names) out += "," + n;
    out += "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out += names[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < m.cols(); ++c) out += "," + (std::isnan(m(r, c)) ? std::string("nan") : fixed(m(r, c), counts ? 0 : 6));
        out += "\n";
    }
    return out;
}

std::vector<std::string> class_names(const DatasetManifest& m, int k) {
    std::vector<std::string> names = m.class_names;
    for (int i = static_cast<int>(names.size()); i < k; ++i) names.push_back("class" + std::to_string(i));
    names.resize(static_cast<std::size_t>(k));
    return names;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bignet: brand identification on vector graphics"};
    app.require_subcommand(1);
    int jobs = default_jobs();
    std::uint64_t seed = 0;

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic phone dataset from rule sets");
    std::vector<std::string> synth_rules;
    int synth_n = 0;
    std::string synth_out;
    synth->add_option("--rules", synth_rules, "Rule set JSON (repeat per brand)")->required()->check(CLI::ExistingFile);
    synth->add_option("-n,--per-brand", synth_n, "Samples per brand")->required()->check(CLI::PositiveNumber);
    synth->add_option("--seed", seed, "Base seed");
    synth->add_option("-o,--out", synth_out, "Output directory")->required();
    synth->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    // trace
    auto* trace = app.add_subcommand("trace", "Vectorize PBM edge maps into SVG");
    std::vector<std::string> trace_inputs;
    std::string trace_out;
    TraceOptions topts;
    trace->add_option("inputs", trace_inputs, "PBM files")->required()->check(CLI::ExistingFile);
    trace->add_option("-o,--out", trace_out, "Output directory")->required();
    trace->add_option("--max-err", topts.max_err, "Maximum fit deviation in pixels")->check(CLI::PositiveNumber);
    trace->add_option("--min-pixels", topts.min_pixels, "Drop components smaller than this")->check(CLI::NonNegativeNumber);
    trace->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    // split
    auto* split = app.add_subcommand("split", "Stratified train/test split of a manifest");
    std::string split_manifest, split_out;
    double split_fraction = 0.1;
    split->add_option("manifest", split_manifest, "Input manifest.jsonl")->required()->check(CLI::ExistingFile);
    split->add_option("--fraction", split_fraction, "Test fraction")->check(CLI::Range(0.0, 1.0));
    split->add_option("--seed", seed, "Shuffle seed");
    split->add_option("-o,--out", split_out, "Output directory for manifest.jsonl")->required();

    // train
    auto* trn = app.add_subcommand("train", "Train a model");
    std::string train_config, train_manifest, train_out;
    std::optional<std::uint64_t> train_seed;
    std::optional<int> train_epochs;
    trn->add_option("--config", train_config, "Train config JSON")->required()->check(CLI::ExistingFile);
    trn->add_option("--manifest", train_manifest, "Split manifest.jsonl")->required()->check(CLI::ExistingFile);
    trn->add_option("--seed", train_seed, "Override the config's seed");
    trn->add_option("--epochs", train_epochs, "Override max_epochs")->check(CLI::PositiveNumber);
    trn->add_option("-o,--out", train_out, "Output directory")->required();
    trn->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    // eval
    auto* eval = app.add_subcommand("eval", "Confusion matrix, kappa and accuracy");
    std::string eval_ckpt, eval_manifest, eval_out, eval_split = "test";
    eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);
    eval->add_option("--manifest", eval_manifest, "Manifest")->required()->check(CLI::ExistingFile);
    eval->add_option("--split", eval_split, "train, test or all")->check(CLI::IsMember({"train", "test", "all"}));
    eval->add_option("-o,--out", eval_out, "Output directory")->required();
    eval->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    // lofo / cam share checkpoint + images
    auto* lofo_cmd = app.add_subcommand("lofo", "Leave-one-feature-out attribution");
    auto* cam_cmd = app.add_subcommand("cam", "Single-pass chunk attribution");
    std::string attr_ckpt, attr_out, lofo_level = "both", cam_mode = "gradient";
    std::vector<std::string> attr_images;
    std::optional<int> attr_label;
    double lofo_tau = kLofoThreshold;
    for (auto* cmd : {lofo_cmd, cam_cmd}) {
        cmd->add_option("--checkpoint", attr_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);
        cmd->add_option("images", attr_images, "SVG images")->required()->check(CLI::ExistingFile);
        cmd->add_option("--label", attr_label, "True class of the images (default: predicted class)");
        cmd->add_option("-o,--out", attr_out, "Output directory")->required();
    }
    lofo_cmd->add_option("--level", lofo_level, "chunk, curve or both")->check(CLI::IsMember({"chunk", "curve", "both"}));
    lofo_cmd->add_option("--tau", lofo_tau, "Importance threshold on the confidence drop");
    lofo_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    cam_cmd->add_option("--mode", cam_mode, "gradient or loo")->check(CLI::IsMember({"gradient", "loo"}));

    // pdp
    auto* pdp_cmd = app.add_subcommand("pdp", "Partial dependence sweep over generator parameters");
    std::string pdp_ckpt, pdp_rules, pdp_out;
    std::vector<std::string> pdp_axes;
    int pdp_samples = 50;
    std::optional<int> pdp_target;
    pdp_cmd->add_option("--checkpoint", pdp_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);
    pdp_cmd->add_option("--rules", pdp_rules, "Rule set JSON")->required()->check(CLI::ExistingFile);
    pdp_cmd->add_option("--axis", pdp_axes, "name=lo:hi:count or name=v1,v2,... (one or two)")->required()->expected(1, 2);
    pdp_cmd->add_option("-m,--samples", pdp_samples, "Samples per grid point")->check(CLI::PositiveNumber);
    pdp_cmd->add_option("--target", pdp_target, "Class whose confidence is reported (default: the rule set's label)");
    pdp_cmd->add_option("--seed", seed, "Base seed");
    pdp_cmd->add_option("-o,--out", pdp_out, "Output directory")->required();
    pdp_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    // project
    auto* project = app.add_subcommand("project", "Latent vectors and their 2-D PCA projection");
    std::string proj_ckpt, proj_manifest, proj_out, proj_split = "test";
    project->add_option("--checkpoint", proj_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);
    project->add_option("--manifest", proj_manifest, "Manifest")->required()->check(CLI::ExistingFile);
    project->add_option("--split", proj_split, "train, test or all")->check(CLI::IsMember({"train", "test", "all"}));
    project->add_option("-o,--out", proj_out, "Output directory")->required();
    project->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    // info
    auto* info = app.add_subcommand("info", "Inspect a model config or checkpoint");
    std::string info_config, info_ckpt;
    info->add_option("--config", info_config, "Model or train config JSON")->check(CLI::ExistingFile);
    info->add_option("--checkpoint", info_ckpt, "Checkpoint file")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }
    if (info->parsed() && info_config.empty() == info_ckpt.empty()) {
        std::cerr << "info: give exactly one of --config or --checkpoint\n" << info->help();
        return 2;
    }

    try {
        if (synth->parsed()) {
            std::vector<BrandRuleSet> rs;
            for (const auto& r : synth_rules) rs.push_back(load_ruleset(r));
            const auto m = generate_dataset(rs, synth_n, seed, synth_out, jobs);
            std::cout << "wrote " << m.entries.size() << " images to " << synth_out << "\n";
        } else if (trace->parsed()) {
            ensure_dir(trace_out);
            topts.jobs = jobs;
            for (const auto& in : trace_inputs) {
                VectorImage img = trace_bitmap(read_pbm(read_text_file(in)), topts);
                const fs::path out = fs::path(trace_out) / (stem_of(in) + ".svg");
                write_text_file(out, write_svg(img));
                std::cout << in << ": " << img.chunks.size() << " chunks -> " << out.string() << "\n";
            }
        } else if (split->parsed()) {
            auto m = stratified_split(read_manifest(split_manifest), split_fraction, seed);
            ensure_dir(split_out);
            const fs::path out_dir = fs::absolute(split_out);
            for (auto& e : m.entries) e.path = fs::proximate(fs::absolute(m.resolve(e)), out_dir).generic_string();
            write_manifest(m, out_dir / "manifest.jsonl");
            std::cout << "train " << m.indices_of("train").size() << ", test " << m.indices_of("test").size() << "\n";
        } else if (trn->parsed()) {
            TrainConfig tc = load_train_config(train_config);
            if (train_seed) tc.seed = *train_seed;
            if (train_epochs) tc.max_epochs = *train_epochs;
            tc.jobs = jobs;
            const auto m = read_manifest(train_manifest);
            ensure_dir(train_out);
            write_text_file(fs::path(train_out) / "train_config.json", train_config_to_json(tc));
            const auto result = train(tc, m, train_out, [](const EpochRecord& r) {
                std::cout << "epoch " << r.epoch << "  lr " << r.lr << "  train loss " << fixed(r.train_loss, 4)
                          << " acc " << fixed(r.train_acc, 4) << "  test loss " << fixed(r.test_loss, 4) << " acc "
                          << fixed(r.test_acc, 4) << std::endl;
            });
            write_text_file(fs::path(train_out) / "curve.svg", render_plot(result.log));
            std::cout << "best test accuracy " << fixed(result.best_test_acc, 4) << " at epoch " << result.best_epoch << "\n";
        } else if (eval->parsed()) {
            const auto [cfg, params] = load_checkpoint(eval_ckpt);
            const auto m = read_manifest(eval_manifest);
            const auto graphs = load_graphs(m, select_split(m, eval_split), jobs);
            const auto ev = evaluate(cfg, params, graphs, jobs);
            const int k = cfg.num_classes;
            const auto cm = confusion(ev.predictions, ev.truths, k);
            const auto kap = kappa_matrix(ev.predictions, ev.truths, k);
            const auto names = class_names(m, k);
            ensure_dir(eval_out);
            write_text_file(fs::path(eval_out) / "confusion.csv", matrix_csv(cm.cast<double>(), names, true));
            write_text_file(fs::path(eval_out) / "kappa.csv", matrix_csv(kap, names));
            nlohmann::ordered_json j;
            j["split"] = eval_split;
            j["samples"] = graphs.size();
            j["accuracy"] = ev.accuracy;
            j["loss"] = ev.loss;
            write_text_file(fs::path(eval_out) / "report.json", j.dump(2) + "\n");
            std::cout << "samples " << graphs.size() << "\naccuracy " << fixed(ev.accuracy) << "\nloss "
                      << fixed(ev.loss) << "\nconfusion (rows predicted, columns true):\n"
                      << matrix_csv(cm.cast<double>(), names, true) << "kappa:\n"
                      << matrix_csv(kap, names);
        } else if (lofo_cmd->parsed() || cam_cmd->parsed()) {
            const auto [cfg, params] = load_checkpoint(attr_ckpt);
            ensure_dir(attr_out);
            const bool is_lofo = lofo_cmd->parsed();
            for (const auto& path : attr_images) {
                const VectorImage img = read_input_image(path, attr_label);
                AttributionReport r;
                if (is_lofo) {
                    const LofoLevel level = lofo_level == "chunk"   ? LofoLevel::chunk
                                            : lofo_level == "curve" ? LofoLevel::curve
                                                                    : LofoLevel::both;
                    r = lofo(cfg, params, img, level, lofo_tau, jobs);
                } else {
                    r = cam(cfg, params, img, cam_mode == "loo" ? CamMode::leave_one_out : CamMode::gradient);
                }
                const std::string base = stem_of(path) + (is_lofo ? "_lofo" : "_cam");
                write_text_file(fs::path(attr_out) / (base + ".svg"), render_attribution(img, r));
                write_text_file(fs::path(attr_out) / (base + ".csv"), attribution_csv(r));
                std::cout << path << ": class " << r.target << ", " << r.important_chunks.size()
                          << " important chunks, " << r.important_curves.size() << " important curves\n";
            }
        } else if (pdp_cmd->parsed()) {
            const auto [cfg, params] = load_checkpoint(pdp_ckpt);
            const auto rs = load_ruleset(pdp_rules);
            std::vector<PdpAxis> axes;
            for (const auto& a : pdp_axes) axes.push_back(parse_axis(a));
            const auto r = pdp(cfg, params, rs, seed, axes, pdp_samples, pdp_target.value_or(rs.label), jobs);
            ensure_dir(pdp_out);
            write_text_file(fs::path(pdp_out) / "pdp.csv", pdp_csv(r));
            write_text_file(fs::path(pdp_out) / "pdp.svg", render_plot(r));
            std::cout << pdp_csv(r);
        } else if (project->parsed()) {
            const auto [cfg, params] = load_checkpoint(proj_ckpt);
            const auto m = read_manifest(proj_manifest);
            const auto idx = select_split(m, proj_split);
            const auto z = latents(cfg, params, load_graphs(m, idx, jobs), jobs);
            std::vector<std::string> ids;
            std::vector<int> labels;
            for (auto i : idx) {
                ids.push_back(m.entries[i].path);
                labels.push_back(m.entries[i].label);
            }
            const auto proj = pca2(z, labels);
            ensure_dir(proj_out);
            write_text_file(fs::path(proj_out) / "latents.csv", latents_csv(ids, labels, z));
            write_text_file(fs::path(proj_out) / "projection.csv", projection_csv(ids, proj));
            write_text_file(fs::path(proj_out) / "pca.svg", render_plot(proj));
            std::cout << "explained variance " << fixed(proj.explained(0), 4) << " " << fixed(proj.explained(1), 4)
                      << "\n";
        } else if (info->parsed()) {
            if (!info_config.empty()) {
                const auto cfg = load_config(info_config);
                std::cout << "variant: " << (cfg.variant == Variant::car ? "car" : "phone") << "\n";
                std::cout << "classes: " << cfg.num_classes << "\n";
                std::cout << "learnable parameters: " << param_count(cfg) << "\n";
            } else {
                const auto [cfg, params] = load_checkpoint(info_ckpt);
                std::cout << config_to_json(cfg);
                for (const auto& t : tensors(params)) {
                    std::cout << t.name << " [";
                    for (std::size_t d = 0; d < t.dims.size(); ++d) std::cout << (d ? " x " : "") << t.dims[d];
                    std::cout << "]\n";
                }
                std::cout << "learnable parameters: " << param_count(params) << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
