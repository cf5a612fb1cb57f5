#include "bignet/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "bignet/error.hpp"
#include "bignet/parallel.hpp"
#include "bignet/rng.hpp"
#include "bignet/svg.hpp"
#include "json.hpp"

namespace bignet {

// --- splits and plans ------------------------------------------------------------

DatasetManifest stratified_split(const DatasetManifest& m, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw SplitError("test fraction must lie in (0, 1)");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < m.entries.size(); ++i) by_class[m.entries[i].label].push_back(i);
    DatasetManifest out = m;
    for (auto& [label, idx] : by_class) {
        const std::size_t n = idx.size();
        if (n < 2) throw SplitError("class " + std::to_string(label) + " has fewer than 2 samples");
        Rng rng(derive_seed(seed, 0x5B117 + static_cast<std::uint64_t>(label)));
        rng.shuffle(std::span<std::size_t>(idx));
        const auto wanted = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
        const std::size_t n_test = std::clamp<std::size_t>(wanted, 1, n - 1);
        for (std::size_t k = 0; k < n; ++k) out.entries[idx[k]].split = k < n_test ? "test" : "train";
    }
    return out;
}

std::vector<std::size_t> epoch_plan(std::span<const int> labels, bool oversample, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> plan(labels.size());
    for (std::size_t i = 0; i < plan.size(); ++i) plan[i] = i;
    if (oversample && !labels.empty()) {
        std::map<int, std::vector<std::size_t>> by_class;
        for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
        std::size_t majority = 0;
        for (const auto& [label, idx] : by_class) majority = std::max(majority, idx.size());
        for (const auto& [label, idx] : by_class) {
            for (std::size_t k = idx.size(); k < majority; ++k) plan.push_back(idx[rng.below(idx.size())]);
        }
    }
    rng.shuffle(std::span<std::size_t>(plan));
    return plan;
}

std::vector<std::size_t> epoch_plan(const DatasetManifest& m, bool oversample, std::uint64_t seed) {
    const auto train_idx = m.indices_of("train");
    if (train_idx.empty()) throw SplitError("manifest has no train samples");
    std::vector<int> labels;
    for (auto i : train_idx) labels.push_back(m.entries[i].label);
    auto plan = epoch_plan(labels, oversample, seed);
    for (auto& p : plan) p = train_idx[p];
    return plan;
}

VectorImage hflip(const VectorImage& img) {
    const Box b = img.bounds();
    const double axis = b.empty() ? 0.0 : b.xmin + b.xmax;
    auto flip = [axis](Point p) { return Point{axis - p.x, p.y}; };
    VectorImage out = img;
    for (auto& chunk : out.chunks) {
        std::reverse(chunk.segments.begin(), chunk.segments.end());
        for (auto& s : chunk.segments) s = CubicSegment{flip(s.p3), flip(s.p2), flip(s.p1), flip(s.p0)};
        chunk.refresh_bbox();
    }
    return out;
}

// --- config ------------------------------------------------------------------------

void TrainConfig::validate() const {
    model.validate();
    if (batch_size < 1) throw ContractError("train config: batch_size must be >= 1");
    if (!(lr > 0.0)) throw ContractError("train config: lr must be positive");
    if (!(lr_drop > 0.0)) throw ContractError("train config: lr_drop must be positive");
    if (max_epochs < 1) throw ContractError("train config: max_epochs must be >= 1");
    if (jobs < 1) throw ContractError("train config: jobs must be >= 1");
}

std::string train_config_to_json(const TrainConfig& tc) {
    nlohmann::ordered_json j;
    j["model"] = nlohmann::ordered_json::parse(config_to_json(tc.model));
    j["batch_size"] = tc.batch_size;
    j["lr"] = tc.lr;
    j["lr_drop"] = tc.lr_drop;
    j["lr_drop_iteration"] = tc.lr_drop_iteration;
    j["max_epochs"] = tc.max_epochs;
    j["seed"] = tc.seed;
    j["oversample"] = tc.oversample;
    j["hflip"] = tc.hflip;
    if (tc.stop_at_test_accuracy) j["stop_at_test_accuracy"] = *tc.stop_at_test_accuracy;
    return j.dump(2) + "\n";
}

TrainConfig train_config_from_json(std::string_view text) {
    TrainConfig tc;
    try {
        const auto j = nlohmann::json::parse(text);
        if (!j.is_object()) throw ContractError("train config must be a JSON object");
        static const std::set<std::string> known{"model",      "batch_size", "lr",        "lr_drop",
                                                 "lr_drop_iteration", "max_epochs", "seed", "oversample",
                                                 "hflip",      "stop_at_test_accuracy"};
        for (const auto& [key, value] : j.items()) {
            if (!known.count(key)) throw ContractError("train config: unknown key '" + key + "'");
        }
        if (j.contains("model")) tc.model = config_from_json(j["model"].dump());
        tc.batch_size = j.value("batch_size", tc.batch_size);
        tc.lr = j.value("lr", tc.lr);
        tc.lr_drop = j.value("lr_drop", tc.lr_drop);
        tc.lr_drop_iteration = j.value("lr_drop_iteration", tc.lr_drop_iteration);
        tc.max_epochs = j.value("max_epochs", tc.max_epochs);
        tc.seed = j.value("seed", tc.seed);
        tc.oversample = j.value("oversample", tc.oversample);
        tc.hflip = j.value("hflip", tc.hflip);
        if (j.contains("stop_at_test_accuracy") && !j["stop_at_test_accuracy"].is_null()) {
            tc.stop_at_test_accuracy = j["stop_at_test_accuracy"].get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ContractError(std::string("invalid train config JSON: ") + e.what());
    }
    tc.validate();
    return tc;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
    try {
        return train_config_from_json(read_text_file(path));
    } catch (const ContractError& e) {
        throw ContractError(path.string() + ": " + e.what());
    }
}

double lr_at(const TrainConfig& tc, std::int64_t iteration) {
    if (tc.lr_drop_iteration >= 0 && iteration > tc.lr_drop_iteration) return tc.lr * tc.lr_drop;
    return tc.lr;
}

std::string format_log(const std::vector<EpochRecord>& log) {
    std::string out = std::string(kLogHeader) + "\n";
    char buf[256];
    for (const auto& r : log) {
        std::snprintf(buf, sizeof buf, "%d,%lld,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.epoch,
                      static_cast<long long>(r.iteration), r.lr, r.train_loss, r.train_acc, r.test_loss, r.test_acc);
        out += buf;
    }
    return out;
}

// --- data --------------------------------------------------------------------------

VectorImage load_image(const DatasetManifest& m, const ManifestEntry& e) {
    const auto path = m.resolve(e);
    try {
        VectorImage img = normalize_height(read_svg_file(path));
        img.label = e.label;
        img.source_id = e.path;
        return img;
    } catch (const Error& err) {
        throw IoError("cannot load sample '" + path.string() + "': " + err.what());
    }
}

std::vector<TwoTierGraph> load_graphs(const DatasetManifest& m, std::span<const std::size_t> indices, int jobs,
                                      bool flipped) {
    std::vector<TwoTierGraph> out(indices.size());
    parallel_for(indices.size(), jobs, [&](std::size_t k) {
        const auto& e = m.entries.at(indices[k]);
        const VectorImage img = load_image(m, e);
        out[k] = build_graph(flipped ? hflip(img) : img);
    });
    return out;
}

Evaluation evaluate(const ModelConfig& cfg, const ModelParameters& p, const std::vector<TwoTierGraph>& graphs,
                    int jobs) {
    Evaluation ev;
    ev.predictions.assign(graphs.size(), 0);
    ev.truths.assign(graphs.size(), 0);
    std::vector<double> losses(graphs.size(), 0.0);
    parallel_for(graphs.size(), jobs, [&](std::size_t i) {
        const auto logits = forward(cfg, p, graphs[i]);
        ev.predictions[i] = argmax(logits);
        if (!graphs[i].label) throw ContractError("evaluate: sample '" + graphs[i].source_id + "' has no label");
        ev.truths[i] = *graphs[i].label;
        losses[i] = loss(logits, ev.truths[i]);
    });
    if (graphs.empty()) {
        ev.loss = ev.accuracy = std::numeric_limits<double>::quiet_NaN();
        return ev;
    }
    double total = 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        total += losses[i];
        correct += ev.predictions[i] == ev.truths[i];
    }
    ev.loss = total / static_cast<double>(graphs.size());
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(graphs.size());
    return ev;
}

// --- training loop -------------------------------------------------------------------

TrainResult train(const TrainConfig& tc, const std::vector<TwoTierGraph>& train_set,
                  const std::vector<TwoTierGraph>& train_flipped, const std::vector<TwoTierGraph>& test_set,
                  const std::filesystem::path& out_dir, const EpochCallback& on_epoch) {
    tc.validate();
    if (train_set.empty()) throw SplitError("training set is empty");
    if (tc.hflip && train_flipped.size() != train_set.size()) {
        throw ContractError("hflip training needs a flipped copy of every training sample");
    }
    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
    }
    std::vector<int> labels;
    for (const auto& g : train_set) {
        if (!g.label) throw ContractError("training sample '" + g.source_id + "' has no label");
        labels.push_back(*g.label);
    }

    TrainResult result;
    ModelParameters params = init_parameters(tc.model, derive_seed(tc.seed, 0x1417));
    AdamState adam = adam_init(params);
    std::int64_t iteration = 0;

    for (int epoch = 1; epoch <= tc.max_epochs; ++epoch) {
        const auto plan = epoch_plan(labels, tc.oversample, derive_seed(tc.seed, 0xE90C0000ull + epoch));
        Rng flip_rng(derive_seed(tc.seed, 0xF11B0000ull + epoch));
        std::vector<const TwoTierGraph*> order;
        order.reserve(plan.size());
        for (auto i : plan) {
            const bool flip = tc.hflip && flip_rng.below(2) == 1;
            order.push_back(flip ? &train_flipped[i] : &train_set[i]);
        }

        double loss_sum = 0.0;
        std::size_t correct = 0;
        double lr = tc.lr;
        std::vector<int> preds;
        ModelParameters grads;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(tc.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(tc.batch_size));
            const std::span<const TwoTierGraph* const> batch(order.data() + start, end - start);
            double batch_loss = 0.0;
            try {
                batch_loss = backward(tc.model, params, batch, grads, tc.jobs, &preds);
            } catch (const NumericError& e) {
                throw NumericError("epoch " + std::to_string(epoch) + ", batch " +
                                   std::to_string(start / tc.batch_size + 1) + ": " + e.what());
            }
            ++iteration;
            lr = lr_at(tc, iteration);
            adam_step(params, grads, adam, lr);
            loss_sum += batch_loss * static_cast<double>(batch.size());
            for (std::size_t k = 0; k < batch.size(); ++k) correct += preds[k] == *batch[k]->label;
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.iteration = iteration;
        rec.lr = lr;
        rec.train_loss = loss_sum / static_cast<double>(order.size());
        rec.train_acc = static_cast<double>(correct) / static_cast<double>(order.size());
        const Evaluation ev = evaluate(tc.model, params, test_set, tc.jobs);
        rec.test_loss = ev.loss;
        rec.test_acc = ev.accuracy;
        result.log.push_back(rec);

        if (!test_set.empty() && rec.test_acc > result.best_test_acc) {
            result.best_test_acc = rec.test_acc;
            result.best_epoch = epoch;
            result.best = params;
            if (!out_dir.empty()) save_checkpoint(out_dir / "best.bignet", tc.model, params);
        }
        if (!out_dir.empty()) write_text_file(out_dir / "log.csv", format_log(result.log));
        if (on_epoch) on_epoch(rec);
        if (tc.stop_at_test_accuracy && !test_set.empty() && rec.test_acc >= *tc.stop_at_test_accuracy) break;
    }
    if (test_set.empty()) {
        result.best = params;
        result.best_epoch = static_cast<int>(result.log.size());
        if (!out_dir.empty()) save_checkpoint(out_dir / "best.bignet", tc.model, params);
    }
    result.final_params = std::move(params);
    if (!out_dir.empty()) save_checkpoint(out_dir / "final.bignet", tc.model, result.final_params);
    return result;
}

TrainResult train(const TrainConfig& tc, const DatasetManifest& m, const std::filesystem::path& out_dir,
                  const EpochCallback& on_epoch) {
    const auto train_idx = m.indices_of("train");
    const auto test_idx = m.indices_of("test");
    if (train_idx.empty()) throw SplitError("manifest has no train samples; run a split first");
    for (auto i : train_idx) {
        if (m.entries[i].label >= tc.model.num_classes) {
            throw ContractError("label " + std::to_string(m.entries[i].label) + " exceeds the model's class count");
        }
    }
    const auto train_set = load_graphs(m, train_idx, tc.jobs);
    const auto flipped = tc.hflip ? load_graphs(m, train_idx, tc.jobs, true) : std::vector<TwoTierGraph>{};
    const auto test_set = load_graphs(m, test_idx, tc.jobs);
    return train(tc, train_set, flipped, test_set, out_dir, on_epoch);
}

}  // namespace bignet
