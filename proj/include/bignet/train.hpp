#pragma once

// Dataset handling and the training loop.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bignet/geometry.hpp"
#include "bignet/graphs.hpp"
#include "bignet/manifest.hpp"
#include "bignet/metrics.hpp"
#include "bignet/net.hpp"

namespace bignet {

/// Per-class seeded shuffle; the first max(1, round(fraction * n)) samples of
/// each class (capped at n - 1) become test. Throws SplitError for classes
/// with fewer than two samples.
DatasetManifest stratified_split(const DatasetManifest& m, double test_fraction, std::uint64_t seed);

/// Order of positions into `labels` for one epoch. With oversampling every
/// class keeps all of its samples and is topped up with draws (with
/// replacement) to the majority count, then everything is shuffled.
std::vector<std::size_t> epoch_plan(std::span<const int> labels, bool oversample, std::uint64_t seed);
/// Same over the train split of a manifest; returns manifest entry indices.
std::vector<std::size_t> epoch_plan(const DatasetManifest& m, bool oversample, std::uint64_t seed);

/// Mirror x -> xmin + xmax - x, reversing segment and control order so each
/// chunk keeps its traversal direction.
VectorImage hflip(const VectorImage& img);

struct TrainConfig {
    ModelConfig model;
    int batch_size = 100;
    double lr = 1e-3;
    double lr_drop = 0.1;
    std::int64_t lr_drop_iteration = -1;  // negative: never
    int max_epochs = 105;
    std::uint64_t seed = 0;
    bool oversample = true;
    bool hflip = false;
    int jobs = 1;
    /// Stop after the first epoch whose test accuracy reaches this value.
    std::optional<double> stop_at_test_accuracy;

    void validate() const;
};

std::string train_config_to_json(const TrainConfig& tc);
TrainConfig train_config_from_json(std::string_view text);
TrainConfig load_train_config(const std::filesystem::path& path);

/// Learning rate used by optimizer step `iteration` (1-based).
double lr_at(const TrainConfig& tc, std::int64_t iteration);

struct EpochRecord {
    int epoch = 0;
    std::int64_t iteration = 0;
    double lr = 0.0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_loss = 0.0;
    double test_acc = 0.0;
};

inline constexpr const char* kLogHeader = "epoch,iteration,lr,train_loss,train_acc,test_loss,test_acc";
std::string format_log(const std::vector<EpochRecord>& log);

struct TrainResult {
    ModelParameters best;
    ModelParameters final_params;
    int best_epoch = 0;
    double best_test_acc = -1.0;
    std::vector<EpochRecord> log;
};

/// Reads, normalizes and converts the given manifest entries. Errors name the
/// offending file.
std::vector<TwoTierGraph> load_graphs(const DatasetManifest& m, std::span<const std::size_t> indices, int jobs = 1,
                                      bool flipped = false);
VectorImage load_image(const DatasetManifest& m, const ManifestEntry& e);

struct Evaluation {
    double loss = 0.0;
    double accuracy = 0.0;
    std::vector<int> predictions;
    std::vector<int> truths;
};

Evaluation evaluate(const ModelConfig& cfg, const ModelParameters& p, const std::vector<TwoTierGraph>& graphs,
                    int jobs = 1);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Trains on in-memory graphs. `train_flipped` (same order as `train`) is
/// used when tc.hflip is set; each plan slot picks the flipped copy with
/// probability one half. When out_dir is non-empty, best.bignet, final.bignet
/// and log.csv are written there.
TrainResult train(const TrainConfig& tc, const std::vector<TwoTierGraph>& train_set,
                  const std::vector<TwoTierGraph>& train_flipped, const std::vector<TwoTierGraph>& test_set,
                  const std::filesystem::path& out_dir, const EpochCallback& on_epoch = {});

/// Loads the manifest's train/test splits and trains.
TrainResult train(const TrainConfig& tc, const DatasetManifest& m, const std::filesystem::path& out_dir,
                  const EpochCallback& on_epoch = {});

}  // namespace bignet
