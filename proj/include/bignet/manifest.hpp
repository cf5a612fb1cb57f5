#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bignet {

struct ManifestEntry {
    std::string path;  // relative to the manifest's directory unless absolute
    int label = 0;
    std::string brand;
    std::string split = "train";
    std::uint64_t seed = 0;
};

/// JSON Lines dataset index; one object per sample with keys
/// path, label, brand, split, seed.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::vector<std::string> class_names;  // index = label
    std::filesystem::path base_dir;

    int num_classes() const { return static_cast<int>(class_names.size()); }
    std::filesystem::path resolve(const ManifestEntry& e) const;
    /// Rebuilds class_names from (label, brand) pairs; throws ContractError on
    /// conflicting names or gaps in the label range.
    void refresh_classes();
    std::vector<std::size_t> indices_of(const std::string& split) const;
};

DatasetManifest read_manifest(const std::filesystem::path& path);
std::string manifest_to_jsonl(const DatasetManifest& m);
void write_manifest(const DatasetManifest& m, const std::filesystem::path& path);

}  // namespace bignet
