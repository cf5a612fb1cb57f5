#include "bignet/manifest.hpp"

#include "json.hpp"

#include <map>
#include <sstream>

#include "bignet/error.hpp"
#include "bignet/svg.hpp"

namespace bignet {

std::filesystem::path DatasetManifest::resolve(const ManifestEntry& e) const {
    const std::filesystem::path p(e.path);
    return p.is_absolute() ? p : base_dir / p;
}

void DatasetManifest::refresh_classes() {
    std::map<int, std::string> names;
    for (const auto& e : entries) {
        if (e.label < 0) throw ContractError("negative label for '" + e.path + "'");
        auto [it, inserted] = names.emplace(e.label, e.brand);
        if (!inserted && it->second != e.brand) {
            throw ContractError("label " + std::to_string(e.label) + " used by brands '" + it->second + "' and '" +
                                e.brand + "'");
        }
    }
    class_names.clear();
    for (const auto& [label, name] : names) {
        if (label != static_cast<int>(class_names.size())) {
            throw ContractError("labels must be contiguous from 0; missing " + std::to_string(class_names.size()));
        }
        class_names.push_back(name);
    }
}

std::vector<std::size_t> DatasetManifest::indices_of(const std::string& split) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].split == split) out.push_back(i);
    }
    return out;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    DatasetManifest m;
    m.base_dir = path.parent_path();
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            ManifestEntry e;
            e.path = j.at("path").get<std::string>();
            e.label = j.at("label").get<int>();
            e.brand = j.value("brand", std::string("class") + std::to_string(e.label));
            e.split = j.value("split", std::string("train"));
            e.seed = j.value("seed", std::uint64_t{0});
            if (e.split != "train" && e.split != "test") {
                throw ContractError("split must be 'train' or 'test', got '" + e.split + "'");
            }
            m.entries.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + ex.what());
        }
    }
    m.refresh_classes();
    return m;
}

std::string manifest_to_jsonl(const DatasetManifest& m) {
    std::string out;
    for (const auto& e : m.entries) {
        nlohmann::ordered_json j;
        j["path"] = e.path;
        j["label"] = e.label;
        j["brand"] = e.brand;
        j["split"] = e.split;
        j["seed"] = e.seed;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void write_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
    write_text_file(path, manifest_to_jsonl(m));
}

}  // namespace bignet
