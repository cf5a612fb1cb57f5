#include <bit>
#include <cstring>
#include <fstream>

#include "bignet/error.hpp"
#include "bignet/net.hpp"
#include "bignet/svg.hpp"

namespace bignet {

namespace {

constexpr char kMagic[4] = {'B', 'I', 'G', 'N'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(std::string& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out += static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF);
}

class Reader {
public:
    explicit Reader(std::string_view b) : b_(b) {}

    template <class T>
    T le() {
        need(sizeof(T));
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
        pos_ += sizeof(T);
        return static_cast<T>(v);
    }

    std::string_view bytes(std::size_t n) {
        need(n);
        const auto s = b_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    bool at_end() const { return pos_ == b_.size(); }

private:
    void need(std::size_t n) const {
        if (b_.size() - pos_ < n) throw LoadError("checkpoint truncated at byte " + std::to_string(pos_));
    }

    std::string_view b_;
    std::size_t pos_ = 0;
};

// Row-major element (r, c) of a weight lives at c * rows + r in Eigen storage.
std::size_t storage_index(const std::vector<std::uint32_t>& dims, std::size_t row_major) {
    if (dims.size() != 2) return row_major;
    const std::size_t cols = dims[1];
    return (row_major % cols) * dims[0] + row_major / cols;
}

}  // namespace

std::string serialize_checkpoint(const ModelConfig& cfg, const ModelParameters& p) {
    check_parameters(cfg, p);
    std::string out(kMagic, 4);
    put_le<std::uint32_t>(out, kVersion);
    const std::string json = config_to_json(cfg);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(json.size()));
    out += json;
    for (const auto& t : tensors(p)) {
        put_le<std::uint16_t>(out, static_cast<std::uint16_t>(t.name.size()));
        out += t.name;
        put_le<std::uint8_t>(out, static_cast<std::uint8_t>(t.dims.size()));
        for (auto d : t.dims) put_le<std::uint32_t>(out, d);
        for (std::size_t e = 0; e < t.size; ++e) {
            put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(t.data[storage_index(t.dims, e)]));
        }
    }
    return out;
}

std::pair<ModelConfig, ModelParameters> deserialize_checkpoint(std::string_view bytes) {
    Reader r(bytes);
    if (r.bytes(4) != std::string_view(kMagic, 4)) throw LoadError("not a checkpoint: bad magic");
    const auto version = r.le<std::uint32_t>();
    if (version != kVersion) throw LoadError("unsupported checkpoint version " + std::to_string(version));
    const auto json_len = r.le<std::uint32_t>();
    ModelConfig cfg;
    try {
        cfg = config_from_json(r.bytes(json_len));
    } catch (const ContractError& e) {
        throw LoadError(std::string("checkpoint config: ") + e.what());
    }
    ModelParameters p = zero_parameters(cfg);
    for (auto& t : tensors(p)) {
        const auto name_len = r.le<std::uint16_t>();
        const std::string name(r.bytes(name_len));
        if (name != t.name) throw LoadError("expected tensor '" + t.name + "', found '" + name + "'");
        const auto rank = r.le<std::uint8_t>();
        std::vector<std::uint32_t> dims(rank);
        for (auto& d : dims) d = r.le<std::uint32_t>();
        if (dims != t.dims) throw LoadError("tensor '" + name + "' has a shape that does not match the config");
        for (std::size_t e = 0; e < t.size; ++e) {
            t.data[storage_index(t.dims, e)] = std::bit_cast<double>(r.le<std::uint64_t>());
        }
    }
    if (!r.at_end()) throw LoadError("trailing bytes after the last tensor");
    return {cfg, std::move(p)};
}

void save_checkpoint(const std::filesystem::path& path, const ModelConfig& cfg, const ModelParameters& p) {
    write_text_file(path, serialize_checkpoint(cfg, p));
}

std::pair<ModelConfig, ModelParameters> load_checkpoint(const std::filesystem::path& path) {
    std::string bytes;
    try {
        bytes = read_text_file(path);
    } catch (const IoError& e) {
        throw LoadError(e.what());
    }
    try {
        return deserialize_checkpoint(bytes);
    } catch (const LoadError& e) {
        throw LoadError(path.string() + ": " + e.what());
    }
}

}  // namespace bignet
