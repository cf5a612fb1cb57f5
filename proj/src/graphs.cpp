#include "bignet/graphs.hpp"

#include <algorithm>
#include <cmath>

#include "bignet/error.hpp"
#include "json.hpp"

namespace bignet {

namespace {

void require_normalized(const VectorImage& img) {
    if (!img.normalized) throw ContractError("graph construction needs a height-normalized image");
    if (img.chunks.empty()) throw ContractError("graph construction needs at least one chunk");
}

}  // namespace

int TwoTierGraph::num_curves() const {
    int n = 0;
    for (const auto& c : curves) n += static_cast<int>(c.rows());
    return n;
}

void TwoTierGraph::check() const {
    const Eigen::Index n = num_chunks();
    if (n < 1) throw ContractError("graph has no chunks");
    for (std::size_t c = 0; c < curves.size(); ++c) {
        if (curves[c].rows() < 1 || curves[c].cols() != 8) {
            throw ContractError("curve matrix of chunk " + std::to_string(c) + " must be n x 8 with n >= 1");
        }
        if (!curves[c].allFinite()) throw ContractError("curve matrix of chunk " + std::to_string(c) + " is not finite");
    }
    if (beta.rows() != n || beta.cols() != 5) throw ContractError("beta must be N x 5");
    if (pairwise.rows() != n * n || pairwise.cols() != 5) throw ContractError("pairwise must be N*N x 5");
    if (!beta.allFinite() || !pairwise.allFinite()) throw ContractError("bounding-box features are not finite");
}

std::vector<Eigen::MatrixXd> build_curve_features(const VectorImage& img) {
    require_normalized(img);
    std::vector<Eigen::MatrixXd> out;
    out.reserve(img.chunks.size());
    for (const auto& chunk : img.chunks) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(chunk.segments.size()), 8);
        for (std::size_t k = 0; k < chunk.segments.size(); ++k) {
            const auto& s = chunk.segments[k];
            m.row(static_cast<Eigen::Index>(k)) << s.p0.x, s.p0.y, s.p1.x, s.p1.y, s.p2.x, s.p2.y, s.p3.x, s.p3.y;
        }
        out.push_back(std::move(m));
    }
    return out;
}

Eigen::MatrixXd build_beta(const VectorImage& img) {
    require_normalized(img);
    const auto n = static_cast<Eigen::Index>(img.chunks.size());
    Eigen::MatrixXd b(n, 5);
    double wmax = kBoxEpsilon, hmax = kBoxEpsilon, amax = kBoxEpsilon;
    for (const auto& c : img.chunks) {
        wmax = std::max(wmax, c.bbox.width());
        hmax = std::max(hmax, c.bbox.height());
        amax = std::max(amax, c.bbox.area());
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const Box& box = img.chunks[static_cast<std::size_t>(i)].bbox;
        b(i, 0) = box.cx();
        b(i, 1) = box.cy();
        b(i, 2) = std::max(box.width(), kBoxEpsilon) / wmax;
        b(i, 3) = std::max(box.height(), kBoxEpsilon) / hmax;
        b(i, 4) = std::max(box.area(), kBoxEpsilon) / amax;
    }
    return b;
}

Eigen::MatrixXd build_pairwise(const VectorImage& img) {
    require_normalized(img);
    const auto n = static_cast<Eigen::Index>(img.chunks.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n * n, 5);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Box& a = img.chunks[static_cast<std::size_t>(i)].bbox;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const Box& b = img.chunks[static_cast<std::size_t>(j)].bbox;
            auto row = p.row(i * n + j);
            row(0) = a.cx() - b.cx();
            row(1) = a.cy() - b.cy();
            row(2) = std::log((a.width() + kBoxEpsilon) / (b.width() + kBoxEpsilon));
            row(3) = std::log((a.height() + kBoxEpsilon) / (b.height() + kBoxEpsilon));
            row(4) = std::log((a.area() + kBoxEpsilon) / (b.area() + kBoxEpsilon));
        }
    }
    return p;
}

TwoTierGraph build_graph(const VectorImage& img) {
    TwoTierGraph g;
    g.curves = build_curve_features(img);
    g.beta = build_beta(img);
    g.pairwise = build_pairwise(img);
    g.label = img.label;
    g.source_id = img.source_id;
    return g;
}

TwoTierGraph remove_chunk(const TwoTierGraph& g, int chunk) {
    const int n = g.num_chunks();
    if (chunk < 0 || chunk >= n) throw ContractError("remove_chunk: index out of range");
    if (n < 2) throw ContractError("remove_chunk: cannot remove the only chunk");
    TwoTierGraph out;
    out.label = g.label;
    out.source_id = g.source_id;
    out.beta.resize(n - 1, 5);
    out.pairwise.resize(static_cast<Eigen::Index>(n - 1) * (n - 1), 5);
    int r = 0;
    for (int i = 0; i < n; ++i) {
        if (i == chunk) continue;
        out.curves.push_back(g.curves[static_cast<std::size_t>(i)]);
        out.beta.row(r++) = g.beta.row(i);
    }
    Eigen::Index row = 0;
    for (int i = 0; i < n; ++i) {
        if (i == chunk) continue;
        for (int j = 0; j < n; ++j) {
            if (j == chunk) continue;
            out.pairwise.row(row++) = g.pairwise.row(static_cast<Eigen::Index>(i) * n + j);
        }
    }
    return out;
}

TwoTierGraph remove_curve(const TwoTierGraph& g, int chunk, int curve) {
    if (chunk < 0 || chunk >= g.num_chunks()) throw ContractError("remove_curve: chunk index out of range");
    const Eigen::MatrixXd& m = g.curves[static_cast<std::size_t>(chunk)];
    const auto rows = static_cast<int>(m.rows());
    if (curve < 0 || curve >= rows) throw ContractError("remove_curve: curve index out of range");
    if (rows < 2) throw ContractError("remove_curve: cannot remove the only curve of a chunk");
    TwoTierGraph out = g;
    Eigen::MatrixXd spliced(rows - 1, 8);
    spliced.topRows(curve) = m.topRows(curve);
    spliced.bottomRows(rows - 1 - curve) = m.bottomRows(rows - 1 - curve);
    out.curves[static_cast<std::size_t>(chunk)] = std::move(spliced);
    return out;
}

namespace {

nlohmann::ordered_json matrix_json(const Eigen::MatrixXd& m) {
    auto rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string graph_to_json(const TwoTierGraph& g) {
    nlohmann::ordered_json j;
    j["source_id"] = g.source_id;
    j["label"] = g.label ? nlohmann::ordered_json(*g.label) : nlohmann::ordered_json(nullptr);
    j["curves"] = nlohmann::ordered_json::array();
    for (const auto& c : g.curves) j["curves"].push_back(matrix_json(c));
    j["beta"] = matrix_json(g.beta);
    j["pairwise"] = matrix_json(g.pairwise);
    return j.dump(1);
}

}  // namespace bignet
