#pragma once

// Two-tier tensor bundle consumed by the network: curve features per chunk
// (rows in authored order, ring adjacency implied) and chunk bounding-box
// features.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bignet/geometry.hpp"

namespace bignet {

inline constexpr double kBoxEpsilon = 1e-6;

struct TwoTierGraph {
    std::vector<Eigen::MatrixXd> curves;  // per chunk, n_c x 8
    Eigen::MatrixXd beta;                 // N x 5
    Eigen::MatrixXd pairwise;             // (N*N) x 5, row i*N + j
    std::optional<int> label;
    std::string source_id;

    int num_chunks() const { return static_cast<int>(curves.size()); }
    int num_curves() const;
    /// Throws ContractError when shapes disagree or an entry is not finite.
    void check() const;
};

/// Predecessor and successor of row k in a ring of n rows.
inline std::pair<int, int> ring_neighbors(int n, int k) { return {(k + n - 1) % n, (k + 1) % n}; }

std::vector<Eigen::MatrixXd> build_curve_features(const VectorImage& img);
Eigen::MatrixXd build_beta(const VectorImage& img);
Eigen::MatrixXd build_pairwise(const VectorImage& img);

/// All three parts; requires a normalized image with at least one chunk.
TwoTierGraph build_graph(const VectorImage& img);

/// Graph without chunk i: its curve matrix, beta row and pairwise rows and
/// columns are deleted; the remaining rows are kept as they were.
TwoTierGraph remove_chunk(const TwoTierGraph& g, int chunk);
/// Graph without one curve of a chunk; its ring neighbours become adjacent.
TwoTierGraph remove_curve(const TwoTierGraph& g, int chunk, int curve);

/// Debug dump used for fixtures.
std::string graph_to_json(const TwoTierGraph& g);

}  // namespace bignet
