#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>

namespace bignet {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Entry (i, j) counts samples predicted i whose truth is j.
CountMatrix confusion(std::span<const int> preds, std::span<const int> truths, int k);

/// trace / total; NaN for an empty matrix.
double accuracy(const CountMatrix& m);

/// Pairwise Cohen's kappa. Entry (a, b) uses only samples whose truth and
/// prediction both lie in {a, b}. Diagonal is 1. NaN when fewer than two
/// samples remain or chance agreement is 1.
Eigen::MatrixXd kappa_matrix(std::span<const int> preds, std::span<const int> truths, int k);

}  // namespace bignet
