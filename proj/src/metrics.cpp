#include "bignet/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bignet/error.hpp"

namespace bignet {

namespace {

void check_labels(std::span<const int> preds, std::span<const int> truths, int k) {
    if (preds.size() != truths.size()) throw ContractError("prediction and truth vectors differ in length");
    if (k < 1) throw ContractError("class count must be positive");
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] < 0 || preds[i] >= k || truths[i] < 0 || truths[i] >= k) {
            throw ContractError("label outside [0, " + std::to_string(k) + ") at sample " + std::to_string(i));
        }
    }
}

}  // namespace

CountMatrix confusion(std::span<const int> preds, std::span<const int> truths, int k) {
    check_labels(preds, truths, k);
    CountMatrix m = CountMatrix::Zero(k, k);
    for (std::size_t i = 0; i < preds.size(); ++i) ++m(preds[i], truths[i]);
    return m;
}

double accuracy(const CountMatrix& m) {
    const auto total = m.sum();
    if (total == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(m.trace()) / static_cast<double>(total);
}

Eigen::MatrixXd kappa_matrix(std::span<const int> preds, std::span<const int> truths, int k) {
    const CountMatrix m = confusion(preds, truths, k);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(k, k);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            if (a == b) continue;
            // 2x2 table restricted to {a, b}: rows prediction, columns truth.
            const double aa = static_cast<double>(m(a, a)), ab = static_cast<double>(m(a, b));
            const double ba = static_cast<double>(m(b, a)), bb = static_cast<double>(m(b, b));
            const double n = aa + ab + ba + bb;
            if (n < 2) {
                out(a, b) = nan;
                continue;
            }
            const double po = (aa + bb) / n;
            const double pe = ((aa + ab) * (aa + ba) + (ba + bb) * (ab + bb)) / (n * n);
            out(a, b) = (1.0 - pe) <= 0.0 ? nan : (po - pe) / (1.0 - pe);
        }
    }
    return out;
}

}  // namespace bignet
