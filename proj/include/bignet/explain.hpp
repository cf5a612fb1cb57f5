#pragma once

// Attribution (LOFO, CAM), partial dependence, latent projection and the SVG
// renderers for all of them.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bignet/geometry.hpp"
#include "bignet/graphs.hpp"
#include "bignet/net.hpp"
#include "bignet/synth.hpp"
#include "bignet/train.hpp"

namespace bignet {

enum class LofoLevel { chunk, curve, both };
enum class AttributionMethod { lofo, cam };
enum class CamMode { gradient, leave_one_out };

inline constexpr double kLofoThreshold = 0.05;

/// Scores are NaN for units that could not be removed (the only chunk, or
/// the only curve of a chunk).
struct AttributionReport {
    AttributionMethod method = AttributionMethod::lofo;
    int target = 0;
    double baseline = 0.0;  // target confidence (lofo) or target logit (cam)
    std::vector<double> chunk_scores;
    std::vector<std::vector<double>> curve_scores;  // empty unless curves were scored
    std::vector<int> important_chunks;
    std::vector<std::pair<int, int>> important_curves;  // (chunk, segment)
};

/// Target class for attribution: the image label when present, else argmax.
int attribution_target(const ModelConfig& cfg, const ModelParameters& p, const TwoTierGraph& g);

AttributionReport lofo(const ModelConfig& cfg, const ModelParameters& p, const VectorImage& img,
                       LofoLevel level = LofoLevel::chunk, double tau = kLofoThreshold, int jobs = 1);

/// One traced forward. gradient mode: s_i = <d logit / dZ, C_i> / N, so the
/// scores sum to <d logit / dZ, Z>. leave_one_out mode: drop in target logit
/// when C_i is removed from the mean pool. Top decile (at least one chunk,
/// ties included) is marked important.
AttributionReport cam(const ModelConfig& cfg, const ModelParameters& p, const VectorImage& img,
                      CamMode mode = CamMode::gradient);

/// Indices whose score reaches the k-th largest, k = max(1, ceil(n / 10)).
/// NaN scores never qualify.
std::vector<int> top_decile(const std::vector<double>& scores);

struct PdpAxis {
    std::string name;
    std::vector<double> values;
};

/// Grid points are row-major over the axes (the last axis varies fastest).
struct PdpResult {
    std::vector<PdpAxis> axes;
    int target = 0;
    int samples = 0;                  // M
    std::vector<double> confidence;   // NaN where no sample could be built
    std::vector<int> effective;       // successful builds per grid point

    std::size_t points() const { return confidence.size(); }
};

/// Sample k (0 <= k < M) uses sample_params(rs, base_seed + k) with the swept
/// parameters overridden by each grid point.
PdpResult pdp(const ModelConfig& cfg, const ModelParameters& p, const BrandRuleSet& rs, std::uint64_t base_seed,
              const std::vector<PdpAxis>& axes, int samples, int target, int jobs = 1);

/// Rows are the latent vectors (input to f1's last layer) of each graph.
Eigen::MatrixXd latents(const ModelConfig& cfg, const ModelParameters& p, const std::vector<TwoTierGraph>& graphs,
                        int jobs = 1);

struct Eigen2 {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // columns
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix, sweeping until the
/// off-diagonal norm falls below tol times the matrix norm.
Eigen2 jacobi_eigen(const Eigen::MatrixXd& sym, double tol = 1e-12, int max_sweeps = 100);

struct LatentProjection {
    Eigen::MatrixXd coords;      // n x 2
    Eigen::MatrixXd components;  // d x 2, orthonormal
    Eigen::RowVectorXd mean;
    Eigen::Vector2d explained;   // fraction of total variance
    std::vector<int> labels;
};

/// Throws ContractError with fewer than 3 rows.
LatentProjection pca2(const Eigen::MatrixXd& x, std::vector<int> labels = {});

// --- exports ---------------------------------------------------------------------

std::string latents_csv(const std::vector<std::string>& ids, const std::vector<int>& labels, const Eigen::MatrixXd& z);
std::string projection_csv(const std::vector<std::string>& ids, const LatentProjection& proj);
std::string pdp_csv(const PdpResult& r);
std::string attribution_csv(const AttributionReport& r);

// --- rendering -------------------------------------------------------------------

/// Important chunks red, important curves blue, everything else black.
/// Throws ContractError when the report does not fit the image.
std::string render_attribution(const VectorImage& img, const AttributionReport& r);

/// 1-D results become a line chart, 2-D results a grayscale heatmap.
std::string render_plot(const PdpResult& r);
/// Scatter plot, one colour per label.
std::string render_plot(const LatentProjection& proj);
/// Train/test accuracy against epoch.
std::string render_plot(const std::vector<EpochRecord>& log);

/// Gray level (0 black, 255 white) of a heatmap cell; darker means larger.
int heat_gray(double value, double lo, double hi);

}  // namespace bignet
