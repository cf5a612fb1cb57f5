#pragma once

// BIGNet: ring diffusion over the curves of each chunk, mean pooling into
// chunk embeddings, bounding-box gated message passing between chunks, and
// a pooled classifier head. Gradients are hand-derived.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bignet/graphs.hpp"

namespace bignet {

enum class Variant { phone, car };

/// Layer widths list the outputs of each dense layer; input widths follow
/// from the architecture. Empty f3/f2 mean identity. `fstar` and `f1` list
/// hidden widths only: f* always ends at the chunk width and f1 at
/// num_classes.
struct ModelConfig {
    Variant variant = Variant::phone;
    int num_classes = 2;
    int curve_depth = 3;  // D2
    int chunk_depth = 2;  // D1
    std::vector<int> f4{24, 12};
    std::vector<int> f3;
    std::vector<int> fstar;
    std::vector<int> f2;
    std::vector<int> f1{18, 8};
    double curve_mix = 1.0;  // W2
    bool curve_linear = false;
    double leaky_slope = 0.01;

    static ModelConfig phone();
    static ModelConfig car(int num_classes = 6);

    int curve_input() const { return 8 * (curve_depth + 1); }
    int chunk_width() const;
    int f2_input() const { return chunk_width() * (chunk_depth + 1); }
    int f1_input() const;
    /// Throws ContractError on non-positive widths or out-of-range values.
    void validate() const;
};

std::string config_to_json(const ModelConfig& cfg);
ModelConfig config_from_json(std::string_view text);
ModelConfig load_config(const std::filesystem::path& path);

struct Dense {
    Eigen::MatrixXd weight;  // out x in
    Eigen::VectorXd bias;
};

struct Mlp {
    std::vector<Dense> layers;
    bool activate_last = true;

    bool identity() const { return layers.empty(); }
};

struct ModelParameters {
    Mlp f4, f3, curve_linear, fstar, f2, f1;
};

/// Mutable view of one named tensor. Weights are (out, in); storage order is
/// internal, so use `dims` for shape and `data`/`size` for elementwise work.
template <class T>
struct BasicTensorView {
    std::string name;
    T* data = nullptr;
    std::size_t size = 0;
    std::vector<std::uint32_t> dims;
};
using TensorView = BasicTensorView<double>;
using ConstTensorView = BasicTensorView<const double>;

/// Every tensor in canonical order: f4, f3, curve_linear, fstar, f2, f1;
/// weight before bias within a layer.
std::vector<TensorView> tensors(ModelParameters& p);
std::vector<ConstTensorView> tensors(const ModelParameters& p);

/// Correctly shaped all-zero parameters.
ModelParameters zero_parameters(const ModelConfig& cfg);
ModelParameters zeros_like(const ModelParameters& p);
std::size_t param_count(const ModelConfig& cfg);
std::size_t param_count(const ModelParameters& p);

/// Uniform in +-sqrt(1/fan_in) for weights and biases alike.
ModelParameters init_parameters(const ModelConfig& cfg, std::uint64_t seed);

/// Throws ContractError naming the first tensor whose shape disagrees with cfg.
void check_parameters(const ModelConfig& cfg, const ModelParameters& p);

struct MlpCache {
    std::vector<Eigen::MatrixXd> inputs;  // input to each layer
    std::vector<Eigen::MatrixXd> pre;     // pre-activation of each layer
};

struct ForwardTrace {
    std::vector<int> chunk_offset;  // N + 1 row offsets into the stacked curves
    std::vector<int> prev, next;    // ring neighbours, global row indices
    std::vector<Eigen::MatrixXd> e;  // diffusion states e^0 .. e^D2
    std::vector<MlpCache> curve_linear;
    Eigen::MatrixXd h;
    MlpCache f4;
    Eigen::MatrixXd hstar;
    MlpCache f3;
    MlpCache fstar;
    Eigen::MatrixXd gate;            // N x c (phone) or N*N x c (car)
    std::vector<Eigen::MatrixXd> E;  // E^0 = H^0 .. E^D1
    Eigen::MatrixXd H;
    MlpCache f2;
    Eigen::MatrixXd C;  // chunk contributions f2(H_i)
    Eigen::RowVectorXd z;
    MlpCache f1;
    Eigen::RowVectorXd latent;  // input to the last f1 layer
    Eigen::RowVectorXd logits;
};

Eigen::RowVectorXd forward(const ModelConfig& cfg, const ModelParameters& p, const TwoTierGraph& g);
Eigen::RowVectorXd forward(const ModelConfig& cfg, const ModelParameters& p, const TwoTierGraph& g,
                           ForwardTrace& trace);

Eigen::RowVectorXd softmax(const Eigen::RowVectorXd& logits);
/// Softmax cross-entropy via log-sum-exp.
double loss(const Eigen::RowVectorXd& logits, int label);

/// Adds d(loss)/d(params) for one traced sample into grads and returns the
/// gradient with respect to the logits that was propagated.
void backward_sample(const ModelConfig& cfg, const ModelParameters& p, const ForwardTrace& t,
                     const Eigen::RowVectorXd& dlogits, ModelParameters& grads);

/// Mean loss over the batch; grads receives the mean gradient. Samples run on
/// up to `jobs` threads and are reduced in batch order. When `predictions` is
/// given it receives the argmax class of each sample.
double backward(const ModelConfig& cfg, const ModelParameters& p, std::span<const TwoTierGraph* const> batch,
                ModelParameters& grads, int jobs = 1, std::vector<int>* predictions = nullptr);
double backward(const ModelConfig& cfg, const ModelParameters& p, const std::vector<TwoTierGraph>& batch,
                ModelParameters& grads, int jobs = 1);

/// Index of the largest logit (first on ties).
int argmax(const Eigen::RowVectorXd& logits);

/// Logits produced by f1 from a pooled latent Z.
Eigen::RowVectorXd head_logits(const ModelConfig& cfg, const ModelParameters& p, const Eigen::RowVectorXd& z);

/// d logit[cls] / dZ for a traced sample.
Eigen::RowVectorXd logit_grad_z(const ModelConfig& cfg, const ModelParameters& p, const ForwardTrace& t, int cls);

struct AdamState {
    std::vector<Eigen::VectorXd> m, v;
    std::int64_t step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

AdamState adam_init(const ModelParameters& p);
void adam_step(ModelParameters& p, const ModelParameters& grads, AdamState& state, double lr);

/// Binary checkpoint: "BIGN", u32 version, u32 config length, config JSON,
/// then per tensor u16 name length, name, u8 rank, u32 dims, f64 data, all
/// little-endian with weights row-major (out, in).
std::string serialize_checkpoint(const ModelConfig& cfg, const ModelParameters& p);
std::pair<ModelConfig, ModelParameters> deserialize_checkpoint(std::string_view bytes);
void save_checkpoint(const std::filesystem::path& path, const ModelConfig& cfg, const ModelParameters& p);
std::pair<ModelConfig, ModelParameters> load_checkpoint(const std::filesystem::path& path);

}  // namespace bignet
