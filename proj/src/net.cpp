#include "bignet/net.hpp"

#include <cmath>
#include <set>

#include "bignet/error.hpp"
#include "bignet/parallel.hpp"
#include "bignet/rng.hpp"
#include "bignet/svg.hpp"
#include "json.hpp"

namespace bignet {

// --- config ----------------------------------------------------------------------

ModelConfig ModelConfig::phone() { return ModelConfig{}; }

ModelConfig ModelConfig::car(int num_classes) {
    ModelConfig c;
    c.variant = Variant::car;
    c.num_classes = num_classes;
    c.curve_depth = 2;
    c.chunk_depth = 2;
    c.f4 = {32, 24};
    c.f3 = {24, 24};
    c.fstar = {};
    c.f2 = {24, 24, 24};
    c.f1 = {18, 12};
    c.curve_mix = 0.5;
    c.curve_linear = true;
    return c;
}

int ModelConfig::chunk_width() const {
    if (!f3.empty()) return f3.back();
    return f4.empty() ? curve_input() : f4.back();
}

int ModelConfig::f1_input() const { return f2.empty() ? f2_input() : f2.back(); }

void ModelConfig::validate() const {
    if (num_classes < 2) throw ContractError("model config: num_classes must be >= 2");
    if (curve_depth < 0 || chunk_depth < 0) throw ContractError("model config: depths must be non-negative");
    if (f4.empty()) throw ContractError("model config: f4 needs at least one layer");
    for (const auto* widths : {&f4, &f3, &fstar, &f2, &f1}) {
        for (int w : *widths) {
            if (w < 1) throw ContractError("model config: layer widths must be positive");
        }
    }
    if (!(curve_mix >= 0.0 && curve_mix <= 1.0)) throw ContractError("model config: curve_mix must lie in [0, 1]");
    if (!(leaky_slope >= 0.0 && leaky_slope < 1.0)) throw ContractError("model config: leaky_slope must lie in [0, 1)");
}

std::string config_to_json(const ModelConfig& cfg) {
    nlohmann::ordered_json j;
    j["variant"] = cfg.variant == Variant::phone ? "phone" : "car";
    j["num_classes"] = cfg.num_classes;
    j["curve_depth"] = cfg.curve_depth;
    j["chunk_depth"] = cfg.chunk_depth;
    j["f4"] = cfg.f4;
    j["f3"] = cfg.f3;
    j["fstar"] = cfg.fstar;
    j["f2"] = cfg.f2;
    j["f1"] = cfg.f1;
    j["curve_mix"] = cfg.curve_mix;
    j["curve_linear"] = cfg.curve_linear;
    j["leaky_slope"] = cfg.leaky_slope;
    return j.dump(2) + "\n";
}

ModelConfig config_from_json(std::string_view text) {
    ModelConfig c;
    try {
        const auto j = nlohmann::json::parse(text);
        if (!j.is_object()) throw ContractError("model config must be a JSON object");
        static const std::set<std::string> known{"variant", "num_classes", "curve_depth", "chunk_depth", "f4", "f3",
                                                 "fstar", "f2", "f1", "curve_mix", "curve_linear", "leaky_slope"};
        for (const auto& [key, value] : j.items()) {
            if (!known.count(key)) throw ContractError("model config: unknown key '" + key + "'");
        }
        const std::string variant = j.value("variant", std::string("phone"));
        if (variant == "phone") {
            c = ModelConfig::phone();
        } else if (variant == "car") {
            c = ModelConfig::car(j.value("num_classes", 6));
        } else {
            throw ContractError("model config: unknown variant '" + variant + "'");
        }
        c.num_classes = j.value("num_classes", c.num_classes);
        c.curve_depth = j.value("curve_depth", c.curve_depth);
        c.chunk_depth = j.value("chunk_depth", c.chunk_depth);
        c.f4 = j.value("f4", c.f4);
        c.f3 = j.value("f3", c.f3);
        c.fstar = j.value("fstar", c.fstar);
        c.f2 = j.value("f2", c.f2);
        c.f1 = j.value("f1", c.f1);
        c.curve_mix = j.value("curve_mix", c.curve_mix);
        c.curve_linear = j.value("curve_linear", c.curve_linear);
        c.leaky_slope = j.value("leaky_slope", c.leaky_slope);
    } catch (const nlohmann::json::exception& e) {
        throw ContractError(std::string("invalid model config JSON: ") + e.what());
    }
    c.validate();
    return c;
}

ModelConfig load_config(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        const auto j = nlohmann::json::parse(text);
        // Training configs nest the model under "model".
        if (j.is_object() && j.contains("model")) return config_from_json(j["model"].dump());
    } catch (const nlohmann::json::exception& e) {
        throw ContractError(path.string() + ": " + e.what());
    }
    return config_from_json(text);
}

// --- parameters ------------------------------------------------------------------

namespace {

Mlp make_mlp(int in, const std::vector<int>& widths, bool activate_last) {
    Mlp m;
    m.activate_last = activate_last;
    for (int w : widths) {
        m.layers.push_back({Eigen::MatrixXd::Zero(w, in), Eigen::VectorXd::Zero(w)});
        in = w;
    }
    return m;
}

std::vector<int> with_tail(std::vector<int> v, int tail) {
    v.push_back(tail);
    return v;
}

template <class View, class Params>
std::vector<View> collect(Params& p) {
    std::vector<View> out;
    auto add = [&](const char* prefix, auto& mlp) {
        for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
            auto& layer = mlp.layers[l];
            const std::string base = std::string(prefix) + "." + std::to_string(l) + ".";
            out.push_back({base + "weight", layer.weight.data(), static_cast<std::size_t>(layer.weight.size()),
                           {static_cast<std::uint32_t>(layer.weight.rows()), static_cast<std::uint32_t>(layer.weight.cols())}});
            out.push_back({base + "bias", layer.bias.data(), static_cast<std::size_t>(layer.bias.size()),
                           {static_cast<std::uint32_t>(layer.bias.size())}});
        }
    };
    add("f4", p.f4);
    add("f3", p.f3);
    add("curve_linear", p.curve_linear);
    add("fstar", p.fstar);
    add("f2", p.f2);
    add("f1", p.f1);
    return out;
}

}  // namespace

std::vector<TensorView> tensors(ModelParameters& p) { return collect<TensorView>(p); }
std::vector<ConstTensorView> tensors(const ModelParameters& p) { return collect<ConstTensorView>(p); }

ModelParameters zero_parameters(const ModelConfig& cfg) {
    cfg.validate();
    ModelParameters p;
    p.f4 = make_mlp(cfg.curve_input(), cfg.f4, true);
    const int k4 = cfg.f4.back();
    p.f3 = make_mlp(k4, cfg.f3, true);
    if (cfg.curve_linear) p.curve_linear = make_mlp(8, {8}, true);
    p.fstar = make_mlp(5, with_tail(cfg.fstar, cfg.chunk_width()), true);
    p.f2 = make_mlp(cfg.f2_input(), cfg.f2, true);
    p.f1 = make_mlp(cfg.f1_input(), with_tail(cfg.f1, cfg.num_classes), false);
    return p;
}

ModelParameters zeros_like(const ModelParameters& p) {
    ModelParameters z = p;
    for (auto& t : tensors(z)) std::fill(t.data, t.data + t.size, 0.0);
    return z;
}

std::size_t param_count(const ModelParameters& p) {
    std::size_t n = 0;
    for (const auto& t : tensors(p)) n += t.size;
    return n;
}

std::size_t param_count(const ModelConfig& cfg) { return param_count(zero_parameters(cfg)); }

ModelParameters init_parameters(const ModelConfig& cfg, std::uint64_t seed) {
    ModelParameters p = zero_parameters(cfg);
    Rng rng(derive_seed(seed, 0xB16E7));
    auto fill = [&](Mlp& mlp) {
        for (auto& layer : mlp.layers) {
            const double a = std::sqrt(1.0 / static_cast<double>(layer.weight.cols()));
            // Row-major draw order so the stream does not depend on storage layout.
            for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
                for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = rng.uniform(-a, a);
            }
            for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = rng.uniform(-a, a);
        }
    };
    fill(p.f4);
    fill(p.f3);
    fill(p.curve_linear);
    fill(p.fstar);
    fill(p.f2);
    fill(p.f1);
    return p;
}

void check_parameters(const ModelConfig& cfg, const ModelParameters& p) {
    const auto want = tensors(zero_parameters(cfg));
    const auto have = tensors(p);
    if (want.size() != have.size()) {
        throw ContractError("parameter set has " + std::to_string(have.size()) + " tensors, config expects " +
                            std::to_string(want.size()));
    }
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (want[i].name != have[i].name || want[i].dims != have[i].dims) {
            throw ContractError("tensor '" + want[i].name + "' has the wrong shape");
        }
    }
}

// --- forward -----------------------------------------------------------------------

namespace {

Eigen::MatrixXd leaky(const Eigen::MatrixXd& x, double slope) {
    return x.unaryExpr([slope](double v) { return v > 0.0 ? v : slope * v; });
}

Eigen::MatrixXd mlp_forward(const Mlp& mlp, const Eigen::MatrixXd& x, double slope, MlpCache* cache) {
    Eigen::MatrixXd cur = x;
    for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
        const Dense& d = mlp.layers[l];
        if (cur.cols() != d.weight.cols()) {
            throw ContractError("layer input width " + std::to_string(cur.cols()) + " does not match weight width " +
                                std::to_string(d.weight.cols()));
        }
        Eigen::MatrixXd pre = cur * d.weight.transpose();
        pre.rowwise() += d.bias.transpose();
        const bool act = l + 1 < mlp.layers.size() || mlp.activate_last;
        Eigen::MatrixXd out = act ? leaky(pre, slope) : pre;
        if (cache) {
            cache->inputs.push_back(std::move(cur));
            cache->pre.push_back(std::move(pre));
        }
        cur = std::move(out);
    }
    return cur;
}

// Accumulates parameter gradients into `grad` and returns d/d(input) when asked.
Eigen::MatrixXd mlp_backward(const Mlp& mlp, const MlpCache& cache, Eigen::MatrixXd dy, double slope, Mlp& grad,
                             bool need_input) {
    for (std::size_t l = mlp.layers.size(); l-- > 0;) {
        const bool act = l + 1 < mlp.layers.size() || mlp.activate_last;
        if (act) {
            dy = dy.cwiseProduct(cache.pre[l].unaryExpr([slope](double v) { return v > 0.0 ? 1.0 : slope; }));
        }
        grad.layers[l].weight.noalias() += dy.transpose() * cache.inputs[l];
        grad.layers[l].bias += dy.colwise().sum().transpose();
        if (l > 0 || need_input) dy = dy * mlp.layers[l].weight;
    }
    return dy;
}

}  // namespace

Eigen::RowVectorXd forward(const ModelConfig& cfg, const ModelParameters& p, const TwoTierGraph& g) {
    ForwardTrace t;
    return forward(cfg, p, g, t);
}

Eigen::RowVectorXd forward(const ModelConfig& cfg, const ModelParameters& p, const TwoTierGraph& g,
                           ForwardTrace& t) {
    g.check();
    t = ForwardTrace{};
    const int N = g.num_chunks();
    const double slope = cfg.leaky_slope;

    // Stack the curves of all chunks and record ring neighbours.
    t.chunk_offset.assign(1, 0);
    for (const auto& m : g.curves) t.chunk_offset.push_back(t.chunk_offset.back() + static_cast<int>(m.rows()));
    const int n = t.chunk_offset.back();
    Eigen::MatrixXd x(n, 8);
    t.prev.resize(n);
    t.next.resize(n);
    for (int c = 0; c < N; ++c) {
        const int off = t.chunk_offset[c];
        const int nc = t.chunk_offset[c + 1] - off;
        x.middleRows(off, nc) = g.curves[static_cast<std::size_t>(c)];
        for (int k = 0; k < nc; ++k) {
            const auto [a, b] = ring_neighbors(nc, k);
            t.prev[off + k] = off + a;
            t.next[off + k] = off + b;
        }
    }

    // Curve level: symmetric ring diffusion.
    const double w = cfg.curve_mix;
    t.e.push_back(x);
    t.curve_linear.resize(static_cast<std::size_t>(cfg.curve_depth));
    for (int d = 1; d <= cfg.curve_depth; ++d) {
        const Eigen::MatrixXd& prev_e = t.e.back();
        Eigen::MatrixXd m(n, 8);
        for (int k = 0; k < n; ++k) m.row(k) = 0.5 * (prev_e.row(t.prev[k]) + prev_e.row(t.next[k]));
        if (!p.curve_linear.identity()) m = mlp_forward(p.curve_linear, m, slope, &t.curve_linear[d - 1]);
        t.e.push_back((1.0 - w) * prev_e + w * m);
    }
    t.h.resize(n, 8 * (cfg.curve_depth + 1));
    for (int d = 0; d <= cfg.curve_depth; ++d) t.h.middleCols(8 * d, 8) = t.e[static_cast<std::size_t>(d)];

    const Eigen::MatrixXd f4_out = mlp_forward(p.f4, t.h, slope, &t.f4);
    t.hstar.resize(N, f4_out.cols());
    for (int c = 0; c < N; ++c) {
        const int off = t.chunk_offset[c];
        const int nc = t.chunk_offset[c + 1] - off;
        t.hstar.row(c) = f4_out.middleRows(off, nc).colwise().mean();
    }
    t.E.push_back(mlp_forward(p.f3, t.hstar, slope, &t.f3));
    const int cw = static_cast<int>(t.E[0].cols());

    // Chunk level: gated aggregation.
    const bool car = cfg.variant == Variant::car;
    t.gate = mlp_forward(p.fstar, car ? g.pairwise : g.beta, slope, &t.fstar);
    if (t.gate.cols() != cw) throw ContractError("tensor 'fstar' output width does not match the chunk width");
    const double invN = 1.0 / N;
    for (int d = 1; d <= cfg.chunk_depth; ++d) {
        const Eigen::MatrixXd& prev_E = t.E.back();
        Eigen::MatrixXd next_E(N, cw);
        if (car) {
            for (int i = 0; i < N; ++i) {
                next_E.row(i) = invN * t.gate.middleRows(static_cast<Eigen::Index>(i) * N, N).cwiseProduct(prev_E).colwise().sum();
            }
        } else {
            const Eigen::RowVectorXd msg = invN * t.gate.cwiseProduct(prev_E).colwise().sum();
            next_E = msg.replicate(N, 1);
        }
        t.E.push_back(std::move(next_E));
    }
    t.H.resize(N, cw * (cfg.chunk_depth + 1));
    for (int d = 0; d <= cfg.chunk_depth; ++d) t.H.middleCols(cw * d, cw) = t.E[static_cast<std::size_t>(d)];

    t.C = mlp_forward(p.f2, t.H, slope, &t.f2);
    t.z = t.C.colwise().mean();
    const Eigen::MatrixXd logits = mlp_forward(p.f1, t.z, slope, &t.f1);
    t.latent = t.f1.inputs.back().row(0);
    t.logits = logits.row(0);
    return t.logits;
}

Eigen::RowVectorXd softmax(const Eigen::RowVectorXd& logits) {
    const double mx = logits.maxCoeff();
    Eigen::RowVectorXd e = (logits.array() - mx).exp().matrix();
    return e / e.sum();
}

double loss(const Eigen::RowVectorXd& logits, int label) {
    if (label < 0 || label >= logits.size()) {
        throw ContractError("label " + std::to_string(label) + " outside [0, " + std::to_string(logits.size()) + ")");
    }
    const double mx = logits.maxCoeff();
    const double lse = mx + std::log((logits.array() - mx).exp().sum());
    return lse - logits(label);
}

// --- backward ----------------------------------------------------------------------

namespace {

// d/dZ of a row gradient on the logits; no parameter gradients.
Eigen::RowVectorXd head_to_z(const ModelParameters& p, const ForwardTrace& t, Eigen::MatrixXd dy, double slope) {
    for (std::size_t l = p.f1.layers.size(); l-- > 0;) {
        const bool act = l + 1 < p.f1.layers.size() || p.f1.activate_last;
        if (act) dy = dy.cwiseProduct(t.f1.pre[l].unaryExpr([slope](double v) { return v > 0.0 ? 1.0 : slope; }));
        dy = dy * p.f1.layers[l].weight;
    }
    return dy.row(0);
}

}  // namespace

Eigen::RowVectorXd head_logits(const ModelConfig& cfg, const ModelParameters& p, const Eigen::RowVectorXd& z) {
    return mlp_forward(p.f1, Eigen::MatrixXd(z), cfg.leaky_slope, nullptr).row(0);
}

Eigen::RowVectorXd logit_grad_z(const ModelConfig& cfg, const ModelParameters& p, const ForwardTrace& t, int cls) {
    Eigen::MatrixXd dy = Eigen::MatrixXd::Zero(1, t.logits.size());
    dy(0, cls) = 1.0;
    return head_to_z(p, t, dy, cfg.leaky_slope);
}

void backward_sample(const ModelConfig& cfg, const ModelParameters& p, const ForwardTrace& t,
                     const Eigen::RowVectorXd& dlogits, ModelParameters& grads) {
    const double slope = cfg.leaky_slope;
    const int N = static_cast<int>(t.C.rows());
    const double invN = 1.0 / N;

    const Eigen::MatrixXd dz = mlp_backward(p.f1, t.f1, Eigen::MatrixXd(dlogits), slope, grads.f1, true);
    const Eigen::MatrixXd dC = (invN * dz).replicate(N, 1);
    const Eigen::MatrixXd dH = mlp_backward(p.f2, t.f2, dC, slope, grads.f2, true);

    const int cw = static_cast<int>(t.E[0].cols());
    std::vector<Eigen::MatrixXd> dE(t.E.size());
    for (std::size_t d = 0; d < t.E.size(); ++d) dE[d] = dH.middleCols(cw * static_cast<Eigen::Index>(d), cw);
    Eigen::MatrixXd dgate = Eigen::MatrixXd::Zero(t.gate.rows(), t.gate.cols());
    const bool car = cfg.variant == Variant::car;
    for (std::size_t d = t.E.size() - 1; d >= 1; --d) {
        const Eigen::MatrixXd& prev_E = t.E[d - 1];
        if (car) {
            for (int i = 0; i < N; ++i) {
                const Eigen::RowVectorXd gi = invN * dE[d].row(i);
                auto gate_rows = t.gate.middleRows(static_cast<Eigen::Index>(i) * N, N);
                dgate.middleRows(static_cast<Eigen::Index>(i) * N, N).array() += prev_E.array().rowwise() * gi.array();
                dE[d - 1].array() += gate_rows.array().rowwise() * gi.array();
            }
        } else {
            const Eigen::RowVectorXd dmsg = invN * dE[d].colwise().sum();
            dgate.array() += prev_E.array().rowwise() * dmsg.array();
            dE[d - 1].array() += t.gate.array().rowwise() * dmsg.array();
        }
    }
    mlp_backward(p.fstar, t.fstar, dgate, slope, grads.fstar, false);
    const Eigen::MatrixXd dhstar = mlp_backward(p.f3, t.f3, dE[0], slope, grads.f3, true);

    const int n = t.chunk_offset.back();
    Eigen::MatrixXd df4(n, dhstar.cols());
    for (int c = 0; c < N; ++c) {
        const int off = t.chunk_offset[c];
        const int nc = t.chunk_offset[c + 1] - off;
        df4.middleRows(off, nc) = (dhstar.row(c) / nc).replicate(nc, 1);
    }
    const Eigen::MatrixXd dh = mlp_backward(p.f4, t.f4, df4, slope, grads.f4, true);

    const int D2 = static_cast<int>(t.e.size()) - 1;
    if (D2 == 0) return;
    const double w = cfg.curve_mix;
    std::vector<Eigen::MatrixXd> de(t.e.size());
    for (int d = 1; d <= D2; ++d) de[static_cast<std::size_t>(d)] = dh.middleCols(8 * d, 8);
    for (int d = D2; d >= 1; --d) {
        Eigen::MatrixXd dm = w * de[static_cast<std::size_t>(d)];
        if (!p.curve_linear.identity()) {
            dm = mlp_backward(p.curve_linear, t.curve_linear[static_cast<std::size_t>(d - 1)], dm, slope,
                              grads.curve_linear, true);
        }
        if (d == 1) break;  // e^0 is the input
        Eigen::MatrixXd& below = de[static_cast<std::size_t>(d - 1)];
        below += (1.0 - w) * de[static_cast<std::size_t>(d)];
        for (int k = 0; k < n; ++k) {
            below.row(t.prev[k]) += 0.5 * dm.row(k);
            below.row(t.next[k]) += 0.5 * dm.row(k);
        }
    }
}

int argmax(const Eigen::RowVectorXd& logits) {
    Eigen::Index best = 0;
    logits.maxCoeff(&best);
    return static_cast<int>(best);
}

double backward(const ModelConfig& cfg, const ModelParameters& p, std::span<const TwoTierGraph* const> batch,
                ModelParameters& grads, int jobs, std::vector<int>* predictions) {
    if (batch.empty()) throw ContractError("backward: empty batch");
    std::vector<ModelParameters> per(batch.size());
    std::vector<double> losses(batch.size(), 0.0);
    if (predictions) predictions->assign(batch.size(), 0);
    parallel_for(batch.size(), jobs, [&](std::size_t i) {
        const TwoTierGraph& g = *batch[i];
        if (!g.label) throw ContractError("backward: sample '" + g.source_id + "' has no label");
        ForwardTrace t;
        const Eigen::RowVectorXd logits = forward(cfg, p, g, t);
        const double l = loss(logits, *g.label);
        if (!std::isfinite(l)) throw NumericError("non-finite loss for sample '" + g.source_id + "'");
        Eigen::RowVectorXd dlogits = softmax(logits);
        dlogits(*g.label) -= 1.0;
        per[i] = zeros_like(p);
        backward_sample(cfg, p, t, dlogits, per[i]);
        losses[i] = l;
        if (predictions) (*predictions)[i] = argmax(logits);
    });
    grads = zeros_like(p);
    auto out = tensors(grads);
    double total = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        total += losses[i];
        const auto src = tensors(std::as_const(per[i]));
        for (std::size_t k = 0; k < out.size(); ++k) {
            for (std::size_t e = 0; e < out[k].size; ++e) out[k].data[e] += src[k].data[e];
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (auto& t : out) {
        for (std::size_t e = 0; e < t.size; ++e) t.data[e] *= inv;
    }
    return total * inv;
}

double backward(const ModelConfig& cfg, const ModelParameters& p, const std::vector<TwoTierGraph>& batch,
                ModelParameters& grads, int jobs) {
    std::vector<const TwoTierGraph*> ptrs;
    ptrs.reserve(batch.size());
    for (const auto& g : batch) ptrs.push_back(&g);
    return backward(cfg, p, std::span<const TwoTierGraph* const>(ptrs), grads, jobs);
}

// --- Adam --------------------------------------------------------------------------

AdamState adam_init(const ModelParameters& p) {
    AdamState s;
    for (const auto& t : tensors(p)) {
        s.m.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(t.size)));
        s.v.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(t.size)));
    }
    return s;
}

void adam_step(ModelParameters& p, const ModelParameters& grads, AdamState& s, double lr) {
    auto params = tensors(p);
    const auto g = tensors(grads);
    if (g.size() != params.size() || s.m.size() != params.size()) throw ContractError("adam_step: shape mismatch");
    ++s.step;
    const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
    const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (g[k].size != params[k].size) throw ContractError("adam_step: size mismatch in '" + params[k].name + "'");
        for (std::size_t e = 0; e < params[k].size; ++e) {
            const double gi = g[k].data[e];
            double& m = s.m[k](static_cast<Eigen::Index>(e));
            double& v = s.v[k](static_cast<Eigen::Index>(e));
            m = s.beta1 * m + (1.0 - s.beta1) * gi;
            v = s.beta2 * v + (1.0 - s.beta2) * gi * gi;
            params[k].data[e] -= lr * (m / c1) / (std::sqrt(v / c2) + s.eps);
        }
    }
}

}  // namespace bignet
