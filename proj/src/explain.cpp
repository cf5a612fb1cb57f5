#include "bignet/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "bignet/error.hpp"
#include "bignet/parallel.hpp"
#include "bignet/svg.hpp"

namespace bignet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TwoTierGraph graph_of(const VectorImage& img) {
    TwoTierGraph g = build_graph(img.normalized ? img : normalize_height(img));
    g.label = img.label;
    g.source_id = img.source_id;
    return g;
}

double confidence(const ModelConfig& cfg, const ModelParameters& p, const TwoTierGraph& g, int target) {
    return softmax(forward(cfg, p, g))(target);
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(double v, int digits = 2) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

int attribution_target(const ModelConfig& cfg, const ModelParameters& p, const TwoTierGraph& g) {
    if (g.label) {
        if (*g.label < 0 || *g.label >= cfg.num_classes) {
            throw ContractError("label " + std::to_string(*g.label) + " is outside the model's classes");
        }
        return *g.label;
    }
    return argmax(forward(cfg, p, g));
}

std::vector<int> top_decile(const std::vector<double>& scores) {
    std::vector<double> finite;
    for (double s : scores)
        if (!std::isnan(s)) finite.push_back(s);
    if (finite.empty()) return {};
    const std::size_t k = std::max<std::size_t>(1, (scores.size() + 9) / 10);
    std::sort(finite.begin(), finite.end(), std::greater<>());
    const double cut = finite[std::min(k, finite.size()) - 1];
    std::vector<int> out;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] >= cut) out.push_back(static_cast<int>(i));
    return out;
}

// --- LOFO ----------------------------------------------------------------------------

AttributionReport lofo(const ModelConfig& cfg, const ModelParameters& p, const VectorImage& img, LofoLevel level,
                       double tau, int jobs) {
    const TwoTierGraph g = graph_of(img);
    AttributionReport r;
    r.method = AttributionMethod::lofo;
    r.target = attribution_target(cfg, p, g);
    r.baseline = confidence(cfg, p, g, r.target);

    const int n = g.num_chunks();
    std::vector<std::pair<int, int>> units;  // (chunk, curve); curve -1 means the whole chunk
    if (level != LofoLevel::curve) {
        r.chunk_scores.assign(static_cast<std::size_t>(n), kNaN);
        for (int c = 0; c < n; ++c) units.emplace_back(c, -1);
    }
    if (level != LofoLevel::chunk) {
        r.curve_scores.resize(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) {
            const int k = static_cast<int>(g.curves[static_cast<std::size_t>(c)].rows());
            r.curve_scores[static_cast<std::size_t>(c)].assign(static_cast<std::size_t>(k), kNaN);
            for (int s = 0; s < k; ++s) units.emplace_back(c, s);
        }
    }

    std::vector<double> delta(units.size(), kNaN);
    parallel_for(units.size(), jobs, [&](std::size_t u) {
        const auto [c, s] = units[u];
        if (s < 0) {
            if (n < 2) return;
            delta[u] = r.baseline - confidence(cfg, p, remove_chunk(g, c), r.target);
        } else {
            if (g.curves[static_cast<std::size_t>(c)].rows() < 2) return;
            delta[u] = r.baseline - confidence(cfg, p, remove_curve(g, c, s), r.target);
        }
    });

    for (std::size_t u = 0; u < units.size(); ++u) {
        const auto [c, s] = units[u];
        const bool important = !std::isnan(delta[u]) && delta[u] >= tau;
        if (s < 0) {
            r.chunk_scores[static_cast<std::size_t>(c)] = delta[u];
            if (important) r.important_chunks.push_back(c);
        } else {
            r.curve_scores[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)] = delta[u];
            if (important) r.important_curves.emplace_back(c, s);
        }
    }
    return r;
}

// --- CAM -----------------------------------------------------------------------------

AttributionReport cam(const ModelConfig& cfg, const ModelParameters& p, const VectorImage& img, CamMode mode) {
    const TwoTierGraph g = graph_of(img);
    ForwardTrace t;
    const Eigen::RowVectorXd logits = forward(cfg, p, g, t);
    AttributionReport r;
    r.method = AttributionMethod::cam;
    r.target = g.label ? attribution_target(cfg, p, g) : argmax(logits);
    r.baseline = logits(r.target);

    const auto n = t.C.rows();
    r.chunk_scores.resize(static_cast<std::size_t>(n));
    if (mode == CamMode::gradient) {
        const Eigen::RowVectorXd grad = logit_grad_z(cfg, p, t, r.target);
        const Eigen::VectorXd s = (t.C * grad.transpose()) / static_cast<double>(n);
        for (Eigen::Index i = 0; i < n; ++i) r.chunk_scores[static_cast<std::size_t>(i)] = s(i);
    } else {
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::RowVectorXd rest = n > 1 ? Eigen::RowVectorXd((n * t.z - t.C.row(i)) / double(n - 1))
                                                  : Eigen::RowVectorXd::Zero(t.z.size());
            r.chunk_scores[static_cast<std::size_t>(i)] = r.baseline - head_logits(cfg, p, rest)(r.target);
        }
    }
    r.important_chunks = top_decile(r.chunk_scores);
    return r;
}

// --- PDP -----------------------------------------------------------------------------

PdpResult pdp(const ModelConfig& cfg, const ModelParameters& p, const BrandRuleSet& rs, std::uint64_t base_seed,
              const std::vector<PdpAxis>& axes, int samples, int target, int jobs) {
    if (samples < 1) throw ContractError("pdp needs at least one sample per grid point");
    if (axes.empty() || axes.size() > 2) throw ContractError("pdp sweeps one or two parameters");
    if (target < 0 || target >= cfg.num_classes) throw ContractError("pdp target class is out of range");
    std::size_t points = 1;
    for (const auto& a : axes) {
        if (a.values.empty()) throw ContractError("pdp axis '" + a.name + "' has no values");
        if (!rs.declares(a.name)) throw ContractError("pdp: rule set does not declare '" + a.name + "'");
        points *= a.values.size();
    }
    std::vector<std::vector<Override>> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        std::size_t rest = i;
        for (std::size_t a = axes.size(); a-- > 0;) {
            grid[i].insert(grid[i].begin(), Override{axes[a].name, axes[a].values[rest % axes[a].values.size()]});
            rest /= axes[a].values.size();
        }
    }

    std::vector<std::vector<double>> conf(static_cast<std::size_t>(samples));
    parallel_for(conf.size(), jobs, [&](std::size_t k) {
        const PhoneParams base = sample_params(rs, base_seed + k);
        const auto variants = variant_grid(base, rs, grid);
        auto& row = conf[k];
        row.assign(points, kNaN);
        for (std::size_t i = 0; i < points; ++i) {
            if (!variants[i].image) continue;
            try {
                row[i] = confidence(cfg, p, build_graph(*variants[i].image), target);
            } catch (const DegenerateImageError&) {
            }
        }
    });

    PdpResult r;
    r.axes = axes;
    r.target = target;
    r.samples = samples;
    r.confidence.assign(points, kNaN);
    r.effective.assign(points, 0);
    for (std::size_t i = 0; i < points; ++i) {
        double sum = 0.0;
        for (const auto& row : conf) {
            if (std::isnan(row[i])) continue;
            sum += row[i];
            ++r.effective[i];
        }
        if (r.effective[i] > 0) r.confidence[i] = sum / r.effective[i];
    }
    return r;
}

// --- latents and PCA -----------------------------------------------------------------

Eigen::MatrixXd latents(const ModelConfig& cfg, const ModelParameters& p, const std::vector<TwoTierGraph>& graphs,
                        int jobs) {
    const int width = cfg.f1.empty() ? cfg.f1_input() : cfg.f1.back();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(graphs.size()), width);
    parallel_for(graphs.size(), jobs, [&](std::size_t i) {
        ForwardTrace t;
        forward(cfg, p, graphs[i], t);
        out.row(static_cast<Eigen::Index>(i)) = t.latent;
    });
    return out;
}

Eigen2 jacobi_eigen(const Eigen::MatrixXd& sym, double tol, int max_sweeps) {
    if (sym.rows() != sym.cols()) throw ContractError("jacobi_eigen needs a square matrix");
    const auto n = sym.rows();
    Eigen::MatrixXd a = 0.5 * (sym + sym.transpose());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double scale = a.norm();
    for (int sweep = 0; sweep < max_sweeps && scale > 0; ++sweep) {
        const double off = (a - Eigen::MatrixXd(a.diagonal().asDiagonal())).norm();
        if (off <= tol * scale) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const Eigen::VectorXd cp = a.col(p), cq = a.col(q);
                a.col(p) = c * cp - s * cq;
                a.col(q) = s * cp + c * cq;
                const Eigen::RowVectorXd rp = a.row(p), rq = a.row(q);
                a.row(p) = c * rp - s * rq;
                a.row(q) = s * rp + c * rq;
                a(p, q) = a(q, p) = 0.0;
                const Eigen::VectorXd vp = v.col(p), vq = v.col(q);
                v.col(p) = c * vp - s * vq;
                v.col(q) = s * vp + c * vq;
            }
        }
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) > a(y, y); });
    Eigen2 out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
        out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

LatentProjection pca2(const Eigen::MatrixXd& x, std::vector<int> labels) {
    if (x.rows() < 3) throw ContractError("PCA needs at least 3 samples, got " + std::to_string(x.rows()));
    if (x.cols() < 2) throw ContractError("PCA needs at least 2 latent dimensions");
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(x.rows())) {
        throw ContractError("PCA labels do not match the sample count");
    }
    LatentProjection out;
    out.mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - out.mean;
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(x.rows() - 1);
    const Eigen2 eig = jacobi_eigen(cov);
    out.components = eig.vectors.leftCols(2);
    for (int k = 0; k < 2; ++k) {
        Eigen::Index big = 0;
        out.components.col(k).cwiseAbs().maxCoeff(&big);
        if (out.components(big, k) < 0) out.components.col(k) *= -1.0;
    }
    const double total = std::max(0.0, cov.trace());
    for (int k = 0; k < 2; ++k) out.explained(k) = total > 0 ? std::clamp(eig.values(k) / total, 0.0, 1.0) : 0.0;
    out.coords = centered * out.components;
    // Mean-centering up to rounding; remove the residual so coordinates average to zero.
    out.coords.rowwise() -= out.coords.colwise().mean();
    out.labels = std::move(labels);
    return out;
}

// --- CSV -----------------------------------------------------------------------------

std::string latents_csv(const std::vector<std::string>& ids, const std::vector<int>& labels, const Eigen::MatrixXd& z) {
    if (ids.size() != static_cast<std::size_t>(z.rows()) || labels.size() != ids.size()) {
        throw ContractError("latent export: ids, labels and rows differ in length");
    }
    std::string out = "id,label";
    for (Eigen::Index c = 0; c < z.cols(); ++c) out += ",z" + std::to_string(c);
    out += "\n";
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        out += ids[static_cast<std::size_t>(r)] + "," + std::to_string(labels[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < z.cols(); ++c) out += "," + num(z(r, c));
        out += "\n";
    }
    return out;
}

std::string projection_csv(const std::vector<std::string>& ids, const LatentProjection& proj) {
    if (ids.size() != static_cast<std::size_t>(proj.coords.rows())) {
        throw ContractError("projection export: ids and rows differ in length");
    }
    std::string out = "id,label,pc1,pc2\n";
    for (Eigen::Index r = 0; r < proj.coords.rows(); ++r) {
        const int label = proj.labels.empty() ? -1 : proj.labels[static_cast<std::size_t>(r)];
        out += ids[static_cast<std::size_t>(r)] + "," + std::to_string(label) + "," + num(proj.coords(r, 0)) + "," +
               num(proj.coords(r, 1)) + "\n";
    }
    return out;
}

std::string pdp_csv(const PdpResult& r) {
    std::string out;
    for (const auto& a : r.axes) out += a.name + ",";
    out += "confidence,effective\n";
    for (std::size_t i = 0; i < r.points(); ++i) {
        std::size_t rest = i;
        std::vector<double> coords(r.axes.size());
        for (std::size_t a = r.axes.size(); a-- > 0;) {
            coords[a] = r.axes[a].values[rest % r.axes[a].values.size()];
            rest /= r.axes[a].values.size();
        }
        for (double c : coords) out += num(c) + ",";
        out += num(r.confidence[i]) + "," + std::to_string(r.effective[i]) + "\n";
    }
    return out;
}

std::string attribution_csv(const AttributionReport& r) {
    const std::set<int> chunks(r.important_chunks.begin(), r.important_chunks.end());
    const std::set<std::pair<int, int>> curves(r.important_curves.begin(), r.important_curves.end());
    std::string out = "unit,chunk,curve,score,important\n";
    for (std::size_t c = 0; c < r.chunk_scores.size(); ++c) {
        out += "chunk," + std::to_string(c) + ",," + num(r.chunk_scores[c]) + "," +
               (chunks.count(static_cast<int>(c)) ? "1" : "0") + "\n";
    }
    for (std::size_t c = 0; c < r.curve_scores.size(); ++c) {
        for (std::size_t s = 0; s < r.curve_scores[c].size(); ++s) {
            out += "curve," + std::to_string(c) + "," + std::to_string(s) + "," + num(r.curve_scores[c][s]) + "," +
                   (curves.count({static_cast<int>(c), static_cast<int>(s)}) ? "1" : "0") + "\n";
        }
    }
    return out;
}

// --- rendering -----------------------------------------------------------------------

std::string render_attribution(const VectorImage& img, const AttributionReport& r) {
    const auto n = static_cast<int>(img.chunks.size());
    if (!r.chunk_scores.empty() && r.chunk_scores.size() != img.chunks.size()) {
        throw ContractError("attribution has " + std::to_string(r.chunk_scores.size()) + " chunk scores for " +
                            std::to_string(n) + " chunks");
    }
    if (!r.curve_scores.empty() && r.curve_scores.size() != img.chunks.size()) {
        throw ContractError("attribution curve scores do not match the image's chunks");
    }
    for (std::size_t c = 0; c < r.curve_scores.size(); ++c) {
        if (r.curve_scores[c].size() != img.chunks[c].segments.size()) {
            throw ContractError("attribution curve scores do not match chunk " + std::to_string(c));
        }
    }
    SvgStyle style;
    for (int c : r.important_chunks) {
        if (c < 0 || c >= n) throw ContractError("important chunk " + std::to_string(c) + " does not exist");
        style.important_chunks.insert(c);
    }
    for (auto [c, s] : r.important_curves) {
        if (c < 0 || c >= n || s < 0 || s >= static_cast<int>(img.chunks[static_cast<std::size_t>(c)].segments.size())) {
            throw ContractError("important curve (" + std::to_string(c) + ", " + std::to_string(s) + ") does not exist");
        }
        style.important_curves.insert({c, s});
    }
    return write_svg(img, style);
}

int heat_gray(double value, double lo, double hi) {
    if (std::isnan(value)) return 255;
    const double t = hi > lo ? std::clamp((value - lo) / (hi - lo), 0.0, 1.0) : 0.5;
    return static_cast<int>(std::lround(230.0 * (1.0 - t)));
}

namespace {

// Plot area inside a fixed canvas with margins for axes and labels.
class Chart {
public:
    Chart(double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
        if (!(x1_ > x0_)) x1_ = x0_ + 1.0;
        if (!(y1_ > y0_)) y1_ = y0_ + 1.0;
    }

    double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * kPlotW; }
    double py(double y) const { return kTop + kPlotH - (y - y0_) / (y1_ - y0_) * kPlotH; }

    void axes(const std::string& xlabel, const std::string& ylabel, const std::string& title) {
        body_ += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(kPlotW) + "\" height=\"" +
                 fmt(kPlotH) + "\" fill=\"none\" stroke=\"#000000\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double xv = x0_ + (x1_ - x0_) * i / 4.0;
            const double yv = y0_ + (y1_ - y0_) * i / 4.0;
            body_ += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(kTop + kPlotH + 16) +
                     "\" font-size=\"10\" text-anchor=\"middle\">" + fmt(xv, 3) + "</text>\n";
            body_ += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(py(yv) + 3) +
                     "\" font-size=\"10\" text-anchor=\"end\">" + fmt(yv, 3) + "</text>\n";
        }
        body_ += "<text x=\"" + fmt(kLeft + kPlotW / 2) + "\" y=\"" + fmt(kTop + kPlotH + 36) +
                 "\" font-size=\"12\" text-anchor=\"middle\">" + xlabel + "</text>\n";
        body_ += "<text x=\"16\" y=\"" + fmt(kTop + kPlotH / 2) + "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
                 fmt(kTop + kPlotH / 2) + ")\">" + ylabel + "</text>\n";
        body_ += "<text x=\"" + fmt(kLeft + kPlotW / 2) + "\" y=\"20\" font-size=\"13\" text-anchor=\"middle\">" + title +
                 "</text>\n";
    }

    // Polylines break at NaN values.
    void line(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color) {
        std::string pts;
        auto flush = [&] {
            if (!pts.empty()) body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" points=\"" + pts + "\"/>\n";
            pts.clear();
        };
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (std::isnan(ys[i])) {
                flush();
                continue;
            }
            if (!pts.empty()) pts += " ";
            pts += fmt(px(xs[i])) + "," + fmt(py(ys[i]));
        }
        flush();
    }

    void raw(const std::string& s) { body_ += s; }

    std::string finish() const {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth, 0) + "\" height=\"" + fmt(kHeight, 0) +
               "\" viewBox=\"0 0 " + fmt(kWidth, 0) + " " + fmt(kHeight, 0) + "\">\n" +
               "<rect width=\"100%\" height=\"100%\" fill=\"#FFFFFF\"/>\n" + body_ + "</svg>\n";
    }

    static constexpr double kWidth = 480, kHeight = 360, kLeft = 60, kTop = 30, kPlotW = 380, kPlotH = 270;

private:
    double x0_, x1_, y0_, y1_;
    std::string body_;
};

std::pair<double, double> finite_range(const std::vector<double>& v) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : v) {
        if (std::isnan(x)) continue;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (lo > hi) return {0.0, 1.0};
    return {lo, hi};
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string render_plot(const PdpResult& r) {
    if (r.axes.size() == 1) {
        const auto& xs = r.axes[0].values;
        if (xs.size() != r.points()) throw ContractError("PDP grid and confidence lengths differ");
        const auto [xlo, xhi] = finite_range(xs);
        Chart ch(xlo, xhi, 0.0, 1.0);
        ch.axes(r.axes[0].name, "confidence (class " + std::to_string(r.target) + ")", "Partial dependence");
        ch.line(xs, r.confidence, "#1f77b4");
        return ch.finish();
    }
    if (r.axes.size() != 2) throw ContractError("PDP plots need one or two axes");
    const auto& xs = r.axes[0].values;
    const auto& ys = r.axes[1].values;
    if (xs.size() * ys.size() != r.points()) throw ContractError("PDP grid and confidence lengths differ");
    Chart ch(-0.5, static_cast<double>(xs.size()) - 0.5, -0.5, static_cast<double>(ys.size()) - 0.5);
    const auto [lo, hi] = finite_range(r.confidence);
    std::string cells;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const double v = r.confidence[i * ys.size() + j];
            const int gray = heat_gray(v, lo, hi);
            char color[8];
            std::snprintf(color, sizeof color, "#%02X%02X%02X", gray, gray, gray);
            const double x = ch.px(static_cast<double>(i) - 0.5), y = ch.py(static_cast<double>(j) + 0.5);
            cells += "<rect class=\"cell\" x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" +
                     fmt(ch.px(static_cast<double>(i) + 0.5) - x) + "\" height=\"" +
                     fmt(ch.py(static_cast<double>(j) - 0.5) - y) + "\" fill=\"" + color + "\" data-value=\"" + num(v) +
                     "\"/>\n";
        }
    }
    ch.raw(cells);
    ch.axes(r.axes[0].name + " (index)", r.axes[1].name + " (index)",
            "Partial dependence, class " + std::to_string(r.target) + ", range " + fmt(lo, 3) + " to " + fmt(hi, 3));
    return ch.finish();
}

std::string render_plot(const LatentProjection& proj) {
    std::vector<double> xs(proj.coords.col(0).data(), proj.coords.col(0).data() + proj.coords.rows());
    std::vector<double> ys(proj.coords.col(1).data(), proj.coords.col(1).data() + proj.coords.rows());
    const auto [xlo, xhi] = finite_range(xs);
    const auto [ylo, yhi] = finite_range(ys);
    Chart ch(xlo, xhi, ylo, yhi);
    ch.axes("PC1 (" + fmt(100 * proj.explained(0), 1) + "%)", "PC2 (" + fmt(100 * proj.explained(1), 1) + "%)",
            "Latent PCA");
    std::string dots;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const int label = proj.labels.empty() ? 0 : proj.labels[i];
        const char* color = kPalette[static_cast<std::size_t>(std::max(label, 0)) % std::size(kPalette)];
        dots += "<circle cx=\"" + fmt(ch.px(xs[i])) + "\" cy=\"" + fmt(ch.py(ys[i])) + "\" r=\"2\" fill=\"" + color +
                "\"/>\n";
    }
    ch.raw(dots);
    return ch.finish();
}

std::string render_plot(const std::vector<EpochRecord>& log) {
    std::vector<double> epochs, train_acc, test_acc;
    for (const auto& rec : log) {
        epochs.push_back(rec.epoch);
        train_acc.push_back(rec.train_acc);
        test_acc.push_back(rec.test_acc);
    }
    Chart ch(epochs.empty() ? 0.0 : epochs.front(), epochs.empty() ? 1.0 : epochs.back(), 0.0, 1.0);
    ch.axes("epoch", "accuracy", "Training (blue: train, red: test)");
    ch.line(epochs, train_acc, kPalette[0]);
    ch.line(epochs, test_acc, kPalette[1]);
    return ch.finish();
}

}  // namespace bignet
