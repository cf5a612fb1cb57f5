// Python bindings for the main pipeline operations.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bignet/error.hpp"
#include "bignet/explain.hpp"
#include "bignet/manifest.hpp"
#include "bignet/metrics.hpp"
#include "bignet/svg.hpp"
#include "bignet/synth.hpp"
#include "bignet/trace.hpp"
#include "bignet/train.hpp"

namespace py = pybind11;
using namespace bignet;

namespace {

// Checkpointed model bundled with its config.
struct Model {
    ModelConfig config;
    ModelParameters params;
};

VectorImage image_from(const std::string& svg, std::optional<int> label) {
    VectorImage img = normalize_height(parse_svg(svg));
    img.label = label;
    return img;
}

py::dict report_dict(const AttributionReport& r) {
    py::dict d;
    d["method"] = r.method == AttributionMethod::lofo ? "lofo" : "cam";
    d["target"] = r.target;
    d["baseline"] = r.baseline;
    d["chunk_scores"] = r.chunk_scores;
    d["curve_scores"] = r.curve_scores;
    d["important_chunks"] = r.important_chunks;
    d["important_curves"] = r.important_curves;
    return d;
}

AttributionReport report_from(const py::dict& d) {
    AttributionReport r;
    r.chunk_scores = d["chunk_scores"].cast<std::vector<double>>();
    r.curve_scores = d["curve_scores"].cast<std::vector<std::vector<double>>>();
    r.important_chunks = d["important_chunks"].cast<std::vector<int>>();
    r.important_curves = d["important_curves"].cast<std::vector<std::pair<int, int>>>();
    return r;
}

py::dict record_dict(const EpochRecord& r) {
    py::dict d;
    d["epoch"] = r.epoch;
    d["iteration"] = r.iteration;
    d["lr"] = r.lr;
    d["train_loss"] = r.train_loss;
    d["train_acc"] = r.train_acc;
    d["test_loss"] = r.test_loss;
    d["test_acc"] = r.test_acc;
    return d;
}

}  // namespace

PYBIND11_MODULE(_bignet, m) {
    m.doc() = "Brand identification graph network on vector graphics";

    auto base = py::register_exception<Error>(m, "BignetError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ContractError>(m, "ContractError", base.ptr());
    py::register_exception<LoadError>(m, "LoadError", base.ptr());
    py::register_exception<ConstructionError>(m, "ConstructionError", base.ptr());
    py::register_exception<SplitError>(m, "SplitError", base.ptr());
    py::register_exception<UnsupportedFeatureError>(m, "UnsupportedFeatureError", base.ptr());
    py::register_exception<DegenerateImageError>(m, "DegenerateImageError", base.ptr());
    py::register_exception<InfeasibleRulesetError>(m, "InfeasibleRulesetError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<NumericError>(m, "NumericError", base.ptr());

    py::class_<ModelConfig>(m, "ModelConfig")
        .def_static("phone", &ModelConfig::phone)
        .def_static("car", &ModelConfig::car, py::arg("num_classes") = 6)
        .def_static("from_json", &config_from_json)
        .def_static("load", [](const std::filesystem::path& p) { return load_config(p); })
        .def("to_json", &config_to_json)
        .def_property_readonly("num_classes", [](const ModelConfig& c) { return c.num_classes; })
        .def_property_readonly("variant", [](const ModelConfig& c) { return c.variant == Variant::car ? "car" : "phone"; })
        .def("param_count", [](const ModelConfig& c) { return param_count(c); });

    py::class_<Model>(m, "Model")
        .def(py::init([](const ModelConfig& cfg, std::uint64_t seed) { return Model{cfg, init_parameters(cfg, seed)}; }),
             py::arg("config"), py::arg("seed") = 0)
        .def_static("load", [](const std::filesystem::path& p) {
            auto [cfg, params] = load_checkpoint(p);
            return Model{cfg, std::move(params)};
        })
        .def("save", [](const Model& md, const std::filesystem::path& p) { save_checkpoint(p, md.config, md.params); })
        .def_readonly("config", &Model::config)
        .def("param_count", [](const Model& md) { return param_count(md.params); })
        .def("logits", [](const Model& md, const std::string& svg) {
            return Eigen::VectorXd(forward(md.config, md.params, build_graph(image_from(svg, {}))).transpose());
        }, py::arg("svg"))
        .def("predict_proba", [](const Model& md, const std::string& svg) {
            return Eigen::VectorXd(softmax(forward(md.config, md.params, build_graph(image_from(svg, {})))).transpose());
        }, py::arg("svg"))
        .def("lofo", [](const Model& md, const std::string& svg, const std::string& level, double tau,
                        std::optional<int> label) {
            const LofoLevel lv = level == "chunk" ? LofoLevel::chunk : level == "curve" ? LofoLevel::curve : LofoLevel::both;
            return report_dict(lofo(md.config, md.params, image_from(svg, label), lv, tau));
        }, py::arg("svg"), py::arg("level") = "chunk", py::arg("tau") = kLofoThreshold, py::arg("label") = py::none())
        .def("cam", [](const Model& md, const std::string& svg, bool leave_one_out, std::optional<int> label) {
            return report_dict(cam(md.config, md.params, image_from(svg, label),
                                   leave_one_out ? CamMode::leave_one_out : CamMode::gradient));
        }, py::arg("svg"), py::arg("leave_one_out") = false, py::arg("label") = py::none())
        .def("pdp", [](const Model& md, const std::filesystem::path& rules,
                       const std::vector<std::pair<std::string, std::vector<double>>>& axes, int samples,
                       std::uint64_t seed, std::optional<int> target) {
            const auto rs = load_ruleset(rules);
            std::vector<PdpAxis> ax;
            for (const auto& [name, values] : axes) ax.push_back({name, values});
            const auto r = pdp(md.config, md.params, rs, seed, ax, samples, target.value_or(rs.label));
            py::dict d;
            d["axes"] = axes;
            d["target"] = r.target;
            d["confidence"] = r.confidence;
            d["effective"] = r.effective;
            return d;
        }, py::arg("rules"), py::arg("axes"), py::arg("samples") = 50, py::arg("seed") = 0, py::arg("target") = py::none())
        .def("latents", [](const Model& md, const std::vector<std::string>& svgs) {
            std::vector<TwoTierGraph> graphs;
            for (const auto& s : svgs) graphs.push_back(build_graph(image_from(s, {})));
            return latents(md.config, md.params, graphs);
        });

    m.def("render_attribution", [](const std::string& svg, const py::dict& report) {
        return render_attribution(image_from(svg, {}), report_from(report));
    });

    m.def("pca2", [](const Eigen::MatrixXd& x) {
        const auto p = pca2(x);
        py::dict d;
        d["coords"] = p.coords;
        d["components"] = p.components;
        d["explained"] = Eigen::VectorXd(p.explained);
        return d;
    });

    m.def("build_graph", [](const std::string& svg) {
        const auto g = build_graph(image_from(svg, {}));
        py::dict d;
        d["curves"] = g.curves;
        d["beta"] = g.beta;
        d["pairwise"] = g.pairwise;
        return d;
    }, py::arg("svg"));

    m.def("normalize_svg", [](const std::string& svg) { return write_svg(image_from(svg, {})); }, py::arg("svg"));

    m.def("trace_pbm", [](const py::bytes& pbm, double max_err, int min_pixels) {
        TraceOptions opts;
        opts.max_err = max_err;
        opts.min_pixels = min_pixels;
        return write_svg(trace_bitmap(read_pbm(std::string(pbm)), opts));
    }, py::arg("pbm"), py::arg("max_err") = 1.5, py::arg("min_pixels") = 4);

    m.def("sample_phone", [](const std::filesystem::path& rules, std::uint64_t seed) {
        const auto rs = load_ruleset(rules);
        const auto p = sample_params(rs, seed);
        return py::make_tuple(p.values, write_svg(build_phone(p, rs)));
    }, py::arg("rules"), py::arg("seed"));

    m.def("generate_dataset", [](const std::vector<std::filesystem::path>& rules, int n, std::uint64_t seed,
                                 const std::filesystem::path& out, int jobs) {
        std::vector<BrandRuleSet> rs;
        for (const auto& r : rules) rs.push_back(load_ruleset(r));
        return generate_dataset(rs, n, seed, out, jobs).entries.size();
    }, py::arg("rules"), py::arg("per_brand"), py::arg("seed"), py::arg("out_dir"), py::arg("jobs") = 1);

    m.def("split", [](const std::filesystem::path& manifest, double fraction, std::uint64_t seed) {
        const auto m2 = stratified_split(read_manifest(manifest), fraction, seed);
        write_manifest(m2, manifest);
        return py::make_tuple(m2.indices_of("train").size(), m2.indices_of("test").size());
    }, py::arg("manifest"), py::arg("fraction") = 0.1, py::arg("seed") = 0, "Tags the manifest in place.");

    m.def("train", [](const std::filesystem::path& config, const std::filesystem::path& manifest,
                      const std::filesystem::path& out, std::optional<int> epochs, std::optional<std::uint64_t> seed) {
        TrainConfig tc = load_train_config(config);
        if (epochs) tc.max_epochs = *epochs;
        if (seed) tc.seed = *seed;
        TrainResult r;
        {
            py::gil_scoped_release release;
            r = train(tc, read_manifest(manifest), out);
        }
        py::list log;
        for (const auto& rec : r.log) log.append(record_dict(rec));
        return log;
    }, py::arg("config"), py::arg("manifest"), py::arg("out_dir"), py::arg("epochs") = py::none(), py::arg("seed") = py::none());

    m.def("evaluate", [](const Model& md, const std::filesystem::path& manifest, const std::string& split) {
        const auto man = read_manifest(manifest);
        const auto ev = evaluate(md.config, md.params, load_graphs(man, man.indices_of(split)));
        py::dict d;
        d["accuracy"] = ev.accuracy;
        d["loss"] = ev.loss;
        d["confusion"] = Eigen::MatrixXd(confusion(ev.predictions, ev.truths, md.config.num_classes).cast<double>());
        d["kappa"] = kappa_matrix(ev.predictions, ev.truths, md.config.num_classes);
        return d;
    }, py::arg("model"), py::arg("manifest"), py::arg("split") = "test");

    m.def("confusion", [](const std::vector<int>& preds, const std::vector<int>& truths, int k) {
        return Eigen::MatrixXd(confusion(preds, truths, k).cast<double>());
    });
    m.def("kappa_matrix", [](const std::vector<int>& preds, const std::vector<int>& truths, int k) {
        return kappa_matrix(preds, truths, k);
    });
}
