#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <regex>

#include "bignet/error.hpp"
#include "bignet/explain.hpp"
#include "support.hpp"

using namespace bignet;
using namespace testsupport;

namespace {

BrandRuleSet apple() { return load_ruleset(source_dir() / "rules" / "apple.json"); }

ModelParameters random_model(const ModelConfig& cfg, std::uint64_t seed) {
    // Wider than the default init so the outputs depend visibly on the input.
    ModelParameters p = init_parameters(cfg, seed);
    for (auto& t : tensors(p))
        for (std::size_t i = 0; i < t.size; ++i) t.data[i] *= 3.0;
    return p;
}

VectorImage with_copies(const VectorImage& base, int copies) {
    VectorImage img = base;
    for (int k = 0; k < copies; ++k) {
        Chunk c = base.chunks[0];
        c.id = static_cast<int>(img.chunks.size());
        img.chunks.push_back(c);
    }
    return img;
}

}  // namespace

TEST_CASE("identical chunks receive identical LOFO deltas") {
    Rng rng(3);
    const ModelConfig cfg;
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = random_model(cfg, trial);
        const VectorImage img = with_copies(random_image(rng, 3, 5), 2);
        const auto r = lofo(cfg, p, img);
        const auto n = img.chunks.size();
        CHECK(std::abs(r.chunk_scores[0] - r.chunk_scores[n - 1]) < 1e-9);
        CHECK(std::abs(r.chunk_scores[0] - r.chunk_scores[n - 2]) < 1e-9);
        // LOFO is a pure evaluation.
        CHECK(lofo(cfg, p, img).chunk_scores == r.chunk_scores);
    }
}

TEST_CASE("a constant predictor has zero LOFO deltas") {
    Rng rng(4);
    const ModelConfig cfg;
    auto p = random_model(cfg, 1);
    p.f1.layers.back().weight.setZero();
    const auto r = lofo(cfg, p, random_image(rng, 4, 4), LofoLevel::both);
    for (double d : r.chunk_scores)
        if (!std::isnan(d)) CHECK(d == 0.0);
    for (const auto& row : r.curve_scores)
        for (double d : row)
            if (!std::isnan(d)) CHECK(d == 0.0);
    CHECK(r.important_chunks.empty());
    CHECK(r.important_curves.empty());
}

TEST_CASE("units that cannot be removed get a sentinel") {
    Rng rng(5);
    const ModelConfig cfg;
    const auto p = random_model(cfg, 2);
    VectorImage img = random_image(rng, 1, 1);
    img.chunks.resize(1);
    const auto r = lofo(cfg, p, img, LofoLevel::both);
    REQUIRE(r.chunk_scores.size() == 1);
    CHECK(std::isnan(r.chunk_scores[0]));
    if (img.chunks[0].segments.size() == 1) CHECK(std::isnan(r.curve_scores[0][0]));
}

TEST_CASE("LOFO targets the label and thresholds at tau") {
    Rng rng(6);
    const ModelConfig cfg;
    const auto p = random_model(cfg, 3);
    VectorImage img = random_image(rng, 5, 4);
    img.label = 1;
    const auto r = lofo(cfg, p, img, LofoLevel::both, 0.0);
    CHECK(r.target == 1);
    for (std::size_t c = 0; c < r.chunk_scores.size(); ++c) {
        const bool marked = std::count(r.important_chunks.begin(), r.important_chunks.end(), static_cast<int>(c));
        CHECK(marked == (!std::isnan(r.chunk_scores[c]) && r.chunk_scores[c] >= 0.0));
    }
    img.label.reset();
    auto g = build_graph(img);
    CHECK(lofo(cfg, p, img).target == argmax(forward(cfg, p, g)));
    const auto jobs = lofo(cfg, p, img, LofoLevel::both, kLofoThreshold, 3);
    CHECK(jobs.curve_scores == lofo(cfg, p, img, LofoLevel::both).curve_scores);
}

TEST_CASE("CAM scores sum to the pooled gradient product") {
    Rng rng(7);
    for (const ModelConfig& cfg : {ModelConfig{}, ModelConfig::car(6)}) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto p = random_model(cfg, 10 + trial);
            const VectorImage img = random_image(rng, 6, 5);
            const auto r = cam(cfg, p, img);
            ForwardTrace t;
            forward(cfg, p, build_graph(img), t);
            const double want = logit_grad_z(cfg, p, t, r.target).dot(t.z);
            double sum = 0.0;
            for (double s : r.chunk_scores) sum += s;
            CHECK(std::abs(sum - want) < 1e-9);
            CHECK(!r.important_chunks.empty());
        }
    }
}

TEST_CASE("logit gradient at the pool matches finite differences") {
    Rng rng(8);
    const ModelConfig cfg;
    const auto p = random_model(cfg, 4);
    ForwardTrace t;
    forward(cfg, p, build_graph(random_image(rng, 3, 3)), t);
    for (int cls = 0; cls < cfg.num_classes; ++cls) {
        const auto g = logit_grad_z(cfg, p, t, cls);
        for (Eigen::Index i = 0; i < t.z.size(); ++i) {
            Eigen::RowVectorXd up = t.z, down = t.z;
            up(i) += 1e-6;
            down(i) -= 1e-6;
            const double fd = (head_logits(cfg, p, up)(cls) - head_logits(cfg, p, down)(cls)) / 2e-6;
            CHECK(g(i) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("identical chunk contributions tie in CAM") {
    Rng rng(9);
    const ModelConfig cfg;
    const auto p = random_model(cfg, 5);
    VectorImage base = random_image(rng, 1, 4);
    base.chunks.resize(1);
    const VectorImage img = with_copies(base, 3);
    for (auto mode : {CamMode::gradient, CamMode::leave_one_out}) {
        const auto r = cam(cfg, p, img, mode);
        for (double s : r.chunk_scores) CHECK(std::abs(s - r.chunk_scores[0]) < 1e-12);
        CHECK(r.important_chunks == std::vector<int>{0, 1, 2, 3});
    }
}

TEST_CASE("top decile selection") {
    CHECK(top_decile({0.1, 0.5, 0.2}) == std::vector<int>{1});
    std::vector<double> s(20);
    for (int i = 0; i < 20; ++i) s[i] = i;
    CHECK(top_decile(s) == std::vector<int>{18, 19});
    CHECK(top_decile({1.0, NAN, 1.0}) == std::vector<int>{0, 2});
    CHECK(top_decile({NAN}).empty());
}

TEST_CASE("PDP at the base value with one sample equals the plain prediction") {
    const ModelConfig cfg;
    const auto p = random_model(cfg, 6);
    const auto rs = apple();
    const auto params = sample_params(rs, 42);
    const double v = params.get("lens_offset_x");
    const auto r = pdp(cfg, p, rs, 42, {{"lens_offset_x", {v}}}, 1, 0);
    const double plain = softmax(forward(cfg, p, build_graph(build_phone(params, rs))))(0);
    CHECK(r.confidence[0] == doctest::Approx(plain).epsilon(1e-12));
    CHECK(r.effective[0] == 1);
}

TEST_CASE("PDP grids, failures and determinism") {
    const ModelConfig cfg;
    const auto p = random_model(cfg, 7);
    const auto rs = apple();
    const std::vector<PdpAxis> axes{{"plane_gap", {1.5, 1.6}}, {"frame_fillet", {10.0, 1000.0, 11.0}}};
    const auto r = pdp(cfg, p, rs, 0, axes, 3, 1);
    REQUIRE(r.points() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        if (i % 3 == 1) {
            CHECK(std::isnan(r.confidence[i]));
            CHECK(r.effective[i] == 0);
        } else {
            CHECK(r.confidence[i] >= 0.0);
            CHECK(r.confidence[i] <= 1.0);
            CHECK(r.effective[i] == 3);
        }
    }
    const auto again = pdp(cfg, p, rs, 0, axes, 3, 1, 4);
    CHECK(pdp_csv(again) == pdp_csv(r));
    CHECK(pdp_csv(r).rfind("plane_gap,frame_fillet,confidence,effective\n", 0) == 0);
    CHECK_THROWS_AS(pdp(cfg, p, rs, 0, {{"no_such_param", {1.0}}}, 1, 0), ContractError);
    CHECK_THROWS_AS(pdp(cfg, p, rs, 0, axes, 0, 0), ContractError);
}

TEST_CASE("Jacobi eigenpairs agree with a reference solver") {
    Rng rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(9));
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
        const Eigen::MatrixXd sym = a * a.transpose();
        const auto mine = jacobi_eigen(sym);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(sym);
        for (int k = 0; k < n; ++k) CHECK(mine.values(k) == doctest::Approx(ref.eigenvalues()(n - 1 - k)).epsilon(1e-9));
        CHECK((sym * mine.vectors - mine.vectors * mine.values.asDiagonal()).norm() < 1e-9 * sym.norm());
        CHECK((mine.vectors.transpose() * mine.vectors - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-10);
    }
}

TEST_CASE("PCA properties") {
    Rng rng(11);
    SUBCASE("rank-one data") {
        Eigen::MatrixXd x(50, 6);
        Eigen::RowVectorXd dir(6);
        for (int c = 0; c < 6; ++c) dir(c) = rng.normal();
        for (int r = 0; r < 50; ++r) x.row(r) = rng.normal() * dir + Eigen::RowVectorXd::Constant(6, 2.0);
        CHECK(pca2(x).explained(0) > 0.999);
    }
    SUBCASE("isotropic cloud") {
        Eigen::MatrixXd x(10000, 4);
        for (int r = 0; r < x.rows(); ++r)
            for (int c = 0; c < 4; ++c) x(r, c) = rng.normal();
        const auto proj = pca2(x);
        CHECK(std::abs(proj.explained(0) - 0.25) < 0.02);
        CHECK(std::abs(proj.explained(1) - 0.25) < 0.02);
    }
    SUBCASE("centring, orthonormality, sign and translation invariance") {
        Eigen::MatrixXd x(40, 5);
        for (int r = 0; r < x.rows(); ++r)
            for (int c = 0; c < 5; ++c) x(r, c) = rng.normal() * (c + 1);
        const auto a = pca2(x);
        const auto b = pca2(x.rowwise() + Eigen::RowVectorXd::Constant(5, 123.0));
        CHECK(a.coords.colwise().mean().cwiseAbs().maxCoeff() < 1e-9);
        CHECK((a.components.transpose() * a.components - Eigen::Matrix2d::Identity()).norm() < 1e-9);
        CHECK((a.coords - b.coords).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(a.explained(0) >= a.explained(1));
        for (int k = 0; k < 2; ++k) {
            Eigen::Index big;
            a.components.col(k).cwiseAbs().maxCoeff(&big);
            CHECK(a.components(big, k) > 0);
        }
    }
    CHECK_THROWS_AS(pca2(Eigen::MatrixXd::Zero(2, 4)), ContractError);
}

TEST_CASE("latents are the input of the last f1 layer") {
    Rng rng(12);
    const ModelConfig cfg;
    const auto p = random_model(cfg, 8);
    std::vector<TwoTierGraph> graphs;
    for (int i = 0; i < 4; ++i) graphs.push_back(build_graph(random_image(rng, 3, 3)));
    const auto z = latents(cfg, p, graphs, 2);
    CHECK(z.cols() == 8);
    for (int i = 0; i < 4; ++i) {
        const Dense& last = p.f1.layers.back();
        const Eigen::RowVectorXd logits = z.row(i) * last.weight.transpose() + last.bias.transpose();
        CHECK((logits - forward(cfg, p, graphs[static_cast<std::size_t>(i)])).cwiseAbs().maxCoeff() < 1e-12);
    }
    const auto csv = latents_csv({"a", "b", "c", "d"}, {0, 1, 0, 1}, z);
    CHECK(csv.rfind("id,label,z0,z1,z2,z3,z4,z5,z6,z7\n", 0) == 0);
}

TEST_CASE("attribution rendering") {
    Rng rng(13);
    const VectorImage img = random_image(rng, 3, 3);
    AttributionReport none;
    none.chunk_scores.assign(img.chunks.size(), 0.0);
    const auto plain = render_attribution(img, none);
    CHECK(plain.find("#FF0000") == std::string::npos);
    CHECK(plain.find("#0000FF") == std::string::npos);
    AttributionReport some = none;
    some.important_chunks = {0};
    some.important_curves = {{0, 0}};
    const auto marked = render_attribution(img, some);
    CHECK(marked.find("#FF0000") != std::string::npos);
    CHECK(marked.find("#0000FF") != std::string::npos);
    AttributionReport bad = none;
    bad.chunk_scores.push_back(0.0);
    CHECK_THROWS_AS(render_attribution(img, bad), ContractError);
    bad = none;
    bad.important_chunks = {99};
    CHECK_THROWS_AS(render_attribution(img, bad), ContractError);
}

TEST_CASE("plot rendering") {
    PdpResult line;
    line.axes = {{"x", {0, 1, 2, 3, 4}}};
    line.confidence = {0.1, 0.4, 0.2, 0.9, 0.5};
    line.effective = {1, 1, 1, 1, 1};
    const auto svg = render_plot(line);
    const std::regex poly("points=\"([^\"]*)\"");
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, poly));
    const std::string pts = m[1];
    CHECK(std::count(pts.begin(), pts.end(), ',') == 5);

    for (double v = 0.0; v < 1.0; v += 0.05) CHECK(heat_gray(v + 0.05, 0.0, 1.0) <= heat_gray(v, 0.0, 1.0));
    CHECK(heat_gray(1.0, 0.0, 1.0) < heat_gray(0.0, 0.0, 1.0));

    PdpResult heat;
    heat.axes = {{"a", {0, 1}}, {"b", {0, 1, 2}}};
    heat.confidence = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    heat.effective.assign(6, 1);
    const auto hs = render_plot(heat);
    CHECK(std::count(hs.begin(), hs.end(), '\n') > 6);
    std::size_t cells = 0;
    for (auto pos = hs.find("class=\"cell\""); pos != std::string::npos; pos = hs.find("class=\"cell\"", pos + 1)) ++cells;
    CHECK(cells == 6);

    LatentProjection proj;
    proj.coords = Eigen::MatrixXd::Random(10, 2);
    proj.explained = {0.6, 0.3};
    proj.labels.assign(10, 1);
    const auto sc = render_plot(proj);
    std::size_t dots = 0;
    for (auto pos = sc.find("<circle"); pos != std::string::npos; pos = sc.find("<circle", pos + 1)) ++dots;
    CHECK(dots == 10);
}
