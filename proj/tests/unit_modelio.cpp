#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fts/errors.hpp"
#include "fts/model_io.hpp"
#include "fts/report.hpp"
#include "support/tempdir.hpp"

using namespace fts;
using namespace fts::model_io;
using testutil::TempDir;

namespace {

// Four well-separated 2-D blobs, one per terrain, as a labeled SampleSet.
SampleSet four_blobs(std::size_t per_class, std::uint64_t seed) {
    const double centers[4][2] = {{0.0, 0.0}, {8.0, 0.0}, {0.0, 8.0}, {8.0, 8.0}};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.5);
    SampleSet set;
    set.feature_names = {"x0", "x1"};
    set.features = Matrix(4 * per_class, 2);
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < per_class; ++i) {
            const std::size_t r = k * per_class + i;
            set.features.at(r, 0) = centers[k][0] + noise(rng);
            set.features.at(r, 1) = centers[k][1] + noise(rng);
            set.window_starts.push_back(static_cast<double>(r));
            set.labels.push_back(kAllTerrains[k]);
        }
    }
    return set;
}

Matrix random_probes(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-2.0, 10.0);
    Matrix x(n, 2);
    for (double& v : x.data()) v = dist(rng);
    return x;
}

}  // namespace

TEST_CASE("svm models survive a save/load round trip bit for bit") {
    const SampleSet data = four_blobs(15, 31);
    svm::SvmConfig cfg;
    cfg.c = 10.0;
    cfg.kernel.kind = svm::KernelKind::Rbf;
    cfg.kernel.gamma = 0.5;
    cfg.tol = 1e-4;
    const svm::SvmModel model = svm::train_multiclass(data, cfg);

    TempDir dir("modelio");
    const auto path = dir / "svm.txt";
    save_svm(model, path);
    const svm::SvmModel loaded = load_svm(path);

    REQUIRE(loaded.machines.size() == model.machines.size());
    CHECK(loaded.classes == model.classes);
    CHECK(loaded.reduction == model.reduction);
    CHECK(loaded.kernel.kind == model.kernel.kind);
    CHECK(loaded.kernel.gamma == model.kernel.gamma);
    CHECK(loaded.kernel.degree == model.kernel.degree);
    CHECK(loaded.kernel.coef0 == model.kernel.coef0);

    const Matrix probes = random_probes(40, 32);
    for (std::size_t i = 0; i < probes.rows(); ++i) {
        const auto z = model.scaler.transform(probes.row(i));
        for (std::size_t m = 0; m < model.machines.size(); ++m) {
            const double a = model.machines[m].decision(model.kernel, z);
            const double b = loaded.machines[m].decision(loaded.kernel, z);
            CHECK(std::abs(a - b) < 1e-12);
            CHECK(a == b);
        }
    }
    CHECK(model.predict(probes) == loaded.predict(probes));
    CHECK(peek_type(path) == ModelType::Svm);
}

TEST_CASE("one-vs-one models round trip too") {
    const SampleSet data = four_blobs(10, 33);
    svm::SvmConfig cfg;
    cfg.kernel.kind = svm::KernelKind::Linear;
    cfg.reduction = svm::Reduction::OneVsOne;
    const svm::SvmModel model = svm::train_multiclass(data, cfg);
    REQUIRE(model.machines.size() == 6);

    TempDir dir("modelio");
    const auto path = dir / "ovo.txt";
    save_svm(model, path);
    const svm::SvmModel loaded = load_svm(path);
    REQUIRE(loaded.machines.size() == 6);
    for (std::size_t m = 0; m < 6; ++m) {
        CHECK(loaded.machines[m].positive_class == model.machines[m].positive_class);
        CHECK(loaded.machines[m].negative_class == model.machines[m].negative_class);
        CHECK(loaded.machines[m].bias == model.machines[m].bias);
        CHECK(loaded.machines[m].coefficients == model.machines[m].coefficients);
    }
    const Matrix probes = random_probes(25, 34);
    CHECK(model.predict(probes) == loaded.predict(probes));
}

TEST_CASE("mlp models reproduce their probabilities after reload") {
    mlp::MlpConfig cfg;
    cfg.input_dim = 3;
    cfg.hidden_layers = 2;
    cfg.hidden_units = 5;
    std::mt19937_64 rng(35);
    const Scaler scaler = Scaler::from_parameters({0.5, -1.0, 2.0}, {2.0, 1.0, 3.0});
    const mlp::MlpModel model =
        mlp::init_model(cfg, scaler, {kAllTerrains.begin(), kAllTerrains.end()}, rng);

    TempDir dir("modelio");
    const auto path = dir / "mlp.txt";
    save_mlp(model, path);
    const mlp::MlpModel loaded = load_mlp(path);

    CHECK(loaded.config.hidden_layers == 2);
    CHECK(loaded.config.hidden_units == 5);
    CHECK(loaded.classes == model.classes);
    REQUIRE(loaded.layers.size() == model.layers.size());
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        CHECK(loaded.layers[l].weights.data() == model.layers[l].weights.data());
        CHECK(loaded.layers[l].bias == model.layers[l].bias);
    }

    std::uniform_real_distribution<double> dist(-4.0, 4.0);
    for (int i = 0; i < 30; ++i) {
        std::vector<double> raw = {dist(rng), dist(rng), dist(rng)};
        const auto p = model.forward(raw);
        const auto q = loaded.forward(raw);
        REQUIRE(p.size() == q.size());
        for (std::size_t k = 0; k < p.size(); ++k) CHECK(p[k] == q[k]);
        CHECK(model.predict(raw) == loaded.predict(raw));
    }
    CHECK(peek_type(path) == ModelType::Mlp);
}

TEST_CASE("damaged model files are rejected") {
    const SampleSet data = four_blobs(8, 37);
    svm::SvmConfig cfg;
    cfg.kernel.kind = svm::KernelKind::Linear;
    const svm::SvmModel model = svm::train_multiclass(data, cfg);

    TempDir dir("modelio");
    const auto path = dir / "svm.txt";
    save_svm(model, path);
    const std::string text = report::read_text_file(path);

    const auto truncated = dir / "truncated.txt";
    report::write_text_file(truncated, text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(load_svm(truncated), ParseError);

    // Corrupt the first digit after the header line.
    std::string altered = text;
    const std::size_t pos = altered.find_first_of("0123456789", altered.find('\n'));
    REQUIRE(pos != std::string::npos);
    altered[pos] = 'x';
    const auto bad = dir / "bad.txt";
    report::write_text_file(bad, altered);
    CHECK_THROWS_AS(load_svm(bad), ParseError);

    const auto extra = dir / "extra.txt";
    report::write_text_file(extra, text + "\nleftover");
    CHECK_THROWS_AS(load_svm(extra), ParseError);

    CHECK_THROWS_AS(load_svm(dir / "absent.txt"), DataError);
    CHECK_THROWS_AS(load_mlp(path), ParseError);
}
