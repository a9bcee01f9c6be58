#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "fts/csv.hpp"
#include "fts/errors.hpp"
#include "fts/eval.hpp"
#include "fts/report.hpp"
#include "support/tempdir.hpp"

using namespace fts;
using namespace fts::report;
using testutil::TempDir;

namespace {

ConfusionMatrix matrix_of(std::vector<std::vector<double>> rows) {
    ConfusionMatrix m;
    m.rows = std::move(rows);
    m.row_counts.assign(m.rows.size(), 0);
    return m;
}

std::string csv_of(const std::vector<std::vector<double>>& rows) {
    return render_confusion_csv(matrix_of(rows));
}

// Published four-class results, reproduced verbatim. Each entry pairs the
// row-normalized percentages with the expected two-decimal CSV body.
struct Fixture {
    const char* name;
    std::vector<std::vector<double>> rows;
    const char* expected;
};

const Fixture kFixtures[] = {
    {"svm imu",
     {{90.91, 9.09, 0.0, 0.0},
      {0.0, 86.25, 13.75, 0.0},
      {1.49, 22.39, 58.21, 17.91},
      {0.63, 1.26, 1.89, 96.23}},
     "actual,loose,compressed,pebbles,rock\n"
     "loose,90.91,9.09,0.00,0.00\n"
     "compressed,0.00,86.25,13.75,0.00\n"
     "pebbles,1.49,22.39,58.21,17.91\n"
     "rock,0.63,1.26,1.89,96.23\n"},
    {"svm fts",
     {{100.0, 0.0, 0.0, 0.0},
      {1.25, 97.50, 0.0, 1.25},
      {0.0, 1.49, 85.07, 13.43},
      {0.63, 0.0, 1.26, 98.11}},
     "actual,loose,compressed,pebbles,rock\n"
     "loose,100.00,0.00,0.00,0.00\n"
     "compressed,1.25,97.50,0.00,1.25\n"
     "pebbles,0.00,1.49,85.07,13.43\n"
     "rock,0.63,0.00,1.26,98.11\n"},
    {"svm both",
     {{100.0, 0.0, 0.0, 0.0},
      {1.25, 97.50, 0.0, 1.25},
      {0.0, 1.49, 86.57, 11.94},
      {0.63, 0.0, 1.26, 98.11}},
     "actual,loose,compressed,pebbles,rock\n"
     "loose,100.00,0.00,0.00,0.00\n"
     "compressed,1.25,97.50,0.00,1.25\n"
     "pebbles,0.00,1.49,86.57,11.94\n"
     "rock,0.63,0.00,1.26,98.11\n"},
    {"nn imu",
     {{96.97, 3.03, 0.0, 0.0},
      {0.0, 80.00, 15.00, 5.00},
      {0.0, 19.40, 28.36, 67.16},
      {0.63, 0.63, 1.89, 96.86}},
     "actual,loose,compressed,pebbles,rock\n"
     "loose,96.97,3.03,0.00,0.00\n"
     "compressed,0.00,80.00,15.00,5.00\n"
     "pebbles,0.00,19.40,28.36,67.16\n"
     "rock,0.63,0.63,1.89,96.86\n"},
    {"nn fts",
     {{100.0, 0.0, 0.0, 0.0},
      {0.0, 98.75, 1.25, 0.0},
      {0.0, 1.49, 88.06, 10.45},
      {0.0, 0.63, 1.89, 97.48}},
     "actual,loose,compressed,pebbles,rock\n"
     "loose,100.00,0.00,0.00,0.00\n"
     "compressed,0.00,98.75,1.25,0.00\n"
     "pebbles,0.00,1.49,88.06,10.45\n"
     "rock,0.00,0.63,1.89,97.48\n"},
    {"nn both",
     {{100.0, 0.0, 0.0, 0.0},
      {0.0, 95.00, 1.25, 3.75},
      {0.0, 0.0, 95.52, 4.48},
      {0.63, 0.63, 1.26, 97.48}},
     "actual,loose,compressed,pebbles,rock\n"
     "loose,100.00,0.00,0.00,0.00\n"
     "compressed,0.00,95.00,1.25,3.75\n"
     "pebbles,0.00,0.00,95.52,4.48\n"
     "rock,0.63,0.63,1.26,97.48\n"},
};

}  // namespace

TEST_CASE("percent cells round half away from zero at two decimals") {
    CHECK(format_percent(0.125) == "0.13");
    CHECK(format_percent(-0.125) == "-0.13");
    CHECK(format_percent(100.0) == "100.00");
    CHECK(format_percent(33.333) == "33.33");
    CHECK(format_percent(100.0 / 3.0) == "33.33");
    CHECK(format_percent(0.0) == "0.00");
    CHECK(format_percent(97.5) == "97.50");
    CHECK(format_percent(58.21) == "58.21");
    // 2.375 is a dyadic rational, so the .5 hundredth is exact.
    CHECK(format_percent(2.375) == "2.38");
    CHECK(format_percent(-2.375) == "-2.38");
}

TEST_CASE("an identity confusion renders a 100.00 diagonal") {
    std::vector<std::vector<double>> rows(4, std::vector<double>(4, 0.0));
    for (std::size_t i = 0; i < 4; ++i) rows[i][i] = 100.0;
    const std::string text = render_confusion_text(matrix_of(rows));
    std::size_t hits = 0;
    for (std::size_t pos = text.find("100.00"); pos != std::string::npos;
         pos = text.find("100.00", pos + 1)) {
        ++hits;
    }
    CHECK(hits == 4);
    CHECK(text.find("actual") == 0);

    const std::string csv = csv_of(rows);
    CHECK(csv.find("loose,100.00,0.00,0.00,0.00\n") != std::string::npos);
    CHECK(csv.find("rock,0.00,0.00,0.00,100.00\n") != std::string::npos);
}

TEST_CASE("a uniform three-way split renders as repeated 33.33") {
    const double third = 100.0 / 3.0;
    std::vector<std::vector<double>> rows(4, std::vector<double>(4, 0.0));
    rows[0] = {third, third, third, 0.0};
    const std::string csv = csv_of(rows);
    CHECK(csv.find("loose,33.33,33.33,33.33,0.00\n") != std::string::npos);
}

TEST_CASE("published confusion tables render cell for cell") {
    for (const Fixture& f : kFixtures) {
        CAPTURE(f.name);
        CHECK(csv_of(f.rows) == f.expected);
    }

    // Overall accuracies quoted alongside the tables.
    CHECK(format_percent(89.51) == "89.51");
    CHECK(format_percent(85.84) == "85.84");
    CHECK(format_percent(100.0) == "100.00");
    CHECK(format_percent(95.58) == "95.58");
    CHECK(format_percent(95.87) == "95.87");
    CHECK(format_percent(84.02) == "84.02");
    CHECK(format_percent(79.35) == "79.35");
    CHECK(format_percent(98.92) == "98.92");
    CHECK(format_percent(96.17) == "96.17");
    CHECK(format_percent(99.31) == "99.31");
    CHECK(format_percent(96.76) == "96.76");
}

TEST_CASE("the renderer reports rows as given, even off-sum ones") {
    // One published row sums to 114.92; formatting must not renormalize it.
    const auto& pebbles = kFixtures[3].rows[2];
    CHECK(pebbles[1] + pebbles[2] + pebbles[3] == doctest::Approx(114.92));
    const auto parsed = parse_confusion_csv(csv_of(kFixtures[3].rows));
    double sum = 0.0;
    for (double cell : parsed.rows[2]) sum += cell;
    CHECK(sum == doctest::Approx(114.92));
}

TEST_CASE("confusion csv round-trips through parse") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> cell(0.0, 100.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> rows(4, std::vector<double>(4));
        for (auto& row : rows) {
            for (double& v : row) v = cell(rng);
        }
        const std::string once = csv_of(rows);
        const ConfusionMatrix back = parse_confusion_csv(once);
        CHECK(render_confusion_csv(back) == once);
        // Counts and accuracy are not carried by the CSV.
        CHECK(back.accuracy == 0.0);
        for (std::size_t c : back.row_counts) CHECK(c == 0);
    }

    CHECK_THROWS_AS(parse_confusion_csv("nope\n"), ParseError);
    CHECK_THROWS_AS(parse_confusion_csv("actual,loose,compressed,pebbles,rock\n"),
                    ParseError);
    const std::string wrong_label =
        "actual,loose,compressed,pebbles,rock\n"
        "loose,1,2,3,4\nmud,1,2,3,4\npebbles,1,2,3,4\nrock,1,2,3,4\n";
    CHECK_THROWS_AS(parse_confusion_csv(wrong_label), ParseError);
    const std::string bad_cell =
        "actual,loose,compressed,pebbles,rock\n"
        "loose,1,2,3,4\ncompressed,1,x,3,4\npebbles,1,2,3,4\nrock,1,2,3,4\n";
    CHECK_THROWS_AS(parse_confusion_csv(bad_cell), ParseError);
}

TEST_CASE("confusion_matrix tallies row-normalized percentages") {
    const Terrain truth[] = {Terrain::Loose, Terrain::Loose, Terrain::Compressed};
    const Terrain pred[] = {Terrain::Loose, Terrain::Compressed, Terrain::Compressed};
    const ConfusionMatrix m = confusion_matrix(pred, truth);
    CHECK(m.rows[0][0] == 50.0);
    CHECK(m.rows[0][1] == 50.0);
    CHECK(m.rows[1][1] == 100.0);
    CHECK(m.rows[1][0] == 0.0);
    // Classes absent from the truth stay all-zero.
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(m.rows[2][c] == 0.0);
        CHECK(m.rows[3][c] == 0.0);
    }
    CHECK(m.row_counts == std::vector<std::size_t>{2, 1, 0, 0});
    CHECK(m.accuracy == doctest::Approx(2.0 / 3.0));

    CHECK_THROWS_AS(confusion_matrix({}, {}), DataError);
    const Terrain one[] = {Terrain::Rock};
    CHECK_THROWS_AS(confusion_matrix(one, truth), DataError);
}

TEST_CASE("retention csv keeps full precision and wheel order") {
    // Published remaining-percentage table, all 17 significant digits.
    const double wheels[3][7] = {
        {75.0525841627202, 61.92724187161598, 57.79915057533705,
         59.13159589158716, 74.65048569842251, 55.04919275395991,
         63.93503731088278},
        {61.31911983352651, 46.656834487155313, 41.557645196096477,
         43.61572654279672, 60.97984475010214, 39.91035047569021,
         49.00658122169384},
        {54.63545014362903, 40.379429344491435, 34.74320467752242,
         37.60160008560129, 53.99704136255954, 33.99700619525279,
         42.55894939897029},
    };
    const double tolerances[3] = {0.05, 0.02, 0.01};

    std::vector<drawbar::RetentionReport> reports(3);
    for (std::size_t k = 0; k < 3; ++k) {
        reports[k].tolerance = tolerances[k];
        for (std::size_t w = 0; w < 6; ++w) {
            drawbar::RetentionRow row;
            row.wheel = kWheelPositions[w];
            row.percent = wheels[k][w];
            reports[k].wheels.push_back(row);
        }
        reports[k].pooled.percent = wheels[k][6];
    }

    const std::string csv = render_retention_csv(reports);
    std::vector<std::string> lines;
    for (std::size_t pos = 0; pos < csv.size();) {
        const std::size_t nl = csv.find('\n', pos);
        lines.push_back(csv.substr(pos, nl - pos));
        pos = nl + 1;
    }
    REQUIRE(lines.size() == 5);
    CHECK(lines[0][0] == '#');
    CHECK(lines[0].find("denominator") != std::string::npos);
    CHECK(lines[1] == "tolerance_cm,FL,FR,CL,CR,BL,BR,total");

    const char* leads[3] = {"5,", "2,", "1,"};
    for (std::size_t k = 0; k < 3; ++k) {
        const auto fields = csv::split(lines[2 + k]);
        REQUIRE(fields.size() == 8);
        CHECK(lines[2 + k].rfind(leads[k], 0) == 0);
        for (std::size_t w = 0; w < 7; ++w) {
            // Bit-exact after the round trip, not merely close.
            CHECK(csv::parse_double(fields[1 + w], "cell") == wheels[k][w]);
        }
    }
    // Spot-check shortest-form cells verbatim.
    CHECK(csv.find("75.0525841627202") != std::string::npos);
    CHECK(csv.find("42.55894939897029") != std::string::npos);

    // A wheel with no series leaves its column empty.
    drawbar::RetentionReport sparse;
    sparse.tolerance = 0.05;
    drawbar::RetentionRow only;
    only.wheel = SensorPosition::FL;
    only.percent = 100.0;
    sparse.wheels.push_back(only);
    sparse.pooled.percent = 100.0;
    const drawbar::RetentionReport one[] = {sparse};
    const std::string sparse_csv = render_retention_csv(one);
    CHECK(sparse_csv.find("5,100,,,,,,100\n") != std::string::npos);
}

TEST_CASE("lever csv leaves undefined estimates empty") {
    drawbar::LeverSeries series;
    series.wheel = SensorPosition::FL;
    series.points.push_back({0.0, 10.0, 1.5, 0.15, true});
    series.points.push_back({0.5, 0.0, 1.0, std::nullopt, false});
    const std::string csv = render_lever_csv(series);
    CHECK(csv.rfind("t,fx,ty,lever,valid\n", 0) == 0);
    CHECK(csv.find("0,10,1.5,0.15,1\n") != std::string::npos);
    CHECK(csv.find("0.5,0,1,,0\n") != std::string::npos);
}

TEST_CASE("grid csv carries no wall-clock columns") {
    std::vector<svm::GridRow> rows(2);
    rows[0].kernel = svm::KernelKind::Linear;
    rows[0].c = 0.1;
    rows[0].gamma = 1.0;
    rows[0].train_accuracy = 1.0;
    rows[0].test_accuracy = 0.9558;
    rows[1].kernel = svm::KernelKind::Rbf;
    rows[1].c = 10.0;
    rows[1].gamma = 0.01;
    rows[1].train_accuracy = 0.75;
    rows[1].test_accuracy = 0.5;
    const std::string csv = render_grid_csv(rows);
    CHECK(csv.rfind("kernel,c,gamma,train_accuracy,test_accuracy\n", 0) == 0);
    CHECK(csv.find("linear,0.1,1,1,0.9558\n") != std::string::npos);
    CHECK(csv.find("rbf,10,0.01,0.75,0.5\n") != std::string::npos);
    CHECK(csv.find("seconds") == std::string::npos);
}

TEST_CASE("curves and timings csv forms") {
    std::vector<mlp::EpochStats> curves(2);
    curves[0] = {1, 0.5, 0.75, 0.625, 0.7};
    curves[1] = {2, 0.25, 0.875, 0.5, 0.8};
    const std::string csv = render_curves_csv(curves);
    CHECK(csv ==
          "epoch,train_loss,train_acc,test_loss,test_acc\n"
          "1,0.5,0.75,0.625,0.7\n"
          "2,0.25,0.875,0.5,0.8\n");

    const TimedPhase phases[] = {{"grid_search", 24.25522}, {"train", 0.132472}};
    const std::string timings = render_timings_csv(phases);
    CHECK(timings ==
          "phase,seconds\n"
          "grid_search,24.25522\n"
          "train,0.132472\n");
}

TEST_CASE("curves svg plots one polyline per series") {
    std::vector<mlp::EpochStats> curves(3);
    for (std::size_t e = 0; e < 3; ++e) {
        curves[e] = {e + 1, 1.0 / static_cast<double>(e + 1),
                     0.5 + 0.1 * static_cast<double>(e),
                     1.0 / static_cast<double>(e + 1),
                     0.4 + 0.1 * static_cast<double>(e)};
    }
    const std::string svg = render_curves_svg(curves);
    CHECK(svg.rfind("<svg", 0) == 0);
    std::size_t polylines = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
         pos = svg.find("<polyline", pos + 1)) {
        ++polylines;
    }
    CHECK(polylines == 2);
    CHECK(svg.find("train") != std::string::npos);
    CHECK(svg.find("eval") != std::string::npos);
    CHECK_THROWS_AS(render_curves_svg({}), DataError);
}

TEST_CASE("text files round-trip") {
    TempDir dir("report");
    const std::string body = "alpha,beta\n1,2\n";
    write_text_file(dir / "t.csv", body);
    CHECK(read_text_file(dir / "t.csv") == body);
    CHECK_THROWS_AS(read_text_file(dir / "missing.csv"), DataError);
}
