#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "fts/csv.hpp"
#include "fts/report.hpp"
#include "support/tempdir.hpp"

using fts::report::read_text_file;
using testutil::TempDir;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the installed binary with the given arguments, capturing both
// channels. The scratch dir keeps capture files out of the way.
RunResult run_cli(const std::string& args, const std::filesystem::path& scratch) {
    const auto out_path = scratch / "stdout.txt";
    const auto err_path = scratch / "stderr.txt";
    const std::string command = std::string(FTSPROC_BIN) + " " + args + " >" +
                                out_path.string() + " 2>" + err_path.string();
    const int status = std::system(command.c_str());
    RunResult result;
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    std::ifstream out(out_path), err(err_path);
    result.out.assign(std::istreambuf_iterator<char>(out), {});
    result.err.assign(std::istreambuf_iterator<char>(err), {});
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::size_t data_rows(const std::string& csv) {
    std::size_t rows = 0;
    for (const auto& line : lines_of(csv)) {
        if (!line.empty() && line[0] != '#' && line.find(',') != std::string::npos) {
            ++rows;
        }
    }
    return rows > 0 ? rows - 1 : 0;  // minus the header
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
    TempDir dir("cli_usage");
    CHECK(run_cli("--help", dir.path()).exit_code == 0);
    CHECK(run_cli("synth --help", dir.path()).exit_code == 0);
    CHECK(run_cli("--definitely-not-a-flag", dir.path()).exit_code == 1);
    CHECK(run_cli("", dir.path()).exit_code == 1);

    const auto bad_variant = run_cli(
        "extract --data " + dir.path().string() + " --out " +
            (dir / "x.csv").string() + " --variant sonar",
        dir.path());
    CHECK(bad_variant.exit_code == 1);
    CHECK(bad_variant.err.find("sonar") != std::string::npos);
}

TEST_CASE("missing inputs exit with code 2 and name the path") {
    TempDir dir("cli_missing");
    const std::string data = (dir / "empty").string();
    std::filesystem::create_directories(data);

    const auto no_stream = run_cli(
        "extract --data " + data + " --out " + (dir / "s.csv").string(),
        dir.path());
    CHECK(no_stream.exit_code == 2);
    CHECK(no_stream.err.find("fts_fl.csv") != std::string::npos);

    // A scenario exists but the label file does not.
    const std::string raw = (dir / "raw").string();
    REQUIRE(run_cli("synth --out " + raw + " --duration 2", dir.path()).exit_code ==
            0);
    const std::string absent = (dir / "nope_labels.csv").string();
    const auto no_labels = run_cli(
        "extract --data " + raw + " --labels " + absent + " --out " +
            (dir / "s.csv").string(),
        dir.path());
    CHECK(no_labels.exit_code == 2);
    CHECK(no_labels.err.find(absent) != std::string::npos);
}

TEST_CASE("a 240 second scenario yields about 240 windows") {
    TempDir dir("cli_windows");
    const std::string raw = (dir / "raw").string();
    REQUIRE(run_cli("synth --out " + raw + " --duration 60 --seed 42",
                    dir.path()).exit_code == 0);
    for (const char* name :
         {"fts_fl.csv", "fts_fr.csv", "fts_cl.csv", "fts_cr.csv", "fts_bl.csv",
          "fts_br.csv", "imu.csv", "labels.csv"}) {
        CHECK(std::filesystem::exists(dir / "raw" / name));
    }

    const std::string samples = (dir / "samples.csv").string();
    const auto extract = run_cli(
        "extract --data " + raw + " --labels " + raw + "/labels.csv --out " +
            samples,
        dir.path());
    REQUIRE(extract.exit_code == 0);
    const std::string csv = read_text_file(samples);
    const std::size_t rows = data_rows(csv);
    CHECK(rows >= 237);
    CHECK(rows <= 240);

    // Full variant: 225 feature columns behind t_start and label.
    const auto all_lines = lines_of(csv);
    const auto header = fts::csv::split(all_lines[0]);
    CHECK(header.size() == 2 + 225);

    const auto imu_only = run_cli(
        "extract --data " + raw + " --labels " + raw + "/labels.csv --variant imu "
        "--out " + (dir / "imu.csv").string(),
        dir.path());
    REQUIRE(imu_only.exit_code == 0);
    const auto imu_lines = lines_of(read_text_file(dir / "imu.csv"));
    const auto imu_header = fts::csv::split(imu_lines[0]);
    CHECK(imu_header.size() == 2 + 15);
    for (std::size_t i = 2; i < imu_header.size(); ++i) {
        CHECK(imu_header[i].rfind("imu_", 0) == 0);
    }
}

TEST_CASE("svm training writes the full grid and reloadable model") {
    TempDir dir("cli_svm");
    const std::string raw = (dir / "raw").string();
    REQUIRE(run_cli("synth --out " + raw + " --duration 15 --seed 42",
                    dir.path()).exit_code == 0);
    const std::string samples = (dir / "samples.csv").string();
    REQUIRE(run_cli("extract --data " + raw + " --labels " + raw +
                        "/labels.csv --out " + samples,
                    dir.path()).exit_code == 0);

    const std::string out = (dir / "svm_out").string();
    const auto train = run_cli(
        "train --samples " + samples + " --out " + out +
            " --model svm --variant imu --seed 42 --jobs 2",
        dir.path());
    REQUIRE(train.exit_code == 0);

    const std::string grid = read_text_file(dir / "svm_out" / "grid.csv");
    const auto grid_lines = lines_of(grid);
    REQUIRE(grid_lines.size() == 65);
    CHECK(grid_lines[0] == "kernel,c,gamma,train_accuracy,test_accuracy");
    std::size_t linear_rows = 0;
    for (std::size_t i = 1; i < grid_lines.size(); ++i) {
        if (grid_lines[i].rfind("linear,", 0) == 0) ++linear_rows;
    }
    CHECK(linear_rows == 16);

    for (const char* name : {"model.txt", "metrics.csv", "confusion_test.csv",
                             "confusion_test.txt", "timings.csv"}) {
        CHECK(std::filesystem::exists(dir / "svm_out" / name));
    }

    // The saved model evaluates cleanly on the same samples.
    const auto evaluate = run_cli(
        "evaluate --model " + out + "/model.txt --samples " + samples +
            " --out " + (dir / "eval_out").string() + " --variant imu",
        dir.path());
    REQUIRE(evaluate.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "eval_out" / "predictions.csv"));
    CHECK(std::filesystem::exists(dir / "eval_out" / "confusion_eval.csv"));

    // Unknown model variants are usage errors.
    CHECK(run_cli("train --samples " + samples + " --out " + out +
                      " --model forest",
                  dir.path()).exit_code == 1);
}

TEST_CASE("mlp training writes one curve row per epoch") {
    TempDir dir("cli_mlp");
    const std::string raw = (dir / "raw").string();
    REQUIRE(run_cli("synth --out " + raw + " --duration 15 --seed 42",
                    dir.path()).exit_code == 0);
    const std::string samples = (dir / "samples.csv").string();
    REQUIRE(run_cli("extract --data " + raw + " --labels " + raw +
                        "/labels.csv --out " + samples,
                    dir.path()).exit_code == 0);

    const std::string out = (dir / "mlp_out").string();
    const auto train = run_cli(
        "train --samples " + samples + " --out " + out +
            " --model mlp --variant fts --epochs 12 --seed 42",
        dir.path());
    REQUIRE(train.exit_code == 0);

    const auto curve_lines = lines_of(read_text_file(dir / "mlp_out" / "curves.csv"));
    REQUIRE(curve_lines.size() == 13);
    CHECK(curve_lines[0] == "epoch,train_loss,train_acc,test_loss,test_acc");
    CHECK(curve_lines[1].rfind("1,", 0) == 0);
    CHECK(curve_lines[12].rfind("12,", 0) == 0);
    CHECK(std::filesystem::exists(dir / "mlp_out" / "curves.svg"));
    CHECK(std::filesystem::exists(dir / "mlp_out" / "model.txt"));

    // Re-render the curves through the report command.
    const auto report = run_cli(
        "report --curves " + out + "/curves.csv --out " +
            (dir / "report_out").string(),
        dir.path());
    REQUIRE(report.exit_code == 0);
    const std::string svg = read_text_file(dir / "report_out" / "curves.svg");
    CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("report renders a confusion csv into both text forms") {
    TempDir dir("cli_report");
    const std::string body =
        "actual,loose,compressed,pebbles,rock\n"
        "loose,100.00,0.00,0.00,0.00\n"
        "compressed,0.00,95.00,1.25,3.75\n"
        "pebbles,0.00,0.00,95.52,4.48\n"
        "rock,0.63,0.63,1.26,97.48\n";
    fts::report::write_text_file(dir / "in.csv", body);
    const auto report = run_cli(
        "report --confusion " + (dir / "in.csv").string() + " --out " +
            (dir / "out").string() + " --name table",
        dir.path());
    REQUIRE(report.exit_code == 0);
    CHECK(read_text_file(dir / "out" / "table.csv") == body);
    const std::string text = read_text_file(dir / "out" / "table.txt");
    CHECK(text.find("95.52") != std::string::npos);
}

TEST_CASE("drawbar filtering keeps every sample of a noiseless scenario") {
    TempDir dir("cli_drawbar");
    const std::string raw = (dir / "raw").string();
    REQUIRE(run_cli("synth --out " + raw + " --duration 10 --seed 42 "
                    "--noiseless-lever",
                    dir.path()).exit_code == 0);

    const std::string out = (dir / "pull").string();
    const auto drawbar = run_cli("drawbar --data " + raw + " --out " + out,
                                 dir.path());
    REQUIRE(drawbar.exit_code == 0);

    const std::string retention = read_text_file(dir / "pull" / "retention.csv");
    const auto ret_lines = lines_of(retention);
    REQUIRE(ret_lines.size() == 5);
    CHECK(ret_lines[0][0] == '#');
    CHECK(ret_lines[1] == "tolerance_cm,FL,FR,CL,CR,BL,BR,total");
    CHECK(ret_lines[2] == "5,100,100,100,100,100,100,100");
    CHECK(ret_lines[3].rfind("2,", 0) == 0);
    CHECK(ret_lines[4].rfind("1,", 0) == 0);
    for (std::size_t i = 2; i < 5; ++i) {
        const auto cells = fts::csv::split(ret_lines[i]);
        REQUIRE(cells.size() == 8);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            CHECK(cells[c] == "100");
        }
    }

    for (const char* name :
         {"lever_fl.csv", "lever_br.csv", "scatter_valid_cl.csv",
          "scatter_invalid_cr.csv", "stable_intervals.csv"}) {
        CHECK(std::filesystem::exists(dir / "pull" / name));
    }
    const auto intervals =
        lines_of(read_text_file(dir / "pull" / "stable_intervals.csv"));
    CHECK(intervals[0] == "wheel,t_start,t_end,points,mean_fx,std_fx");
    CHECK(intervals.size() >= 7);  // one spanning interval per wheel

    const auto single = run_cli(
        "drawbar --data " + raw + " --out " + (dir / "single").string() +
            " --tolerances 2",
        dir.path());
    REQUIRE(single.exit_code == 0);
    const auto single_lines =
        lines_of(read_text_file(dir / "single" / "retention.csv"));
    REQUIRE(single_lines.size() == 3);
    CHECK(single_lines[2].rfind("2,", 0) == 0);
}

TEST_CASE("same seed, same bytes; different seed, different samples") {
    TempDir dir("cli_seed");
    for (const char* run : {"a", "b"}) {
        const std::string raw = (dir / (std::string("raw_") + run)).string();
        REQUIRE(run_cli("synth --out " + raw + " --duration 5 --seed 99",
                        dir.path()).exit_code == 0);
        REQUIRE(run_cli("extract --data " + raw + " --labels " + raw +
                            "/labels.csv --out " +
                            (dir / (std::string("s_") + run + ".csv")).string(),
                        dir.path()).exit_code == 0);
    }
    CHECK(read_text_file(dir / "s_a.csv") == read_text_file(dir / "s_b.csv"));
    CHECK(read_text_file(dir / "raw_a" / "fts_fl.csv") ==
          read_text_file(dir / "raw_b" / "fts_fl.csv"));

    const std::string other = (dir / "raw_c").string();
    REQUIRE(run_cli("synth --out " + other + " --duration 5 --seed 100",
                    dir.path()).exit_code == 0);
    CHECK(read_text_file(dir / "raw_a" / "fts_fl.csv") !=
          read_text_file(dir / "raw_c" / "fts_fl.csv"));
}

TEST_CASE("options can come from a config file") {
    TempDir dir("cli_config");
    fts::report::write_text_file(dir / "run.ini", "seed=9\n");
    const std::string via_cfg = (dir / "cfg").string();
    const std::string via_flag = (dir / "flag").string();
    REQUIRE(run_cli("--config " + (dir / "run.ini").string() +
                        " synth --out " + via_cfg + " --duration 3",
                    dir.path()).exit_code == 0);
    REQUIRE(run_cli("synth --out " + via_flag + " --duration 3 --seed 9",
                    dir.path()).exit_code == 0);
    CHECK(read_text_file(dir / "cfg" / "fts_fl.csv") ==
          read_text_file(dir / "flag" / "fts_fl.csv"));
}
