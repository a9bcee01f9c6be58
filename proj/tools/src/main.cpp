// ftsproc: windowed feature extraction, terrain classification and lever-arm
// analysis for wheeled-rover force-torque and IMU telemetry.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fts/csv.hpp"
#include "fts/dataset.hpp"
#include "fts/drawbar.hpp"
#include "fts/errors.hpp"
#include "fts/eval.hpp"
#include "fts/mlp.hpp"
#include "fts/model_io.hpp"
#include "fts/report.hpp"
#include "fts/svm.hpp"
#include "fts/synth.hpp"
#include "fts/telemetry.hpp"
#include "fts/types.hpp"
#include "fts/windows.hpp"

namespace fs = std::filesystem;
using namespace fts;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct GlobalOptions {
    std::uint64_t seed = 42;
    unsigned jobs = 1;
};

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory: " + dir.string());
}

// Canonical per-sensor file names inside a data directory.
fs::path stream_path(const fs::path& dir, const SensorId& sensor) {
    return dir / (sensor.name() + ".csv");
}

std::vector<TelemetryStream> load_streams(const fs::path& dir, bool want_fts,
                                          bool want_imu) {
    std::vector<TelemetryStream> streams;
    if (want_fts) {
        for (SensorPosition wheel : kWheelPositions) {
            const SensorId id = SensorId::fts(wheel);
            const fs::path path = stream_path(dir, id);
            if (!fs::exists(path)) {
                throw DataError("missing telemetry file: " + path.string());
            }
            streams.push_back(normalize_frame(ingest_csv(path, id)));
        }
    }
    if (want_imu) {
        const SensorId id = SensorId::imu();
        const fs::path path = stream_path(dir, id);
        if (!fs::exists(path)) {
            throw DataError("missing telemetry file: " + path.string());
        }
        // IMU readings are chassis-frame already; ingest keeps frame=raw, and
        // build_samples only requires the rover frame for FTS streams.
        streams.push_back(normalize_frame(ingest_csv(path, id)));
    }
    return streams;
}

FeatureSelection selection_for(const std::string& variant, bool derived) {
    FeatureSelection sel;
    sel.include_fx_over_tz = derived;
    if (variant == "imu") {
        sel.use_imu = true;
        sel.use_fts = false;
    } else if (variant == "fts") {
        sel.use_imu = false;
        sel.use_fts = true;
    } else if (variant == "all") {
        sel.use_imu = true;
        sel.use_fts = true;
    } else {
        throw ConfigError("unknown variant '" + variant + "'");
    }
    return sel;
}

SampleSet apply_variant(const SampleSet& samples, const std::string& variant) {
    if (variant == "all") return samples;
    if (variant == "imu") {
        const std::vector<std::string> prefixes = {"imu_"};
        return samples.select_feature_prefixes(prefixes);
    }
    if (variant == "fts") {
        const std::vector<std::string> prefixes = {"fts_"};
        return samples.select_feature_prefixes(prefixes);
    }
    throw ConfigError("unknown variant '" + variant + "'");
}

std::string metrics_csv(double train_accuracy, double test_accuracy) {
    std::string out = "metric,value\n";
    out += "train_accuracy_percent," + csv::format_double(100.0 * train_accuracy) + '\n';
    out += "test_accuracy_percent," + csv::format_double(100.0 * test_accuracy) + '\n';
    return out;
}

// ---------------------------------------------------------------- synth ---

struct SynthArgs {
    std::string out_dir;
    std::vector<std::string> terrains = {"loose", "compressed", "pebbles", "rock"};
    double duration = 120.0;
    double fts_rate = 100.0;
    double imu_rate = 50.0;
    double speed_min = 0.01;
    double speed_max = 0.05;
    double lever = 0.15;
    bool noiseless_lever = false;
};

int cmd_synth(const SynthArgs& args, const GlobalOptions& global) {
    synth::ScenarioSpec spec;
    for (const std::string& name : args.terrains) {
        const auto terrain = terrain_from_name(name);
        if (!terrain) throw ConfigError("unknown terrain '" + name + "'");
        spec.segments.push_back({*terrain, args.duration});
    }
    spec.fts_rate = args.fts_rate;
    spec.imu_rate = args.imu_rate;
    spec.speed_min = args.speed_min;
    spec.speed_max = args.speed_max;
    spec.lever_true = args.lever;
    spec.seed = global.seed;

    auto profiles = synth::default_profiles();
    if (args.noiseless_lever) {
        for (auto& p : profiles) p.ty_noise_std = 0.0;
    }

    const synth::SynthResult result = synth::generate(spec, profiles);
    ensure_out_dir(args.out_dir);
    for (const TelemetryStream& stream : result.streams) {
        write_csv(stream, stream_path(args.out_dir, stream.sensor));
    }
    write_labels_csv(result.labels, fs::path(args.out_dir) / "labels.csv");
    std::cout << "wrote " << result.streams.size() << " streams and labels to "
              << args.out_dir << "\n";
    return 0;
}

// -------------------------------------------------------------- extract ---

struct ExtractArgs {
    std::string data_dir;
    std::string labels_file;
    std::string out_file;
    std::string variant = "all";
    bool no_derived = false;
    double window = 1.0;
    double stride = 1.0;
};

int cmd_extract(const ExtractArgs& args) {
    const FeatureSelection sel = selection_for(args.variant, !args.no_derived);
    const auto streams = load_streams(args.data_dir, sel.use_fts, sel.use_imu);

    LabelTrack labels;
    if (!args.labels_file.empty()) {
        if (!fs::exists(args.labels_file)) {
            throw DataError("missing label file: " + args.labels_file);
        }
        labels = read_labels_csv(args.labels_file);
    }

    WindowSpec spec;
    spec.length = args.window;
    spec.stride = args.stride;
    const SampleSet samples = build_samples(streams, labels, spec, sel);
    write_samples_csv(samples, args.out_file);
    std::cout << "wrote " << samples.size() << " samples with " << samples.dim()
              << " features to " << args.out_file << "\n";
    return 0;
}

// ---------------------------------------------------------------- train ---

struct TrainArgs {
    std::string samples_file;
    std::string out_dir;
    std::string model = "svm";
    std::string variant = "all";
    double test_fraction = 0.25;

    // svm
    std::string reduction = "ovr";
    bool no_grid = false;
    std::string kernel = "rbf";
    double c = 1.0;
    double gamma = 0.1;
    int degree = 3;
    double coef0 = 0.0;

    // mlp
    std::size_t hidden_layers = 2;
    std::size_t hidden_units = 64;
    std::size_t epochs = 50;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    double input_dropout = 0.10;
    double hidden_dropout = 0.20;
};

svm::Reduction parse_reduction(const std::string& name) {
    if (name == "ovr") return svm::Reduction::OneVsRest;
    if (name == "ovo") return svm::Reduction::OneVsOne;
    throw ConfigError("unknown reduction '" + name + "'");
}

int cmd_train(const TrainArgs& args, const GlobalOptions& global) {
    const SampleSet all = apply_variant(read_samples_csv(args.samples_file),
                                        args.variant);
    const SampleSet labeled = all.labeled_only();
    if (labeled.size() == 0) throw DataError("no labeled samples to train on");
    const std::vector<Terrain> labels = labeled.required_labels();
    const SplitIndices split =
        stratified_split(labels, args.test_fraction, global.seed);
    const SampleSet train_set = labeled.take(split.train);
    const SampleSet test_set = labeled.take(split.test);
    const std::vector<Terrain> test_truth = test_set.required_labels();

    ensure_out_dir(args.out_dir);
    const fs::path out(args.out_dir);
    std::vector<report::TimedPhase> phases;

    std::vector<Terrain> test_pred;
    double train_accuracy = 0.0;

    if (args.model == "svm") {
        svm::SvmConfig cfg;
        cfg.reduction = parse_reduction(args.reduction);
        if (args.no_grid) {
            const auto kind = svm::kernel_from_name(args.kernel);
            if (!kind) throw ConfigError("unknown kernel '" + args.kernel + "'");
            cfg.kernel.kind = *kind;
            cfg.kernel.gamma = args.gamma;
            cfg.kernel.degree = args.degree;
            cfg.kernel.coef0 = args.coef0;
            cfg.c = args.c;
        } else {
            const auto t0 = std::chrono::steady_clock::now();
            const svm::GridSearchResult grid = svm::grid_search(
                labeled, svm::GridSpec{}, split, cfg.reduction, global.jobs);
            phases.push_back({"grid_search", seconds_since(t0)});
            report::write_text_file(out / "grid.csv",
                                    report::render_grid_csv(grid.rows));
            cfg = grid.best;
        }

        const auto t1 = std::chrono::steady_clock::now();
        const svm::SvmModel model = svm::train_multiclass(train_set, cfg);
        phases.push_back({"train", seconds_since(t1)});
        if (!model.fully_converged()) {
            std::cerr << "warning: solver hit the sweep limit before meeting "
                         "the tolerance; using the best iterate\n";
        }

        const auto t2 = std::chrono::steady_clock::now();
        test_pred = model.predict(test_set.features);
        const double infer = seconds_since(t2);
        phases.push_back({"inference_total", infer});
        phases.push_back(
            {"inference_per_sample", infer / static_cast<double>(test_set.size())});

        const auto train_pred = model.predict(train_set.features);
        std::size_t hits = 0;
        const auto train_truth = train_set.required_labels();
        for (std::size_t i = 0; i < train_pred.size(); ++i) {
            if (train_pred[i] == train_truth[i]) ++hits;
        }
        train_accuracy = static_cast<double>(hits) /
                         static_cast<double>(train_pred.size());
        model_io::save_svm(model, out / "model.txt");
    } else if (args.model == "mlp") {
        mlp::MlpConfig cfg;
        cfg.hidden_layers = args.hidden_layers;
        cfg.hidden_units = args.hidden_units;
        cfg.output_dim = kTerrainCount;
        cfg.epochs = args.epochs;
        cfg.batch_size = args.batch_size;
        cfg.learning_rate = args.learning_rate;
        cfg.momentum = args.momentum;
        cfg.input_dropout = args.input_dropout;
        cfg.hidden_dropout = args.hidden_dropout;
        cfg.seed = global.seed;

        const auto t1 = std::chrono::steady_clock::now();
        const mlp::TrainResult trained = mlp::train(train_set, test_set, cfg);
        phases.push_back({"train", seconds_since(t1)});

        report::write_text_file(out / "curves.csv",
                                report::render_curves_csv(trained.curves));
        report::write_text_file(out / "curves.svg",
                                report::render_curves_svg(trained.curves));

        const auto t2 = std::chrono::steady_clock::now();
        test_pred = trained.model.predict(test_set.features);
        const double infer = seconds_since(t2);
        phases.push_back({"inference_total", infer});
        phases.push_back(
            {"inference_per_sample", infer / static_cast<double>(test_set.size())});

        train_accuracy = trained.curves.back().train_accuracy;
        model_io::save_mlp(trained.model, out / "model.txt");
    } else {
        throw ConfigError("unknown model '" + args.model + "'");
    }

    const ConfusionMatrix confusion = confusion_matrix(test_pred, test_truth);
    report::write_text_file(out / "confusion_test.csv",
                            report::render_confusion_csv(confusion));
    report::write_text_file(out / "confusion_test.txt",
                            report::render_confusion_text(confusion));
    report::write_text_file(out / "metrics.csv",
                            metrics_csv(train_accuracy, confusion.accuracy));
    report::write_text_file(out / "timings.csv", report::render_timings_csv(phases));
    std::cout << "test accuracy "
              << report::format_percent(100.0 * confusion.accuracy) << "% ("
              << test_truth.size() << " samples); outputs in " << args.out_dir
              << "\n";
    return 0;
}

// ------------------------------------------------------------- evaluate ---

struct EvaluateArgs {
    std::string model_file;
    std::string samples_file;
    std::string out_dir;
    std::string variant = "all";
};

int cmd_evaluate(const EvaluateArgs& args) {
    const SampleSet samples = apply_variant(read_samples_csv(args.samples_file),
                                            args.variant);
    if (samples.size() == 0) throw DataError("no samples to evaluate");

    std::vector<Terrain> pred;
    const auto t0 = std::chrono::steady_clock::now();
    if (model_io::peek_type(args.model_file) == model_io::ModelType::Svm) {
        const svm::SvmModel model = model_io::load_svm(args.model_file);
        pred = model.predict(samples.features);
    } else {
        const mlp::MlpModel model = model_io::load_mlp(args.model_file);
        pred = model.predict(samples.features);
    }
    const double infer = seconds_since(t0);

    ensure_out_dir(args.out_dir);
    const fs::path out(args.out_dir);

    std::string pred_csv = "t_start,predicted\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        pred_csv += csv::format_double(samples.window_starts[i]);
        pred_csv += ',';
        pred_csv += terrain_name(pred[i]);
        pred_csv += '\n';
    }
    report::write_text_file(out / "predictions.csv", pred_csv);

    std::vector<report::TimedPhase> phases = {
        {"inference_total", infer},
        {"inference_per_sample", infer / static_cast<double>(samples.size())}};
    report::write_text_file(out / "timings.csv", report::render_timings_csv(phases));

    // Score only the labeled rows; a fully unlabeled set still yields
    // predictions.
    std::vector<Terrain> truth;
    std::vector<Terrain> scored_pred;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples.labels[i]) {
            truth.push_back(*samples.labels[i]);
            scored_pred.push_back(pred[i]);
        }
    }
    if (!truth.empty()) {
        const ConfusionMatrix confusion = confusion_matrix(scored_pred, truth);
        report::write_text_file(out / "confusion_eval.csv",
                                report::render_confusion_csv(confusion));
        report::write_text_file(out / "confusion_eval.txt",
                                report::render_confusion_text(confusion));
        std::cout << "accuracy " << report::format_percent(100.0 * confusion.accuracy)
                  << "% on " << truth.size() << " labeled samples; outputs in "
                  << args.out_dir << "\n";
    } else {
        std::cout << "no labels; wrote predictions for " << samples.size()
                  << " samples to " << args.out_dir << "\n";
    }
    return 0;
}

// -------------------------------------------------------------- drawbar ---

struct DrawbarArgs {
    std::string data_dir;
    std::string out_dir;
    std::vector<double> tolerances_cm = {5.0, 2.0, 1.0};
    double force_eps = drawbar::kForceEpsilon;
    double wheel_diameter = 0.15;
    double sensor_to_axle = 0.10;
    double min_duration = 5.0;
    double max_std = 0.01;
};

int cmd_drawbar(const DrawbarArgs& args) {
    if (args.tolerances_cm.empty()) throw ConfigError("no tolerances given");
    const auto streams = load_streams(args.data_dir, true, false);

    std::vector<drawbar::LeverSeries> series;
    series.reserve(streams.size());
    for (const TelemetryStream& stream : streams) {
        series.push_back(drawbar::build_lever_series(stream, args.force_eps));
    }

    drawbar::WheelGeometry geometry;
    geometry.wheel_diameter = args.wheel_diameter;
    geometry.sensor_to_axle = args.sensor_to_axle;

    std::vector<double> tolerances;
    for (double cm : args.tolerances_cm) {
        if (cm < 0.0) throw ConfigError("tolerances must be >= 0");
        tolerances.push_back(cm / 100.0);
    }

    ensure_out_dir(args.out_dir);
    const fs::path out(args.out_dir);
    const auto reports = drawbar::retention_reports(series, geometry, tolerances);
    report::write_text_file(out / "retention.csv",
                            report::render_retention_csv(reports));

    // Lever series, scatter splits, stable intervals and force estimates at
    // the first (widest-interest) tolerance.
    drawbar::StableParams stable;
    stable.min_duration = args.min_duration;
    stable.max_std = args.max_std;

    std::string intervals_csv = "wheel,t_start,t_end,points,mean_fx,std_fx\n";
    for (drawbar::LeverSeries& s : series) {
        drawbar::filter_by_lever(s, geometry, tolerances.front());
        const std::string wheel(position_name(s.wheel));
        report::write_text_file(out / ("lever_" + wheel + ".csv"),
                                report::render_lever_csv(s));

        std::string valid_csv = "t,lever\n";
        std::string invalid_csv = "t,lever\n";
        for (const auto& p : s.points) {
            if (!p.lever) continue;
            std::string& target = p.valid ? valid_csv : invalid_csv;
            target += csv::format_double(p.t);
            target += ',';
            target += csv::format_double(*p.lever);
            target += '\n';
        }
        report::write_text_file(out / ("scatter_valid_" + wheel + ".csv"), valid_csv);
        report::write_text_file(out / ("scatter_invalid_" + wheel + ".csv"),
                                invalid_csv);

        const auto intervals = drawbar::detect_stable_intervals(s, stable);
        const auto estimates = drawbar::drawbar_estimates(s, intervals);
        if (estimates.size() < intervals.size()) {
            std::cerr << "warning: " << wheel << ": "
                      << intervals.size() - estimates.size()
                      << " stable interval(s) had no valid points and were "
                         "skipped\n";
        }
        for (const auto& est : estimates) {
            intervals_csv += wheel;
            intervals_csv += ',' + csv::format_double(est.interval.t_start);
            intervals_csv += ',' + csv::format_double(est.interval.t_end);
            intervals_csv += ',' + std::to_string(est.count);
            intervals_csv += ',' + csv::format_double(est.mean_fx);
            intervals_csv += ',' + csv::format_double(est.std_fx);
            intervals_csv += '\n';
        }
    }
    report::write_text_file(out / "stable_intervals.csv", intervals_csv);
    std::cout << "wrote retention for " << tolerances.size() << " tolerance(s) and "
              << series.size() << " wheel(s) to " << args.out_dir << "\n";
    return 0;
}

// --------------------------------------------------------------- report ---

struct ReportArgs {
    std::string confusion_in;
    std::string curves_in;
    std::string out_dir;
    std::string name = "confusion";
};

std::vector<mlp::EpochStats> parse_curves_csv(const std::string& text) {
    std::vector<mlp::EpochStats> curves;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        const std::string_view line(text.data() + pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "epoch,train_loss,train_acc,test_loss,test_acc") {
                throw ParseError("curves csv: bad header");
            }
            continue;
        }
        const auto fields = csv::split(line);
        if (fields.size() != 5) {
            throw ParseError("curves csv: line " + std::to_string(line_no) +
                             " has " + std::to_string(fields.size()) + " fields");
        }
        mlp::EpochStats e;
        e.epoch = static_cast<std::size_t>(
            csv::parse_double(fields[0], "curves csv epoch"));
        e.train_loss = csv::parse_double(fields[1], "curves csv loss");
        e.train_accuracy = csv::parse_double(fields[2], "curves csv accuracy");
        e.eval_loss = csv::parse_double(fields[3], "curves csv loss");
        e.eval_accuracy = csv::parse_double(fields[4], "curves csv accuracy");
        curves.push_back(e);
    }
    return curves;
}

int cmd_report(const ReportArgs& args) {
    if (args.confusion_in.empty() && args.curves_in.empty()) {
        throw ConfigError("report: nothing to do, give --confusion or --curves");
    }
    ensure_out_dir(args.out_dir);
    const fs::path out(args.out_dir);
    if (!args.confusion_in.empty()) {
        const ConfusionMatrix m =
            report::parse_confusion_csv(report::read_text_file(args.confusion_in));
        report::write_text_file(out / (args.name + ".csv"),
                                report::render_confusion_csv(m));
        report::write_text_file(out / (args.name + ".txt"),
                                report::render_confusion_text(m));
    }
    if (!args.curves_in.empty()) {
        const auto curves = parse_curves_csv(report::read_text_file(args.curves_in));
        report::write_text_file(out / "curves.svg",
                                report::render_curves_svg(curves));
    }
    std::cout << "wrote report files to " << args.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Proprioceptive terrain analysis: windowed features, terrain "
                 "classification, lever-arm filtering"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file");

    GlobalOptions global;
    app.add_option("--seed", global.seed, "Seed for every random draw")
        ->capture_default_str();
    app.add_option("--jobs", global.jobs, "Worker thread cap")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();

    SynthArgs synth_args;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate a deterministic synthetic scenario");
    synth_cmd->add_option("--out", synth_args.out_dir, "Output directory")
        ->required();
    synth_cmd->add_option("--terrains", synth_args.terrains,
                          "Segment terrain sequence")
        ->delimiter(',')
        ->capture_default_str();
    synth_cmd->add_option("--duration", synth_args.duration,
                          "Seconds per segment")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--fts-rate", synth_args.fts_rate, "FTS sample rate, Hz")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--imu-rate", synth_args.imu_rate, "IMU sample rate, Hz")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--speed-min", synth_args.speed_min,
                          "Commanded speed lower bound, m/s")
        ->capture_default_str();
    synth_cmd->add_option("--speed-max", synth_args.speed_max,
                          "Commanded speed upper bound, m/s")
        ->capture_default_str();
    synth_cmd->add_option("--lever", synth_args.lever,
                          "Embedded true lever arm, m")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_flag("--noiseless-lever", synth_args.noiseless_lever,
                        "Disable ty noise so the lever arm is exact");

    ExtractArgs extract_args;
    CLI::App* extract_cmd = app.add_subcommand(
        "extract", "Window telemetry into statistical feature samples");
    extract_cmd->add_option("--data", extract_args.data_dir,
                            "Directory with fts_fl.csv..fts_br.csv and imu.csv")
        ->required();
    extract_cmd->add_option("--labels", extract_args.labels_file,
                            "Terrain label intervals CSV");
    extract_cmd->add_option("--out", extract_args.out_file, "Samples CSV path")
        ->required();
    extract_cmd
        ->add_option("--variant", extract_args.variant,
                     "Feature family: imu, fts or all")
        ->check(CLI::IsMember({"imu", "fts", "all"}))
        ->capture_default_str();
    extract_cmd->add_flag("--no-derived", extract_args.no_derived,
                          "Drop the fx/tz ratio channel");
    extract_cmd->add_option("--window", extract_args.window, "Window length, s")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    extract_cmd->add_option("--stride", extract_args.stride, "Window stride, s")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    TrainArgs train_args;
    CLI::App* train_cmd =
        app.add_subcommand("train", "Train a terrain classifier on samples");
    train_cmd->add_option("--samples", train_args.samples_file, "Samples CSV")
        ->required();
    train_cmd->add_option("--out", train_args.out_dir, "Output directory")
        ->required();
    train_cmd->add_option("--model", train_args.model, "Classifier: svm or mlp")
        ->check(CLI::IsMember({"svm", "mlp"}))
        ->capture_default_str();
    train_cmd
        ->add_option("--variant", train_args.variant,
                     "Feature family: imu, fts or all")
        ->check(CLI::IsMember({"imu", "fts", "all"}))
        ->capture_default_str();
    train_cmd
        ->add_option("--test-fraction", train_args.test_fraction,
                     "Held-out fraction of each class")
        ->check(CLI::Range(0.01, 0.99))
        ->capture_default_str();
    train_cmd->add_option("--reduction", train_args.reduction,
                          "Multiclass reduction: ovr or ovo (svm)")
        ->check(CLI::IsMember({"ovr", "ovo"}))
        ->capture_default_str();
    train_cmd->add_flag("--no-grid", train_args.no_grid,
                        "Skip the grid search and use --kernel/--c/--gamma");
    train_cmd->add_option("--kernel", train_args.kernel,
                          "Kernel with --no-grid: linear, rbf, poly, sigmoid")
        ->check(CLI::IsMember({"linear", "rbf", "poly", "sigmoid"}))
        ->capture_default_str();
    train_cmd->add_option("--c", train_args.c, "Soft-margin C with --no-grid")
        ->capture_default_str();
    train_cmd->add_option("--gamma", train_args.gamma, "Kernel gamma with --no-grid")
        ->capture_default_str();
    train_cmd->add_option("--degree", train_args.degree, "Poly kernel degree")
        ->capture_default_str();
    train_cmd->add_option("--coef0", train_args.coef0, "Poly/sigmoid coef0")
        ->capture_default_str();
    train_cmd->add_option("--hidden-layers", train_args.hidden_layers,
                          "Hidden layer count (mlp)")
        ->capture_default_str();
    train_cmd->add_option("--hidden-units", train_args.hidden_units,
                          "Units per hidden layer (mlp)")
        ->capture_default_str();
    train_cmd->add_option("--epochs", train_args.epochs, "Training epochs (mlp)")
        ->capture_default_str();
    train_cmd->add_option("--batch-size", train_args.batch_size,
                          "Minibatch size (mlp)")
        ->capture_default_str();
    train_cmd->add_option("--learning-rate", train_args.learning_rate,
                          "SGD learning rate (mlp)")
        ->capture_default_str();
    train_cmd->add_option("--momentum", train_args.momentum,
                          "SGD momentum (mlp)")
        ->capture_default_str();
    train_cmd->add_option("--input-dropout", train_args.input_dropout,
                          "Dropout rate on the input (mlp)")
        ->capture_default_str();
    train_cmd->add_option("--hidden-dropout", train_args.hidden_dropout,
                          "Dropout rate between hidden layers (mlp)")
        ->capture_default_str();

    EvaluateArgs evaluate_args;
    CLI::App* evaluate_cmd = app.add_subcommand(
        "evaluate", "Apply a saved model to samples and score it");
    evaluate_cmd->add_option("--model", evaluate_args.model_file, "Model file")
        ->required();
    evaluate_cmd->add_option("--samples", evaluate_args.samples_file, "Samples CSV")
        ->required();
    evaluate_cmd->add_option("--out", evaluate_args.out_dir, "Output directory")
        ->required();
    evaluate_cmd
        ->add_option("--variant", evaluate_args.variant,
                     "Feature family: imu, fts or all")
        ->check(CLI::IsMember({"imu", "fts", "all"}))
        ->capture_default_str();

    DrawbarArgs drawbar_args;
    CLI::App* drawbar_cmd = app.add_subcommand(
        "drawbar", "Lever-arm filtering, retention and stable intervals");
    drawbar_cmd->add_option("--data", drawbar_args.data_dir,
                            "Directory with fts_fl.csv..fts_br.csv")
        ->required();
    drawbar_cmd->add_option("--out", drawbar_args.out_dir, "Output directory")
        ->required();
    drawbar_cmd
        ->add_option("--tolerances", drawbar_args.tolerances_cm,
                     "Band tolerances in cm")
        ->delimiter(',')
        ->capture_default_str();
    drawbar_cmd->add_option("--force-eps", drawbar_args.force_eps,
                            "Minimum |fx| for a defined lever, N")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    drawbar_cmd->add_option("--wheel-diameter", drawbar_args.wheel_diameter,
                            "Wheel diameter, m")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    drawbar_cmd->add_option("--sensor-to-axle", drawbar_args.sensor_to_axle,
                            "Sensor to axle distance, m")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    drawbar_cmd->add_option("--min-duration", drawbar_args.min_duration,
                            "Minimum stable interval length, s")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    drawbar_cmd->add_option("--max-std", drawbar_args.max_std,
                            "Maximum lever std inside a stable interval, m")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    ReportArgs report_args;
    CLI::App* report_cmd = app.add_subcommand(
        "report", "Re-render confusion matrices and learning curves");
    report_cmd->add_option("--confusion", report_args.confusion_in,
                           "Confusion CSV to re-render");
    report_cmd->add_option("--curves", report_args.curves_in,
                           "Curves CSV to chart");
    report_cmd->add_option("--out", report_args.out_dir, "Output directory")
        ->required();
    report_cmd->add_option("--name", report_args.name,
                           "Base name for confusion outputs")
        ->capture_default_str();

    // Let --seed / --jobs appear after the subcommand name too.
    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(synth_args, global);
        if (extract_cmd->parsed()) return cmd_extract(extract_args);
        if (train_cmd->parsed()) return cmd_train(train_args, global);
        if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate_args);
        if (drawbar_cmd->parsed()) return cmd_drawbar(drawbar_args);
        if (report_cmd->parsed()) return cmd_report(report_args);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
