#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "fts/drawbar.hpp"
#include "fts/eval.hpp"
#include "fts/mlp.hpp"
#include "fts/svm.hpp"

namespace fts::report {

/// Fixed two-decimal formatting. The value is first rounded half away from
/// zero on the hundredths scale, so 0.125 renders as "0.13".
std::string format_percent(double v);

/// Aligned text table of row-normalized percentages. Formatting only; the
/// numbers are rendered as given.
std::string render_confusion_text(const ConfusionMatrix& m);

/// CSV form, header `actual,loose,compressed,pebbles,rock`, one row per
/// terrain in canonical order, cells at two decimals.
std::string render_confusion_csv(const ConfusionMatrix& m);

/// Parse the CSV form back. Row counts and accuracy are not part of the
/// CSV and come back zeroed. render(parse(render(x))) == render(x).
ConfusionMatrix parse_confusion_csv(std::string_view text);

/// One row per tolerance: `tolerance_cm,FL,FR,CL,CR,BL,BR,total`, percents
/// at full precision, absent wheels left empty. A comment line states the
/// denominator policy.
std::string render_retention_csv(std::span<const drawbar::RetentionReport> reports);

/// `t,fx,ty,lever,valid` per point; the lever cell is empty when the
/// estimate is undefined.
std::string render_lever_csv(const drawbar::LeverSeries& series);

/// `kernel,c,gamma,train_accuracy,test_accuracy`. Wall-clock seconds stay
/// out of this table so reruns of the same seed are byte-identical; they
/// are reported through render_timings_csv instead.
std::string render_grid_csv(std::span<const svm::GridRow> rows);

/// `epoch,train_loss,train_acc,test_loss,test_acc`.
std::string render_curves_csv(std::span<const mlp::EpochStats> curves);

/// `phase,seconds`, one row per measured phase.
struct TimedPhase {
    std::string phase;
    double seconds = 0.0;
};
std::string render_timings_csv(std::span<const TimedPhase> phases);

/// Minimal line chart of the accuracy curves, one polyline per series.
std::string render_curves_svg(std::span<const mlp::EpochStats> curves);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace fts::report
