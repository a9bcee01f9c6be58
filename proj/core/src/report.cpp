#include "fts/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "fts/csv.hpp"
#include "fts/errors.hpp"

namespace fts::report {

namespace {

constexpr std::string_view kConfusionHeader = "actual,loose,compressed,pebbles,rock";

std::vector<std::string_view> non_empty_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        pos = nl + 1;
    }
    return lines;
}

}  // namespace

std::string format_percent(double v) {
    const double scaled = std::round(v * 100.0) / 100.0;
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), scaled, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::string render_confusion_text(const ConfusionMatrix& m) {
    std::ostringstream out;
    out << std::left << std::setw(12) << "actual";
    for (Terrain t : kAllTerrains) {
        out << std::right << std::setw(12) << terrain_name(t);
    }
    out << '\n';
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        out << std::left << std::setw(12) << terrain_name(kAllTerrains[r]);
        for (double cell : m.rows[r]) {
            out << std::right << std::setw(12) << format_percent(cell);
        }
        out << '\n';
    }
    return out.str();
}

std::string render_confusion_csv(const ConfusionMatrix& m) {
    std::string out{kConfusionHeader};
    out += '\n';
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        out += terrain_name(kAllTerrains[r]);
        for (double cell : m.rows[r]) {
            out += ',';
            out += format_percent(cell);
        }
        out += '\n';
    }
    return out;
}

ConfusionMatrix parse_confusion_csv(std::string_view text) {
    const auto lines = non_empty_lines(text);
    if (lines.empty() || lines[0] != kConfusionHeader) {
        throw ParseError("confusion csv: bad or missing header");
    }
    if (lines.size() != 1 + kTerrainCount) {
        throw ParseError("confusion csv: expected " +
                         std::to_string(kTerrainCount) + " data rows, got " +
                         std::to_string(lines.size() - 1));
    }
    ConfusionMatrix m;
    m.rows.assign(kTerrainCount, std::vector<double>(kTerrainCount, 0.0));
    m.row_counts.assign(kTerrainCount, 0);
    for (std::size_t r = 0; r < kTerrainCount; ++r) {
        const auto fields = csv::split(lines[1 + r]);
        if (fields.size() != 1 + kTerrainCount) {
            throw ParseError("confusion csv: row " + std::to_string(r + 1) +
                             " has " + std::to_string(fields.size()) + " fields");
        }
        if (fields[0] != terrain_name(kAllTerrains[r])) {
            throw ParseError("confusion csv: row " + std::to_string(r + 1) +
                             " is labeled '" + std::string(fields[0]) +
                             "', expected '" +
                             std::string(terrain_name(kAllTerrains[r])) + "'");
        }
        for (std::size_t c = 0; c < kTerrainCount; ++c) {
            m.rows[r][c] = csv::parse_double(
                fields[1 + c], "confusion csv row " + std::to_string(r + 1));
        }
    }
    return m;
}

std::string render_retention_csv(std::span<const drawbar::RetentionReport> reports) {
    std::string out =
        "# percent of samples kept; the denominator counts every sample of "
        "the wheel, including ones without a defined lever estimate\n";
    out += "tolerance_cm,FL,FR,CL,CR,BL,BR,total\n";
    for (const auto& report : reports) {
        out += csv::format_double(report.tolerance * 100.0);
        for (SensorPosition wheel : kWheelPositions) {
            out += ',';
            for (const auto& row : report.wheels) {
                if (row.wheel == wheel) {
                    out += csv::format_double(row.percent);
                    break;
                }
            }
        }
        out += ',';
        out += csv::format_double(report.pooled.percent);
        out += '\n';
    }
    return out;
}

std::string render_lever_csv(const drawbar::LeverSeries& series) {
    std::string out = "t,fx,ty,lever,valid\n";
    for (const auto& p : series.points) {
        out += csv::format_double(p.t);
        out += ',';
        out += csv::format_double(p.fx);
        out += ',';
        out += csv::format_double(p.ty);
        out += ',';
        if (p.lever) out += csv::format_double(*p.lever);
        out += ',';
        out += p.valid ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string render_grid_csv(std::span<const svm::GridRow> rows) {
    std::string out = "kernel,c,gamma,train_accuracy,test_accuracy\n";
    for (const auto& r : rows) {
        out += svm::kernel_name(r.kernel);
        out += ',';
        out += csv::format_double(r.c);
        out += ',';
        out += csv::format_double(r.gamma);
        out += ',';
        out += csv::format_double(r.train_accuracy);
        out += ',';
        out += csv::format_double(r.test_accuracy);
        out += '\n';
    }
    return out;
}

std::string render_curves_csv(std::span<const mlp::EpochStats> curves) {
    std::string out = "epoch,train_loss,train_acc,test_loss,test_acc\n";
    for (const auto& e : curves) {
        out += std::to_string(e.epoch);
        out += ',';
        out += csv::format_double(e.train_loss);
        out += ',';
        out += csv::format_double(e.train_accuracy);
        out += ',';
        out += csv::format_double(e.eval_loss);
        out += ',';
        out += csv::format_double(e.eval_accuracy);
        out += '\n';
    }
    return out;
}

std::string render_timings_csv(std::span<const TimedPhase> phases) {
    std::string out = "phase,seconds\n";
    for (const auto& p : phases) {
        out += p.phase;
        out += ',';
        out += csv::format_double(p.seconds);
        out += '\n';
    }
    return out;
}

std::string render_curves_svg(std::span<const mlp::EpochStats> curves) {
    if (curves.empty()) throw DataError("curves svg: no epochs to plot");

    constexpr double kWidth = 640.0;
    constexpr double kHeight = 360.0;
    constexpr double kMargin = 50.0;
    const double plot_w = kWidth - 2 * kMargin;
    const double plot_h = kHeight - 2 * kMargin;
    const double n = static_cast<double>(curves.size());

    auto x_of = [&](std::size_t i) {
        return curves.size() == 1
                   ? kMargin + plot_w / 2
                   : kMargin + plot_w * static_cast<double>(i) / (n - 1.0);
    };
    auto y_of = [&](double accuracy) {
        return kMargin + plot_h * (1.0 - accuracy);  // accuracy in [0, 1]
    };
    auto polyline = [&](auto value, std::string_view color) {
        std::string pts;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            if (!pts.empty()) pts += ' ';
            pts += csv::format_double(x_of(i));
            pts += ',';
            pts += csv::format_double(y_of(value(curves[i])));
        }
        return "  <polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    };

    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\" "
        "viewBox=\"0 0 640 360\">\n"
        "  <rect width=\"640\" height=\"360\" fill=\"white\"/>\n"
        "  <line x1=\"50\" y1=\"310\" x2=\"590\" y2=\"310\" stroke=\"black\"/>\n"
        "  <line x1=\"50\" y1=\"50\" x2=\"50\" y2=\"310\" stroke=\"black\"/>\n"
        "  <text x=\"320\" y=\"340\" font-size=\"12\" text-anchor=\"middle\">"
        "epoch</text>\n"
        "  <text x=\"20\" y=\"180\" font-size=\"12\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 20 180)\">accuracy</text>\n";
    svg += polyline([](const mlp::EpochStats& e) { return e.train_accuracy; },
                    "#1f77b4");
    svg += polyline([](const mlp::EpochStats& e) { return e.eval_accuracy; },
                    "#d62728");
    svg +=
        "  <text x=\"500\" y=\"60\" font-size=\"12\" fill=\"#1f77b4\">train</text>\n"
        "  <text x=\"500\" y=\"76\" font-size=\"12\" fill=\"#d62728\">eval</text>\n"
        "</svg>\n";
    return svg;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path.string());
    out << text;
    if (!out) throw DataError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace fts::report
