#include "fts/model_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fts/csv.hpp"
#include "fts/errors.hpp"

namespace fts::model_io {

namespace {

constexpr std::string_view kMagic = "ftsmodel";
constexpr std::string_view kVersion = "v1";

class TokenReader {
public:
    TokenReader(const std::filesystem::path& path) : path_(path), in_(path) {
        if (!in_) throw DataError("cannot open file: " + path.string());
    }

    std::string next(std::string_view what) {
        std::string token;
        if (!(in_ >> token)) {
            throw ParseError(path_.string() + ": unexpected end of file, expected " +
                             std::string(what));
        }
        return token;
    }

    void expect(std::string_view keyword) {
        const std::string token = next(keyword);
        if (token != keyword) {
            throw ParseError(path_.string() + ": expected '" + std::string(keyword) +
                             "', found '" + token + "'");
        }
    }

    double number(std::string_view what) {
        return csv::parse_double(next(what), path_.string() + ": " + std::string(what));
    }

    std::size_t count(std::string_view what) {
        const std::string token = next(what);
        std::size_t value = 0;
        std::size_t used = 0;
        try {
            value = std::stoul(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) {
            throw ParseError(path_.string() + ": bad count for " + std::string(what) +
                             ": '" + token + "'");
        }
        return value;
    }

    long integer(std::string_view what) {
        const std::string token = next(what);
        long value = 0;
        std::size_t used = 0;
        try {
            value = std::stol(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) {
            throw ParseError(path_.string() + ": bad integer for " + std::string(what) +
                             ": '" + token + "'");
        }
        return value;
    }

    void expect_done() {
        std::string token;
        if (in_ >> token) {
            throw ParseError(path_.string() + ": trailing content after model: '" +
                             token + "'");
        }
    }

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ifstream in_;
};

void append_numbers(std::string& out, std::span<const double> values) {
    for (double v : values) {
        out += ' ';
        out += csv::format_double(v);
    }
    out += '\n';
}

void write_header(std::string& out, std::string_view type) {
    out += kMagic;
    out += ' ';
    out += kVersion;
    out += '\n';
    out += "type ";
    out += type;
    out += '\n';
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path.string());
    out << text;
    if (!out) throw DataError("write failed: " + path.string());
}

void read_header(TokenReader& reader, std::string_view type) {
    reader.expect(kMagic);
    reader.expect(kVersion);
    reader.expect("type");
    const std::string found = reader.next("model type");
    if (found != type) {
        throw ParseError(reader.path().string() + ": model type is '" + found +
                         "', expected '" + std::string(type) + "'");
    }
}

void write_scaler(std::string& out, const Scaler& scaler) {
    out += "scaler " + std::to_string(scaler.dim()) + '\n';
    out += "means";
    append_numbers(out, scaler.means());
    out += "scales";
    append_numbers(out, scaler.scales());
}

Scaler read_scaler(TokenReader& reader) {
    reader.expect("scaler");
    const std::size_t dim = reader.count("scaler dimension");
    std::vector<double> means(dim);
    std::vector<double> scales(dim);
    reader.expect("means");
    for (auto& v : means) v = reader.number("scaler mean");
    reader.expect("scales");
    for (auto& v : scales) v = reader.number("scaler scale");
    return Scaler::from_parameters(std::move(means), std::move(scales));
}

void write_classes(std::string& out, std::span<const Terrain> classes) {
    out += "classes " + std::to_string(classes.size());
    for (Terrain t : classes) {
        out += ' ';
        out += terrain_name(t);
    }
    out += '\n';
}

std::vector<Terrain> read_classes(TokenReader& reader) {
    reader.expect("classes");
    const std::size_t n = reader.count("class count");
    if (n < 2 || n > kTerrainCount) {
        throw ParseError(reader.path().string() + ": class count " +
                         std::to_string(n) + " out of range");
    }
    std::vector<Terrain> classes;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string name = reader.next("class name");
        const auto t = terrain_from_name(name);
        if (!t) {
            throw ParseError(reader.path().string() + ": unknown class '" + name + "'");
        }
        classes.push_back(*t);
    }
    return classes;
}

}  // namespace

void save_svm(const svm::SvmModel& model, const std::filesystem::path& path) {
    std::string out;
    write_header(out, "svm");
    out += "reduction ";
    out += model.reduction == svm::Reduction::OneVsRest ? "ovr" : "ovo";
    out += '\n';
    out += "kernel ";
    out += svm::kernel_name(model.kernel.kind);
    out += "\ngamma " + csv::format_double(model.kernel.gamma);
    out += "\ndegree " + std::to_string(model.kernel.degree);
    out += "\ncoef0 " + csv::format_double(model.kernel.coef0) + '\n';
    write_classes(out, model.classes);
    write_scaler(out, model.scaler);
    out += "machines " + std::to_string(model.machines.size()) + '\n';
    for (std::size_t m = 0; m < model.machines.size(); ++m) {
        const svm::BinarySvm& machine = model.machines[m];
        out += "machine " + std::to_string(m) + '\n';
        out += "positive " + std::to_string(machine.positive_class) + '\n';
        out += "negative " + std::to_string(machine.negative_class) + '\n';
        out += "bias " + csv::format_double(machine.bias) + '\n';
        out += "converged ";
        out += machine.converged ? '1' : '0';
        out += '\n';
        out += "support " + std::to_string(machine.support_vectors.rows()) + ' ' +
               std::to_string(machine.support_vectors.cols()) + '\n';
        out += "coeff";
        append_numbers(out, machine.coefficients);
        for (std::size_t r = 0; r < machine.support_vectors.rows(); ++r) {
            out += "sv";
            append_numbers(out, machine.support_vectors.row(r));
        }
    }
    write_file(path, out);
}

svm::SvmModel load_svm(const std::filesystem::path& path) {
    TokenReader reader(path);
    read_header(reader, "svm");

    svm::SvmModel model;
    reader.expect("reduction");
    const std::string reduction = reader.next("reduction");
    if (reduction == "ovr") {
        model.reduction = svm::Reduction::OneVsRest;
    } else if (reduction == "ovo") {
        model.reduction = svm::Reduction::OneVsOne;
    } else {
        throw ParseError(path.string() + ": unknown reduction '" + reduction + "'");
    }
    reader.expect("kernel");
    const std::string kernel = reader.next("kernel name");
    const auto kind = svm::kernel_from_name(kernel);
    if (!kind) throw ParseError(path.string() + ": unknown kernel '" + kernel + "'");
    model.kernel.kind = *kind;
    reader.expect("gamma");
    model.kernel.gamma = reader.number("gamma");
    reader.expect("degree");
    model.kernel.degree = static_cast<int>(reader.integer("degree"));
    reader.expect("coef0");
    model.kernel.coef0 = reader.number("coef0");
    model.classes = read_classes(reader);
    model.scaler = read_scaler(reader);

    reader.expect("machines");
    const std::size_t machine_count = reader.count("machine count");
    for (std::size_t m = 0; m < machine_count; ++m) {
        reader.expect("machine");
        const std::size_t index = reader.count("machine index");
        if (index != m) {
            throw ParseError(path.string() + ": machine " + std::to_string(m) +
                             " has index " + std::to_string(index));
        }
        svm::BinarySvm machine;
        reader.expect("positive");
        machine.positive_class = static_cast<int>(reader.integer("positive class"));
        reader.expect("negative");
        machine.negative_class = static_cast<int>(reader.integer("negative class"));
        reader.expect("bias");
        machine.bias = reader.number("bias");
        reader.expect("converged");
        machine.converged = reader.integer("converged flag") != 0;
        reader.expect("support");
        const std::size_t rows = reader.count("support vector count");
        const std::size_t cols = reader.count("support vector dimension");
        if (cols != model.scaler.dim()) {
            throw ParseError(path.string() + ": support vector dimension " +
                             std::to_string(cols) + " does not match scaler " +
                             std::to_string(model.scaler.dim()));
        }
        reader.expect("coeff");
        machine.coefficients.resize(rows);
        for (auto& v : machine.coefficients) v = reader.number("coefficient");
        machine.support_vectors = Matrix(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            reader.expect("sv");
            auto row = machine.support_vectors.row(r);
            for (auto& v : row) v = reader.number("support vector value");
        }
        model.machines.push_back(std::move(machine));
    }
    reader.expect_done();
    return model;
}

void save_mlp(const mlp::MlpModel& model, const std::filesystem::path& path) {
    std::string out;
    write_header(out, "mlp");
    const mlp::MlpConfig& cfg = model.config;
    out += "input " + std::to_string(cfg.input_dim) + '\n';
    out += "hidden_layers " + std::to_string(cfg.hidden_layers) + '\n';
    out += "hidden_units " + std::to_string(cfg.hidden_units) + '\n';
    out += "output " + std::to_string(cfg.output_dim) + '\n';
    out += "input_dropout " + csv::format_double(cfg.input_dropout) + '\n';
    out += "hidden_dropout " + csv::format_double(cfg.hidden_dropout) + '\n';
    out += "batch_size " + std::to_string(cfg.batch_size) + '\n';
    out += "epochs " + std::to_string(cfg.epochs) + '\n';
    out += "learning_rate " + csv::format_double(cfg.learning_rate) + '\n';
    out += "momentum " + csv::format_double(cfg.momentum) + '\n';
    out += "seed " + std::to_string(cfg.seed) + '\n';
    write_classes(out, model.classes);
    write_scaler(out, model.scaler);
    out += "layers " + std::to_string(model.layers.size()) + '\n';
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const mlp::Layer& layer = model.layers[l];
        out += "layer " + std::to_string(l) + ' ' +
               std::to_string(layer.weights.rows()) + ' ' +
               std::to_string(layer.weights.cols()) + '\n';
        for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
            out += "w";
            append_numbers(out, layer.weights.row(r));
        }
        out += "b";
        append_numbers(out, layer.bias);
    }
    write_file(path, out);
}

mlp::MlpModel load_mlp(const std::filesystem::path& path) {
    TokenReader reader(path);
    read_header(reader, "mlp");

    mlp::MlpModel model;
    mlp::MlpConfig& cfg = model.config;
    reader.expect("input");
    cfg.input_dim = reader.count("input dimension");
    reader.expect("hidden_layers");
    cfg.hidden_layers = reader.count("hidden layer count");
    reader.expect("hidden_units");
    cfg.hidden_units = reader.count("hidden unit count");
    reader.expect("output");
    cfg.output_dim = reader.count("output dimension");
    reader.expect("input_dropout");
    cfg.input_dropout = reader.number("input dropout");
    reader.expect("hidden_dropout");
    cfg.hidden_dropout = reader.number("hidden dropout");
    reader.expect("batch_size");
    cfg.batch_size = reader.count("batch size");
    reader.expect("epochs");
    cfg.epochs = reader.count("epochs");
    reader.expect("learning_rate");
    cfg.learning_rate = reader.number("learning rate");
    reader.expect("momentum");
    cfg.momentum = reader.number("momentum");
    reader.expect("seed");
    cfg.seed = reader.count("seed");
    model.classes = read_classes(reader);
    model.scaler = read_scaler(reader);
    if (model.classes.size() != cfg.output_dim) {
        throw ParseError(path.string() + ": class count does not match output size");
    }

    reader.expect("layers");
    const std::size_t layer_count = reader.count("layer count");
    if (layer_count != cfg.hidden_layers + 1) {
        throw ParseError(path.string() + ": layer count " +
                         std::to_string(layer_count) + " does not match " +
                         std::to_string(cfg.hidden_layers) + " hidden layers");
    }
    std::size_t expect_in = cfg.input_dim;
    for (std::size_t l = 0; l < layer_count; ++l) {
        reader.expect("layer");
        const std::size_t index = reader.count("layer index");
        if (index != l) {
            throw ParseError(path.string() + ": layer " + std::to_string(l) +
                             " has index " + std::to_string(index));
        }
        const std::size_t rows = reader.count("layer rows");
        const std::size_t cols = reader.count("layer cols");
        const std::size_t expect_out =
            l == layer_count - 1 ? cfg.output_dim : cfg.hidden_units;
        if (rows != expect_out || cols != expect_in) {
            throw ParseError(path.string() + ": layer " + std::to_string(l) +
                             " has shape " + std::to_string(rows) + "x" +
                             std::to_string(cols) + ", expected " +
                             std::to_string(expect_out) + "x" +
                             std::to_string(expect_in));
        }
        mlp::Layer layer;
        layer.weights = Matrix(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            reader.expect("w");
            auto row = layer.weights.row(r);
            for (auto& v : row) v = reader.number("weight");
        }
        reader.expect("b");
        layer.bias.resize(rows);
        for (auto& v : layer.bias) v = reader.number("bias");
        model.layers.push_back(std::move(layer));
        expect_in = rows;
    }
    reader.expect_done();
    return model;
}

ModelType peek_type(const std::filesystem::path& path) {
    TokenReader reader(path);
    reader.expect(kMagic);
    reader.expect(kVersion);
    reader.expect("type");
    const std::string type = reader.next("model type");
    if (type == "svm") return ModelType::Svm;
    if (type == "mlp") return ModelType::Mlp;
    throw ParseError(path.string() + ": unknown model type '" + type + "'");
}

}  // namespace fts::model_io
