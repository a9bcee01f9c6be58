#pragma once

#include <filesystem>

#include "fts/mlp.hpp"
#include "fts/svm.hpp"

namespace fts::model_io {

/// Versioned plain-text model files ("ftsmodel v1"). Numbers are written
/// in shortest round-trip form, so a saved model reproduces its decisions
/// bit for bit after loading. Truncated or altered files raise ParseError.

enum class ModelType { Svm, Mlp };

void save_svm(const svm::SvmModel& model, const std::filesystem::path& path);
svm::SvmModel load_svm(const std::filesystem::path& path);

void save_mlp(const mlp::MlpModel& model, const std::filesystem::path& path);
mlp::MlpModel load_mlp(const std::filesystem::path& path);

/// Model type recorded in the header, without loading the body.
ModelType peek_type(const std::filesystem::path& path);

}  // namespace fts::model_io
