#pragma once

#include <string>

#include "fpc/cascade.hpp"
#include "fpc/linear_model.hpp"

namespace fpc {

/// Model files are versioned JSON with a "kind" discriminator so the fuzzy
/// cascade model and the linear baseline share one envelope. Doubles are
/// written round-trip exact; save/load/predict is bit-identical.
inline constexpr int kModelFormatVersion = 1;

enum class ModelKind { Fpc, Linear };

std::string save_model(const FpcModel& model);
std::string save_model(const LinearModel& model);

/// Reads just the envelope to tell the two kinds apart.
ModelKind probe_model_kind(const std::string& bytes);

FpcModel load_fpc_model(const std::string& bytes);
LinearModel load_linear_model(const std::string& bytes);

}  // namespace fpc
