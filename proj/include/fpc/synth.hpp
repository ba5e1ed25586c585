#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fpc/cascade.hpp"
#include "fpc/feature_bank.hpp"
#include "fpc/time_series.hpp"
#include "fpc/wavelet.hpp"

namespace fpc {

/// Shape of the hidden envelope-to-target map.
enum class Nonlinearity { StaticPoly, Saturating, Bilinear };

std::string to_string(Nonlinearity nl);

/// Accepts "static-poly", "saturating", "bilinear".
Nonlinearity parse_nonlinearity(const std::string& text);

struct SynthSpec {
  std::size_t n_channels = 14;
  double duration_sec = 60.0;
  double sample_rate_hz = 128.0;
  std::uint64_t seed = 1;
  Nonlinearity nonlinearity = Nonlinearity::StaticPoly;
  /// +infinity = noise-free target.
  double snr_db = 10.0;

  void validate() const;
};

/// One hidden envelope the target depends on, identified by the band-power
/// feature that carries it.
struct SourceRef {
  std::string channel;
  std::string band;
  std::size_t delay_samples = 0;

  std::string feature_name() const { return channel + "." + band; }
};

struct GroundTruth {
  std::vector<SourceRef> sources;
  Nonlinearity nonlinearity = Nonlinearity::StaticPoly;
  double snr_db = 0.0;

  std::string describe() const;
};

struct SynthData {
  std::vector<TimeSeries> channels;  // "ch01".."chNN"
  TimeSeries target;                 // "target", values in [-1, 1]
  GroundTruth truth;
};

/// Builds the benchmark record: every channel is a sum over the default
/// bands of band-limited noise carriers, each modulated by its own slow
/// stochastic amplitude envelope. The target is a smooth nonlinear function
/// of the slow power (one-second mean of the squared amplitude) of two
/// delayed envelopes, squashed into [-1, 1], plus Gaussian noise at snr_db.
/// Bit-identical for equal specs.
SynthData generate(const SynthSpec& spec);

/// Outcome of one identify-on-one-half, validate-on-the-other run.
struct ExperimentReport {
  std::string target_name;
  std::size_t n_features = 0;
  std::size_t identification_samples = 0;
  std::size_t validation_samples = 0;
  double fpc_training_rmse = 0.0;
  double fpc_validation_rmse = 0.0;
  double lr_training_rmse = 0.0;
  double lr_validation_rmse = 0.0;
  bool lr_rank_warning = false;
  std::vector<CascadeReport> cascade_trace;

  /// Human-readable report: model table plus the cascade trace.
  std::string table() const;
  /// Header line followed by one "model,split,rmse" row per cell.
  std::vector<std::string> csv_rows() const;
};

/// Splits the record into contiguous halves, identifies on the first and
/// validates on the second (swap_halves reverses the roles), fitting the
/// cascade model and the linear baseline on identical features.
ExperimentReport run_experiment(const FeatureBank& features,
                                const TimeSeries& target,
                                const FitConfig& cfg = {},
                                bool swap_halves = false);

/// generate + build_feature_bank + run_experiment in one call.
ExperimentReport run_benchmark(const SynthSpec& spec, const FitConfig& cfg = {},
                               const FeatureBankOptions& opt = {});

}  // namespace fpc
