#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpc/feature_bank.hpp"
#include "fpc/time_series.hpp"

namespace fpc {

/// Named frequency band, e.g. theta 4-8 Hz.
struct BandDef {
  std::string name;
  double low_hz = 0.0;
  double high_hz = 0.0;
};

/// theta 4-8, alpha 8-13, beta 13-31.
std::vector<BandDef> default_bands();

/// Real Morlet mother wavelet exp(-t^2/2) * cos(5t).
double morlet(double t);

/// Oscillation frequency of the mother wavelet, radians per unit time.
inline constexpr double kMorletOmega = 5.0;

/// Center frequency in Hz of the wavelet at a given scale (seconds).
double morlet_center_frequency_hz(double scale_sec);

/// Log-spaced scales (seconds) whose center frequencies cover
/// [low_hz, high_hz] inclusive, ordered by ascending frequency.
std::vector<double> band_scales(const BandDef& band, std::size_t scales_per_band);

/// Continuous wavelet transform: one row per scale, one column per input
/// sample. W[s][t'] = (1/s) * sum_t x(t) * morlet((t - t')/s) * dt, with
/// zero padding outside the signal support.
std::vector<std::vector<double>> cwt(const TimeSeries& x,
                                     std::span<const double> scales_sec);

/// Number of leading/trailing samples affected by the zero-padded edges at
/// the largest scale a band uses. Callers that care exclude this margin.
std::size_t band_power_edge_margin(const BandDef& band, double sample_rate_hz);

/// Per-sample mean of |W|^2 across the scales covering the band. Output is
/// named "<signal>.<band>" and shares the input's rate and length.
TimeSeries band_power(const TimeSeries& x, const BandDef& band,
                      std::size_t scales_per_band = 8);

struct FeatureBankOptions {
  std::size_t scales_per_band = 8;
  /// Moving-average window (samples) applied to each power series.
  /// nullopt = one second of samples; 0 = no smoothing.
  std::optional<std::size_t> smooth_window;
};

/// Cross product channels x bands, channel-major, names "channel.band".
FeatureBank build_feature_bank(std::span<const TimeSeries> channels,
                               std::span<const BandDef> bands,
                               const FeatureBankOptions& opt = {});

}  // namespace fpc
