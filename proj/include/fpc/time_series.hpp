#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fpc {

/// Uniformly sampled real-valued signal. The universal currency of the
/// pipeline: raw channels, appraisal targets, band powers and model
/// predictions are all TimeSeries.
struct TimeSeries {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;
  std::string name;

  TimeSeries() = default;
  TimeSeries(std::vector<double> s, double rate, std::string n = {})
      : samples(std::move(s)), sample_rate_hz(rate), name(std::move(n)) {}

  std::size_t size() const { return samples.size(); }
  double duration_sec() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }

  /// Throws InvalidArgument if the rate is non-positive, the series is
  /// empty, or any sample is NaN/infinite.
  void validate() const;

  /// Copy of samples [from, to) at the same rate, keeping the name.
  TimeSeries slice(std::size_t from, std::size_t to) const;
};

/// Integer-factor resampling (up or down) with anti-alias / interpolation
/// filtering. Non-integer rate ratios are rejected.
TimeSeries resample(const TimeSeries& ts, double target_rate_hz);

/// Zero-phase band-pass via a linear-phase windowed-sinc FIR applied with
/// mirrored edges. Guarantees >=20 dB attenuation at 0.5*low_hz and
/// 1.5*high_hz and <1 dB passband ripple.
TimeSeries band_pass(const TimeSeries& ts, double low_hz, double high_hz);

/// Centered moving average; windows shrink at the edges instead of padding.
TimeSeries moving_average(const TimeSeries& ts, std::size_t window_samples);

double rmse(std::span<const double> predicted, std::span<const double> actual);
double rmse(const TimeSeries& predicted, const TimeSeries& actual);

double mean(std::span<const double> v);
double std_dev(std::span<const double> v);
double l2_norm(std::span<const double> v);

}  // namespace fpc
