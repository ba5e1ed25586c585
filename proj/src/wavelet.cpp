#include "fpc/wavelet.hpp"

#include <algorithm>
#include <cmath>

#include "fpc/errors.hpp"

namespace fpc {

namespace {

// exp(-u^2/2) is below 4e-6 past |u| = 5; truncate the kernel there.
constexpr double kSupportRadius = 5.0;

std::size_t kernel_half_width(double scale_sec, double rate) {
  return static_cast<std::size_t>(
      std::ceil(kSupportRadius * scale_sec * rate));
}

}  // namespace

std::vector<BandDef> default_bands() {
  return {{"theta", 4.0, 8.0}, {"alpha", 8.0, 13.0}, {"beta", 13.0, 31.0}};
}

double morlet(double t) { return std::exp(-t * t / 2.0) * std::cos(5.0 * t); }

double morlet_center_frequency_hz(double scale_sec) {
  return kMorletOmega / (2.0 * M_PI * scale_sec);
}

std::vector<double> band_scales(const BandDef& band,
                                std::size_t scales_per_band) {
  if (!(band.low_hz > 0.0) || !(band.low_hz < band.high_hz))
    throw InvalidArgument("band_scales: need 0 < low < high for band '" +
                          band.name + "'");
  if (scales_per_band == 0)
    throw InvalidArgument("band_scales: need at least one scale");

  std::vector<double> scales;
  scales.reserve(scales_per_band);
  if (scales_per_band == 1) {
    scales.push_back(kMorletOmega /
                     (2.0 * M_PI * std::sqrt(band.low_hz * band.high_hz)));
    return scales;
  }
  const double log_lo = std::log(band.low_hz);
  const double log_hi = std::log(band.high_hz);
  for (std::size_t i = 0; i < scales_per_band; ++i) {
    const double f = std::exp(log_lo + (log_hi - log_lo) *
                                           static_cast<double>(i) /
                                           static_cast<double>(scales_per_band - 1));
    scales.push_back(kMorletOmega / (2.0 * M_PI * f));
  }
  return scales;
}

std::vector<std::vector<double>> cwt(const TimeSeries& x,
                                     std::span<const double> scales_sec) {
  x.validate();
  if (scales_sec.empty()) throw InvalidArgument("cwt: empty scale list");
  for (double s : scales_sec)
    if (!(s > 0.0)) throw InvalidArgument("cwt: scales must be positive");

  const double rate = x.sample_rate_hz;
  const double dt = 1.0 / rate;
  const long long n = static_cast<long long>(x.size());

  std::vector<std::vector<double>> result;
  result.reserve(scales_sec.size());
  for (double s : scales_sec) {
    const long long half = static_cast<long long>(kernel_half_width(s, rate));
    std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
    for (long long m = -half; m <= half; ++m) {
      kernel[static_cast<std::size_t>(m + half)] =
          morlet(static_cast<double>(m) * dt / s) * dt / s;
    }
    std::vector<double> row(x.size());
    for (long long t = 0; t < n; ++t) {
      const long long lo = std::max(-half, -t);
      const long long hi = std::min(half, n - 1 - t);
      double acc = 0.0;
      for (long long m = lo; m <= hi; ++m)
        acc += x.samples[static_cast<std::size_t>(t + m)] *
               kernel[static_cast<std::size_t>(m + half)];
      row[static_cast<std::size_t>(t)] = acc;
    }
    result.push_back(std::move(row));
  }
  return result;
}

std::size_t band_power_edge_margin(const BandDef& band, double sample_rate_hz) {
  // Largest scale in the band sets the widest kernel.
  const double s_max = kMorletOmega / (2.0 * M_PI * band.low_hz);
  return kernel_half_width(s_max, sample_rate_hz);
}

TimeSeries band_power(const TimeSeries& x, const BandDef& band,
                      std::size_t scales_per_band) {
  x.validate();
  const double nyquist = x.sample_rate_hz / 2.0;
  if (!(band.low_hz > 0.0) || !(band.low_hz < band.high_hz) ||
      !(band.high_hz < nyquist))
    throw InvalidArgument("band_power: band '" + band.name +
                          "' must lie inside (0, Nyquist)");

  const auto scales = band_scales(band, scales_per_band);
  const auto coeffs = cwt(x, scales);

  std::vector<double> power(x.size(), 0.0);
  for (const auto& row : coeffs)
    for (std::size_t t = 0; t < row.size(); ++t) power[t] += row[t] * row[t];
  const double inv = 1.0 / static_cast<double>(scales.size());
  for (double& p : power) p *= inv;

  return TimeSeries(std::move(power), x.sample_rate_hz,
                    x.name.empty() ? band.name : x.name + "." + band.name);
}

FeatureBank build_feature_bank(std::span<const TimeSeries> channels,
                               std::span<const BandDef> bands,
                               const FeatureBankOptions& opt) {
  if (channels.empty()) throw InvalidArgument("build_feature_bank: no channels");
  if (bands.empty()) throw InvalidArgument("build_feature_bank: no bands");

  const double rate = channels[0].sample_rate_hz;
  const std::size_t len = channels[0].size();
  for (const auto& ch : channels) {
    ch.validate();
    if (ch.sample_rate_hz != rate || ch.size() != len)
      throw DataError("build_feature_bank: channel '" + ch.name +
                      "' does not match the common rate/length");
  }

  std::size_t window = opt.smooth_window.value_or(
      static_cast<std::size_t>(std::lround(rate)));
  window = std::min(window, len);

  FeatureBank bank;
  for (const auto& ch : channels) {
    for (const auto& band : bands) {
      TimeSeries p = band_power(ch, band, opt.scales_per_band);
      if (window > 1) p = moving_average(p, window);
      bank.add(std::move(p));
    }
  }
  return bank;
}

}  // namespace fpc
