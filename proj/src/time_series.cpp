#include "fpc/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpc/errors.hpp"

namespace fpc {

namespace {

// Odd reflection about the edge samples (x[-i] == 2*x[0] - x[i] and the
// analogue past the end); keeps constants exact and the first difference
// continuous, so filter transients at the boundaries stay second order.
inline double at_mirrored(const std::vector<double>& x, long long i) {
  const long long n = static_cast<long long>(x.size());
  if (n == 1) return x[0];
  double shift = 0.0, sign = 1.0;
  while (i < 0 || i >= n) {
    if (i < 0) {
      shift += 2.0 * sign * x[0];
      i = -i;
    } else {
      shift += 2.0 * sign * x[static_cast<std::size_t>(n - 1)];
      i = 2 * (n - 1) - i;
    }
    sign = -sign;
  }
  return shift + sign * x[static_cast<std::size_t>(i)];
}

std::vector<double> hamming(std::size_t n) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                  static_cast<double>(n - 1));
  }
  return w;
}

// Windowed-sinc low-pass, cutoff in cycles/sample (0..0.5), odd tap count,
// DC gain normalized to exactly 1.
std::vector<double> lowpass_taps(double cutoff, std::size_t n_taps) {
  std::vector<double> h(n_taps);
  const auto w = hamming(n_taps);
  const double mid = static_cast<double>(n_taps - 1) / 2.0;
  for (std::size_t i = 0; i < n_taps; ++i) {
    const double m = static_cast<double>(i) - mid;
    const double s = (m == 0.0) ? 2.0 * cutoff
                                : std::sin(2.0 * M_PI * cutoff * m) / (M_PI * m);
    h[i] = s * w[i];
  }
  const double sum = std::accumulate(h.begin(), h.end(), 0.0);
  for (double& v : h) v /= sum;
  return h;
}

// Band-pass as difference of two low-passes, passband gain normalized at
// the band's geometric center.
std::vector<double> bandpass_taps(double low, double high, std::size_t n_taps) {
  const auto hl = lowpass_taps(low, n_taps);
  const auto hh = lowpass_taps(high, n_taps);
  std::vector<double> h(n_taps);
  for (std::size_t i = 0; i < n_taps; ++i) h[i] = hh[i] - hl[i];
  const double fc = std::sqrt(low * high);
  const double mid = static_cast<double>(n_taps - 1) / 2.0;
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n_taps; ++i) {
    const double ph = 2.0 * M_PI * fc * (static_cast<double>(i) - mid);
    re += h[i] * std::cos(ph);
    im += h[i] * std::sin(ph);
  }
  const double gain = std::hypot(re, im);
  for (double& v : h) v /= gain;
  return h;
}

// Same-length convolution with a centered odd-length kernel and mirrored
// edges; net phase is zero for symmetric kernels.
std::vector<double> convolve_same(const std::vector<double>& x,
                                  const std::vector<double>& h) {
  const long long half = static_cast<long long>(h.size() / 2);
  std::vector<double> out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = 0.0;
    for (long long m = -half; m <= half; ++m) {
      acc += at_mirrored(x, static_cast<long long>(n) + m) *
             h[static_cast<std::size_t>(m + half)];
    }
    out[n] = acc;
  }
  return out;
}

inline std::size_t make_odd(std::size_t n) { return (n % 2 == 0) ? n + 1 : n; }

bool near_integer(double v, double* k) {
  const double r = std::round(v);
  if (r >= 1.0 && std::abs(v - r) < 1e-9 * r) {
    *k = r;
    return true;
  }
  return false;
}

}  // namespace

void TimeSeries::validate() const {
  if (!(sample_rate_hz > 0.0))
    throw InvalidArgument("TimeSeries '" + name + "': sample rate must be positive");
  if (samples.empty())
    throw InvalidArgument("TimeSeries '" + name + "': no samples");
  for (double v : samples) {
    if (!std::isfinite(v))
      throw InvalidArgument("TimeSeries '" + name + "': non-finite sample");
  }
}

TimeSeries TimeSeries::slice(std::size_t from, std::size_t to) const {
  if (from >= to || to > samples.size())
    throw InvalidArgument("TimeSeries::slice: bad range");
  return TimeSeries(std::vector<double>(samples.begin() + static_cast<long>(from),
                                        samples.begin() + static_cast<long>(to)),
                    sample_rate_hz, name);
}

TimeSeries resample(const TimeSeries& ts, double target_rate_hz) {
  ts.validate();
  if (!(target_rate_hz > 0.0))
    throw InvalidArgument("resample: target rate must be positive");

  const double src = ts.sample_rate_hz;
  if (std::abs(target_rate_hz - src) < 1e-9 * src) {
    TimeSeries out = ts;
    out.sample_rate_hz = target_rate_hz;
    return out;
  }

  double kd = 0.0;
  if (target_rate_hz < src && near_integer(src / target_rate_hz, &kd)) {
    // Decimation: anti-alias low-pass then keep every k-th sample.
    const std::size_t k = static_cast<std::size_t>(kd);
    const double cutoff = 0.45 / kd;          // cycles/sample at source rate
    const double transition = 0.1 / kd;
    const std::size_t taps = make_odd(static_cast<std::size_t>(
        std::ceil(3.3 / transition)));
    const auto filtered = convolve_same(ts.samples, lowpass_taps(cutoff, taps));
    std::vector<double> out;
    out.reserve(ts.size() / k + 1);
    for (std::size_t i = 0; i < filtered.size(); i += k) out.push_back(filtered[i]);
    return TimeSeries(std::move(out), target_rate_hz, ts.name);
  }

  double ku = 0.0;
  if (target_rate_hz > src && near_integer(target_rate_hz / src, &ku)) {
    // Polyphase interpolation; each phase branch is normalized to unit DC
    // gain so constants survive exactly.
    const long long k = static_cast<long long>(ku);
    const double cutoff = 0.45 / ku;          // cycles/sample at target rate
    const double transition = 0.1 / ku;
    const std::size_t taps = make_odd(static_cast<std::size_t>(
        std::ceil(3.3 / transition)));
    const auto g = lowpass_taps(cutoff, taps);
    const long long half = static_cast<long long>(taps / 2);

    std::vector<double> branch_sum(static_cast<std::size_t>(k), 0.0);
    for (std::size_t t = 0; t < taps; ++t) {
      const long long lag = static_cast<long long>(t) - half;
      const long long p = ((lag % k) + k) % k;
      branch_sum[static_cast<std::size_t>(p)] += g[t];
    }

    const std::size_t out_len = ts.size() * static_cast<std::size_t>(k);
    std::vector<double> out(out_len);
    for (std::size_t j = 0; j < out_len; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < taps; ++t) {
        const long long zi = static_cast<long long>(j) -
                             (static_cast<long long>(t) - half);
        if (zi % k != 0) continue;
        acc += at_mirrored(ts.samples, zi / k) * g[t];
      }
      out[j] = acc / branch_sum[j % static_cast<std::size_t>(k)];
    }
    return TimeSeries(std::move(out), target_rate_hz, ts.name);
  }

  throw InvalidArgument("resample: only integer rate ratios are supported (got " +
                        std::to_string(src) + " -> " +
                        std::to_string(target_rate_hz) + ")");
}

TimeSeries band_pass(const TimeSeries& ts, double low_hz, double high_hz) {
  ts.validate();
  const double nyquist = ts.sample_rate_hz / 2.0;
  if (!(low_hz > 0.0) || !(low_hz < high_hz))
    throw InvalidArgument("band_pass: need 0 < low < high");
  if (!(high_hz < nyquist))
    throw InvalidArgument("band_pass: high cutoff must be below Nyquist (" +
                          std::to_string(nyquist) + " Hz)");

  // Transition bands live inside [0.5*low, low] and [high, min(1.5*high,
  // Nyquist)]; the narrower one sets the tap count.
  const double fs = ts.sample_rate_hz;
  const double tw_lo = 0.5 * low_hz;
  const double tw_hi = std::min(0.5 * high_hz, nyquist - high_hz);
  const double tw = std::min(tw_lo, tw_hi);
  const std::size_t taps =
      make_odd(static_cast<std::size_t>(std::ceil(3.3 * fs / tw)));
  if (taps / 2 >= ts.size())
    throw InvalidArgument("band_pass: signal too short (" +
                          std::to_string(ts.size()) + " samples) for a " +
                          std::to_string(taps) + "-tap filter");

  const double lo = (low_hz - tw_lo / 2.0) / fs;
  const double hi = (high_hz + tw_hi / 2.0) / fs;
  auto out = convolve_same(ts.samples, bandpass_taps(lo, hi, taps));
  return TimeSeries(std::move(out), ts.sample_rate_hz, ts.name);
}

TimeSeries moving_average(const TimeSeries& ts, std::size_t window_samples) {
  ts.validate();
  const std::size_t n = ts.size();
  if (window_samples == 0 || window_samples > n)
    throw InvalidArgument("moving_average: window must be in [1, length]");
  if (window_samples == 1) return ts;

  // Centered window [n-left, n+right]; an even window leans one sample left.
  const std::size_t left = window_samples / 2;
  const std::size_t right = window_samples - 1 - left;

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + ts.samples[i];

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = (i >= left) ? i - left : 0;
    const std::size_t b = std::min(n - 1, i + right);
    out[i] = (prefix[b + 1] - prefix[a]) / static_cast<double>(b - a + 1);
  }
  return TimeSeries(std::move(out), ts.sample_rate_hz, ts.name);
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size())
    throw InvalidArgument("rmse: length mismatch (" +
                          std::to_string(predicted.size()) + " vs " +
                          std::to_string(actual.size()) + ")");
  if (predicted.empty()) throw InvalidArgument("rmse: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - actual[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(predicted.size()));
}

double rmse(const TimeSeries& predicted, const TimeSeries& actual) {
  return rmse(std::span<const double>(predicted.samples),
              std::span<const double>(actual.samples));
}

double mean(std::span<const double> v) {
  if (v.empty()) throw InvalidArgument("mean: empty input");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_dev(std::span<const double> v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double l2_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace fpc
