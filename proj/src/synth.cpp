#include "fpc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "fpc/errors.hpp"
#include "fpc/linear_model.hpp"

namespace fpc {

namespace {

// Deterministic draws on top of the standard 64-bit engine. The raw engine
// stream is pinned by the standard; the distribution adaptors are not, so
// the uniform/normal mappings live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(engine_() % n);
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

std::string channel_name(std::size_t index, std::size_t n_channels) {
  const int width = n_channels >= 100 ? static_cast<int>(std::to_string(n_channels).size()) : 2;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ch%0*zu", width, index + 1);
  return buf;
}

// Band-limited stochastic amplitude in [0.2, 1.0]: twice-smoothed white
// noise, standardized and squashed through tanh. The one-second correlation
// time means even a few seconds of record sample the whole amplitude range,
// and distinct envelopes are statistically independent rather than merely
// out of phase. The second smoothing pass flattens the autocorrelation peak,
// so a few samples of delay mismatch cost almost no envelope correlation.
std::vector<double> draw_envelope(Rng& rng, std::size_t n, double rate) {
  std::vector<double> g(n);
  for (auto& v : g) v = rng.normal();
  const std::size_t window = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(rate)));
  TimeSeries smooth =
      moving_average(TimeSeries(std::move(g), rate, "env"), window);
  smooth = moving_average(smooth, window);
  const double m = mean(smooth.samples);
  double s = std_dev(smooth.samples);
  if (s == 0.0) s = 1.0;
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 0.5 * (1.0 + std::tanh((smooth.samples[i] - m) / s));
    env[i] = 0.2 + 0.8 * u;
  }
  return env;
}

// Unit-std constant-modulus narrowband carrier: a spectral line at a random
// frequency inside the band, with a slow random phase drift. Unlike filtered
// white noise, whose power fluctuates with ~1/sqrt(BT) relative spread, this
// carrier hands the squared amplitude envelope back to the band-power
// readout almost exactly. The per-band line windows keep each line away
// from the scale grids of the neighbouring bands, so one channel's three
// band powers stay decoupled.
std::vector<double> draw_carrier(Rng& rng, std::size_t n, double rate,
                                 const BandDef& band, std::size_t band_idx) {
  static constexpr double kLineLoFrac[] = {0.20, 0.70, 0.20};
  static constexpr double kLineHiFrac[] = {0.70, 0.80, 0.80};
  static constexpr double kPhaseDrift = 0.005;  // rad per sample

  double lo_frac = 0.20, hi_frac = 0.80;
  if (band_idx < 3) {
    lo_frac = kLineLoFrac[band_idx];
    hi_frac = kLineHiFrac[band_idx];
  }
  const double width = band.high_hz - band.low_hz;
  const double f0 =
      rng.uniform(band.low_hz + lo_frac * width, band.low_hz + hi_frac * width);

  std::vector<double> out(n);
  double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < n; ++i) {
    phase += 2.0 * std::numbers::pi * f0 / rate + kPhaseDrift * rng.normal();
    out[i] = std::cos(phase);
  }
  const double m = mean(out);
  double s = std_dev(out);
  if (s == 0.0) s = 1.0;
  for (auto& v : out) v = (v - m) / s;
  return out;
}

// Lagged one-second mean of the squared envelope: for a unit-modulus
// carrier this is the quantity the band-power readout reports, up to a
// readout constant, so the target depends on the envelope exactly through
// the measurable band power.
std::vector<double> slow_power(const std::vector<double>& env, double rate,
                               std::size_t lag) {
  const std::size_t n = env.size();
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = env[i] * env[i];
  TimeSeries p = moving_average(
      TimeSeries(std::move(sq), rate, "power"),
      std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(rate))));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = p.samples[i >= lag ? i - lag : 0];
  return out;
}

// The first source enters through a parabola (invisible to a linear fit
// and the dominant variance share); the second adds a weaker term.
double combine(Nonlinearity nl, double p1, double p2) {
  switch (nl) {
    case Nonlinearity::StaticPoly:
      return 4.0 * (p1 - 0.45) * (p1 - 0.45) + 0.05 * p2 * p2 * p2;
    case Nonlinearity::Saturating:
      return std::tanh(4.0 * (p1 - 0.45)) + 0.5 * std::tanh(4.0 * (p2 - 0.45));
    case Nonlinearity::Bilinear:
      return 1.5 * p1 * p2 - 0.5 * p1;
  }
  throw InvalidArgument("unknown nonlinearity value");
}

std::string format_rmse_row(const char* model, double train, double val) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%-6s %14.6f %16.6f\n", model, train, val);
  return buf;
}

std::string format_csv_row(const char* model, const char* split, double value) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s,%s,%.17g", model, split, value);
  return buf;
}

}  // namespace

std::string to_string(Nonlinearity nl) {
  switch (nl) {
    case Nonlinearity::StaticPoly:
      return "static-poly";
    case Nonlinearity::Saturating:
      return "saturating";
    case Nonlinearity::Bilinear:
      return "bilinear";
  }
  throw InvalidArgument("unknown nonlinearity value");
}

Nonlinearity parse_nonlinearity(const std::string& text) {
  if (text == "static-poly") return Nonlinearity::StaticPoly;
  if (text == "saturating") return Nonlinearity::Saturating;
  if (text == "bilinear") return Nonlinearity::Bilinear;
  throw InvalidArgument("unknown nonlinearity '" + text +
                        "' (expected static-poly, saturating or bilinear)");
}

void SynthSpec::validate() const {
  if (n_channels == 0) throw InvalidArgument("n_channels must be positive");
  if (!(duration_sec > 0.0)) throw InvalidArgument("duration_sec must be positive");
  if (!(sample_rate_hz > 0.0))
    throw InvalidArgument("sample_rate_hz must be positive");
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
    throw InvalidArgument("snr_db must be a real value or +infinity");
  const auto& bands = default_bands();
  const double nyquist = sample_rate_hz / 2.0;
  for (const auto& b : bands) {
    if (b.high_hz >= nyquist)
      throw InvalidArgument("sample_rate_hz too low for the " + b.name +
                            " band (" + std::to_string(b.high_hz) + " Hz)");
  }
}

std::string GroundTruth::describe() const {
  std::ostringstream out;
  out << "nonlinearity: " << to_string(nonlinearity) << "\n";
  out << "snr_db: " << snr_db << "\n";
  for (const auto& s : sources) {
    out << "source: " << s.feature_name() << " delay_samples=" << s.delay_samples
        << "\n";
  }
  return out.str();
}

SynthData generate(const SynthSpec& spec) {
  spec.validate();
  const auto bands = default_bands();
  const std::size_t n =
      static_cast<std::size_t>(std::llround(spec.duration_sec * spec.sample_rate_hz));
  if (n < 2) throw InvalidArgument("duration_sec * sample_rate_hz too small");

  Rng rng(spec.seed);
  SynthData data;
  data.channels.reserve(spec.n_channels);

  // envelopes[c][b] is kept for the target construction below.
  std::vector<std::vector<std::vector<double>>> envelopes(spec.n_channels);
  for (std::size_t c = 0; c < spec.n_channels; ++c) {
    std::vector<double> mix(n, 0.0);
    envelopes[c].reserve(bands.size());
    for (std::size_t b = 0; b < bands.size(); ++b) {
      envelopes[c].push_back(draw_envelope(rng, n, spec.sample_rate_hz));
      const auto carrier =
          draw_carrier(rng, n, spec.sample_rate_hz, bands[b], b);
      const auto& env = envelopes[c].back();
      for (std::size_t i = 0; i < n; ++i) mix[i] += env[i] * carrier[i];
    }
    for (auto& v : mix) v += 0.05 * rng.normal();
    data.channels.emplace_back(std::move(mix), spec.sample_rate_hz,
                               channel_name(c, spec.n_channels));
  }

  // Two distinct (channel, band) envelopes drive the target. The dominant
  // source always reads the lowest band: its band power carries the least
  // cross-band leakage, which keeps the noise-free benchmark limited by the
  // method rather than by the generator.
  const std::size_t c1 = rng.uniform_index(spec.n_channels);
  const std::size_t b1 = 0;
  std::size_t c2 = c1, b2 = b1;
  while (c2 == c1 && b2 == b1) {
    c2 = rng.uniform_index(spec.n_channels);
    b2 = rng.uniform_index(bands.size());
  }
  const std::size_t d1 = 2 + rng.uniform_index(3);
  const std::size_t d2 = 2 + rng.uniform_index(3);
  data.truth.sources = {
      {channel_name(c1, spec.n_channels), bands[b1].name, d1},
      {channel_name(c2, spec.n_channels), bands[b2].name, d2}};
  data.truth.nonlinearity = spec.nonlinearity;
  data.truth.snr_db = spec.snr_db;

  const auto p1 = slow_power(envelopes[c1][b1], spec.sample_rate_hz, d1);
  const auto p2 = slow_power(envelopes[c2][b2], spec.sample_rate_hz, d2);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = combine(spec.nonlinearity, p1[i], p2[i]);
  const double zm = mean(z);
  double zs = std_dev(z);
  if (zs == 0.0) zs = 1.0;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = 0.95 * std::tanh(0.6 * (z[i] - zm) / zs);

  const double noise_sigma = std_dev(y) * std::pow(10.0, -spec.snr_db / 20.0);
  for (auto& v : y) v += noise_sigma * rng.normal();

  data.target = TimeSeries(std::move(y), spec.sample_rate_hz, "target");
  return data;
}

std::string ExperimentReport::table() const {
  std::ostringstream out;
  out << "target: " << target_name << "  features: " << n_features
      << "  identification: " << identification_samples
      << "  validation: " << validation_samples << "\n";
  out << "model   training_rmse  validation_rmse\n";
  out << format_rmse_row("fpc", fpc_training_rmse, fpc_validation_rmse);
  out << format_rmse_row("lr", lr_training_rmse, lr_validation_rmse);
  if (lr_rank_warning) out << "note: lr design matrix was rank deficient\n";
  out << "\ncascade  input                rcr  val_residual_norm\n";
  for (std::size_t i = 0; i < cascade_trace.size(); ++i) {
    const auto& c = cascade_trace[i];
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-7zu  %-16s %9.6f %18.6f\n", i + 1,
                  c.input_name.c_str(), c.rcr, c.validation_residual_norm);
    out << buf;
  }
  return out.str();
}

std::vector<std::string> ExperimentReport::csv_rows() const {
  return {"model,split,rmse",
          format_csv_row("fpc", "identification", fpc_training_rmse),
          format_csv_row("fpc", "validation", fpc_validation_rmse),
          format_csv_row("lr", "identification", lr_training_rmse),
          format_csv_row("lr", "validation", lr_validation_rmse)};
}

ExperimentReport run_experiment(const FeatureBank& features,
                                const TimeSeries& target, const FitConfig& cfg,
                                bool swap_halves) {
  cfg.validate();
  if (features.empty()) throw DataError("feature bank is empty");
  if (features.length() != target.size())
    throw DataError("feature bank and target lengths differ");
  if (features.sample_rate_hz() != target.sample_rate_hz)
    throw DataError("feature bank and target sample rates differ");

  const std::size_t m = features.length();
  const std::size_t half = m / 2;
  const std::size_t max_delay = cfg.n_r * cfg.delay_step;
  if (half <= max_delay + 1)
    throw DataError("record too short to split into halves covering delay " +
                    std::to_string(max_delay));

  std::size_t fit_from = 0, fit_to = half, val_from = half, val_to = m;
  if (swap_halves) {
    fit_from = half;
    fit_to = m;
    val_from = 0;
    val_to = half;
  }

  const FeatureBank fit_bank = features.slice(fit_from, fit_to);
  const FeatureBank val_bank = features.slice(val_from, val_to);
  const TimeSeries fit_target = target.slice(fit_from, fit_to);
  const TimeSeries val_target = target.slice(val_from, val_to);

  ExperimentReport report;
  report.target_name = target.name;
  report.n_features = features.size();
  report.identification_samples = fit_to - fit_from;
  report.validation_samples = val_to - val_from;

  const FpcModel fpc = fit(fit_bank, fit_target, cfg);
  report.cascade_trace = fpc.training_report;
  report.fpc_training_rmse = rmse(predict(fpc, fit_bank), fit_target);
  report.fpc_validation_rmse = rmse(predict(fpc, val_bank), val_target);

  std::vector<std::size_t> delays(cfg.n_r);
  for (std::size_t k = 0; k < cfg.n_r; ++k) delays[k] = (k + 1) * cfg.delay_step;
  const LinearModel lr = fit_lr(fit_bank, fit_target, delays);
  report.lr_rank_warning = lr.rank_warning;
  report.lr_training_rmse = rmse(predict_lr(lr, fit_bank), fit_target);
  report.lr_validation_rmse = rmse(predict_lr(lr, val_bank), val_target);
  return report;
}

ExperimentReport run_benchmark(const SynthSpec& spec, const FitConfig& cfg,
                               const FeatureBankOptions& opt) {
  const SynthData data = generate(spec);
  const FeatureBank features =
      build_feature_bank(data.channels, default_bands(), opt);
  return run_experiment(features, data.target, cfg, false);
}

}  // namespace fpc
