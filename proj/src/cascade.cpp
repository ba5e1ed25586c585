#include "fpc/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpc/errors.hpp"
#include "fpc/mutual_information.hpp"

namespace fpc {

namespace {

// Infers the cascade over the whole series; samples before the maximum
// delay hold the first computable value to keep lengths aligned.
std::vector<double> cascade_series(const RuleBase& rb, const TimeSeries& x,
                                   std::span<const std::size_t> delays,
                                   const InferenceOptions& opts) {
  const auto emb = delay_embed(x, delays);
  std::vector<double> out(x.size());
  for (std::size_t r = 0; r < emb.rows.size(); ++r)
    out[emb.offset + r] = infer(rb, emb.rows[r], opts);
  for (std::size_t n = 0; n < emb.offset; ++n) out[n] = out[emb.offset];
  return out;
}

bool has_spread(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo < *hi;
}

}  // namespace

void FitConfig::validate() const {
  if (n_r == 0) throw InvalidArgument("FitConfig: n_r must be >= 1");
  if (n_mx < 2 || n_my < 2)
    throw InvalidArgument("FitConfig: need at least 2 fuzzy sets per variable");
  if (delay_step == 0) throw InvalidArgument("FitConfig: delay_step must be >= 1");
  if (mi_bins < 2) throw InvalidArgument("FitConfig: mi_bins must be >= 2");
  if (!(inner_validation_fraction > 0.0 && inner_validation_fraction < 1.0))
    throw InvalidArgument("FitConfig: inner_validation_fraction must be in (0,1)");
  if (cog_grid_points < 2)
    throw InvalidArgument("FitConfig: cog_grid_points must be >= 2");
}

DelayEmbedding delay_embed(const TimeSeries& x,
                           std::span<const std::size_t> delays) {
  x.validate();
  if (delays.empty()) throw InvalidArgument("delay_embed: no delays");
  for (std::size_t i = 1; i < delays.size(); ++i)
    if (delays[i] <= delays[i - 1])
      throw InvalidArgument("delay_embed: delays must be strictly increasing");
  const std::size_t max_delay = delays.back();
  if (max_delay >= x.size())
    throw InvalidArgument("delay_embed: delay " + std::to_string(max_delay) +
                          " >= length " + std::to_string(x.size()));

  DelayEmbedding emb;
  emb.offset = max_delay;
  emb.rows.reserve(x.size() - max_delay);
  for (std::size_t n = max_delay; n < x.size(); ++n) {
    std::vector<double> row(delays.size());
    for (std::size_t k = 0; k < delays.size(); ++k)
      row[k] = x.samples[n - delays[k]];
    emb.rows.push_back(std::move(row));
  }
  return emb;
}

double residue_criterion(double prev_residual_norm, double new_residual_norm) {
  if (prev_residual_norm < 0.0 || new_residual_norm < 0.0)
    throw InvalidArgument("residue_criterion: norms must be non-negative");
  if (prev_residual_norm == 0.0)
    return std::numeric_limits<double>::infinity();
  return new_residual_norm / prev_residual_norm;
}

FpcModel fit(const FeatureBank& bank, const TimeSeries& target,
             const FitConfig& cfg) {
  cfg.validate();
  if (bank.empty()) throw InvalidArgument("fit: empty feature bank");
  target.validate();
  if (bank.length() != target.size() ||
      bank.sample_rate_hz() != target.sample_rate_hz)
    throw DataError("fit: bank and target are not aligned");

  const std::size_t len = target.size();
  std::vector<std::size_t> delays(cfg.n_r);
  for (std::size_t k = 0; k < cfg.n_r; ++k) delays[k] = (k + 1) * cfg.delay_step;
  const std::size_t max_delay = delays.back();

  // Contiguous tail of the identification data is held out as the inner
  // validation part that drives the residue criterion.
  const std::size_t m_fit = len - static_cast<std::size_t>(std::lround(
                                      static_cast<double>(len) *
                                      cfg.inner_validation_fraction));
  const double min_samples =
      10.0 * std::pow(static_cast<double>(cfg.n_mx),
                      static_cast<double>(cfg.n_r));
  if (m_fit <= max_delay ||
      static_cast<double>(m_fit - max_delay) < min_samples || m_fit >= len)
    throw FitError("fit: insufficient data (" + std::to_string(len) +
                   " samples) for the requested configuration");

  const InferenceOptions opts = cfg.inference();

  FpcModel model;
  model.config = cfg;
  model.target_name = target.name;
  model.sample_rate_hz = target.sample_rate_hz;

  std::vector<double> residual = target.samples;
  std::vector<std::string> pool = bank.names();
  const std::size_t cap =
      cfg.max_cascades == 0 ? pool.size() : std::min(cfg.max_cascades, pool.size());

  // Optional once-only ranking against the original target.
  MiRanking initial_ranking;
  if (!cfg.rerank_per_cascade)
    initial_ranking =
        rank_features(bank.slice(0, m_fit), target.slice(0, m_fit), cfg.mi_bins);

  while (model.cascades.size() < cap && !pool.empty()) {
    const std::span<const double> val_residual(residual.data() + m_fit,
                                               len - m_fit);
    const double prev_norm = l2_norm(val_residual);
    if (prev_norm == 0.0) break;  // already perfect

    const TimeSeries residual_fit(
        std::vector<double>(residual.begin(),
                            residual.begin() + static_cast<long>(m_fit)),
        target.sample_rate_hz, target.name);
    if (!has_spread(residual_fit.samples)) break;  // constant residual

    // Choose the next input by MI rank.
    std::string chosen;
    if (cfg.rerank_per_cascade) {
      FeatureBank pool_bank;
      for (const auto& name : pool) pool_bank.add(bank.at(name).slice(0, m_fit));
      chosen = rank_features(pool_bank, residual_fit, cfg.mi_bins)
                   .entries.front()
                   .name;
    } else {
      for (const auto& e : initial_ranking.entries) {
        if (std::find(pool.begin(), pool.end(), e.name) != pool.end()) {
          chosen = e.name;
          break;
        }
      }
    }

    const TimeSeries& feature = bank.at(chosen);
    if (!has_spread(std::span<const double>(feature.samples.data(), m_fit))) {
      pool.erase(std::find(pool.begin(), pool.end(), chosen));
      continue;  // constant input cannot carry a partition
    }

    // Train this cascade's fuzzy system on the fit part of the residual.
    const auto emb_fit = delay_embed(feature.slice(0, m_fit), delays);
    const std::span<const double> fit_targets(residual.data() + emb_fit.offset,
                                              m_fit - emb_fit.offset);
    RuleBase rb = fit_miso(emb_fit.rows, fit_targets, cfg.n_mx, cfg.n_my);

    // Evaluate over the full series and test the residue criterion on the
    // inner validation part.
    const auto out = cascade_series(rb, feature, delays, opts);
    std::vector<double> new_residual(len);
    for (std::size_t n = 0; n < len; ++n)
      new_residual[n] = residual[n] - out[n];
    const double new_norm =
        l2_norm(std::span<const double>(new_residual.data() + m_fit, len - m_fit));
    const double rcr = residue_criterion(prev_norm, new_norm);
    if (!(rcr < 1.0)) break;  // first rejection ends the fit

    residual = std::move(new_residual);
    pool.erase(std::find(pool.begin(), pool.end(), chosen));
    model.cascades.push_back({chosen, delays, std::move(rb)});
    const double train_rmse = l2_norm(std::span<const double>(residual)) /
                              std::sqrt(static_cast<double>(len));
    model.training_report.push_back({chosen, rcr, new_norm, train_rmse});
  }

  if (model.cascades.empty())
    throw FitError("fit: no cascade passed the residue criterion; the pool "
                   "does not explain the target");
  return model;
}

TimeSeries predict(const FpcModel& model, const FeatureBank& bank) {
  if (model.cascades.empty()) throw InvalidArgument("predict: empty model");
  if (model.sample_rate_hz != 0.0 &&
      bank.sample_rate_hz() != model.sample_rate_hz)
    throw DataError("predict: bank rate differs from the training rate");

  const std::size_t len = bank.length();
  std::vector<double> sum(len, 0.0);
  const InferenceOptions opts = model.config.inference();
  for (const auto& cascade : model.cascades) {
    if (!bank.contains(cascade.input_name))
      throw DataError("predict: bank is missing feature '" +
                      cascade.input_name + "'");
    const auto out =
        cascade_series(cascade.system, bank.at(cascade.input_name),
                       cascade.delays, opts);
    for (std::size_t n = 0; n < len; ++n) sum[n] += out[n];
  }
  return TimeSeries(std::move(sum), bank.sample_rate_hz(),
                    model.target_name.empty() ? "fpc_prediction"
                                              : model.target_name + "_fpc");
}

}  // namespace fpc
