#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fpc/feature_bank.hpp"
#include "fpc/fuzzy.hpp"
#include "fpc/time_series.hpp"

namespace fpc {

/// One parallel branch: a single input feature, delay-embedded, driving a
/// fitted MISO fuzzy system.
struct Cascade {
  std::string input_name;
  std::vector<std::size_t> delays;  // strictly increasing, in samples
  RuleBase system;
};

/// Bookkeeping for one accepted cascade.
struct CascadeReport {
  std::string input_name;
  double rcr = 0.0;                      // residue criterion that admitted it
  double validation_residual_norm = 0.0; // inner-validation L2 after adding it
  double training_rmse = 0.0;            // full identification-series RMSE
};

struct FitConfig {
  std::size_t n_r = 2;       // delayed copies per cascade input
  std::size_t n_mx = 3;      // fuzzy sets per input variable
  std::size_t n_my = 3;      // fuzzy sets on the output
  std::size_t delay_step = 1;
  std::size_t mi_bins = 16;
  std::size_t max_cascades = 0;  // 0 = no cap beyond the pool size
  double inner_validation_fraction = 0.25;
  /// Re-rank the pool against the current residual before each cascade;
  /// otherwise rank once against the original target.
  bool rerank_per_cascade = true;
  bool use_rule_weights = true;
  std::size_t cog_grid_points = 201;

  void validate() const;
  InferenceOptions inference() const {
    return {use_rule_weights, cog_grid_points};
  }
};

/// Ordered cascades whose summed outputs form the prediction.
struct FpcModel {
  std::vector<Cascade> cascades;
  FitConfig config;
  std::vector<CascadeReport> training_report;
  std::string target_name;
  double sample_rate_hz = 0.0;  // rate the model was trained at
};

struct DelayEmbedding {
  std::vector<std::vector<double>> rows;  // row r = values at sample offset+r
  std::size_t offset = 0;                 // = max delay; leading rows dropped
};

/// Row n (n >= max delay) = (x[n-d_1], ..., x[n-d_k]).
DelayEmbedding delay_embed(const TimeSeries& x,
                           std::span<const std::size_t> delays);

/// Ratio of post- to pre-cascade residual norm; the caller accepts a
/// cascade iff the result is < 1. A zero previous norm means the fit is
/// already perfect and returns +infinity (nothing left to accept).
double residue_criterion(double prev_residual_norm, double new_residual_norm);

/// Greedy parallel-cascade fit: repeatedly take the highest-MI unused
/// feature, fit a fuzzy system to the current residual, and keep the
/// cascade while the inner-validation residual keeps shrinking.
FpcModel fit(const FeatureBank& bank, const TimeSeries& target,
             const FitConfig& cfg = {});

/// Sum of cascade outputs over the bank; leading max-delay samples hold the
/// first computable value so the output length matches the bank.
TimeSeries predict(const FpcModel& model, const FeatureBank& bank);

}  // namespace fpc
