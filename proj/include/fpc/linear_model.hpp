#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fpc/feature_bank.hpp"
#include "fpc/time_series.hpp"

namespace fpc {

/// Affine model over a delayed feature design matrix. Column i regresses
/// feature regressor_names[i] at lag regressor_delays[i] samples.
struct LinearModel {
  std::vector<double> weights;
  double intercept = 0.0;
  std::vector<std::string> regressor_names;
  std::vector<std::size_t> regressor_delays;
  std::string target_name;
  double training_rmse = 0.0;
  bool rank_warning = false;  // design matrix was rank deficient
  std::size_t rank = 0;
};

/// Least squares over every bank feature at every listed delay, solved by a
/// rank-revealing orthogonal decomposition. A rank-deficient design yields
/// the minimum-norm solution and sets rank_warning.
LinearModel fit_lr(const FeatureBank& bank, const TimeSeries& target,
                   std::span<const std::size_t> delays);

/// Affine combination of the delayed regressors; the first max-delay
/// samples hold the first computable value so the output length matches
/// the bank.
TimeSeries predict_lr(const LinearModel& model, const FeatureBank& bank);

}  // namespace fpc
