#include "fpc/linear_model.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "fpc/errors.hpp"

namespace fpc {

LinearModel fit_lr(const FeatureBank& bank, const TimeSeries& target,
                   std::span<const std::size_t> delays) {
  if (bank.empty()) throw InvalidArgument("fit_lr: empty bank");
  if (delays.empty()) throw InvalidArgument("fit_lr: no delays given");
  target.validate();
  if (bank.length() != target.size() ||
      bank.sample_rate_hz() != target.sample_rate_hz)
    throw DataError("fit_lr: bank and target are not aligned");

  const std::size_t max_delay = *std::max_element(delays.begin(), delays.end());
  if (max_delay >= target.size())
    throw InvalidArgument("fit_lr: delay exceeds series length");

  const std::size_t rows = target.size() - max_delay;
  const std::size_t n_reg = bank.size() * delays.size();
  if (rows < n_reg + 1)
    throw FitError("fit_lr: fewer usable rows (" + std::to_string(rows) +
                   ") than design columns (" + std::to_string(n_reg + 1) + ")");

  LinearModel model;
  model.target_name = target.name;
  for (const auto& name : bank.names())
    for (std::size_t d : delays) {
      model.regressor_names.push_back(name);
      model.regressor_delays.push_back(d);
    }

  Eigen::MatrixXd design(rows, n_reg + 1);
  Eigen::VectorXd rhs(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t n = r + max_delay;
    std::size_t c = 0;
    for (const auto& name : bank.names()) {
      const auto& x = bank.at(name).samples;
      for (std::size_t d : delays) design(r, c++) = x[n - d];
    }
    design(r, n_reg) = 1.0;  // intercept column
    rhs(r) = target.samples[n];
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  const Eigen::VectorXd solution = cod.solve(rhs);

  model.rank = static_cast<std::size_t>(cod.rank());
  model.rank_warning = model.rank < n_reg + 1;
  model.weights.assign(solution.data(), solution.data() + n_reg);
  model.intercept = solution(n_reg);
  model.training_rmse =
      (design * solution - rhs).norm() / std::sqrt(static_cast<double>(rows));
  return model;
}

TimeSeries predict_lr(const LinearModel& model, const FeatureBank& bank) {
  if (model.weights.size() != model.regressor_names.size() ||
      model.weights.size() != model.regressor_delays.size())
    throw InvalidArgument("predict_lr: inconsistent model");
  for (const auto& name : model.regressor_names)
    if (!bank.contains(name))
      throw DataError("predict_lr: bank is missing regressor '" + name + "'");

  const std::size_t len = bank.length();
  std::size_t max_delay = 0;
  for (std::size_t d : model.regressor_delays) max_delay = std::max(max_delay, d);
  if (max_delay >= len)
    throw DataError("predict_lr: bank shorter than the model's maximum delay");

  std::vector<double> out(len, 0.0);
  for (std::size_t n = max_delay; n < len; ++n) {
    double acc = model.intercept;
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
      acc += model.weights[i] *
             bank.at(model.regressor_names[i]).samples[n - model.regressor_delays[i]];
    }
    out[n] = acc;
  }
  for (std::size_t n = 0; n < max_delay; ++n) out[n] = out[max_delay];

  return TimeSeries(std::move(out), bank.sample_rate_hz(),
                    model.target_name.empty() ? "lr_prediction"
                                              : model.target_name + "_lr");
}

}  // namespace fpc
