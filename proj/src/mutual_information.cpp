#include "fpc/mutual_information.hpp"

#include <algorithm>
#include <cmath>

#include "fpc/errors.hpp"

namespace fpc {

namespace {

std::size_t bin_of(double v, double lo, double width, std::size_t bins) {
  auto idx = static_cast<std::size_t>((v - lo) / width *
                                      static_cast<double>(bins));
  return std::min(idx, bins - 1);
}

}  // namespace

double mutual_information(std::span<const double> x, std::span<const double> y,
                          std::size_t bins, bool* degenerate) {
  if (degenerate) *degenerate = false;
  if (bins < 2) throw InvalidArgument("mutual_information: need >= 2 bins");
  if (x.size() != y.size())
    throw InvalidArgument("mutual_information: length mismatch (" +
                          std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  if (x.size() < bins)
    throw InvalidArgument("mutual_information: need at least as many samples as bins");

  const auto [x_lo, x_hi] = std::minmax_element(x.begin(), x.end());
  const auto [y_lo, y_hi] = std::minmax_element(y.begin(), y.end());
  if (!(*x_lo < *x_hi) || !(*y_lo < *y_hi)) {
    if (degenerate) *degenerate = true;
    return 0.0;  // single occupied bin carries no information
  }

  const double xw = *x_hi - *x_lo;
  const double yw = *y_hi - *y_lo;
  std::vector<std::size_t> joint(bins * bins, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t bx = bin_of(x[i], *x_lo, xw, bins);
    const std::size_t by = bin_of(y[i], *y_lo, yw, bins);
    ++joint[bx * bins + by];
  }

  std::vector<std::size_t> mx(bins, 0), my(bins, 0);
  for (std::size_t i = 0; i < bins; ++i)
    for (std::size_t j = 0; j < bins; ++j) {
      mx[i] += joint[i * bins + j];
      my[j] += joint[i * bins + j];
    }

  // Summed in sorted order so that mi(x, y) == mi(y, x) bit-for-bit: the
  // transposed histogram yields the same term multiset.
  const double n = static_cast<double>(x.size());
  std::vector<double> terms;
  terms.reserve(bins * bins);
  for (std::size_t i = 0; i < bins; ++i)
    for (std::size_t j = 0; j < bins; ++j) {
      const std::size_t c = joint[i * bins + j];
      if (c == 0) continue;
      const double p = static_cast<double>(c) / n;
      terms.push_back(p * std::log(static_cast<double>(c) * n /
                                   (static_cast<double>(mx[i]) *
                                    static_cast<double>(my[j]))));
    }
  std::sort(terms.begin(), terms.end());
  double mi = 0.0;
  for (double t : terms) mi += t;

  if (mi < 0.0 && mi > -1e-12) mi = 0.0;  // rounding only; true MI >= 0
  return mi;
}

double mutual_information(const TimeSeries& x, const TimeSeries& y,
                          std::size_t bins, bool* degenerate) {
  return mutual_information(std::span<const double>(x.samples),
                            std::span<const double>(y.samples), bins,
                            degenerate);
}

MiRanking rank_features(const FeatureBank& bank, const TimeSeries& target,
                        std::size_t bins) {
  if (bank.empty()) throw InvalidArgument("rank_features: empty bank");
  if (bank.length() != target.size())
    throw DataError("rank_features: bank and target lengths differ");

  MiRanking ranking;
  ranking.entries.reserve(bank.size());
  for (const auto& name : bank.names()) {
    ranking.entries.push_back(
        {name, mutual_information(bank.at(name), target, bins)});
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const MiRanking::Entry& a, const MiRanking::Entry& b) {
              if (a.mi_nats != b.mi_nats) return a.mi_nats > b.mi_nats;
              return a.name < b.name;
            });
  return ranking;
}

}  // namespace fpc
