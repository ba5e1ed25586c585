#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fpc/feature_bank.hpp"
#include "fpc/time_series.hpp"

namespace fpc {

/// Histogram plug-in mutual information in nats: equal-width bins over each
/// variable's [min, max], I = sum p(x,y) ln(p(x,y)/(p(x)p(y))) over occupied
/// cells. A constant variable yields 0 and sets *degenerate when given.
double mutual_information(std::span<const double> x, std::span<const double> y,
                          std::size_t bins, bool* degenerate = nullptr);

double mutual_information(const TimeSeries& x, const TimeSeries& y,
                          std::size_t bins, bool* degenerate = nullptr);

/// Feature names with their MI against a target, descending.
struct MiRanking {
  struct Entry {
    std::string name;
    double mi_nats = 0.0;
  };
  std::vector<Entry> entries;
};

/// One entry per bank feature, sorted by descending MI; ties break by
/// ascending feature name.
MiRanking rank_features(const FeatureBank& bank, const TimeSeries& target,
                        std::size_t bins);

}  // namespace fpc
