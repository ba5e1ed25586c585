#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "fpc/time_series.hpp"

namespace fpc {

/// Named collection of candidate input series, all aligned to one common
/// sample rate and length. Iteration order is insertion order, which keeps
/// every downstream computation deterministic.
class FeatureBank {
 public:
  /// Adds a series under its own name. Throws DataError on duplicate names
  /// or rate/length mismatch with the existing members.
  void add(TimeSeries ts);

  bool contains(const std::string& name) const;
  const TimeSeries& at(const std::string& name) const;

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return series_.size(); }
  bool empty() const { return series_.empty(); }

  std::size_t length() const;
  double sample_rate_hz() const;

  /// Bank with every feature cut to samples [from, to).
  FeatureBank slice(std::size_t from, std::size_t to) const;

 private:
  std::vector<std::string> names_;
  std::vector<TimeSeries> series_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace fpc
