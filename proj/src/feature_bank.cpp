#include "fpc/feature_bank.hpp"

#include "fpc/errors.hpp"

namespace fpc {

void FeatureBank::add(TimeSeries ts) {
  ts.validate();
  if (ts.name.empty()) throw DataError("FeatureBank: feature needs a name");
  if (index_.count(ts.name))
    throw DataError("FeatureBank: duplicate feature '" + ts.name + "'");
  if (!series_.empty()) {
    if (ts.sample_rate_hz != series_.front().sample_rate_hz ||
        ts.size() != series_.front().size())
      throw DataError("FeatureBank: feature '" + ts.name +
                      "' does not match bank rate/length");
  }
  index_[ts.name] = series_.size();
  names_.push_back(ts.name);
  series_.push_back(std::move(ts));
}

bool FeatureBank::contains(const std::string& name) const {
  return index_.count(name) != 0;
}

const TimeSeries& FeatureBank::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw DataError("FeatureBank: no feature named '" + name + "'");
  return series_[it->second];
}

std::size_t FeatureBank::length() const {
  if (series_.empty()) throw DataError("FeatureBank: empty bank");
  return series_.front().size();
}

double FeatureBank::sample_rate_hz() const {
  if (series_.empty()) throw DataError("FeatureBank: empty bank");
  return series_.front().sample_rate_hz;
}

FeatureBank FeatureBank::slice(std::size_t from, std::size_t to) const {
  FeatureBank out;
  for (const auto& s : series_) out.add(s.slice(from, to));
  return out;
}

}  // namespace fpc
