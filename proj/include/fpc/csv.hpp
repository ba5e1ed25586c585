#pragma once

#include <span>
#include <string>
#include <vector>

#include "fpc/time_series.hpp"

namespace fpc {

/// Columns of a signal CSV: `t_sec` plus one named series per column, all
/// sharing one sample rate and length.
struct SignalTable {
  std::vector<TimeSeries> columns;
  double sample_rate_hz = 0.0;

  const TimeSeries& at(const std::string& name) const;
  bool contains(const std::string& name) const;
};

/// Reads a CSV whose first column is `t_sec` with a uniform monotone step.
/// Throws DataError on malformed input (missing header, ragged rows,
/// non-uniform time base, non-finite values).
SignalTable read_signal_csv(const std::string& path);

/// Writes `t_sec` + one column per series. All series must share rate and
/// length. Values are printed round-trip exact, so rereading reproduces
/// the doubles bit-for-bit.
void write_signal_csv(const std::string& path,
                      std::span<const TimeSeries> columns);

}  // namespace fpc
