#include "fpc/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fpc/errors.hpp"

namespace fpc {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& cell, const std::string& path,
                    std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    if (!std::isfinite(v)) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw DataError(path + ":" + std::to_string(line_no) +
                    ": cannot parse value '" + cell + "'");
  }
}

}  // namespace

const TimeSeries& SignalTable::at(const std::string& name) const {
  for (const auto& c : columns)
    if (c.name == name) return c;
  throw DataError("no column named '" + name + "'");
}

bool SignalTable::contains(const std::string& name) const {
  for (const auto& c : columns)
    if (c.name == name) return true;
  return false;
}

SignalTable read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_line(line);
  if (header.empty() || header[0] != "t_sec")
    throw DataError(path + ": first column must be 't_sec'");
  if (header.size() < 2)
    throw DataError(path + ": need at least one data column");

  const std::size_t n_cols = header.size();
  std::vector<double> times;
  std::vector<std::vector<double>> data(n_cols - 1);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != n_cols)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(n_cols) + " cells, got " +
                      std::to_string(cells.size()));
    times.push_back(parse_double(cells[0], path, line_no));
    for (std::size_t c = 1; c < n_cols; ++c)
      data[c - 1].push_back(parse_double(cells[c], path, line_no));
  }

  if (times.size() < 2)
    throw DataError(path + ": need at least two data rows");

  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw DataError(path + ": t_sec must be increasing");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (std::abs(step - dt) > 1e-6 * dt)
      throw DataError(path + ": non-uniform t_sec step near row " +
                      std::to_string(i + 1));
  }

  SignalTable table;
  table.sample_rate_hz = 1.0 / dt;
  for (std::size_t c = 1; c < n_cols; ++c) {
    table.columns.emplace_back(std::move(data[c - 1]), table.sample_rate_hz,
                               header[c]);
    table.columns.back().validate();
  }
  return table;
}

void write_signal_csv(const std::string& path,
                      std::span<const TimeSeries> columns) {
  if (columns.empty()) throw InvalidArgument("write_signal_csv: no columns");
  const double rate = columns[0].sample_rate_hz;
  const std::size_t len = columns[0].size();
  for (const auto& c : columns) {
    c.validate();
    if (c.sample_rate_hz != rate || c.size() != len)
      throw DataError("write_signal_csv: misaligned column '" + c.name + "'");
  }

  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");

  out << "t_sec";
  for (const auto& c : columns) out << ',' << c.name;
  out << '\n';

  char buf[40];
  for (std::size_t i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(i) / rate);
    out << buf;
    for (const auto& c : columns) {
      std::snprintf(buf, sizeof(buf), "%.17g", c.samples[i]);
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace fpc
