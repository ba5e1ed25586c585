#include "fpc/run_config.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

#include "fpc/errors.hpp"

namespace fpc {

namespace {

using nlohmann::json;

double parse_rate(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("band " + field + " is not a number: '" + text + "'");
  }
}

}  // namespace

std::vector<BandDef> parse_bands(const std::string& text) {
  std::vector<BandDef> bands;
  std::set<std::string> seen;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto colon1 = item.find(':');
    const auto colon2 = item.find(':', colon1 == std::string::npos ? colon1 : colon1 + 1);
    if (colon1 == std::string::npos || colon2 == std::string::npos)
      throw InvalidArgument("band entry '" + item +
                            "' is not of the form name:low:high");
    BandDef band;
    band.name = item.substr(0, colon1);
    band.low_hz = parse_rate("low", item.substr(colon1 + 1, colon2 - colon1 - 1));
    band.high_hz = parse_rate("high", item.substr(colon2 + 1));
    if (band.name.empty())
      throw InvalidArgument("band entry '" + item + "' has an empty name");
    if (!(band.low_hz > 0.0) || !(band.high_hz > band.low_hz))
      throw InvalidArgument("band '" + band.name +
                            "' needs 0 < low < high");
    if (!seen.insert(band.name).second)
      throw InvalidArgument("duplicate band name '" + band.name + "'");
    bands.push_back(std::move(band));
  }
  if (bands.empty()) throw InvalidArgument("band list is empty");
  return bands;
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config root must be an object");

  RunConfig rc;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "n_r") rc.fit.n_r = value.get<std::size_t>();
      else if (key == "n_mx") rc.fit.n_mx = value.get<std::size_t>();
      else if (key == "n_my") rc.fit.n_my = value.get<std::size_t>();
      else if (key == "delay_step") rc.fit.delay_step = value.get<std::size_t>();
      else if (key == "mi_bins") rc.fit.mi_bins = value.get<std::size_t>();
      else if (key == "max_cascades") rc.fit.max_cascades = value.get<std::size_t>();
      else if (key == "inner_validation_fraction")
        rc.fit.inner_validation_fraction = value.get<double>();
      else if (key == "rerank_per_cascade")
        rc.fit.rerank_per_cascade = value.get<bool>();
      else if (key == "use_rule_weights")
        rc.fit.use_rule_weights = value.get<bool>();
      else if (key == "cog_grid_points")
        rc.fit.cog_grid_points = value.get<std::size_t>();
      else if (key == "bands") rc.bands = parse_bands(value.get<std::string>());
      else if (key == "scales_per_band")
        rc.bank.scales_per_band = value.get<std::size_t>();
      else if (key == "smooth_window") {
        if (value.is_null()) rc.bank.smooth_window.reset();
        else rc.bank.smooth_window = value.get<std::size_t>();
      }
      else if (key == "input") rc.input_path = value.get<std::string>();
      else if (key == "target") rc.target_column = value.get<std::string>();
      else if (key == "model") rc.model_path = value.get<std::string>();
      else if (key == "out") rc.out_path = value.get<std::string>();
      else throw InvalidArgument("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  rc.fit.validate();
  return rc;
}

}  // namespace fpc
