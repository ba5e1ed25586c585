#pragma once

#include <string>
#include <vector>

#include "fpc/cascade.hpp"
#include "fpc/wavelet.hpp"

namespace fpc {

/// File-backed defaults for the command-line tool. Command-line flags
/// override whatever the file sets.
struct RunConfig {
  FitConfig fit;
  std::vector<BandDef> bands = default_bands();
  FeatureBankOptions bank;
  std::string input_path;
  std::string target_column = "target";
  std::string model_path;
  std::string out_path;
};

/// Parses the JSON configuration. Every key is optional; unknown keys are
/// rejected. The embedded fit settings are validated before returning.
RunConfig parse_run_config(const std::string& json_text);

/// Parses "name:low:high,name:low:high,..." band lists, e.g.
/// "theta:4:8,alpha:8:13,beta:13:31".
std::vector<BandDef> parse_bands(const std::string& text);

}  // namespace fpc
