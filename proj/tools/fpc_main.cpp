#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fpc/cascade.hpp"
#include "fpc/csv.hpp"
#include "fpc/errors.hpp"
#include "fpc/linear_model.hpp"
#include "fpc/model_io.hpp"
#include "fpc/mutual_information.hpp"
#include "fpc/run_config.hpp"
#include "fpc/synth.hpp"
#include "fpc/wavelet.hpp"

namespace {

using fpc::RunConfig;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fpc::DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fpc::DataError("cannot write '" + path + "'");
  out << content;
  if (!out) throw fpc::DataError("write to '" + path + "' failed");
}

// Flags shared by the subcommands that fit or configure models. Values are
// copied onto a RunConfig only when the flag was actually given, so the
// precedence is flags > config file > built-in defaults.
class ConfigFlags {
 public:
  void attach(CLI::App* app, bool with_fit) {
    app->add_option("--config", config_path_, "JSON configuration file");
    add(app->add_option("--bands", bands_,
                        "band list, e.g. theta:4:8,alpha:8:13,beta:13:31"),
        [this](RunConfig& rc) { rc.bands = fpc::parse_bands(bands_); });
    add(app->add_option("--scales-per-band", scales_, "wavelet scales per band"),
        [this](RunConfig& rc) { rc.bank.scales_per_band = scales_; });
    add(app->add_option("--smooth-window", smooth_,
                        "power smoothing window in samples (0 = off)"),
        [this](RunConfig& rc) { rc.bank.smooth_window = smooth_; });
    if (!with_fit) return;
    auto& f = fit_;
    add(app->add_option("--n-r", f.n_r, "delayed copies per cascade input"),
        [this](RunConfig& rc) { rc.fit.n_r = fit_.n_r; });
    add(app->add_option("--n-mx", f.n_mx, "fuzzy sets per input variable"),
        [this](RunConfig& rc) { rc.fit.n_mx = fit_.n_mx; });
    add(app->add_option("--n-my", f.n_my, "fuzzy sets on the output"),
        [this](RunConfig& rc) { rc.fit.n_my = fit_.n_my; });
    add(app->add_option("--delay-step", f.delay_step, "samples between delays"),
        [this](RunConfig& rc) { rc.fit.delay_step = fit_.delay_step; });
    add(app->add_option("--mi-bins", f.mi_bins, "histogram bins for MI"),
        [this](RunConfig& rc) { rc.fit.mi_bins = fit_.mi_bins; });
    add(app->add_option("--max-cascades", f.max_cascades,
                        "cascade cap (0 = pool size)"),
        [this](RunConfig& rc) { rc.fit.max_cascades = fit_.max_cascades; });
    add(app->add_option("--inner-validation-fraction",
                        f.inner_validation_fraction,
                        "tail fraction held out during fitting"),
        [this](RunConfig& rc) {
          rc.fit.inner_validation_fraction = fit_.inner_validation_fraction;
        });
    add(app->add_flag("--rerank,!--no-rerank", f.rerank_per_cascade,
                      "re-rank the pool against each residual"),
        [this](RunConfig& rc) { rc.fit.rerank_per_cascade = fit_.rerank_per_cascade; });
    add(app->add_flag("--rule-weights,!--no-rule-weights", f.use_rule_weights,
                      "scale rule firing by learned weights"),
        [this](RunConfig& rc) { rc.fit.use_rule_weights = fit_.use_rule_weights; });
    add(app->add_option("--cog-grid-points", f.cog_grid_points,
                        "defuzzification grid resolution"),
        [this](RunConfig& rc) { rc.fit.cog_grid_points = fit_.cog_grid_points; });
  }

  /// Config file first, then every flag that was given on the command line.
  RunConfig resolve() const {
    RunConfig rc;
    if (!config_path_.empty()) rc = fpc::parse_run_config(read_file(config_path_));
    for (const auto& [opt, apply] : overrides_)
      if (opt->count() > 0) apply(rc);
    rc.fit.validate();
    return rc;
  }

 private:
  void add(CLI::Option* opt, std::function<void(RunConfig&)> apply) {
    overrides_.emplace_back(opt, std::move(apply));
  }

  std::string config_path_;
  std::string bands_;
  std::size_t scales_ = 8;
  std::size_t smooth_ = 0;
  fpc::FitConfig fit_;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides_;
};

// Splits a signal table into candidate channels and the optional target
// column.
std::pair<std::vector<fpc::TimeSeries>, const fpc::TimeSeries*> split_target(
    const fpc::SignalTable& table, const std::string& target_column) {
  std::vector<fpc::TimeSeries> channels;
  const fpc::TimeSeries* target = nullptr;
  for (const auto& col : table.columns) {
    if (col.name == target_column)
      target = &col;
    else
      channels.push_back(col);
  }
  return {std::move(channels), target};
}

fpc::FeatureBank to_bank(std::vector<fpc::TimeSeries> columns) {
  fpc::FeatureBank bank;
  for (auto& col : columns) bank.add(std::move(col));
  return bank;
}

std::vector<std::size_t> lr_delays(const fpc::FitConfig& cfg) {
  std::vector<std::size_t> delays(cfg.n_r);
  for (std::size_t k = 0; k < cfg.n_r; ++k) delays[k] = (k + 1) * cfg.delay_step;
  return delays;
}

struct IoFlags {
  std::string in_path;
  std::string out_path;
  std::string model_path;
  std::string target_column;
  std::string target_csv;
  CLI::Option* in_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* model_opt = nullptr;
  CLI::Option* target_opt = nullptr;

  void attach(CLI::App* app, bool model, bool target_file = false) {
    in_opt = app->add_option("--in", in_path, "input signal CSV");
    out_opt = app->add_option("--out", out_path, "output file");
    target_opt = app->add_option("--target", target_column, "target column name");
    if (target_file)
      app->add_option("--target-csv", target_csv,
                      "read the target column from this CSV instead of --in");
    if (model)
      model_opt = app->add_option("--model", model_path, "model JSON file");
  }

  void apply(RunConfig& rc) const {
    if (in_opt->count() > 0) rc.input_path = in_path;
    if (out_opt->count() > 0) rc.out_path = out_path;
    if (target_opt->count() > 0) rc.target_column = target_column;
    if (model_opt && model_opt->count() > 0) rc.model_path = model_path;
  }
};

void require(const std::string& value, const char* flag) {
  if (value.empty())
    throw fpc::InvalidArgument(std::string(flag) + " is required");
}

struct LoadedData {
  std::vector<fpc::TimeSeries> features;
  fpc::TimeSeries target;
};

// The target column comes from the input CSV, or from a separate aligned
// CSV when --target-csv was given (the layout the synth subcommand emits).
LoadedData load_features_and_target(const RunConfig& rc, const IoFlags& io) {
  const fpc::SignalTable table = fpc::read_signal_csv(rc.input_path);
  auto [features, inline_target] = split_target(table, rc.target_column);
  if (features.empty())
    throw fpc::DataError("no feature columns in '" + rc.input_path + "'");
  if (!io.target_csv.empty()) {
    const fpc::SignalTable side = fpc::read_signal_csv(io.target_csv);
    for (const auto& col : side.columns)
      if (col.name == rc.target_column) return {std::move(features), col};
    throw fpc::DataError("no column named '" + rc.target_column + "' in '" +
                         io.target_csv + "'");
  }
  if (!inline_target)
    throw fpc::DataError("no column named '" + rc.target_column + "' in '" +
                         rc.input_path + "'");
  return {std::move(features), *inline_target};
}

void cmd_extract_features(const ConfigFlags& cfg_flags, const IoFlags& io) {
  RunConfig rc = cfg_flags.resolve();
  io.apply(rc);
  require(rc.input_path, "--in");
  require(rc.out_path, "--out");
  const fpc::SignalTable table = fpc::read_signal_csv(rc.input_path);
  auto [channels, target] = split_target(table, rc.target_column);
  if (channels.empty())
    throw fpc::DataError("no channel columns in '" + rc.input_path + "'");
  const fpc::FeatureBank bank = fpc::build_feature_bank(channels, rc.bands, rc.bank);
  std::vector<fpc::TimeSeries> out_cols;
  for (const auto& name : bank.names()) out_cols.push_back(bank.at(name));
  if (target) out_cols.push_back(*target);
  fpc::write_signal_csv(rc.out_path, out_cols);
  std::cerr << "wrote " << out_cols.size() << " columns to " << rc.out_path
            << "\n";
}

void cmd_mi_rank(const ConfigFlags& cfg_flags, const IoFlags& io) {
  RunConfig rc = cfg_flags.resolve();
  io.apply(rc);
  require(rc.input_path, "--in");
  LoadedData data = load_features_and_target(rc, io);
  const fpc::MiRanking ranking = fpc::rank_features(
      to_bank(std::move(data.features)), data.target, rc.fit.mi_bins);
  std::ostringstream out;
  out << "rank,feature,mi_nats\n";
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu,%s,%.17g\n", i + 1,
                  ranking.entries[i].name.c_str(), ranking.entries[i].mi_nats);
    out << buf;
  }
  if (rc.out_path.empty())
    std::cout << out.str();
  else
    write_file(rc.out_path, out.str());
}

void cmd_train(const ConfigFlags& cfg_flags, const IoFlags& io,
               const std::string& learner) {
  RunConfig rc = cfg_flags.resolve();
  io.apply(rc);
  require(rc.input_path, "--in");
  require(rc.model_path, "--model");
  LoadedData data = load_features_and_target(rc, io);
  const fpc::FeatureBank bank = to_bank(std::move(data.features));
  if (learner == "fpc") {
    const fpc::FpcModel model = fpc::fit(bank, data.target, rc.fit);
    write_file(rc.model_path, fpc::save_model(model));
    std::cout << "cascades: " << model.cascades.size() << "\n";
    for (std::size_t i = 0; i < model.training_report.size(); ++i) {
      const auto& r = model.training_report[i];
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%zu,%s,rcr=%.6f,train_rmse=%.6f\n", i + 1,
                    r.input_name.c_str(), r.rcr, r.training_rmse);
      std::cout << buf;
    }
  } else if (learner == "lr") {
    const fpc::LinearModel model =
        fpc::fit_lr(bank, data.target, lr_delays(rc.fit));
    write_file(rc.model_path, fpc::save_model(model));
    std::cout << "train_rmse=" << model.training_rmse << "\n";
    if (model.rank_warning)
      std::cerr << "warning: design matrix is rank deficient (rank "
                << model.rank << ")\n";
  } else {
    throw fpc::InvalidArgument("unknown learner '" + learner +
                               "' (expected fpc or lr)");
  }
  std::cerr << "wrote model to " << rc.model_path << "\n";
}

void cmd_eval(const ConfigFlags& cfg_flags, const IoFlags& io,
              const std::string& pred_path) {
  RunConfig rc = cfg_flags.resolve();
  io.apply(rc);
  require(rc.input_path, "--in");
  require(rc.model_path, "--model");
  LoadedData data = load_features_and_target(rc, io);
  const fpc::FeatureBank bank = to_bank(std::move(data.features));
  const std::string bytes = read_file(rc.model_path);
  fpc::TimeSeries pred;
  const char* kind = nullptr;
  if (fpc::probe_model_kind(bytes) == fpc::ModelKind::Fpc) {
    pred = fpc::predict(fpc::load_fpc_model(bytes), bank);
    kind = "fpc";
  } else {
    pred = fpc::predict_lr(fpc::load_linear_model(bytes), bank);
    kind = "lr";
  }
  const double error = fpc::rmse(pred, data.target);
  char line[96];
  std::snprintf(line, sizeof(line), "%s,%.17g\n", kind, error);
  const std::string report = std::string("model,rmse\n") + line;
  std::cout << report;
  if (!rc.out_path.empty()) write_file(rc.out_path, report);
  if (!pred_path.empty())
    fpc::write_signal_csv(pred_path,
                          std::vector<fpc::TimeSeries>{pred, data.target});
}

struct SynthFlags {
  fpc::SynthSpec spec;
  std::string nonlinearity = "static-poly";

  void attach(CLI::App* app) {
    app->add_option("--seed", spec.seed, "generator seed");
    app->add_option("--channels", spec.n_channels, "number of channels");
    app->add_option("--duration", spec.duration_sec, "record length in seconds");
    app->add_option("--rate", spec.sample_rate_hz, "sample rate in Hz");
    app->add_option("--nonlinearity", nonlinearity,
                    "static-poly, saturating or bilinear");
    app->add_option("--snr", spec.snr_db, "target SNR in dB (inf = noise-free)");
  }

  fpc::SynthSpec resolve() const {
    fpc::SynthSpec s = spec;
    s.nonlinearity = fpc::parse_nonlinearity(nonlinearity);
    return s;
  }
};

void cmd_synth(const SynthFlags& flags, const std::string& out_dir) {
  const fpc::SynthSpec spec = flags.resolve();
  const fpc::SynthData data = fpc::generate(spec);
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  fpc::write_signal_csv((dir / "channels.csv").string(), data.channels);
  fpc::write_signal_csv((dir / "target.csv").string(),
                        std::vector<fpc::TimeSeries>{data.target});
  nlohmann::json manifest;
  manifest["nonlinearity"] = to_string(data.truth.nonlinearity);
  manifest["snr_db"] = std::isfinite(data.truth.snr_db)
                           ? nlohmann::json(data.truth.snr_db)
                           : nlohmann::json("inf");
  manifest["seed"] = spec.seed;
  manifest["sources"] = nlohmann::json::array();
  for (const auto& s : data.truth.sources) {
    manifest["sources"].push_back({{"channel", s.channel},
                                   {"band", s.band},
                                   {"delay_samples", s.delay_samples},
                                   {"feature", s.feature_name()}});
  }
  write_file((dir / "ground_truth.json").string(), manifest.dump(2) + "\n");
  std::cerr << "wrote channels.csv, target.csv, ground_truth.json to "
            << out_dir << "\n";
}

void cmd_run(const ConfigFlags& cfg_flags, const SynthFlags& synth_flags,
             const IoFlags& io, bool swap_halves) {
  RunConfig rc = cfg_flags.resolve();
  io.apply(rc);
  const fpc::SynthSpec spec = synth_flags.resolve();
  const fpc::SynthData data = fpc::generate(spec);
  const fpc::FeatureBank features =
      fpc::build_feature_bank(data.channels, rc.bands, rc.bank);
  const fpc::ExperimentReport report =
      fpc::run_experiment(features, data.target, rc.fit, swap_halves);
  std::cout << report.table();
  if (!rc.out_path.empty()) {
    std::string csv;
    for (const auto& row : report.csv_rows()) csv += row + "\n";
    write_file(rc.out_path, csv);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuzzy parallel cascade identification toolkit"};
  app.require_subcommand(1);

  auto* sc_extract = app.add_subcommand(
      "extract-features", "band-power features from a channel CSV");
  ConfigFlags extract_cfg;
  IoFlags extract_io;
  extract_cfg.attach(sc_extract, false);
  extract_io.attach(sc_extract, false);

  auto* sc_rank = app.add_subcommand("mi-rank",
                                     "rank features by mutual information");
  ConfigFlags rank_cfg;
  IoFlags rank_io;
  rank_cfg.attach(sc_rank, true);
  rank_io.attach(sc_rank, false, true);

  auto* sc_train = app.add_subcommand("train", "fit a model on a feature CSV");
  ConfigFlags train_cfg;
  IoFlags train_io;
  std::string learner = "fpc";
  train_cfg.attach(sc_train, true);
  train_io.attach(sc_train, true, true);
  sc_train->add_option("--learner", learner, "fpc or lr");

  auto* sc_eval = app.add_subcommand("eval", "evaluate a saved model");
  ConfigFlags eval_cfg;
  IoFlags eval_io;
  std::string pred_path;
  eval_cfg.attach(sc_eval, true);
  eval_io.attach(sc_eval, true, true);
  sc_eval->add_option("--pred", pred_path, "also write predictions CSV here");

  auto* sc_synth = app.add_subcommand("synth", "generate a benchmark record");
  SynthFlags synth_flags;
  std::string out_dir;
  synth_flags.attach(sc_synth);
  sc_synth->add_option("--out-dir", out_dir, "output directory")->required();

  auto* sc_run = app.add_subcommand(
      "run", "synthesize, extract features and compare fpc against lr");
  ConfigFlags run_cfg;
  SynthFlags run_synth;
  IoFlags run_io;
  bool swap_halves = false;
  run_cfg.attach(sc_run, true);
  run_synth.attach(sc_run);
  run_io.attach(sc_run, false);
  sc_run->add_flag("--swap-halves", swap_halves,
                   "identify on the second half, validate on the first");

  try {
    app.parse(argc, argv);
    if (sc_extract->parsed()) cmd_extract_features(extract_cfg, extract_io);
    if (sc_rank->parsed()) cmd_mi_rank(rank_cfg, rank_io);
    if (sc_train->parsed()) cmd_train(train_cfg, train_io, learner);
    if (sc_eval->parsed()) cmd_eval(eval_cfg, eval_io, pred_path);
    if (sc_synth->parsed()) cmd_synth(synth_flags, out_dir);
    if (sc_run->parsed()) cmd_run(run_cfg, run_synth, run_io, swap_halves);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const fpc::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
