#include "fpc/model_io.hpp"

#include <json.hpp>

#include "fpc/errors.hpp"

namespace fpc {

namespace {

using nlohmann::json;

json partition_to_json(const Partition& p) {
  json sets = json::array();
  for (const auto& s : p.sets)
    sets.push_back({{"center", s.center}, {"sigma", s.sigma}, {"label", s.label}});
  return {{"domain_low", p.domain_low},
          {"domain_high", p.domain_high},
          {"sets", std::move(sets)}};
}

Partition partition_from_json(const json& j) {
  Partition p;
  p.domain_low = j.at("domain_low").get<double>();
  p.domain_high = j.at("domain_high").get<double>();
  for (const auto& s : j.at("sets")) {
    p.sets.push_back({s.at("center").get<double>(), s.at("sigma").get<double>(),
                      s.at("label").get<std::string>()});
  }
  return p;
}

json rule_base_to_json(const RuleBase& rb) {
  json parts = json::array();
  for (const auto& p : rb.input_partitions) parts.push_back(partition_to_json(p));
  json rules = json::array();
  for (const auto& r : rb.rules)
    rules.push_back({{"antecedent", r.antecedent},
                     {"consequent", r.consequent},
                     {"weight", r.weight}});
  return {{"input_partitions", std::move(parts)},
          {"output_partition", partition_to_json(rb.output_partition)},
          {"rules", std::move(rules)}};
}

RuleBase rule_base_from_json(const json& j) {
  RuleBase rb;
  for (const auto& p : j.at("input_partitions"))
    rb.input_partitions.push_back(partition_from_json(p));
  rb.output_partition = partition_from_json(j.at("output_partition"));
  for (const auto& r : j.at("rules")) {
    rb.rules.push_back({r.at("antecedent").get<std::vector<std::size_t>>(),
                        r.at("consequent").get<std::size_t>(),
                        r.at("weight").get<double>()});
  }
  return rb;
}

json config_to_json(const FitConfig& c) {
  return {{"n_r", c.n_r},
          {"n_mx", c.n_mx},
          {"n_my", c.n_my},
          {"delay_step", c.delay_step},
          {"mi_bins", c.mi_bins},
          {"max_cascades", c.max_cascades},
          {"inner_validation_fraction", c.inner_validation_fraction},
          {"rerank_per_cascade", c.rerank_per_cascade},
          {"use_rule_weights", c.use_rule_weights},
          {"cog_grid_points", c.cog_grid_points}};
}

FitConfig config_from_json(const json& j) {
  FitConfig c;
  c.n_r = j.at("n_r").get<std::size_t>();
  c.n_mx = j.at("n_mx").get<std::size_t>();
  c.n_my = j.at("n_my").get<std::size_t>();
  c.delay_step = j.at("delay_step").get<std::size_t>();
  c.mi_bins = j.at("mi_bins").get<std::size_t>();
  c.max_cascades = j.at("max_cascades").get<std::size_t>();
  c.inner_validation_fraction = j.at("inner_validation_fraction").get<double>();
  c.rerank_per_cascade = j.at("rerank_per_cascade").get<bool>();
  c.use_rule_weights = j.at("use_rule_weights").get<bool>();
  c.cog_grid_points = j.at("cog_grid_points").get<std::size_t>();
  return c;
}

json envelope(const char* kind) {
  return {{"format", "fpc-model"}, {"version", kModelFormatVersion}, {"kind", kind}};
}

json parse_envelope(const std::string& bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw ModelIoError(std::string("malformed model payload: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "fpc-model")
    throw ModelIoError("malformed model payload: missing fpc-model envelope");
  const int version = j.value("version", -1);
  if (version != kModelFormatVersion)
    throw ModelIoError("model version mismatch: file has version " +
                       std::to_string(version) + ", this build reads version " +
                       std::to_string(kModelFormatVersion));
  return j;
}

}  // namespace

std::string save_model(const FpcModel& model) {
  json j = envelope("fpc");
  j["target_name"] = model.target_name;
  j["sample_rate_hz"] = model.sample_rate_hz;
  j["config"] = config_to_json(model.config);
  json cascades = json::array();
  for (const auto& c : model.cascades)
    cascades.push_back({{"input_name", c.input_name},
                        {"delays", c.delays},
                        {"system", rule_base_to_json(c.system)}});
  j["cascades"] = std::move(cascades);
  json report = json::array();
  for (const auto& r : model.training_report)
    report.push_back({{"input_name", r.input_name},
                      {"rcr", r.rcr},
                      {"validation_residual_norm", r.validation_residual_norm},
                      {"training_rmse", r.training_rmse}});
  j["training_report"] = std::move(report);
  return j.dump(2) + "\n";
}

std::string save_model(const LinearModel& model) {
  json j = envelope("linear");
  j["target_name"] = model.target_name;
  j["weights"] = model.weights;
  j["intercept"] = model.intercept;
  j["regressor_names"] = model.regressor_names;
  j["regressor_delays"] = model.regressor_delays;
  j["training_rmse"] = model.training_rmse;
  j["rank_warning"] = model.rank_warning;
  j["rank"] = model.rank;
  return j.dump(2) + "\n";
}

ModelKind probe_model_kind(const std::string& bytes) {
  const json j = parse_envelope(bytes);
  const std::string kind = j.value("kind", "");
  if (kind == "fpc") return ModelKind::Fpc;
  if (kind == "linear") return ModelKind::Linear;
  throw ModelIoError("unknown model kind '" + kind + "'");
}

FpcModel load_fpc_model(const std::string& bytes) {
  const json j = parse_envelope(bytes);
  if (j.value("kind", "") != "fpc")
    throw ModelIoError("expected kind 'fpc', file holds '" +
                       j.value("kind", "") + "'");
  try {
    FpcModel model;
    model.target_name = j.at("target_name").get<std::string>();
    model.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    model.config = config_from_json(j.at("config"));
    for (const auto& c : j.at("cascades")) {
      model.cascades.push_back(
          {c.at("input_name").get<std::string>(),
           c.at("delays").get<std::vector<std::size_t>>(),
           rule_base_from_json(c.at("system"))});
    }
    for (const auto& r : j.at("training_report")) {
      model.training_report.push_back(
          {r.at("input_name").get<std::string>(), r.at("rcr").get<double>(),
           r.at("validation_residual_norm").get<double>(),
           r.at("training_rmse").get<double>()});
    }
    return model;
  } catch (const json::exception& e) {
    throw ModelIoError(std::string("malformed fpc model payload: ") + e.what());
  }
}

LinearModel load_linear_model(const std::string& bytes) {
  const json j = parse_envelope(bytes);
  if (j.value("kind", "") != "linear")
    throw ModelIoError("expected kind 'linear', file holds '" +
                       j.value("kind", "") + "'");
  try {
    LinearModel model;
    model.target_name = j.at("target_name").get<std::string>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.intercept = j.at("intercept").get<double>();
    model.regressor_names = j.at("regressor_names").get<std::vector<std::string>>();
    model.regressor_delays =
        j.at("regressor_delays").get<std::vector<std::size_t>>();
    model.training_rmse = j.at("training_rmse").get<double>();
    model.rank_warning = j.at("rank_warning").get<bool>();
    model.rank = j.at("rank").get<std::size_t>();
    return model;
  } catch (const json::exception& e) {
    throw ModelIoError(std::string("malformed linear model payload: ") + e.what());
  }
}

}  // namespace fpc
