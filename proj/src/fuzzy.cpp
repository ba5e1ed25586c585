#include "fpc/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fpc/errors.hpp"

namespace fpc {

double membership(const GaussianSet& set, double v) {
  const double z = (v - set.center) / set.sigma;
  return std::exp(-z * z);
}

std::size_t Partition::best_match(double v) const {
  std::size_t best = 0;
  double best_mu = membership(sets[0], v);
  for (std::size_t i = 1; i < sets.size(); ++i) {
    const double mu = membership(sets[i], v);
    if (mu > best_mu) {
      best = i;
      best_mu = mu;
    }
  }
  return best;
}

Partition make_partition(double low, double high, std::size_t n_sets) {
  if (!(low < high)) throw InvalidArgument("make_partition: need low < high");
  if (n_sets < 2) throw InvalidArgument("make_partition: need at least 2 sets");

  const double spacing = (high - low) / static_cast<double>(n_sets - 1);
  Partition p;
  p.domain_low = low;
  p.domain_high = high;
  p.sets.reserve(n_sets);
  for (std::size_t i = 0; i < n_sets; ++i) {
    p.sets.push_back({low + spacing * static_cast<double>(i), spacing / 2.0,
                      "S" + std::to_string(i + 1)});
  }
  return p;
}

RuleBase extract_rules(const std::vector<std::vector<double>>& inputs,
                       std::span<const double> outputs,
                       std::vector<Partition> input_partitions,
                       Partition output_partition) {
  if (inputs.empty()) throw InvalidArgument("extract_rules: no training data");
  if (inputs.size() != outputs.size())
    throw InvalidArgument("extract_rules: inputs/outputs length mismatch (" +
                          std::to_string(inputs.size()) + " vs " +
                          std::to_string(outputs.size()) + ")");
  const std::size_t n_vars = input_partitions.size();
  if (n_vars == 0) throw InvalidArgument("extract_rules: no input partitions");
  for (const auto& row : inputs)
    if (row.size() != n_vars)
      throw InvalidArgument("extract_rules: sample arity mismatch");

  struct Candidate {
    std::size_t consequent;
    double weight;
  };
  // Ordered map gives a deterministic, lexicographic rule ordering.
  std::map<std::vector<std::size_t>, Candidate> table;

  for (std::size_t s = 0; s < inputs.size(); ++s) {
    std::vector<std::size_t> ant(n_vars);
    double degree = 1.0;
    for (std::size_t k = 0; k < n_vars; ++k) {
      ant[k] = input_partitions[k].best_match(inputs[s][k]);
      degree *= membership(input_partitions[k].sets[ant[k]], inputs[s][k]);
    }
    const std::size_t cons = output_partition.best_match(outputs[s]);
    degree *= membership(output_partition.sets[cons], outputs[s]);

    auto it = table.find(ant);
    if (it == table.end()) {
      table.emplace(std::move(ant), Candidate{cons, degree});
    } else if (degree > it->second.weight) {
      // Strictly greater: on equal degrees the earlier sample stands.
      it->second = Candidate{cons, degree};
    }
  }

  RuleBase rb;
  rb.input_partitions = std::move(input_partitions);
  rb.output_partition = std::move(output_partition);
  rb.rules.reserve(table.size());
  for (const auto& [ant, cand] : table)
    rb.rules.push_back({ant, cand.consequent, cand.weight});
  return rb;
}

double infer(const RuleBase& rb, std::span<const double> x,
             const InferenceOptions& opt) {
  if (rb.rules.empty()) throw InvalidArgument("infer: empty rule base");
  if (x.size() != rb.n_inputs())
    throw InvalidArgument("infer: expected " + std::to_string(rb.n_inputs()) +
                          " inputs, got " + std::to_string(x.size()));
  if (opt.cog_grid_points < 2)
    throw InvalidArgument("infer: COG grid needs at least 2 points");

  std::vector<double> firing(rb.rules.size());
  for (std::size_t p = 0; p < rb.rules.size(); ++p) {
    const auto& rule = rb.rules[p];
    double f = opt.use_rule_weights ? rule.weight : 1.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      f *= membership(rb.input_partitions[k].sets[rule.antecedent[k]], x[k]);
    firing[p] = f;
  }

  const double lo = rb.output_partition.domain_low;
  const double hi = rb.output_partition.domain_high;
  const std::size_t g = opt.cog_grid_points;
  const double step = (hi - lo) / static_cast<double>(g - 1);

  // Trapezoidal COG over the max-aggregated output membership.
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    const double y = lo + step * static_cast<double>(i);
    double agg = 0.0;
    for (std::size_t p = 0; p < rb.rules.size(); ++p) {
      const double v =
          firing[p] *
          membership(rb.output_partition.sets[rb.rules[p].consequent], y);
      if (v > agg) agg = v;
    }
    const double w = (i == 0 || i == g - 1) ? 0.5 : 1.0;
    num += w * y * agg;
    den += w * agg;
  }

  if (den * step < 1e-12) return (lo + hi) / 2.0;  // no rule covers x
  return num / den;
}

RuleBase fit_miso(const std::vector<std::vector<double>>& inputs,
                  std::span<const double> outputs, std::size_t n_mx,
                  std::size_t n_my) {
  if (inputs.empty() || outputs.empty())
    throw InvalidArgument("fit_miso: no training data");
  if (inputs.size() != outputs.size())
    throw InvalidArgument("fit_miso: inputs/outputs length mismatch");

  const std::size_t n_vars = inputs[0].size();
  if (n_vars == 0) throw InvalidArgument("fit_miso: zero-arity samples");

  std::vector<Partition> in_parts;
  in_parts.reserve(n_vars);
  for (std::size_t k = 0; k < n_vars; ++k) {
    double lo = inputs[0][k], hi = inputs[0][k];
    for (const auto& row : inputs) {
      lo = std::min(lo, row[k]);
      hi = std::max(hi, row[k]);
    }
    if (!(lo < hi))
      throw FitError("fit_miso: input variable " + std::to_string(k + 1) +
                     " has zero range");
    in_parts.push_back(make_partition(lo, hi, n_mx));
  }

  const auto [lo_it, hi_it] = std::minmax_element(outputs.begin(), outputs.end());
  if (!(*lo_it < *hi_it))
    throw FitError("fit_miso: output variable has zero range");
  Partition out_part = make_partition(*lo_it, *hi_it, n_my);

  return extract_rules(inputs, outputs, std::move(in_parts), std::move(out_part));
}

std::string describe_rules(const RuleBase& rb) {
  std::ostringstream os;
  for (const auto& rule : rb.rules) {
    os << "IF ";
    for (std::size_t k = 0; k < rule.antecedent.size(); ++k) {
      if (k > 0) os << " AND ";
      os << "x" << (k + 1) << " is "
         << rb.input_partitions[k].sets[rule.antecedent[k]].label;
    }
    os << " THEN y is " << rb.output_partition.sets[rule.consequent].label
       << " (w=" << rule.weight << ")\n";
  }
  return os.str();
}

}  // namespace fpc
