#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fpc {

/// Gaussian fuzzy set: membership(v) = exp(-((v - center)/sigma)^2).
/// Note the exponent carries no 1/2 factor.
struct GaussianSet {
  double center = 0.0;
  double sigma = 1.0;
  std::string label;
};

double membership(const GaussianSet& set, double v);

/// Ordered Gaussian sets partitioning one variable's domain.
struct Partition {
  std::vector<GaussianSet> sets;
  double domain_low = 0.0;
  double domain_high = 0.0;

  /// Index of the set with the largest membership at v; ties resolve to
  /// the lowest index.
  std::size_t best_match(double v) const;
};

/// Equally spaced centers from low to high, sigma = spacing/2 everywhere.
/// With that sigma the worst-covered point (midway between neighbors) still
/// reaches membership exp(-1), which is the completeness floor we check.
Partition make_partition(double low, double high, std::size_t n_sets);

/// One learned IF-THEN rule. `antecedent[k]` indexes a set of input
/// partition k; `weight` is the rule's degree from training.
struct FuzzyRule {
  std::vector<std::size_t> antecedent;
  std::size_t consequent = 0;
  double weight = 1.0;
};

/// A complete MISO Mamdani system: partitions plus a consistent rule base
/// (no two rules share an antecedent).
struct RuleBase {
  std::vector<FuzzyRule> rules;
  std::vector<Partition> input_partitions;
  Partition output_partition;

  std::size_t n_inputs() const { return input_partitions.size(); }
};

struct InferenceOptions {
  /// Multiply each rule's firing strength by its learned weight.
  bool use_rule_weights = true;
  /// Uniform grid resolution for the center-of-gravity integral.
  std::size_t cog_grid_points = 201;
};

/// Look-up-table rule learning: each sample votes one rule (its maximal-
/// membership set per variable) weighted by the product of those maximal
/// memberships; among rules sharing an antecedent only the heaviest
/// survives, earliest sample winning ties.
RuleBase extract_rules(const std::vector<std::vector<double>>& inputs,
                       std::span<const double> outputs,
                       std::vector<Partition> input_partitions,
                       Partition output_partition);

/// Mamdani product inference with singleton fuzzification and trapezoidal
/// center-of-gravity defuzzification over the output domain. If no rule
/// fires with measurable mass, returns the output-domain midpoint.
double infer(const RuleBase& rb, std::span<const double> x,
             const InferenceOptions& opt = {});

/// Builds per-variable partitions from training min/max and extracts the
/// rule base. Throws FitError when a variable has zero range.
RuleBase fit_miso(const std::vector<std::vector<double>>& inputs,
                  std::span<const double> outputs, std::size_t n_mx,
                  std::size_t n_my);

/// Human-readable rule listing for interpretability audits.
std::string describe_rules(const RuleBase& rb);

}  // namespace fpc
