// End-to-end acceptance gate. Each numbered check prints one PASS/FAIL line
// and the process exits nonzero if any of them failed. The thresholds are
// deliberately written out as literals next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fpc/cascade.hpp"
#include "fpc/fuzzy.hpp"
#include "fpc/linear_model.hpp"
#include "fpc/model_io.hpp"
#include "fpc/mutual_information.hpp"
#include "fpc/synth.hpp"
#include "fpc/wavelet.hpp"

using namespace fpc;

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class Gate {
 public:
  void report(int index, const char* name, bool ok, const std::string& details) {
    std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", index, name,
                details.c_str());
    std::fflush(stdout);
    all_ok_ = all_ok_ && ok;
  }
  bool all_ok() const { return all_ok_; }

 private:
  bool all_ok_ = true;
};

double uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform(rng);
}

// ---------------------------------------------------------------------------
// Independent re-implementation of the inference math used as the oracle in
// check 2: product firing, max aggregation, trapezoidal centroid on a
// uniform output grid. Shares no code with the library.
double oracle_infer(const RuleBase& rb, double x, std::size_t grid_points) {
  const Partition& out = rb.output_partition;
  const double lo = out.domain_low;
  const double hi = out.domain_high;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);

  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < grid_points; ++j) {
    const double y = lo + static_cast<double>(j) * step;
    double agg = 0.0;
    for (const auto& rule : rb.rules) {
      const auto& in_set = rb.input_partitions[0].sets[rule.antecedent[0]];
      const double dx = (x - in_set.center) / in_set.sigma;
      double firing = rule.weight * std::exp(-dx * dx);
      const auto& out_set = out.sets[rule.consequent];
      const double dy = (y - out_set.center) / out_set.sigma;
      firing *= std::exp(-dy * dy);
      agg = std::max(agg, firing);
    }
    const double w = (j == 0 || j + 1 == grid_points) ? 0.5 : 1.0;
    num += w * y * agg;
    den += w * agg;
  }
  if (den * step < 1e-12) return 0.5 * (lo + hi);
  return num / den;
}

RuleBase random_rule_base(std::mt19937_64& rng) {
  RuleBase rb;
  const double in_lo = uniform(rng, -5.0, 0.0);
  const double in_hi = in_lo + uniform(rng, 0.5, 6.0);
  const std::size_t n_in = 3 + static_cast<std::size_t>(rng() % 3);
  rb.input_partitions.push_back(make_partition(in_lo, in_hi, n_in));

  const double out_lo = uniform(rng, -4.0, 1.0);
  const double out_hi = out_lo + uniform(rng, 0.5, 5.0);
  const std::size_t n_out = 3 + static_cast<std::size_t>(rng() % 3);
  rb.output_partition = make_partition(out_lo, out_hi, n_out);

  const std::size_t n_rules = 1 + static_cast<std::size_t>(rng() % 3);
  std::vector<std::size_t> slots(n_in);
  for (std::size_t i = 0; i < n_in; ++i) slots[i] = i;
  for (std::size_t i = n_in - 1; i > 0; --i)
    std::swap(slots[i], slots[rng() % (i + 1)]);
  for (std::size_t r = 0; r < n_rules; ++r) {
    FuzzyRule rule;
    rule.antecedent = {slots[r]};
    rule.consequent = static_cast<std::size_t>(rng() % n_out);
    rule.weight = 0.05 + 0.95 * uniform(rng);
    rb.rules.push_back(rule);
  }
  return rb;
}

// Reference Wang-Mendel pass for check 3: one candidate rule per sample,
// keep the heaviest per antecedent, earliest sample wins exact ties.
struct OracleRule {
  std::size_t consequent = 0;
  double weight = 0.0;
};

std::map<std::vector<std::size_t>, OracleRule> oracle_rules(
    const std::vector<std::vector<double>>& inputs,
    const std::vector<double>& outputs,
    const std::vector<Partition>& input_partitions,
    const Partition& output_partition) {
  std::map<std::vector<std::size_t>, OracleRule> table;
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    std::vector<std::size_t> antecedent(input_partitions.size());
    double degree = 1.0;
    for (std::size_t k = 0; k < input_partitions.size(); ++k) {
      const auto& part = input_partitions[k];
      std::size_t best = 0;
      double best_mu = -1.0;
      for (std::size_t i = 0; i < part.sets.size(); ++i) {
        const double d = (inputs[s][k] - part.sets[i].center) / part.sets[i].sigma;
        const double mu = std::exp(-d * d);
        if (mu > best_mu) {
          best_mu = mu;
          best = i;
        }
      }
      antecedent[k] = best;
      degree *= best_mu;
    }
    std::size_t best_out = 0;
    double best_mu = -1.0;
    for (std::size_t i = 0; i < output_partition.sets.size(); ++i) {
      const double d = (outputs[s] - output_partition.sets[i].center) /
                       output_partition.sets[i].sigma;
      const double mu = std::exp(-d * d);
      if (mu > best_mu) {
        best_mu = mu;
        best_out = i;
      }
    }
    degree *= best_mu;

    auto it = table.find(antecedent);
    if (it == table.end() || degree > it->second.weight)
      table[antecedent] = {best_out, degree};
  }
  return table;
}

struct BenchmarkStats {
  double fpc_median = 0.0;
  double lr_median = 0.0;
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int main() {
  Gate gate;
  const auto suite_start = Clock::now();

  // 1 ------------------------------------------------------------------
  {
    const auto start = Clock::now();
    std::vector<std::vector<double>> rows;
    std::vector<double> ys;
    for (std::size_t i = 0; i < 400; ++i) {
      const double x = 2.0 * kPi * static_cast<double>(i) / 399.0;
      rows.push_back({x});
      ys.push_back(std::sin(x));
    }
    const RuleBase rb = fit_miso(rows, ys, 7, 7);

    double acc = 0.0;
    for (std::size_t j = 0; j < 200; ++j) {
      const double x = 2.0 * kPi * static_cast<double>(j) / 199.0;
      const double err = infer(rb, std::vector<double>{x}) - std::sin(x);
      acc += err * err;
    }
    const double grid_rmse = std::sqrt(acc / 200.0);
    const double elapsed = seconds_since(start);

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "sine grid rmse %.4f (< 0.15), %.3f s (< 1 s)", grid_rmse,
                  elapsed);
    gate.report(1, "fuzzy approximation", grid_rmse < 0.15 && elapsed < 1.0,
                buf);
  }

  // 2 ------------------------------------------------------------------
  {
    std::mt19937_64 rng(2024);
    const std::size_t grid = 10000;
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
      const RuleBase rb = random_rule_base(rng);
      const double lo = rb.input_partitions[0].domain_low;
      const double hi = rb.input_partitions[0].domain_high;
      const double span = hi - lo;
      InferenceOptions opt;
      opt.cog_grid_points = grid;
      for (int p = 0; p < 40; ++p) {
        const double x = uniform(rng, lo - 0.1 * span, hi + 0.1 * span);
        const double got = infer(rb, std::vector<double>{x}, opt);
        const double want = oracle_infer(rb, x, grid);
        worst = std::max(worst, std::abs(got - want));
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "max |infer - oracle| %.3g over 100 bases x 40 probes "
                  "(< 1e-6)", worst);
    gate.report(2, "inference oracle equivalence", worst < 1e-6, buf);
  }

  // 3 ------------------------------------------------------------------
  {
    std::mt19937_64 rng(77);
    std::vector<Partition> parts{make_partition(-1.0, 2.0, 4),
                                 make_partition(0.0, 5.0, 3)};
    const Partition out_part = make_partition(-3.0, 3.0, 5);
    std::vector<std::vector<double>> inputs;
    std::vector<double> outputs;
    for (int s = 0; s < 1000; ++s) {
      inputs.push_back({uniform(rng, -1.0, 2.0), uniform(rng, 0.0, 5.0)});
      outputs.push_back(uniform(rng, -3.0, 3.0));
    }
    const RuleBase rb = extract_rules(inputs, outputs, parts, out_part);
    const auto expected = oracle_rules(inputs, outputs, parts, out_part);

    bool ok = rb.rules.size() == expected.size();
    std::map<std::vector<std::size_t>, int> seen;
    for (const auto& rule : rb.rules) {
      if (++seen[rule.antecedent] > 1) ok = false;  // duplicate antecedent
      const auto it = expected.find(rule.antecedent);
      if (it == expected.end() || it->second.consequent != rule.consequent ||
          std::abs(it->second.weight - rule.weight) > 1e-12)
        ok = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%zu rules from 1000 samples match the grouping oracle, "
                  "no duplicates", rb.rules.size());
    gate.report(3, "rule-base consistency", ok, buf);
  }

  // 4 ------------------------------------------------------------------
  {
    std::vector<double> x, y;
    auto push = [&](double a, double b, int count) {
      for (int i = 0; i < count; ++i) {
        x.push_back(a);
        y.push_back(b);
      }
    };
    push(0.0, 0.0, 400);
    push(1.0, 1.0, 400);
    push(0.0, 1.0, 100);
    push(1.0, 0.0, 100);
    const double skewed = mutual_information(x, y, 16);
    const double skewed_err = std::abs(skewed - 0.19274475702175743);

    std::vector<double> ax, ay;
    for (int i = 0; i < 200; ++i) {
      ax.push_back(static_cast<double>(i % 2));
      ay.push_back(static_cast<double>(i % 2));
    }
    const double dependent = mutual_information(ax, ay, 16);
    const double ln2_err = std::abs(dependent - 0.69314718055994531);

    std::mt19937_64 r1(12345), r2(54321);
    std::vector<double> u1(100000), u2(100000);
    for (auto& v : u1) v = uniform(r1);
    for (auto& v : u2) v = uniform(r2);
    const double indep = mutual_information(u1, u2, 16);

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "skewed err %.4f, ln2 err %.4f (< 0.01), independent %.4f "
                  "(< 0.02)", skewed_err, ln2_err, indep);
    gate.report(4, "mutual information estimator",
                skewed_err < 0.01 && ln2_err < 0.01 && indep < 0.02, buf);
  }

  // 5 ------------------------------------------------------------------
  {
    const double rate = 128.0;
    const std::size_t n = 1024;
    const auto bands = default_bands();
    bool ok = true;
    double worst_share = 1.0;
    const double tones[3] = {6.0, 10.0, 20.0};
    for (int k = 0; k < 3; ++k) {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i)
        v[i] = std::sin(2.0 * kPi * tones[k] * static_cast<double>(i) / rate);
      const TimeSeries tone(std::move(v), rate, "tone");

      double means[3] = {0.0, 0.0, 0.0};
      for (int b = 0; b < 3; ++b) {
        const TimeSeries power = band_power(tone, bands[b], 8);
        const std::size_t margin = band_power_edge_margin(bands[b], rate);
        double acc = 0.0;
        std::size_t count = 0;
        for (std::size_t i = margin; i + margin < n; ++i) {
          acc += power.samples[i];
          ++count;
        }
        means[b] = acc / static_cast<double>(count);
      }
      const double share = means[k] / (means[0] + means[1] + means[2]);
      worst_share = std::min(worst_share, share);
      ok = ok && share > 0.8;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "worst in-band power share %.3f over 6/10/20 Hz tones "
                  "(> 0.8)", worst_share);
    gate.report(5, "wavelet band selectivity", ok, buf);
  }

  // 6 ------------------------------------------------------------------
  {
    const double rate = 50.0;
    const std::size_t n = 1200;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / rate;
      a[i] = std::sin(2.0 * kPi * 0.9 * t);
      b[i] = std::sin(2.0 * kPi * 1.7 * t + 1.0);
    }
    std::mt19937_64 rng(6);
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
      y[i] = std::tanh(2.0 * a[i - 1]) + 0.5 * b[i - 1] * b[i - 1] * b[i - 1] +
             0.02 * (2.0 * uniform(rng) - 1.0);
    y[0] = y[1];

    FeatureBank bank;
    bank.add(TimeSeries(std::move(a), rate, "a"));
    bank.add(TimeSeries(std::move(b), rate, "b"));
    const TimeSeries target(std::move(y), rate, "y");
    FitConfig cfg;
    cfg.n_r = 1;
    cfg.n_mx = 7;
    cfg.n_my = 7;

    const FpcModel model = fit(bank, target, cfg);
    bool ok = !model.cascades.empty();

    const TimeSeries full = predict(model, bank);
    std::vector<double> summed(n, 0.0);
    for (std::size_t c = 0; c < model.cascades.size(); ++c) {
      FpcModel one = model;
      one.cascades = {model.cascades[c]};
      const TimeSeries part = predict(one, bank);
      for (std::size_t i = 0; i < n; ++i) summed[i] += part.samples[i];
    }
    double additivity = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      additivity = std::max(additivity, std::abs(full.samples[i] - summed[i]));
    ok = ok && additivity <= 1e-12;

    for (std::size_t i = 1; i < model.training_report.size(); ++i)
      ok = ok && model.training_report[i].validation_residual_norm <
                     model.training_report[i - 1].validation_residual_norm;

    for (std::size_t i = 0; i < model.cascades.size(); ++i)
      for (std::size_t j = i + 1; j < model.cascades.size(); ++j)
        ok = ok && model.cascades[i].input_name != model.cascades[j].input_name;

    const bool deterministic =
        save_model(fit(bank, target, cfg)) == save_model(model);
    ok = ok && deterministic;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "%zu cascades, additivity gap %.2g (<= 1e-12), residuals "
                  "strictly shrinking, inputs unique, refit identical: %s",
                  model.cascades.size(), additivity,
                  deterministic ? "yes" : "no");
    gate.report(6, "cascade mechanics", ok, buf);
  }

  // 7 ------------------------------------------------------------------
  {
    const auto start = Clock::now();
    std::vector<double> fpc_vals, lr_vals;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      SynthSpec spec;
      spec.seed = seed;
      const ExperimentReport report = run_benchmark(spec);
      fpc_vals.push_back(report.fpc_validation_rmse);
      lr_vals.push_back(report.lr_validation_rmse);
    }
    const BenchmarkStats stats{median_of(fpc_vals), median_of(lr_vals)};
    const double elapsed = seconds_since(start);
    const bool ok =
        stats.fpc_median <= 0.8 * stats.lr_median && elapsed < 120.0;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "10-seed median validation rmse: fpc %.4f vs lr %.4f "
                  "(ratio %.3f <= 0.8), %.1f s (< 120 s)", stats.fpc_median,
                  stats.lr_median, stats.fpc_median / stats.lr_median, elapsed);
    gate.report(7, "comparative benchmark", ok, buf);
  }

  // 8 ------------------------------------------------------------------
  {
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 20 && ok; ++seed) {
      std::mt19937_64 rng(seed);
      const double rate = 25.0;
      const std::size_t n = 300;
      FeatureBank bank;
      for (const char* name : {"u", "v"}) {
        std::vector<double> s(n);
        for (auto& x : s) x = uniform(rng, -2.0, 2.0);
        bank.add(TimeSeries(std::move(s), rate, name));
      }

      FpcModel model;
      model.target_name = "y";
      model.sample_rate_hz = rate;
      {
        const std::vector<std::size_t> d1{1};
        const auto emb = delay_embed(bank.at("u"), d1);
        std::vector<double> ys(emb.rows.size());
        for (std::size_t r = 0; r < ys.size(); ++r)
          ys[r] = std::tanh(emb.rows[r][0]) + 0.1 * uniform(rng);
        model.cascades.push_back({"u", d1, fit_miso(emb.rows, ys, 3, 3)});
      }
      {
        const std::vector<std::size_t> d2{1, 2};
        const auto emb = delay_embed(bank.at("v"), d2);
        std::vector<double> ys(emb.rows.size());
        for (std::size_t r = 0; r < ys.size(); ++r)
          ys[r] = 0.5 * emb.rows[r][0] * emb.rows[r][1] + 0.1 * uniform(rng);
        model.cascades.push_back({"v", d2, fit_miso(emb.rows, ys, 3, 3)});
      }

      const TimeSeries p1 = predict(model, bank);
      const TimeSeries p2 = predict(load_fpc_model(save_model(model)), bank);
      for (std::size_t i = 0; i < n; ++i)
        ok = ok && p1.samples[i] == p2.samples[i];

      LinearModel lin;
      lin.target_name = "y";
      lin.regressor_names = {"u", "v"};
      lin.regressor_delays = {1, 2};
      lin.weights = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
      lin.intercept = uniform(rng, -1.0, 1.0);
      const TimeSeries q1 = predict_lr(lin, bank);
      const TimeSeries q2 = predict_lr(load_linear_model(save_model(lin)), bank);
      for (std::size_t i = 0; i < n; ++i)
        ok = ok && q1.samples[i] == q2.samples[i];
    }
    gate.report(8, "serialization round trip", ok,
                "bit-identical predictions over 20 random banks");
  }

  // 9 ------------------------------------------------------------------
  {
    const double total = seconds_since(suite_start);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.1f s total (< 300 s)", total);
    gate.report(9, "runtime budget", total < 300.0, buf);
  }

  return gate.all_ok() ? 0 : 1;
}
