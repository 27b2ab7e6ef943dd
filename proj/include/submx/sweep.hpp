#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "submx/detectors.hpp"
#include "submx/oracles.hpp"
#include "submx/reduction.hpp"

namespace submx {

// Phase-diagram sweep over the (alpha, beta) exponent grid: each cell runs
// one test at k = round(p^alpha), lambda = p^-beta.
struct SweepConfig {
  std::vector<std::size_t> dims;        // p
  std::vector<double> alphas;
  std::vector<double> betas;
  std::uint64_t trials = 1000;
  std::vector<std::string> tests = {"lin", "scan", "max"};
  std::uint64_t seed = 1;
  std::uint64_t scan_budget = kDefaultScanBudget;
  double c = 1.0;
  double delta = 0.0;  // hardness-regime exponent; annotation only
  unsigned threads = 1;
};

// key = value lines; lists as [a, b, c]; '#' comments.
SweepConfig parse_sweep_config(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);

struct SweepCell {
  double alpha = 0.0, beta = 0.0;
  std::size_t p = 0, k = 0;
  double lambda = 0.0;
  std::string test;
  Regime regime = Regime::Boundary;
  bool budget_skipped = false;
  MCEstimate type1, type2;
  double total_error = 0.0;
  double seconds = 0.0;  // wall time; excluded from deterministic outputs
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepCell> cells;  // sorted by (alpha, beta, p, test)

  std::string csv() const;                  // deterministic
  std::string to_json_string() const;       // "timing" subtree varies by run
};

SweepReport run_sweep(const SweepConfig& config);

// Single test trial at the sweep's parameterization; reject decision for
// either hypothesis side. Streams entries for lin/max, materializes the
// matrix only for scan.
bool sweep_trial_reject(const std::string& test, std::size_t p, std::size_t k,
                        double lambda, bool alternative, const TestThresholds& th,
                        std::uint64_t scan_budget, std::uint64_t seed,
                        std::uint64_t matrix_id);

// SVG phase diagram: the three regions shaded, one marker per cell sized by
// its empirical error.
std::string phase_diagram_svg(const SweepReport& report);

// End-to-end reduction demo: graph instances are mapped through the
// bit-exact reduction and tested with the scan statistic; empirical errors
// are reported next to the analytic transfer-bound components.
struct DemoConfig {
  std::size_t p = 16;
  std::size_t k = 1;
  double lambda = 0.1;
  int t = -1;  // auto
  int w = -1;  // auto
  std::uint64_t reps = 100;
  std::uint64_t seed = 1;
  double c = 1.0;
  unsigned threads = 1;
  bool strict = false;  // enforce the policy preconditions
};

struct DemoReport {
  ReductionParams params;
  BudgetForecast forecast;
  CoinLedger ledger;       // one run; identical for every rep
  bool ledger_matches_forecast = false;
  double scan_threshold = 0.0;
  MCEstimate null_reject;  // composed test: reject rate on null graphs
  MCEstimate alt_miss;     // composed test: miss rate on planted graphs
  MCEstimate event_rate;   // planted reps whose folded supports reach size k
  double bound_null = 0.0;     // 10 / p
  double bound_split = 0.0;    // 40 k (e/4)^{5k}
  double bound_collide = 0.0;  // 2 k exp(-4 k log(p / 20k))
  double bound_total = 0.0;
  std::string to_json_string() const;
};

DemoReport run_reduction_demo(const DemoConfig& config);

}  // namespace submx
