#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "submx/grid.hpp"

namespace submx {

// (1/p) * sum of all entries.
double linear_stat(const DataMatrix& x);

// max entry.
double max_stat(const DataMatrix& x);

struct ScanResult {
  double stat = 0.0;                 // (1/k) * best block sum
  std::vector<std::uint32_t> rows;   // maximizing S (1-based, sorted)
  std::vector<std::uint32_t> cols;   // maximizing T
};

struct ScanBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultScanBudget = 10'000'000;

// Exact maximum of (1/k) sum over k x k index blocks. Enumerates column
// subsets; for each subset the optimal rows are the k largest restricted
// row sums (ties to the smaller index). Throws ScanBudgetError when
// C(p,k) exceeds the subset budget.
ScanResult scan_stat(const DataMatrix& x, std::size_t k,
                     std::uint64_t budget = kDefaultScanBudget,
                     unsigned threads = 1);

// Number of column subsets an exact scan would enumerate (saturates).
double scan_subset_count(std::size_t p, std::size_t k);

// log C(n,k) via log-gamma.
double log_binom(std::size_t n, std::size_t k);

// Rejection thresholds for the three tests at block size k and signal
// lambda: lin = lambda k^2 / 2p, scan = sqrt((4+c) log C(p,k)),
// max = sqrt((4+c) log p).
struct TestThresholds {
  double lin;
  double scan;
  double max;
};
TestThresholds detection_thresholds(std::size_t p, std::size_t k, double lambda,
                                    double c = 1.0);

// Analytic worst-case type I+II bounds for the thresholded tests, clipped
// to 1 (raw values retained).
struct ErrorBoundReport {
  double bound_lin, bound_scan, bound_max;  // clipped to [0,1]
  double raw_lin, raw_scan, raw_max;
  std::size_t p, k;
  double lambda, c;
};
ErrorBoundReport error_bounds(std::size_t p, std::size_t k, double lambda,
                              double c = 1.0);

struct TestOutcome {
  double statistic;
  double threshold;
  bool reject;  // statistic > threshold
};

// Rejects when the block sum over the candidate supports, scaled by 1/k to
// match the scan statistic's units, exceeds the scan threshold.
TestOutcome support_recovery_test(const DataMatrix& x,
                                  const std::vector<std::uint32_t>& rows,
                                  const std::vector<std::uint32_t>& cols,
                                  double scan_threshold);

// Feasibility regions in the (alpha, beta) exponent plane for
// k ~ p^alpha, lambda ~ p^-beta.
enum class Regime { Impossible, Easy, HardUnderPC, Boundary };

double beta_star(double alpha);   // statistical boundary: max(alpha/2, 2 alpha - 1)
double beta_sharp(double alpha);  // efficient boundary: max(0, 2 alpha - 1)
Regime classify_regime(double alpha, double beta);
const char* regime_name(Regime r);

}  // namespace submx
