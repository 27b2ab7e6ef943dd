#include "submx/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "submx/parallel.hpp"

namespace submx {

double linear_stat(const DataMatrix& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("linear_stat: matrix not square");
  double s = 0.0;
  for (double v : x.data()) s += v;
  return s / static_cast<double>(x.rows());
}

double max_stat(const DataMatrix& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("max_stat: matrix not square");
  double m = x.data().front();
  for (double v : x.data()) m = std::max(m, v);
  return m;
}

namespace {

constexpr std::uint64_t kBinomCap = UINT64_MAX;

// exact C(n,k), saturating at kBinomCap
std::uint64_t binom_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t m = n - k + i;
    if (r > kBinomCap / m) return kBinomCap;
    r = r * m / i;
  }
  return r;
}

// lexicographically next k-subset of {0,...,p-1}
bool next_combination(std::vector<std::uint32_t>& c, std::size_t p) {
  const std::size_t k = c.size();
  std::size_t i = k;
  while (i-- > 0) {
    if (c[i] != p - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// k-subset of {0,...,p-1} with lexicographic rank r
std::vector<std::uint32_t> unrank_combination(std::uint64_t r, std::size_t p,
                                              std::size_t k) {
  std::vector<std::uint32_t> c(k);
  std::uint32_t v = 0;
  for (std::size_t pos = 0; pos < k; ++pos) {
    for (;; ++v) {
      const std::uint64_t cnt = binom_u64(p - v - 1, k - pos - 1);
      if (r < cnt) break;
      r -= cnt;
    }
    c[pos] = v++;
  }
  return c;
}

struct ChunkBest {
  double sum = -HUGE_VAL;
  std::uint64_t col_rank = UINT64_MAX;
  std::vector<std::uint32_t> rows, cols;
};

}  // namespace

double scan_subset_count(std::size_t p, std::size_t k) {
  const std::uint64_t c = binom_u64(p, k);
  return c == kBinomCap ? HUGE_VAL : static_cast<double>(c);
}

ScanResult scan_stat(const DataMatrix& x, std::size_t k, std::uint64_t budget,
                     unsigned threads) {
  const std::size_t p = x.rows();
  if (x.cols() != p) throw std::invalid_argument("scan_stat: matrix not square");
  if (k < 1 || k > p) throw std::invalid_argument("scan_stat: k outside [1,p]");
  const std::uint64_t total = binom_u64(p, k);
  if (total == kBinomCap || total > budget)
    throw ScanBudgetError(
        "scan_stat: C(" + std::to_string(p) + "," + std::to_string(k) + ") = " +
        (total == kBinomCap ? std::string("overflow") : std::to_string(total)) +
        " column subsets exceed the budget of " + std::to_string(budget) +
        "; rerun with smaller (p,k) or a larger budget");

  const unsigned use_threads =
      std::max(1u, static_cast<unsigned>(std::min<std::uint64_t>(threads, total)));
  const std::size_t chunks = use_threads == 1 ? 1 : use_threads * 8;
  std::vector<ChunkBest> best(chunks);

  parallel_for(chunks, use_threads, [&](std::size_t ci) {
    const std::uint64_t lo = total * ci / chunks;
    const std::uint64_t hi = total * (ci + 1) / chunks;
    if (lo >= hi) return;
    std::vector<std::uint32_t> cols = unrank_combination(lo, p, k);
    std::vector<double> rowsum(p);
    std::vector<std::uint32_t> order(p);
    std::vector<std::uint32_t> pick(k);
    ChunkBest& b = best[ci];
    for (std::uint64_t rank = lo; rank < hi; ++rank) {
      for (std::size_t i = 0; i < p; ++i) {
        double s = 0.0;
        for (std::uint32_t j : cols) s += x.at(i, j);
        rowsum[i] = s;
      }
      std::iota(order.begin(), order.end(), 0u);
      std::partial_sort(order.begin(), order.begin() + static_cast<long>(k),
                        order.end(), [&](std::uint32_t a, std::uint32_t c2) {
                          if (rowsum[a] != rowsum[c2]) return rowsum[a] > rowsum[c2];
                          return a < c2;
                        });
      std::copy(order.begin(), order.begin() + static_cast<long>(k), pick.begin());
      std::sort(pick.begin(), pick.end());
      double s = 0.0;
      for (std::uint32_t i : pick) s += rowsum[i];  // ascending-index summation
      if (s > b.sum) {
        b.sum = s;
        b.col_rank = rank;
        b.rows = pick;
        b.cols = cols;
      }
      if (rank + 1 < hi) next_combination(cols, p);
    }
  });

  // deterministic merge: larger sum wins, ties to the earlier column rank
  const ChunkBest* win = &best[0];
  for (const ChunkBest& b : best) {
    if (b.col_rank == UINT64_MAX) continue;
    if (win->col_rank == UINT64_MAX || b.sum > win->sum ||
        (b.sum == win->sum && b.col_rank < win->col_rank))
      win = &b;
  }

  ScanResult r;
  r.stat = win->sum / static_cast<double>(k);
  r.rows = win->rows;
  r.cols = win->cols;
  for (auto& v : r.rows) ++v;  // report 1-based
  for (auto& v : r.cols) ++v;
  return r;
}

double log_binom(std::size_t n, std::size_t k) {
  if (k > n) return -HUGE_VAL;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

TestThresholds detection_thresholds(std::size_t p, std::size_t k, double lambda,
                                    double c) {
  if (c <= 0.0) throw std::invalid_argument("detection_thresholds: c <= 0");
  if (k < 1 || k > p) throw std::invalid_argument("detection_thresholds: k outside [1,p]");
  TestThresholds t;
  t.lin = lambda * static_cast<double>(k) * static_cast<double>(k) /
          (2.0 * static_cast<double>(p));
  t.scan = std::sqrt((4.0 + c) * log_binom(p, k));
  t.max = std::sqrt((4.0 + c) * std::log(static_cast<double>(p)));
  return t;
}

ErrorBoundReport error_bounds(std::size_t p, std::size_t k, double lambda, double c) {
  const TestThresholds th = detection_thresholds(p, k, lambda, c);
  const double kk = static_cast<double>(k);
  const double pp = static_cast<double>(p);

  ErrorBoundReport r;
  r.p = p;
  r.k = k;
  r.lambda = lambda;
  r.c = c;
  r.raw_lin = std::exp(-lambda * lambda * kk * kk * kk * kk / (8.0 * pp * pp));
  const double gap_scan = std::max(0.0, lambda * kk - th.scan);
  r.raw_scan = std::exp(-0.5 * c * log_binom(p, k)) + std::exp(-0.5 * gap_scan * gap_scan);
  const double gap_max = std::max(0.0, lambda - th.max);
  r.raw_max = std::pow(pp, -0.5 * c) + std::exp(-0.5 * gap_max * gap_max);
  r.bound_lin = std::min(1.0, r.raw_lin);
  r.bound_scan = std::min(1.0, r.raw_scan);
  r.bound_max = std::min(1.0, r.raw_max);
  return r;
}

TestOutcome support_recovery_test(const DataMatrix& x,
                                  const std::vector<std::uint32_t>& rows,
                                  const std::vector<std::uint32_t>& cols,
                                  double scan_threshold) {
  if (rows.empty() || rows.size() != cols.size())
    throw std::invalid_argument("support_recovery_test: |rows| and |cols| must be equal and positive");
  const std::size_t p = x.rows();
  double s = 0.0;
  for (std::uint32_t i : rows) {
    if (i < 1 || i > p) throw std::out_of_range("support_recovery_test: row index");
    for (std::uint32_t j : cols) {
      if (j < 1 || j > p) throw std::out_of_range("support_recovery_test: column index");
      s += x.at(i - 1, j - 1);
    }
  }
  TestOutcome out;
  out.statistic = s / static_cast<double>(rows.size());
  out.threshold = scan_threshold;
  out.reject = out.statistic > out.threshold;
  return out;
}

double beta_star(double alpha) { return std::max(alpha / 2.0, 2.0 * alpha - 1.0); }
double beta_sharp(double alpha) { return std::max(0.0, 2.0 * alpha - 1.0); }

Regime classify_regime(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("classify_regime: alpha outside (0,1)");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("classify_regime: beta outside [0,1]");
  const double bs = beta_star(alpha);
  const double bh = beta_sharp(alpha);
  const double eps = 1e-12;
  if (std::fabs(beta - bs) <= eps || std::fabs(beta - bh) <= eps)
    return Regime::Boundary;
  if (beta > bs) return Regime::Impossible;
  if (beta < bh) return Regime::Easy;
  return Regime::HardUnderPC;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Impossible: return "statistically-impossible";
    case Regime::Easy: return "poly-time-easy";
    case Regime::HardUnderPC: return "hard-under-PC";
    case Regime::Boundary: return "boundary";
  }
  return "?";
}

}  // namespace submx
