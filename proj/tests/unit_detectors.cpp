#include <doctest.h>

#include <cmath>

#include "submx/detectors.hpp"
#include "submx/model.hpp"
#include "submx/rng.hpp"

using namespace submx;

namespace {

DataMatrix random_matrix(std::size_t p, SplitMix& g) {
  DataMatrix x(p, p);
  for (double& v : x.data()) v = g.normal();
  return x;
}

// Full enumeration over all (S, T) pairs; row partial sums first, rows in
// ascending order, so a correct scan must match bit for bit.
struct BruteResult {
  double stat;
  std::vector<std::uint32_t> rows, cols;
};

BruteResult brute_force_scan(const DataMatrix& x, std::size_t k) {
  const std::size_t p = x.rows();
  std::vector<std::uint32_t> cols(k), rows(k);
  for (std::size_t i = 0; i < k; ++i) cols[i] = rows[i] = static_cast<std::uint32_t>(i);
  auto next = [&](std::vector<std::uint32_t>& c) {
    std::size_t i = k;
    while (i-- > 0) {
      if (c[i] != p - k + i) {
        ++c[i];
        for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  BruteResult best{-HUGE_VAL, {}, {}};
  do {
    std::vector<std::uint32_t> r(k);
    for (std::size_t i = 0; i < k; ++i) r[i] = static_cast<std::uint32_t>(i);
    do {
      double s = 0.0;
      for (std::uint32_t i : r) {
        double rowsum = 0.0;
        for (std::uint32_t j : cols) rowsum += x.at(i, j);
        s += rowsum;
      }
      if (s > best.stat) best = {s, r, cols};
    } while (next(r));
  } while (next(cols));
  best.stat /= static_cast<double>(k);
  for (auto& v : best.rows) ++v;
  for (auto& v : best.cols) ++v;
  return best;
}

}  // namespace

TEST_CASE("linear and max statistics: worked examples") {
  DataMatrix zero(5, 5, 0.0);
  CHECK(linear_stat(zero) == 0.0);
  CHECK(max_stat(zero) == 0.0);
  DataMatrix ones(5, 5, 1.0);
  CHECK(linear_stat(ones) == 5.0);
  CHECK(max_stat(ones) == 1.0);
}

TEST_CASE("scan with k=1 equals the max statistic") {
  SplitMix g(3);
  for (int it = 0; it < 50; ++it) {
    const DataMatrix x = random_matrix(7, g);
    CHECK(scan_stat(x, 1).stat == max_stat(x));
  }
}

TEST_CASE("scan recovers a noiseless planted block exactly") {
  DataMatrix x(8, 8, 0.0);
  for (std::uint32_t i : {2u, 5u, 7u})
    for (std::uint32_t j : {1u, 3u, 4u}) x.at(i - 1, j - 1) = 3.0;
  const ScanResult r = scan_stat(x, 3);
  CHECK(r.stat == doctest::Approx(9.0));
  CHECK(r.rows == std::vector<std::uint32_t>{2, 5, 7});
  CHECK(r.cols == std::vector<std::uint32_t>{1, 3, 4});
}

TEST_CASE("scan equals full enumeration on small instances") {
  SplitMix g(17);
  for (std::size_t p = 4; p <= 8; ++p)
    for (std::size_t k = 1; k <= 3; ++k)
      for (int it = 0; it < 30; ++it) {
        const DataMatrix x = random_matrix(p, g);
        const ScanResult fast = scan_stat(x, k);
        const BruteResult slow = brute_force_scan(x, k);
        CHECK(fast.stat == slow.stat);  // bit-exact
        CHECK(fast.rows == slow.rows);
        CHECK(fast.cols == slow.cols);
      }
}

TEST_CASE("scan: maximality over random blocks") {
  SplitMix g(23);
  const DataMatrix x = random_matrix(12, g);
  const std::size_t k = 3;
  const double best = scan_stat(x, k).stat * static_cast<double>(k);
  for (int it = 0; it < 300; ++it) {
    double s = 0.0;
    std::vector<std::size_t> rows, cols;
    while (rows.size() < k) {
      const std::size_t r = g.below(12);
      if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
    }
    while (cols.size() < k) {
      const std::size_t c = g.below(12);
      if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
    }
    for (auto i : rows)
      for (auto j : cols) s += x.at(i, j);
    CHECK(best >= s - 1e-9);
  }
}

TEST_CASE("scan: thread counts produce identical results") {
  SplitMix g(29);
  const DataMatrix x = random_matrix(14, g);
  const ScanResult a = scan_stat(x, 3, kDefaultScanBudget, 1);
  const ScanResult b = scan_stat(x, 3, kDefaultScanBudget, 4);
  CHECK(a.stat == b.stat);
  CHECK(a.rows == b.rows);
  CHECK(a.cols == b.cols);
}

TEST_CASE("scan: budget violation raises a directed error") {
  DataMatrix x(50, 50, 0.0);
  CHECK_THROWS_AS(scan_stat(x, 10), ScanBudgetError);
  CHECK_THROWS_AS(scan_stat(x, 10, 1000), ScanBudgetError);
  CHECK(scan_subset_count(50, 10) > 1e9);
}

TEST_CASE("statistics on quantized data stay within the Lipschitz slack") {
  SplitMix g(31);
  for (unsigned t : {2u, 5u, 9u}) {
    const std::size_t p = 10;
    DataMatrix x(p, p);
    for (double& v : x.data()) v = g.normal();
    DataMatrix q(p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) q.at(i, j) = quantize(x.at(i, j), t).value();
    const double slack = static_cast<double>(p) * std::ldexp(1.0, -static_cast<int>(t));
    CHECK(std::fabs(linear_stat(x) - linear_stat(q)) <= slack + 1e-12);
    CHECK(std::fabs(max_stat(x) - max_stat(q)) <= slack + 1e-12);
    CHECK(std::fabs(scan_stat(x, 3).stat - scan_stat(q, 3).stat) <= slack + 1e-12);
  }
}

TEST_CASE("thresholds: worked examples and the log-binomial oracle") {
  const TestThresholds a = detection_thresholds(10, 4, 0.5, 1.0);
  CHECK(a.lin == doctest::Approx(0.4).epsilon(1e-15));
  const TestThresholds b = detection_thresholds(10, 1, 0.0, 1.0);
  CHECK(b.scan == doctest::Approx(std::sqrt(5.0 * std::log(10.0))).epsilon(1e-12));
  CHECK(b.scan == doctest::Approx(b.max).epsilon(1e-12));

  // exact integer binomial oracle: C(100,10) fits in 64 bits
  std::uint64_t exact = 1;
  for (std::uint64_t i = 1; i <= 10; ++i) exact = exact * (100 - 10 + i) / i;
  CHECK(log_binom(100, 10) ==
        doctest::Approx(std::log(static_cast<double>(exact))).epsilon(1e-12));
}

TEST_CASE("error bounds: clipping and edge cases") {
  const ErrorBoundReport r0 = error_bounds(20, 3, 0.0, 1.0);
  CHECK(r0.bound_lin == 1.0);  // exp(0), clipped
  CHECK(r0.raw_lin == 1.0);

  // lambda k below the scan threshold: the miss term is exp(0) = 1
  const ErrorBoundReport r1 = error_bounds(20, 3, 0.1, 1.0);
  CHECK(r1.raw_scan > 1.0);
  CHECK(r1.bound_scan == 1.0);

  const ErrorBoundReport r2 = error_bounds(50, 10, 2.0, 1.0);
  CHECK(r2.bound_lin == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(r2.bound_scan < 1e-4);  // both scan terms are tiny here
}

TEST_CASE("support recovery test: examples") {
  const std::size_t p = 12, k = 3;
  const double tau = detection_thresholds(p, k, 1.0, 1.0).scan;

  // strong signal on the true support: reject
  std::vector<std::uint32_t> u{1, 2, 3};
  MeanMatrixSpec spec = make_mean_matrix(p, u, u, 8.0);
  const DataMatrix x = sample_gaussian(spec, 77);
  const TestOutcome hit = support_recovery_test(x, u, u, tau);
  CHECK(hit.reject);
  CHECK(hit.statistic == doctest::Approx(hit.statistic));
  CHECK(hit.reject == (hit.statistic > hit.threshold));

  // candidate support disjoint from the signal behaves like the null
  const TestOutcome miss = support_recovery_test(x, {7, 8, 9}, {7, 8, 9}, tau);
  CHECK_FALSE(miss.reject);

  CHECK_THROWS_AS(support_recovery_test(x, {1, 2}, {1, 2, 3}, tau),
                  std::invalid_argument);
  CHECK_THROWS_AS(support_recovery_test(x, {1, 2, 13}, {1, 2, 3}, tau),
                  std::out_of_range);
}

TEST_CASE("support recovery: restricted sum never exceeds the scan statistic") {
  SplitMix g(41);
  for (int it = 0; it < 40; ++it) {
    const DataMatrix x = random_matrix(9, g);
    const double scan = scan_stat(x, 2).stat;
    std::vector<std::uint32_t> u{static_cast<std::uint32_t>(1 + g.below(9)), 0};
    do {
      u[1] = static_cast<std::uint32_t>(1 + g.below(9));
    } while (u[1] == u[0]);
    std::vector<std::uint32_t> v{static_cast<std::uint32_t>(1 + g.below(9)), 0};
    do {
      v[1] = static_cast<std::uint32_t>(1 + g.below(9));
    } while (v[1] == v[0]);
    const TestOutcome o = support_recovery_test(x, u, v, 100.0);
    CHECK(o.statistic <= scan + 1e-12);
  }
}

TEST_CASE("regime classification: worked examples") {
  CHECK(classify_regime(0.8, 0.5) == Regime::Easy);
  CHECK(classify_regime(0.4, 0.1) == Regime::HardUnderPC);
  CHECK(classify_regime(0.4, 0.3) == Regime::Impossible);
  CHECK(classify_regime(0.4, 0.2) == Regime::Boundary);   // beta = beta_star
  CHECK(classify_regime(0.8, 0.6) == Regime::Boundary);   // beta = beta_sharp
  CHECK(classify_regime(0.4, 0.0) == Regime::Boundary);   // beta = beta_sharp = 0
  CHECK_THROWS_AS(classify_regime(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(classify_regime(0.5, 1.5), std::invalid_argument);
}

TEST_CASE("regime boundaries partition the square") {
  for (int ia = 1; ia < 40; ++ia)
    for (int ib = 0; ib <= 40; ++ib) {
      const double alpha = ia / 40.0;
      const double beta = ib / 40.0;
      CHECK(beta_sharp(alpha) <= beta_star(alpha));
      const Regime r = classify_regime(alpha, beta);
      if (r == Regime::Boundary) continue;
      const int label = r == Regime::Impossible ? 0 : (r == Regime::Easy ? 1 : 2);
      // exactly one region fits
      int expect;
      if (beta > beta_star(alpha))
        expect = 0;
      else if (beta < beta_sharp(alpha))
        expect = 1;
      else
        expect = 2;
      CHECK(label == expect);
    }
}
