#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace submx {

// Proportion estimate with Wilson 95% interval.
struct MCEstimate {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  // Wilson half-width divided by z; stays positive at 0 or n successes.
  double se() const { return (ci_high - ci_low) / (2.0 * 1.959963984540054); }
};
MCEstimate wilson_estimate(std::uint64_t successes, std::uint64_t trials);

// Mean estimate with normal 95% interval (for continuous losses).
struct MeanEstimate {
  std::uint64_t trials = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};
MeanEstimate mean_estimate(const std::vector<double>& samples);

// Adaptive Gauss-Kronrod integration to absolute tolerance tol.
// break_points are honored as panel boundaries (kinks, truncation edges).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12, std::vector<double> break_points = {});

// (1/2) integral |f-g| on [a,b]. Sign changes of f-g are located by grid
// scan + bisection and added as panel boundaries so each panel is smooth.
double tv_density(const std::function<double(double)>& f,
                  const std::function<double(double)>& g, double a, double b,
                  double tol = 1e-10, std::vector<double> break_points = {});

// Finite distribution: sorted atoms with nonnegative masses summing to 1.
struct DiscreteDist {
  std::vector<double> atoms;
  std::vector<double> masses;
  void validate(double tol = 1e-12) const;
};

// (1/2) sum |p_i - q_i| over the merged atom set.
double tv_discrete(const DiscreteDist& p, const DiscreteDist& q);

// Density tabulated on a uniform grid of cell centers.
struct GriddedDensity {
  double x0 = 0.0;  // first cell center
  double dx = 0.0;
  std::vector<double> pdf;

  double mass() const;
  double mean() const;
  double variance() const;
  // (1/2) sum |pdf_i - g(x_i)| dx against a density given in closed form
  double tv_against(const std::function<double(double)>& g) const;
};

struct TruncatedPairSpec;  // reduction.hpp

// Exact law of one output entry of the continuous reduction under the null:
// the ell^2-fold self-convolution of the truncated mixture density, scaled
// by 1/ell, computed by FFT on [-L, L], L = (M+1) ell. Requires ell^2 <= 64.
GriddedDensity null_entry_law(const TruncatedPairSpec& spec, std::size_t ell,
                              std::size_t grid = std::size_t{1} << 18);

// Empirical type I / type II rates of a test, reproducible given seed.
// test(x) returns "reject"; generators produce the trial'th observation.
struct ErrorRates {
  MCEstimate type1;
  MCEstimate type2;
  double total() const { return type1.point + type2.point; }
  double total_se() const;
};
ErrorRates mc_error(const std::function<bool(std::uint64_t)>& reject_null_trial,
                    const std::function<bool(std::uint64_t)>& reject_alt_trial,
                    std::uint64_t trials, unsigned threads = 1);

// Two-sample Kolmogorov-Smirnov p-value (asymptotic, with the standard
// small-sample correction).
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

// One-sample KS p-value against U[0,1]; used for p-value uniformity
// meta-tests.
double ks_uniform_pvalue(std::vector<double> samples);

// Two-sample chi-square p-value for discrete data; bins are the merged
// distinct values, pooled greedily so expected counts stay >= 5.
double chi2_two_sample_pvalue(const std::vector<double>& a,
                              const std::vector<double>& b);

}  // namespace submx
