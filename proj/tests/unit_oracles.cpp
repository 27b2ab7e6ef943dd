#include <doctest.h>

#include <cmath>

#include "submx/normal.hpp"
#include "submx/oracles.hpp"
#include "submx/reduction.hpp"
#include "submx/rng.hpp"

using namespace submx;

TEST_CASE("integrate: gaussian mass and breakpoint handling") {
  const double mass = integrate([](double x) { return normal_pdf(x); }, -10, 10, 1e-12);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  // piecewise constant with a declared break
  const double v = integrate([](double x) { return x < 1.0 ? 1.0 : 2.0; }, 0, 3,
                             1e-12, {1.0});
  CHECK(v == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("tv_density: identical densities, closed-form shift, symmetry") {
  auto phi = [](double x) { return normal_pdf(x); };
  CHECK(tv_density(phi, phi, -8, 8) == doctest::Approx(0.0));

  // TV(N(0,1), N(1,1)) = 2 Phi(1/2) - 1
  auto phi1 = [](double x) { return normal_pdf(x - 1.0); };
  const double closed = 2.0 * normal_cdf(0.5) - 1.0;
  const double quad = tv_density(phi, phi1, -9, 10);
  CHECK(quad == doctest::Approx(closed).epsilon(1e-9));
  CHECK(tv_density(phi1, phi, -9, 10) == doctest::Approx(quad).epsilon(1e-9));
}

TEST_CASE("tv_density: truncated shifted density matches its closed form") {
  const TruncatedPairSpec s = TruncatedPairSpec::create(3.0, 1.0 / 6.0);
  auto f1 = [&](double x) { return s.density1(x); };
  auto target = [&](double x) { return normal_pdf(x - s.shift); };
  const double quad = tv_density(f1, target, -12, 12, 1e-10, {-s.trunc, s.trunc});
  CHECK(quad == doctest::Approx(tv_shifted_closed_form(s)).epsilon(1e-8));

  auto mix = [&](double x) { return s.mixture_density(x); };
  auto phi = [](double x) { return normal_pdf(x); };
  const double quad2 = tv_density(mix, phi, -12, 12, 1e-10, {-s.trunc, s.trunc});
  CHECK(quad2 == doctest::Approx(tv_mixture_closed_form(s)).epsilon(1e-8));
}

TEST_CASE("tv_density: triangle inequality spot check") {
  auto f = [](double x) { return normal_pdf(x); };
  auto g = [](double x) { return normal_pdf(x - 0.7); };
  auto h = [](double x) { return normal_pdf(x - 1.5); };
  const double fg = tv_density(f, g, -10, 12);
  const double gh = tv_density(g, h, -10, 12);
  const double fh = tv_density(f, h, -10, 12);
  CHECK(fh <= fg + gh + 1e-9);
}

TEST_CASE("tv_discrete: basic cases and the product bound") {
  DiscreteDist a{{0.0, 1.0}, {0.5, 0.5}};
  DiscreteDist b{{0.0, 1.0}, {0.25, 0.75}};
  DiscreteDist c{{2.0, 3.0}, {0.5, 0.5}};
  a.validate();
  CHECK(tv_discrete(a, a) == 0.0);
  CHECK(tv_discrete(a, b) == doctest::Approx(0.25));
  CHECK(tv_discrete(a, c) == 1.0);  // disjoint supports

  SplitMix g(2029);
  for (int it = 0; it < 200; ++it) {
    auto rand_dist = [&](std::size_t n) {
      DiscreteDist d;
      double tot = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d.atoms.push_back(static_cast<double>(i));
        d.masses.push_back(g.uniform() + 1e-3);
        tot += d.masses.back();
      }
      for (auto& m : d.masses) m /= tot;
      return d;
    };
    const std::size_t n1 = 2 + g.below(7), n2 = 2 + g.below(7);
    const DiscreteDist p1 = rand_dist(n1), q1 = rand_dist(n1);
    const DiscreteDist p2 = rand_dist(n2), q2 = rand_dist(n2);
    double lhs = 0.0;
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n2; ++j)
        lhs += std::fabs(p1.masses[i] * p2.masses[j] - q1.masses[i] * q2.masses[j]);
    lhs *= 0.5;
    CHECK(lhs <= tv_discrete(p1, q1) + tv_discrete(p2, q2) + 1e-12);
  }
}

TEST_CASE("DiscreteDist validation rejects bad inputs") {
  DiscreteDist bad1{{0.0, 0.0}, {0.5, 0.5}};
  CHECK_THROWS(bad1.validate());
  DiscreteDist bad2{{0.0, 1.0}, {0.9, 0.2}};
  CHECK_THROWS(bad2.validate());
}

TEST_CASE("null_entry_law: single copy returns the mixture density") {
  const TruncatedPairSpec s = TruncatedPairSpec::create(4.0, 0.125);
  const GriddedDensity law = null_entry_law(s, 1, 1 << 14);
  CHECK(law.mass() == doctest::Approx(1.0).epsilon(1e-6));
  double worst = 0.0;
  for (std::size_t i = 0; i < law.pdf.size(); ++i) {
    const double x = law.x0 + law.dx * static_cast<double>(i);
    worst = std::max(worst, std::fabs(law.pdf[i] - s.mixture_density(x)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("null_entry_law: moments match the truncated-normal oracle") {
  const TruncatedPairSpec s = TruncatedPairSpec::create(3.5, 0.1);
  const GriddedDensity law = null_entry_law(s, 2, 1 << 16);
  CHECK(law.mass() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::fabs(law.mean()) < 1e-9);
  // variance of one summand: 1 - 2 M phi(M) / (1 - 2 sf(M)); the scaled sum
  // of ell^2 copies keeps it
  const double m = s.trunc;
  const double var_one =
      1.0 - 2.0 * m * normal_pdf(m) / (1.0 - 2.0 * normal_sf(m));
  CHECK(law.variance() == doctest::Approx(var_one).epsilon(1e-6));
}

TEST_CASE("null_entry_law: grid doubling leaves the answer unchanged") {
  const TruncatedPairSpec s = TruncatedPairSpec::create(4.0, 0.1);
  auto phi = [](double x) { return normal_pdf(x); };
  const double tv1 = null_entry_law(s, 2, 1 << 15).tv_against(phi);
  const double tv2 = null_entry_law(s, 2, 1 << 16).tv_against(phi);
  CHECK(std::fabs(tv1 - tv2) < 1e-7);
}

TEST_CASE("wilson intervals: coverage near 95 percent") {
  SplitMix g(404);
  for (double p : {0.1, 0.5, 0.9}) {
    int covered = 0;
    const int reps = 2000, n = 400;
    for (int r = 0; r < reps; ++r) {
      std::uint64_t succ = 0;
      for (int i = 0; i < n; ++i) succ += g.uniform() < p ? 1 : 0;
      const MCEstimate e = wilson_estimate(succ, n);
      covered += (e.ci_low <= p && p <= e.ci_high) ? 1 : 0;
    }
    const double cov = covered / static_cast<double>(reps);
    CHECK(cov > 0.93);
    CHECK(cov < 0.975);
  }
  // degenerate counts still give a usable se
  CHECK(wilson_estimate(0, 100).se() > 0.0);
  CHECK(wilson_estimate(100, 100).se() > 0.0);
}

TEST_CASE("mc_error: always-reject test") {
  const ErrorRates r = mc_error([](std::uint64_t) { return true; },
                                [](std::uint64_t) { return true; }, 500);
  CHECK(r.type1.point == 1.0);
  CHECK(r.type2.point == 0.0);
  CHECK(r.total() == 1.0);
}

TEST_CASE("mc_error: thread counts do not change the counts") {
  auto null_t = [](std::uint64_t t) { return mix64(t) % 7 == 0; };
  auto alt_t = [](std::uint64_t t) { return mix64(t) % 3 == 0; };
  const ErrorRates a = mc_error(null_t, alt_t, 4000, 1);
  const ErrorRates b = mc_error(null_t, alt_t, 4000, 4);
  CHECK(a.type1.successes == b.type1.successes);
  CHECK(a.type2.successes == b.type2.successes);
}

TEST_CASE("two-sample KS: p-values are uniform under the null") {
  std::vector<double> pvals;
  for (int rep = 0; rep < 300; ++rep) {
    SplitMix g1(key_hash(1, 0xaa, rep)), g2(key_hash(1, 0xbb, rep));
    std::vector<double> a(1500), b(1500);
    for (auto& v : a) v = g1.normal();
    for (auto& v : b) v = g2.normal();
    pvals.push_back(ks_two_sample_pvalue(std::move(a), std::move(b)));
  }
  CHECK(ks_uniform_pvalue(pvals) > 0.001);
}

TEST_CASE("two-sample KS: detects a half-sigma shift") {
  SplitMix g1(7), g2(8);
  std::vector<double> a(10000), b(10000);
  for (auto& v : a) v = g1.normal();
  for (auto& v : b) v = 0.5 + g2.normal();
  CHECK(ks_two_sample_pvalue(std::move(a), std::move(b)) < 0.01);
}

TEST_CASE("chi-square two-sample: null sanity and power") {
  SplitMix g(15);
  auto sample = [&](const std::vector<double>& mass, std::size_t n) {
    std::vector<double> out(n);
    for (auto& v : out) {
      const double u = g.uniform();
      double acc = 0.0;
      double val = 0.0;
      for (std::size_t i = 0; i < mass.size(); ++i) {
        acc += mass[i];
        if (u < acc) {
          val = static_cast<double>(i);
          break;
        }
        val = static_cast<double>(mass.size() - 1);
      }
      v = val;
    }
    return out;
  };
  const std::vector<double> p{0.4, 0.3, 0.2, 0.1};
  const std::vector<double> q{0.3, 0.3, 0.2, 0.2};
  CHECK(chi2_two_sample_pvalue(sample(p, 20000), sample(p, 20000)) > 0.001);
  CHECK(chi2_two_sample_pvalue(sample(p, 20000), sample(q, 20000)) < 0.01);
}

TEST_CASE("mean_estimate: interval contains the truth for gaussian data") {
  SplitMix g(5150);
  std::vector<double> xs(5000);
  for (auto& v : xs) v = 3.0 + g.normal();
  const MeanEstimate e = mean_estimate(xs);
  CHECK(e.ci_low < 3.0);
  CHECK(e.ci_high > 3.0);
  CHECK(e.stddev == doctest::Approx(1.0).epsilon(0.06));
}
