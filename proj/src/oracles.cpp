#include "submx/oracles.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>

#include "submx/parallel.hpp"
#include "submx/reduction.hpp"

namespace submx {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

MCEstimate wilson_estimate(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_estimate: zero trials");
  if (successes > trials) throw std::invalid_argument("wilson_estimate: successes > trials");
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2.0 * n)) / denom;
  const double half =
      kZ95 * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  MCEstimate e;
  e.trials = trials;
  e.successes = successes;
  e.point = ph;
  e.ci_low = std::max(0.0, center - half);
  e.ci_high = std::min(1.0, center + half);
  return e;
}

MeanEstimate mean_estimate(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("mean_estimate: no samples");
  const double n = static_cast<double>(samples.size());
  double s = 0.0;
  for (double v : samples) s += v;
  const double m = s / n;
  double ss = 0.0;
  for (double v : samples) ss += (v - m) * (v - m);
  const double sd = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  MeanEstimate e;
  e.trials = samples.size();
  e.mean = m;
  e.stddev = sd;
  e.ci_low = m - kZ95 * sd / std::sqrt(n);
  e.ci_high = m + kZ95 * sd / std::sqrt(n);
  return e;
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

double integrate_panel(const std::function<double(double)>& f, double a, double b,
                       double tol) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  const double v = GK::integrate(f, a, b, 15, tol, &err);
  if (!(err <= std::max(tol, 1e-14 * std::fabs(v)) * 50.0))
    throw std::runtime_error("integrate: quadrature did not converge");
  return v;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, std::vector<double> break_points) {
  if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
  break_points.push_back(a);
  break_points.push_back(b);
  std::sort(break_points.begin(), break_points.end());
  double total = 0.0;
  double prev = a;
  for (double x : break_points) {
    if (x <= prev || x > b) continue;
    total += integrate_panel(f, prev, x, tol);
    prev = x;
  }
  return total;
}

double tv_density(const std::function<double(double)>& f,
                  const std::function<double(double)>& g, double a, double b,
                  double tol, std::vector<double> break_points) {
  auto diff = [&](double x) { return f(x) - g(x); };

  // locate kinks of |f-g|: scan for sign changes, then bisect
  std::vector<double> pts = break_points;
  pts.push_back(a);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  std::vector<double> kinks;
  const int scan = 512;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const double lo = pts[s], hi = pts[s + 1];
    if (!(hi > lo)) continue;
    double xprev = lo, dprev = diff(lo);
    for (int i = 1; i <= scan; ++i) {
      const double x = lo + (hi - lo) * i / scan;
      const double d = diff(x);
      if ((dprev < 0.0 && d > 0.0) || (dprev > 0.0 && d < 0.0)) {
        double u = xprev, v = x, du = dprev;
        for (int it = 0; it < 80; ++it) {
          const double m = 0.5 * (u + v);
          const double dm = diff(m);
          if ((du < 0.0) == (dm < 0.0)) {
            u = m;
            du = dm;
          } else {
            v = m;
          }
        }
        kinks.push_back(0.5 * (u + v));
      }
      xprev = x;
      dprev = d;
    }
  }
  for (double x : kinks) break_points.push_back(x);
  auto absdiff = [&](double x) { return std::fabs(f(x) - g(x)); };
  return 0.5 * integrate(absdiff, a, b, tol, std::move(break_points));
}

void DiscreteDist::validate(double tol) const {
  if (atoms.size() != masses.size())
    throw std::invalid_argument("DiscreteDist: atom/mass size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0 && !(atoms[i] > atoms[i - 1]))
      throw std::invalid_argument("DiscreteDist: atoms not strictly increasing");
    if (masses[i] < 0.0) throw std::invalid_argument("DiscreteDist: negative mass");
    s += masses[i];
  }
  if (std::fabs(s - 1.0) > tol)
    throw std::invalid_argument("DiscreteDist: masses sum to " + std::to_string(s));
}

double tv_discrete(const DiscreteDist& p, const DiscreteDist& q) {
  double tv = 0.0;
  std::size_t i = 0, j = 0;
  while (i < p.atoms.size() || j < q.atoms.size()) {
    if (j >= q.atoms.size() || (i < p.atoms.size() && p.atoms[i] < q.atoms[j])) {
      tv += p.masses[i++];
    } else if (i >= p.atoms.size() || q.atoms[j] < p.atoms[i]) {
      tv += q.masses[j++];
    } else {
      tv += std::fabs(p.masses[i] - q.masses[j]);
      ++i;
      ++j;
    }
  }
  return 0.5 * tv;
}

double GriddedDensity::mass() const {
  double s = 0.0;
  for (double v : pdf) s += v;
  return s * dx;
}

double GriddedDensity::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < pdf.size(); ++i)
    s += (x0 + dx * static_cast<double>(i)) * pdf[i];
  return s * dx / mass();
}

double GriddedDensity::variance() const {
  const double m = mean();
  double s = 0.0;
  for (std::size_t i = 0; i < pdf.size(); ++i) {
    const double d = x0 + dx * static_cast<double>(i) - m;
    s += d * d * pdf[i];
  }
  return s * dx / mass();
}

double GriddedDensity::tv_against(const std::function<double(double)>& g) const {
  double s = 0.0;
  for (std::size_t i = 0; i < pdf.size(); ++i)
    s += std::fabs(pdf[i] - g(x0 + dx * static_cast<double>(i)));
  return 0.5 * s * dx;
}

namespace {
std::mutex fftw_mutex;  // FFTW planning is not thread-safe
}

GriddedDensity null_entry_law(const TruncatedPairSpec& spec, std::size_t ell,
                              std::size_t grid) {
  if (ell * ell > 64) throw std::invalid_argument("null_entry_law: ell^2 > 64");
  if (grid < 16 || (grid & (grid - 1)) != 0)
    throw std::invalid_argument("null_entry_law: grid must be a power of two");

  const double half = (spec.trunc + 1.0) * static_cast<double>(ell);
  const std::size_t n = grid;
  const double dx = 2.0 * half / static_cast<double>(n);
  // density of one summand B/ell on the output grid
  const double lf = static_cast<double>(ell);

  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = -half + dx * static_cast<double>(i);
    buf[i] = lf * spec.mixture_density(lf * y);
  }

  {
    std::lock_guard<std::mutex> lk(fftw_mutex);
    fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(n),
                                     reinterpret_cast<fftw_complex*>(buf.data()),
                                     reinterpret_cast<fftw_complex*>(buf.data()),
                                     FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);
  }

  const std::size_t m = ell * ell;
  for (auto& c : buf) c = std::pow(c * dx, static_cast<double>(m));

  {
    std::lock_guard<std::mutex> lk(fftw_mutex);
    fftw_plan bwd = fftw_plan_dft_1d(static_cast<int>(n),
                                     reinterpret_cast<fftw_complex*>(buf.data()),
                                     reinterpret_cast<fftw_complex*>(buf.data()),
                                     FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
  }

  // m-fold cyclic convolution of (pdf * dx) against the shifted grid: each
  // convolution re-anchors the origin at index n/2, so shift by (m-1)*n/2.
  GriddedDensity out;
  out.x0 = -half;
  out.dx = dx;
  out.pdf.resize(n);
  const double scale = 1.0 / (static_cast<double>(n) * dx);
  const std::size_t shift = ((m - 1) * (n / 2)) % n;
  for (std::size_t i = 0; i < n; ++i)
    out.pdf[i] = std::max(0.0, buf[(i + shift) % n].real() * scale);
  return out;
}

double ErrorRates::total_se() const {
  const double a = type1.se();
  const double b = type2.se();
  return std::sqrt(a * a + b * b);
}

ErrorRates mc_error(const std::function<bool(std::uint64_t)>& reject_null_trial,
                    const std::function<bool(std::uint64_t)>& reject_alt_trial,
                    std::uint64_t trials, unsigned threads) {
  if (trials < 1) throw std::invalid_argument("mc_error: trials < 1");
  std::vector<std::uint8_t> null_rej(trials, 0), alt_rej(trials, 0);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    null_rej[t] = reject_null_trial(t) ? 1 : 0;
    alt_rej[t] = reject_alt_trial(t) ? 1 : 0;
  });
  std::uint64_t false_alarm = 0, miss = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    false_alarm += null_rej[t];
    miss += alt_rej[t] == 0 ? 1 : 0;
  }
  ErrorRates r;
  r.type1 = wilson_estimate(false_alarm, trials);
  r.type2 = wilson_estimate(miss, trials);
  return r;
}

namespace {

// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 l^2)
double kolmogorov_q(double lambda) {
  if (lambda < 1e-6) return 1.0;
  double s = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::min(1.0, std::max(0.0, 2.0 * s));
}

}  // namespace

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

double ks_uniform_pvalue(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("ks_uniform: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = std::min(1.0, std::max(0.0, samples[i]));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - x));
    d = std::max(d, std::fabs(x - static_cast<double>(i) / n));
  }
  const double ne = std::sqrt(n);
  return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

double chi2_two_sample_pvalue(const std::vector<double>& a,
                              const std::vector<double>& b) {
  if (a.size() < 10 || b.size() < 10)
    throw std::invalid_argument("chi2_two_sample: need at least 10 samples each");
  std::map<double, std::pair<std::uint64_t, std::uint64_t>> counts;
  for (double v : a) counts[v].first++;
  for (double v : b) counts[v].second++;

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ntot = na + nb;

  // pool adjacent values until each bin's smaller expected count is >= 5
  std::vector<std::pair<double, double>> bins;  // (count_a, count_b)
  double ca = 0.0, cb = 0.0;
  const double min_expected = 5.0;
  for (const auto& [v, c] : counts) {
    ca += static_cast<double>(c.first);
    cb += static_cast<double>(c.second);
    const double tot = ca + cb;
    if (std::min(na, nb) * tot / ntot >= min_expected) {
      bins.emplace_back(ca, cb);
      ca = cb = 0.0;
    }
  }
  if (ca + cb > 0.0) {
    if (!bins.empty()) {
      bins.back().first += ca;
      bins.back().second += cb;
    } else {
      bins.emplace_back(ca, cb);
    }
  }
  if (bins.size() < 2) return 1.0;

  double stat = 0.0;
  for (const auto& [xa, xb] : bins) {
    const double tot = xa + xb;
    const double ea = tot * na / ntot;
    const double eb = tot * nb / ntot;
    stat += (xa - ea) * (xa - ea) / ea + (xb - eb) * (xb - eb) / eb;
  }
  const double df = static_cast<double>(bins.size() - 1);
  // chi-square survival via the regularized upper incomplete gamma
  return boost::math::gamma_q(df / 2.0, stat / 2.0);
}

}  // namespace submx
