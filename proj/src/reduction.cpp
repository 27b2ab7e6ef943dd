#include "submx/reduction.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "submx/normal.hpp"
#include "submx/parallel.hpp"

namespace submx {

namespace {

constexpr int kRejectionCap = 10'000;
constexpr std::uint64_t kStreamNull = 0xb0;     // f0 draws
constexpr std::uint64_t kStreamShifted = 0xb1;  // f1 draws

unsigned ceil_log2_size(std::size_t n) {
  if (n <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(n - 1));
}

// ceil that tolerates float noise just below an integer
double safe_ceil(double x) { return std::ceil(x - 1e-9); }

__int128 floor_div(__int128 num, __int128 den) {
  __int128 q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

long double ldexp_l(long double x, int e) { return ldexpl(x, e); }

}  // namespace

TruncatedPairSpec TruncatedPairSpec::create(double m, double mu) {
  if (!(m >= 3.0))
    throw std::invalid_argument("TruncatedPairSpec: M must be >= 3, got " +
                                std::to_string(m));
  if (!(mu > 0.0 && mu <= 1.0 / (2.0 * m)))
    throw std::invalid_argument("TruncatedPairSpec: mu must lie in (0, 1/(2M)]");
  TruncatedPairSpec s;
  s.trunc = m;
  s.shift = mu;
  s.c0 = 1.0 / (1.0 - 2.0 * normal_sf(m));
  s.c1 = 1.0 / (1.0 - normal_sf(m - mu) - normal_sf(m + mu));
  return s;
}

double TruncatedPairSpec::density1(double x) const {
  if (std::fabs(x) > trunc) return 0.0;
  return c1 * normal_pdf(x - shift);
}

double TruncatedPairSpec::density0(double x) const {
  if (std::fabs(x) > trunc) return 0.0;
  return 2.0 * c0 * normal_pdf(x) - c1 * normal_pdf(x - shift);
}

double TruncatedPairSpec::mixture_density(double x) const {
  if (std::fabs(x) > trunc) return 0.0;
  return c0 * normal_pdf(x);
}

double TruncatedPairSpec::cdf1(double x) const {
  if (x <= -trunc) return 0.0;
  if (x >= trunc) return 1.0;
  return c1 * (normal_sf(-trunc - shift) - normal_sf(x - shift));
}

double TruncatedPairSpec::cdf0(double x) const {
  if (x <= -trunc) return 0.0;
  if (x >= trunc) return 1.0;
  return 2.0 * c0 * (normal_sf(-trunc) - normal_sf(x)) -
         c1 * (normal_sf(-trunc - shift) - normal_sf(x - shift));
}

double TruncatedPairSpec::sample1(SplitMix& g) const {
  for (int it = 0; it < kRejectionCap; ++it) {
    const double z = shift + g.normal();
    if (std::fabs(z) <= trunc) return z;
  }
  throw std::runtime_error("sample1: rejection cap exceeded (invalid spec?)");
}

double TruncatedPairSpec::sample0(SplitMix& g) const {
  // propose from the truncated centered normal, accept with
  // f0 / (2 c0 phi) = 1 - c1 phi(x-mu) / (2 c0 phi(x)); expected <= 2 rounds
  for (int it = 0; it < kRejectionCap; ++it) {
    double z;
    do {
      z = g.normal();
    } while (std::fabs(z) > trunc);
    const double accept = 1.0 - c1 * normal_pdf(z - shift) / (2.0 * c0 * normal_pdf(z));
    if (g.uniform() < accept) return z;
  }
  throw std::runtime_error("sample0: rejection cap exceeded (invalid spec?)");
}

double tv_shifted_closed_form(const TruncatedPairSpec& s) {
  return normal_sf(s.trunc - s.shift) + normal_sf(s.trunc + s.shift);
}
double tv_mixture_closed_form(const TruncatedPairSpec& s) {
  return 2.0 * normal_sf(s.trunc);
}
double tv_shifted_bound(const TruncatedPairSpec& s) {
  return std::exp((1.0 - s.trunc * s.trunc) / 2.0);
}
double tv_mixture_bound(const TruncatedPairSpec& s) {
  return std::exp(-s.trunc * s.trunc / 2.0);
}

TruncatedPairSpec ReductionParams::pair() const {
  return TruncatedPairSpec::create(trunc, shift);
}

namespace {

double copies_lhs(std::size_t p, std::size_t ell) {
  const double n = 2.0 * static_cast<double>(p) * static_cast<double>(ell);
  return n * std::sqrt(6.0 * std::log(n));
}

}  // namespace

std::size_t choose_copies(std::size_t p, double lambda) {
  if (p < 3) throw std::invalid_argument("choose_copies: p < 3");
  if (!(lambda > 0.0)) throw std::invalid_argument("choose_copies: lambda <= 0");
  const double target = static_cast<double>(p) / lambda;
  if (copies_lhs(p, 1) > target)
    throw std::invalid_argument(
        "choose_copies: no valid copy count; signal lambda=" + std::to_string(lambda) +
        " exceeds the admissible ceiling 1/(2 sqrt(6 log 2p)) = " +
        std::to_string(max_admissible_signal(p)));
  std::size_t lo = 1, hi = 2;
  while (copies_lhs(p, hi) <= target) {
    lo = hi;
    hi *= 2;
    if (hi > (std::size_t{1} << 40))
      throw std::invalid_argument("choose_copies: copy count out of range");
  }
  while (lo + 1 < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (copies_lhs(p, mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double max_admissible_signal(std::size_t p) {
  return 1.0 / (2.0 * std::sqrt(6.0 * std::log(2.0 * static_cast<double>(p))));
}

unsigned default_out_scale(std::size_t p) { return 4 * ceil_log2_size(p); }
unsigned default_in_scale(std::size_t p) { return 16 * ceil_log2_size(p); }

unsigned mass_bits_for(double m, unsigned w, std::size_t graph_n) {
  const double lm = safe_ceil(std::log2(m));
  const double ln = safe_ceil(3.0 * std::log2(static_cast<double>(graph_n)));
  return static_cast<unsigned>(lm) + w + static_cast<unsigned>(ln);
}

ReductionParams assemble_params(std::size_t p, std::size_t k, double lambda,
                                std::size_t ell, unsigned t, unsigned w) {
  if (k < 1) throw std::invalid_argument("assemble_params: k < 1");
  if (ell < 1) throw std::invalid_argument("assemble_params: ell < 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("assemble_params: lambda <= 0");
  const std::size_t n = 2 * p * ell;
  if (n < 6) throw std::invalid_argument("assemble_params: graph size N = 2 p ell < 6");
  if (t > kMaxDyadicScale)
    throw std::invalid_argument("assemble_params: t > " + std::to_string(kMaxDyadicScale));
  if (w < t) throw std::invalid_argument("assemble_params: w < t");
  if (w < 1) throw std::invalid_argument("assemble_params: w < 1");
  const double log2ell = std::log2(static_cast<double>(ell));
  if (static_cast<double>(w - t) + log2ell > 126.0)
    throw std::invalid_argument("assemble_params: w - t too large for exact division");

  ReductionParams r;
  r.dim = p;
  r.block = k;
  r.signal = lambda;
  r.clique = 20 * k;
  r.copies = ell;
  r.graph_n = n;
  r.half_n = p * ell;
  r.trunc = std::sqrt(6.0 * std::log(static_cast<double>(n)));
  r.shift = 1.0 / (2.0 * r.trunc);
  r.out_scale = t;
  r.in_scale = w;
  r.mass_bits = mass_bits_for(r.trunc, w, n);
  r.dim_ok = p >= 40 * k;
  r.signal_ok = lambda <= max_admissible_signal(p) * (1.0 + 1e-12);
  r.in_scale_ok =
      static_cast<double>(w) >=
      static_cast<double>(t) + 6.0 * std::log2(static_cast<double>(n)) - 1e-9;
  return r;
}

ReductionParams choose_params(std::size_t p, std::size_t k, double lambda, int t,
                              int w) {
  if (p < 40 * k)
    throw std::invalid_argument("choose_params: requires p >= 40k (p=" +
                                std::to_string(p) + ", k=" + std::to_string(k) + ")");
  if (!(lambda <= max_admissible_signal(p) * (1.0 + 1e-12)))
    throw std::invalid_argument(
        "choose_params: lambda must satisfy lambda <= 1/(2 sqrt(6 log 2p)) = " +
        std::to_string(max_admissible_signal(p)));
  const std::size_t ell = choose_copies(p, lambda);
  const std::size_t n = 2 * p * ell;
  const unsigned tt = t < 0 ? default_out_scale(p) : static_cast<unsigned>(t);
  unsigned ww = w < 0 ? default_in_scale(p) : static_cast<unsigned>(w);
  if (w < 0) {
    // the default can fall short when N > p^2 (tiny lambda); raise to the
    // minimum satisfying w >= t + 6 log2 N
    const unsigned wmin = static_cast<unsigned>(
        safe_ceil(static_cast<double>(tt) + 6.0 * std::log2(static_cast<double>(n))));
    ww = std::max(ww, wmin);
  }
  return assemble_params(p, k, lambda, ell, tt, ww);
}

BudgetForecast bit_budget(const ReductionParams& params) {
  BudgetForecast f;
  f.random_bits = 2 * params.half_n * params.half_n * params.mass_bits;
  const double nn = static_cast<double>(params.graph_n) * static_cast<double>(params.graph_n);
  f.ops_estimate =
      nn * (safe_ceil(std::log2(params.trunc)) + params.in_scale + params.out_scale);
  if (table_mode_feasible(params))
    f.ops_estimate += params.trunc * std::exp2(static_cast<double>(params.in_scale)) *
                      static_cast<double>(params.mass_bits);
  return f;
}

// ---------------------------------------------------------------------------
// DyadicDist

namespace {

__int128 floor_scaled(double x, unsigned w) {
  // floor(x * 2^w) in extended precision; |x| is O(10), w <= ~120
  const long double v = floorl(ldexpl(static_cast<long double>(x), static_cast<int>(w)));
  return static_cast<__int128>(v);
}

}  // namespace

DyadicDist DyadicDist::lazy(Kind kind, const TruncatedPairSpec& spec, unsigned w,
                            unsigned mass_bits) {
  if (w < 1) throw std::invalid_argument("DyadicDist: w < 1");
  DyadicDist d;
  d.kind_ = kind;
  d.spec_ = spec;
  d.w_ = w;
  d.mass_bits_ = mass_bits;
  d.j_min_ = floor_scaled(-spec.trunc, w);
  const __int128 j_max = floor_scaled(spec.trunc, w);
  const __int128 count = j_max - d.j_min_ + 1;
  if (count <= 1) throw std::invalid_argument("DyadicDist: degenerate atom grid");
  d.count128_ = count;
  return d;
}

DyadicDist DyadicDist::table(Kind kind, const TruncatedPairSpec& spec, unsigned w,
                             unsigned mass_bits) {
  DyadicDist d = lazy(kind, spec, w, mass_bits);
  if (d.count128_ > (__int128{1} << 25))
    throw std::invalid_argument("DyadicDist::table: atom count exceeds 2^25");
  if (mass_bits > 62)
    throw std::invalid_argument("DyadicDist::table: mass bits exceed 62");
  const std::size_t n = static_cast<std::size_t>(d.count128_);
  const std::uint64_t unit = std::uint64_t{1} << mass_bits;

  // per-atom masses floor(p_i 2^T); the first atom absorbs the rounding
  // deficit so the total is exactly 2^T
  std::vector<std::uint64_t> q(n);
  double prev_cdf = d.cell_cdf(1);
  std::uint64_t tail = 0;
  for (std::size_t i = 2; i <= n; ++i) {
    const double c = d.cell_cdf(i);
    const double pi = std::max(0.0, c - prev_cdf);
    prev_cdf = c;
    const std::uint64_t qi = static_cast<std::uint64_t>(
        std::floor(pi * static_cast<double>(unit)));
    q[i - 1] = qi;
    tail += qi;
  }
  if (tail > unit) throw std::runtime_error("DyadicDist::table: mass overflow");
  q[0] = unit - tail;

  d.cum_.resize(n);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += q[i];
    d.cum_[i] = acc;
  }
  return d;
}

double DyadicDist::cell_cdf(std::size_t idx) const {
  // analytic CDF at the right edge of the idx'th cell; the last cell ends at M
  if (idx >= count_checked()) return 1.0;
  const long double edge =
      ldexp_l(static_cast<long double>(j_min_ + static_cast<__int128>(idx)),
              -static_cast<int>(w_));
  const double x = static_cast<double>(edge);
  return kind_ == Kind::Null ? spec_.cdf0(x) : spec_.cdf1(x);
}

std::size_t DyadicDist::count_checked() const {
  if (count128_ > static_cast<__int128>(SIZE_MAX))
    throw std::logic_error("DyadicDist: atom count too large for this operation");
  return static_cast<std::size_t>(count128_);
}

DyadicReal DyadicDist::cdf(std::size_t idx) const {
  if (idx < 1 || static_cast<__int128>(idx) > count128_)
    throw std::out_of_range("DyadicDist::cdf: atom index");
  if (mass_bits_ > 62)
    throw std::invalid_argument("DyadicDist::cdf: mass bits exceed 62");
  if (is_table())
    return DyadicReal(static_cast<std::int64_t>(cum_[idx - 1]), mass_bits_);
  if (static_cast<__int128>(idx) == count128_)
    return DyadicReal(std::int64_t{1} << mass_bits_, mass_bits_);
  const long double scaled =
      floorl(ldexp_l(static_cast<long double>(cell_cdf(idx)), static_cast<int>(mass_bits_)));
  return DyadicReal(static_cast<std::int64_t>(scaled), mass_bits_);
}

double DyadicDist::atom_value(std::size_t idx) const {
  if (idx < 1 || static_cast<__int128>(idx) > count128_)
    throw std::out_of_range("DyadicDist::atom_value: atom index");
  return static_cast<double>(
      ldexp_l(static_cast<long double>(j_min_ + static_cast<__int128>(idx) - 1),
              -static_cast<int>(w_)));
}

std::int64_t DyadicDist::atom_mantissa(std::size_t idx) const {
  const __int128 m = j_min_ + static_cast<__int128>(idx) - 1;
  if (m < INT64_MIN || m > INT64_MAX)
    throw std::overflow_error("DyadicDist::atom_mantissa: mantissa exceeds int64");
  return static_cast<std::int64_t>(m);
}

__int128 DyadicDist::sample(const CoinSource& coins, std::uint64_t bit_offset) const {
  const unsigned T = mass_bits_;

  if (is_table()) {
    // U uniform on {1..2^T}; select min{j : cum_j >= U}
    const std::uint64_t raw = coins.bits(bit_offset, T);  // T <= 62 in table mode
    const std::uint64_t u = raw + 1;
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    const std::size_t idx = static_cast<std::size_t>(it - cum_.begin());  // 0-based atom
    return j_min_ + static_cast<__int128>(idx);
  }

  // lazy: binary search the T-bit-rounded analytic CDF
  long double u;
  bool exact_units = false;
  std::uint64_t u_units = 0;
  if (T <= 62) {
    u_units = coins.bits(bit_offset, T) + 1;
    exact_units = true;
    u = ldexp_l(static_cast<long double>(u_units), -static_cast<int>(T));
  } else {
    // consume all T bits; the top 64 determine the draw to long-double
    // precision, which is finer than any atom mass representable here
    for (std::uint64_t consumed = 0; consumed + 64 < T; consumed += 64)
      (void)coins.bits(bit_offset + consumed, 64);
    const std::uint64_t top = coins.bits(bit_offset + T - 64, 64);
    u = ldexp_l(static_cast<long double>(top), -64) +
        ldexp_l(1.0L, -static_cast<int>(std::min<unsigned>(T, 16000)));
  }

  auto pred = [&](__int128 idx) {
    if (idx >= count128_) return true;
    const long double edge =
        ldexp_l(static_cast<long double>(j_min_ + idx), -static_cast<int>(w_));
    const double x = static_cast<double>(edge);
    const long double f =
        static_cast<long double>(kind_ == Kind::Null ? spec_.cdf0(x) : spec_.cdf1(x));
    if (exact_units) {
      const long double units = floorl(ldexp_l(f, static_cast<int>(T)));
      return units >= static_cast<long double>(u_units);
    }
    return f >= u;
  };

  __int128 lo = 1, hi = count128_;
  while (lo < hi) {
    const __int128 mid = lo + (hi - lo) / 2;
    if (pred(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return j_min_ + lo - 1;
}

DyadicDist::Extracted DyadicDist::extract() const {
  if (!is_table()) throw std::logic_error("DyadicDist::extract: table mode only");
  Extracted e;
  const std::size_t n = cum_.size();
  e.atoms.resize(n);
  e.masses.resize(n);
  const double unit = std::ldexp(1.0, -static_cast<int>(mass_bits_));
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    e.atoms[i] = atom_value(i + 1);
    e.masses[i] = static_cast<double>(cum_[i] - prev) * unit;
    prev = cum_[i];
  }
  return e;
}

// ---------------------------------------------------------------------------
// pipelines

DataMatrix partition_average(const DataMatrix& b, std::size_t p, std::size_t ell) {
  if (b.rows() != p * ell || b.cols() != p * ell)
    throw std::invalid_argument("partition_average: B must be (p ell) x (p ell)");
  DataMatrix x(p, p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t c = 0; c < p; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < ell; ++i)
        for (std::size_t j = 0; j < ell; ++j) s += b.at(i * p + a, j * p + c);
      x.at(a, c) = s / static_cast<double>(ell);
    }
  return x;
}

QuantizedMatrix partition_average_dyadic(const Grid<std::int64_t>& b, std::size_t p,
                                         std::size_t ell, unsigned w, unsigned t) {
  if (b.rows() != p * ell || b.cols() != p * ell)
    throw std::invalid_argument("partition_average_dyadic: B must be (p ell) x (p ell)");
  if (w < t) throw std::invalid_argument("partition_average_dyadic: w < t");
  QuantizedMatrix out;
  out.scale = t;
  out.mantissas = Grid<std::int64_t>(p, p);
  const __int128 den = static_cast<__int128>(ell) << (w - t);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t c = 0; c < p; ++c) {
      __int128 s = 0;
      for (std::size_t i = 0; i < ell; ++i)
        for (std::size_t j = 0; j < ell; ++j) s += b.at(i * p + a, j * p + c);
      const __int128 q = floor_div(s, den);
      if (q < INT64_MIN || q > INT64_MAX)
        throw std::overflow_error("partition_average_dyadic: output mantissa overflow");
      out.mantissas.at(a, c) = static_cast<std::int64_t>(q);
    }
  return out;
}

DataMatrix reduce_continuous(const BitGrid& a0, const ReductionParams& params,
                             std::uint64_t seed, unsigned threads) {
  const std::size_t n2 = params.half_n;
  if (a0.rows() != n2 || a0.cols() != n2)
    throw std::invalid_argument("reduce_continuous: quarter shape mismatch");
  const TruncatedPairSpec spec = params.pair();
  Grid<double> b(n2, n2);
  parallel_for(n2, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const bool one = a0.get(i, j);
      SplitMix g(key_hash(seed, one ? kStreamShifted : kStreamNull, i, j));
      b.at(i, j) = one ? spec.sample1(g) : spec.sample0(g);
    }
  });
  return partition_average(b, params.dim, params.copies);
}

bool table_mode_feasible(const ReductionParams& params) {
  if (params.mass_bits > 62) return false;
  const double atoms =
      2.0 * params.trunc * std::exp2(static_cast<double>(params.in_scale)) + 2.0;
  return atoms <= static_cast<double>(std::size_t{1} << 25);
}

QuantizedMatrix reduce_discrete(const BitGrid& a0, const ReductionParams& params,
                                const CoinSource& coins, CoinLedger* ledger,
                                unsigned threads, bool force_lazy) {
  const std::size_t n2 = params.half_n;
  if (a0.rows() != n2 || a0.cols() != n2)
    throw std::invalid_argument("reduce_discrete: quarter shape mismatch");
  const TruncatedPairSpec spec = params.pair();
  const unsigned w = params.in_scale;
  const unsigned t = params.out_scale;
  const unsigned T = params.mass_bits;

  const bool table = table_mode_feasible(params) && !force_lazy;
  const DyadicDist q0 = table ? DyadicDist::table(DyadicDist::Kind::Null, spec, w, T)
                              : DyadicDist::lazy(DyadicDist::Kind::Null, spec, w, T);
  const DyadicDist q1 = table
                            ? DyadicDist::table(DyadicDist::Kind::Shifted, spec, w, T)
                            : DyadicDist::lazy(DyadicDist::Kind::Shifted, spec, w, T);

  std::vector<__int128> selected(n2 * n2);
  std::atomic<std::uint64_t> bits0{0}, bits1{0};
  const std::uint64_t matrix_bits =
      static_cast<std::uint64_t>(n2) * static_cast<std::uint64_t>(n2) * T;
  parallel_for(n2, threads, [&](std::size_t i) {
    std::uint64_t local0 = 0, local1 = 0;
    for (std::size_t j = 0; j < n2; ++j) {
      const std::uint64_t rank = static_cast<std::uint64_t>(i) * n2 + j;
      const __int128 atom0 = q0.sample(coins, rank * T);
      local0 += T;
      const __int128 atom1 = q1.sample(coins, matrix_bits + rank * T);
      local1 += T;
      selected[i * n2 + j] = a0.get(i, j) ? atom1 : atom0;
    }
    bits0 += local0;
    bits1 += local1;
  });
  if (ledger) {
    ledger->phase0 += bits0.load();
    ledger->phase1 += bits1.load();
    ledger->total += bits0.load() + bits1.load();
  }

  const std::size_t p = params.dim;
  const std::size_t ell = params.copies;
  QuantizedMatrix out;
  out.scale = t;
  out.mantissas = Grid<std::int64_t>(p, p);
  const __int128 den = static_cast<__int128>(ell) << (w - t);
  parallel_for(p, threads, [&](std::size_t a) {
    for (std::size_t c = 0; c < p; ++c) {
      __int128 s = 0;
      for (std::size_t i = 0; i < ell; ++i)
        for (std::size_t j = 0; j < ell; ++j)
          s += selected[(i * p + a) * n2 + (j * p + c)];
      const __int128 q = floor_div(s, den);
      if (q < INT64_MIN || q > INT64_MAX)
        throw std::overflow_error("reduce_discrete: output mantissa overflow");
      out.mantissas.at(a, c) = static_cast<std::int64_t>(q);
    }
  });
  return out;
}

}  // namespace submx
