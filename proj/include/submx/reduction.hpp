#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "submx/dyadic.hpp"
#include "submx/grid.hpp"
#include "submx/rng.hpp"

namespace submx {

// Truncated density pair on [-M, M]:
//   f1(x) = c1 phi(x - mu) 1{|x| <= M}
//   f0(x) = [2 c0 phi(x) - c1 phi(x - mu)] 1{|x| <= M}
// with c0, c1 the normalizers of the truncated centered / shifted normals.
// M >= 3 and 0 < mu <= 1/(2M) keep f0 nonnegative; the equal mixture
// (f0+f1)/2 is the truncated centered normal c0 phi.
struct TruncatedPairSpec {
  double trunc = 0.0;  // M
  double shift = 0.0;  // mu
  double c0 = 0.0;
  double c1 = 0.0;

  static TruncatedPairSpec create(double m, double mu);

  double density0(double x) const;
  double density1(double x) const;
  double mixture_density(double x) const;  // c0 phi on [-M, M]
  double cdf0(double x) const;
  double cdf1(double x) const;

  // exact draws by rejection; throws after 10^4 proposals
  double sample0(SplitMix& g) const;
  double sample1(SplitMix& g) const;
};

// Closed-form total variation facts used as oracles:
// TV(F1, N(mu,1)) and TV(mixture, N(0,1)), with their exponential bounds.
double tv_shifted_closed_form(const TruncatedPairSpec& s);   // sf(M-mu)+sf(M+mu)
double tv_mixture_closed_form(const TruncatedPairSpec& s);   // 2 sf(M)
double tv_shifted_bound(const TruncatedPairSpec& s);         // e^{(1-M^2)/2}
double tv_mixture_bound(const TruncatedPairSpec& s);         // e^{-M^2/2}

// Parameters tying a graph instance of size N = 2 p ell to a p x p
// detection instance.
struct ReductionParams {
  std::size_t dim = 0;     // p
  std::size_t block = 0;   // k
  double signal = 0.0;     // lambda
  std::size_t clique = 0;  // kappa = 20 k
  std::size_t copies = 0;  // ell
  std::size_t graph_n = 0; // N = 2 p ell
  std::size_t half_n = 0;  // N/2 = p ell
  double trunc = 0.0;      // M = sqrt(6 log N)
  double shift = 0.0;      // mu = 1/(2M)
  unsigned out_scale = 0;  // t: output quantizer bits
  unsigned in_scale = 0;   // w: input atom grid bits
  unsigned mass_bits = 0;  // T = ceil(log2 M) + w + ceil(3 log2 N)

  // policy flags (informational; pipelines only need mechanical validity)
  bool dim_ok = false;        // p >= 40 k
  bool signal_ok = false;     // lambda <= 1/(2 sqrt(6 log 2p))
  bool in_scale_ok = false;   // w >= t + 6 log2 N

  TruncatedPairSpec pair() const;
};

// Largest ell with 2 p ell sqrt(6 log(2 p ell)) <= p / lambda; throws when
// even ell = 1 fails (signal too large).
std::size_t choose_copies(std::size_t p, double lambda);

double max_admissible_signal(std::size_t p);  // 1 / (2 sqrt(6 log 2p))
unsigned default_out_scale(std::size_t p);    // 4 ceil(log2 p)
unsigned default_in_scale(std::size_t p);     // 16 ceil(log2 p)
unsigned mass_bits_for(double m, unsigned w, std::size_t graph_n);

// Assemble parameters mechanically from explicit (ell, t, w); validates
// hard requirements (N >= 6, t <= 56, w >= t) and records policy flags.
ReductionParams assemble_params(std::size_t p, std::size_t k, double lambda,
                                std::size_t ell, unsigned t, unsigned w);

// Full policy: ell from choose_copies, default t and w unless given;
// enforces p >= 40k and signal admissibility.
ReductionParams choose_params(std::size_t p, std::size_t k, double lambda,
                              int t = -1, int w = -1);

struct CoinLedger {
  std::uint64_t total = 0;
  std::uint64_t phase0 = 0;  // bits drawn for the null-coded matrix
  std::uint64_t phase1 = 0;  // bits drawn for the clique-coded matrix
};

struct BudgetForecast {
  std::uint64_t random_bits = 0;  // 2 N2^2 T
  double ops_estimate = 0.0;      // ~ M 2^w T (table build) + N^2 (log2 M + w + t)
};
BudgetForecast bit_budget(const ReductionParams& params);

// Dyadic approximation of the w-bit quantization of f0 or f1: atoms are the
// w-bit cells of [-M, M], masses are T-bit dyadics. Table mode materializes
// exact per-atom masses (floor-rounded, first atom absorbing the rounding
// deficit); lazy mode binary-searches the analytic CDF rounded to T bits.
class DyadicDist {
 public:
  enum class Kind { Null, Shifted };

  static DyadicDist table(Kind kind, const TruncatedPairSpec& spec, unsigned w,
                          unsigned mass_bits);
  static DyadicDist lazy(Kind kind, const TruncatedPairSpec& spec, unsigned w,
                         unsigned mass_bits);

  bool is_table() const { return !cum_.empty(); }
  std::size_t atom_count() const { return count_checked(); }

  // cumulative mass through the idx'th atom (1-based); table mode only
  DyadicReal cdf(std::size_t idx) const;
  double atom_value(std::size_t idx) const;       // idx'th atom as a real
  std::int64_t atom_mantissa(std::size_t idx) const;  // at scale w

  // inverse-CDF draw consuming exactly mass_bits coins at bit_offset;
  // returns the atom mantissa at scale w
  __int128 sample(const CoinSource& coins, std::uint64_t bit_offset) const;

  // atoms/masses as a checkable distribution (table mode, small w)
  struct Extracted {
    std::vector<double> atoms;
    std::vector<double> masses;
  };
  Extracted extract() const;

  unsigned atom_scale() const { return w_; }
  unsigned mass_scale() const { return mass_bits_; }

 private:
  DyadicDist() = default;

  double cell_cdf(std::size_t idx) const;  // analytic CDF at the idx'th cell edge
  std::size_t count_checked() const;       // throws when the grid exceeds size_t

  Kind kind_{};
  TruncatedPairSpec spec_{};
  unsigned w_ = 0;
  unsigned mass_bits_ = 0;
  __int128 j_min_ = 0;
  __int128 count128_ = 0;
  std::vector<std::uint64_t> cum_;  // table mode: cumulative masses * 2^T
};

// B_ij = A0_ij ? B1_ij : B0_ij, entrywise.
template <typename T>
Grid<T> gaussianize(const BitGrid& a0, const Grid<T>& b0, const Grid<T>& b1) {
  if (b0.rows() != a0.rows() || b0.cols() != a0.cols() ||
      b1.rows() != a0.rows() || b1.cols() != a0.cols())
    throw std::invalid_argument("gaussianize: shape mismatch");
  Grid<T> b(a0.rows(), a0.cols());
  for (std::size_t i = 0; i < a0.rows(); ++i)
    for (std::size_t j = 0; j < a0.cols(); ++j)
      b.at(i, j) = a0.get(i, j) ? b1.at(i, j) : b0.at(i, j);
  return b;
}

// X_ab = (1/ell) * sum over the ell x ell grid of p x p blocks of B.
DataMatrix partition_average(const DataMatrix& b, std::size_t p, std::size_t ell);

// Same in exact arithmetic: mantissas at scale w are summed as integers,
// divided by ell as a rational, and floor-quantized to scale t.
QuantizedMatrix partition_average_dyadic(const Grid<std::int64_t>& b, std::size_t p,
                                         std::size_t ell, unsigned w, unsigned t);

// Continuous reduction: freshly sampled f0/f1 matrices keyed by seed,
// entrywise selection by the graph quarter, partition-average.
DataMatrix reduce_continuous(const BitGrid& a0, const ReductionParams& params,
                             std::uint64_t seed, unsigned threads = 1);

// Bit-exact discretized reduction: both input matrices are drawn from the
// dyadic distributions (entry rank r consumes coins [rT, (r+1)T)), selected
// by the graph quarter, and averaged in exact arithmetic at scale w before
// floor-quantization to scale t. Deterministic given the coin stream.
QuantizedMatrix reduce_discrete(const BitGrid& a0, const ReductionParams& params,
                                const CoinSource& coins, CoinLedger* ledger = nullptr,
                                unsigned threads = 1, bool force_lazy = false);

// Atom-count threshold under which table mode is used by reduce_discrete.
bool table_mode_feasible(const ReductionParams& params);

}  // namespace submx
