#pragma once

#include <cstdint>
#include <vector>

#include "submx/grid.hpp"

namespace submx {

// Mean matrix with signal supported on rows x cols (1-based index sets):
// theta_ij = value >= 0 on the block, 0 elsewhere. Supports are stored
// sparsely; dense realizations are materialized only when sampling.
struct MeanMatrixSpec {
  std::size_t dim = 0;                 // p
  std::vector<std::uint32_t> rows;     // U, sorted unique, 1-based
  std::vector<std::uint32_t> cols;     // V
  double level = 0.0;                  // constant signal unless cell_values set
  std::vector<double> cell_values;     // optional, row-major over rows x cols

  double value_at(std::uint32_t i, std::uint32_t j) const;  // 1-based
  double total_mean() const;  // sum of all entries
};

MeanMatrixSpec make_mean_matrix(std::size_t p,
                                std::vector<std::uint32_t> rows,
                                std::vector<std::uint32_t> cols, double level);

// Membership tests for the three parameter classes: supports of size >= k
// with per-cell signal >= lambda; same with supports between k and 20k;
// supports of size <= k (any values).
bool in_signal_class(const MeanMatrixSpec& s, std::size_t k, double lambda);
bool in_bounded_signal_class(const MeanMatrixSpec& s, std::size_t k, double lambda);
bool in_sparse_class(const MeanMatrixSpec& s, std::size_t k);

// X = theta + Z with Z iid standard normal; entry (i,j) depends only on
// (seed, matrix_id, i, j), so sampling is thread- and order-independent.
DataMatrix sample_gaussian(const MeanMatrixSpec& theta, std::uint64_t seed,
                           std::uint64_t matrix_id = 0, unsigned threads = 1);

// Entrywise floor-quantized observation at scale t; equals quantize applied
// to sample_gaussian with the same (seed, matrix_id), entry for entry.
QuantizedMatrix sample_discretized(const MeanMatrixSpec& theta, unsigned t,
                                   std::uint64_t seed,
                                   std::uint64_t matrix_id = 0,
                                   unsigned threads = 1);

// Quantizer resolution policy: t = ceil((3+eps) log2 p) makes the
// discretized experiment equivalent to the Gaussian one up to the reported
// bound 2 p^2 2^{-2t/3}.
struct QuantizerChoice {
  unsigned scale;
  double equivalence_bound;
};
QuantizerChoice choose_quantizer_scale(std::size_t p, double eps);

}  // namespace submx
