#include "submx/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "submx/parallel.hpp"
#include "submx/rng.hpp"

namespace submx {

namespace {

void check_support(const std::vector<std::uint32_t>& idx, std::size_t p,
                   const char* name) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 1 || idx[i] > p)
      throw std::out_of_range(std::string(name) + " index " +
                              std::to_string(idx[i]) + " outside [1," +
                              std::to_string(p) + "]");
    if (i > 0 && idx[i] <= idx[i - 1])
      throw std::invalid_argument(std::string(name) + " must be strictly increasing");
  }
}

}  // namespace

double MeanMatrixSpec::value_at(std::uint32_t i, std::uint32_t j) const {
  const auto r = std::lower_bound(rows.begin(), rows.end(), i);
  if (r == rows.end() || *r != i) return 0.0;
  const auto c = std::lower_bound(cols.begin(), cols.end(), j);
  if (c == cols.end() || *c != j) return 0.0;
  if (cell_values.empty()) return level;
  const std::size_t ri = static_cast<std::size_t>(r - rows.begin());
  const std::size_t ci = static_cast<std::size_t>(c - cols.begin());
  return cell_values[ri * cols.size() + ci];
}

double MeanMatrixSpec::total_mean() const {
  if (cell_values.empty())
    return level * static_cast<double>(rows.size()) * static_cast<double>(cols.size());
  double s = 0.0;
  for (double v : cell_values) s += v;
  return s;
}

MeanMatrixSpec make_mean_matrix(std::size_t p, std::vector<std::uint32_t> rows,
                                std::vector<std::uint32_t> cols, double level) {
  if (level < 0.0) throw std::invalid_argument("make_mean_matrix: level < 0");
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  check_support(rows, p, "row support");
  check_support(cols, p, "column support");
  MeanMatrixSpec s;
  s.dim = p;
  s.rows = std::move(rows);
  s.cols = std::move(cols);
  s.level = level;
  return s;
}

namespace {

double min_cell_value(const MeanMatrixSpec& s) {
  if (s.rows.empty() || s.cols.empty()) return 0.0;
  if (s.cell_values.empty()) return s.level;
  double m = s.cell_values[0];
  for (double v : s.cell_values) m = std::min(m, v);
  return m;
}

}  // namespace

bool in_signal_class(const MeanMatrixSpec& s, std::size_t k, double lambda) {
  return s.rows.size() >= k && s.cols.size() >= k && min_cell_value(s) >= lambda;
}

bool in_bounded_signal_class(const MeanMatrixSpec& s, std::size_t k, double lambda) {
  return in_signal_class(s, k, lambda) && s.rows.size() <= 20 * k &&
         s.cols.size() <= 20 * k;
}

bool in_sparse_class(const MeanMatrixSpec& s, std::size_t k) {
  return s.rows.size() <= k && s.cols.size() <= k;
}

DataMatrix sample_gaussian(const MeanMatrixSpec& theta, std::uint64_t seed,
                           std::uint64_t matrix_id, unsigned threads) {
  const std::size_t p = theta.dim;
  DataMatrix x(p, p);
  parallel_for(p, threads, [&](std::size_t i) {
    const bool sig_row = std::binary_search(theta.rows.begin(), theta.rows.end(),
                                            static_cast<std::uint32_t>(i + 1));
    for (std::size_t j = 0; j < p; ++j) {
      double mean = 0.0;
      if (sig_row)
        mean = theta.value_at(static_cast<std::uint32_t>(i + 1),
                              static_cast<std::uint32_t>(j + 1));
      x.at(i, j) = mean + normal_at(seed, matrix_id, i, j);
    }
  });
  return x;
}

QuantizedMatrix sample_discretized(const MeanMatrixSpec& theta, unsigned t,
                                   std::uint64_t seed, std::uint64_t matrix_id,
                                   unsigned threads) {
  const DataMatrix x = sample_gaussian(theta, seed, matrix_id, threads);
  QuantizedMatrix q;
  q.scale = t;
  q.mantissas = Grid<std::int64_t>(theta.dim, theta.dim);
  for (std::size_t i = 0; i < theta.dim; ++i)
    for (std::size_t j = 0; j < theta.dim; ++j)
      q.mantissas.at(i, j) = quantize(x.at(i, j), t).mantissa();
  return q;
}

QuantizerChoice choose_quantizer_scale(std::size_t p, double eps) {
  if (p < 1) throw std::invalid_argument("choose_quantizer_scale: p < 1");
  if (eps <= 0.0) throw std::invalid_argument("choose_quantizer_scale: eps <= 0");
  const double raw = (3.0 + eps) * std::log2(static_cast<double>(p));
  const unsigned t = static_cast<unsigned>(std::ceil(raw));
  const double bound =
      2.0 * static_cast<double>(p) * static_cast<double>(p) *
      std::exp2(-2.0 * static_cast<double>(t) / 3.0);
  return {t, bound};
}

}  // namespace submx
