#include "submx/estimators.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "submx/parallel.hpp"

namespace submx {

DataMatrix hard_threshold(const DataMatrix& x, double level) {
  if (level < 0.0) throw std::invalid_argument("hard_threshold: level < 0");
  DataMatrix out = x;
  for (double& v : out.data())
    if (std::fabs(v) <= level) v = 0.0;
  return out;
}

DataMatrix row_project(const DataMatrix& x, std::size_t k) {
  const std::size_t p = x.rows();
  if (k < 1 || k > p) throw std::invalid_argument("row_project: k outside [1,p]");
  std::vector<double> norm2(p, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) norm2[i] += x.at(i, j) * x.at(i, j);
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0u);
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (norm2[a] != norm2[b]) return norm2[a] > norm2[b];
                      return a < b;
                    });
  std::vector<char> keep(p, 0);
  for (std::size_t i = 0; i < k; ++i) keep[order[i]] = 1;
  DataMatrix out = x;
  for (std::size_t i = 0; i < p; ++i)
    if (!keep[i])
      for (std::size_t j = 0; j < x.cols(); ++j) out.at(i, j) = 0.0;
  return out;
}

double schatten_norm(const DataMatrix& x, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("schatten_norm: q must be >= 1");
  Eigen::MatrixXd m(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      m(static_cast<long>(i), static_cast<long>(j)) = x.at(i, j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (std::isinf(q)) return sv.size() > 0 ? sv(0) : 0.0;
  if (q == 2.0) return sv.norm();
  double s = 0.0;
  for (long i = 0; i < sv.size(); ++i) s += std::pow(sv(i), q);
  return std::pow(s, 1.0 / q);
}

double schatten_rate(std::size_t p, std::size_t k, double q) {
  const double kk = static_cast<double>(k);
  const double lg = std::log(std::exp(1.0) * static_cast<double>(p) / kk);
  const double e1 = std::isinf(q) ? 0.0 : 2.0 / q;
  return std::pow(kk, e1 + 1.0) + std::pow(kk, std::max(e1, 1.0)) * lg;
}

double default_threshold_level(std::size_t p) {
  return std::sqrt(4.0 * std::log(static_cast<double>(p)));
}

DataMatrix threshold_project(const DataMatrix& x, double level, std::size_t k) {
  return row_project(hard_threshold(x, level), k);
}

MeanEstimate estimation_risk(const MatrixEstimator& est, const MeanMatrixSpec& theta,
                             double q, std::uint64_t trials, std::uint64_t seed,
                             unsigned threads) {
  if (trials < 1) throw std::invalid_argument("estimation_risk: trials < 1");
  std::vector<double> losses(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t trial) {
    const DataMatrix x = sample_gaussian(theta, seed, trial);
    DataMatrix err = est(x);
    for (std::size_t i = 0; i < err.rows(); ++i)
      for (std::size_t j = 0; j < err.cols(); ++j)
        err.at(i, j) -= theta.value_at(static_cast<std::uint32_t>(i + 1),
                                       static_cast<std::uint32_t>(j + 1));
    const double nrm = schatten_norm(err, q);
    losses[trial] = nrm * nrm;
  });
  return mean_estimate(losses);
}

}  // namespace submx
