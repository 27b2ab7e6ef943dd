#pragma once

#include <cstdint>
#include <functional>

#include "submx/grid.hpp"
#include "submx/model.hpp"
#include "submx/oracles.hpp"

namespace submx {

// Zero out entries with |x| <= level.
DataMatrix hard_threshold(const DataMatrix& x, double level);

// Keep the k rows of largest Euclidean norm (ties to the smaller index),
// zero the rest.
DataMatrix row_project(const DataMatrix& x, std::size_t k);

// lq norm of the singular values; q = INFINITY gives the spectral norm.
double schatten_norm(const DataMatrix& x, double q);

// Minimax rate shape k^{2/q+1} + k^{max(2/q,1)} log(e p / k).
double schatten_rate(std::size_t p, std::size_t k, double q);

// sqrt(4 log p), the default thresholding level.
double default_threshold_level(std::size_t p);

// Composed estimator: entrywise hard thresholding then row projection.
DataMatrix threshold_project(const DataMatrix& x, double level, std::size_t k);

// Monte Carlo estimate of E || est(X) - theta ||_{Sq}^2 over X ~ N(theta, I).
using MatrixEstimator = std::function<DataMatrix(const DataMatrix&)>;
MeanEstimate estimation_risk(const MatrixEstimator& est, const MeanMatrixSpec& theta,
                             double q, std::uint64_t trials, std::uint64_t seed,
                             unsigned threads = 1);

}  // namespace submx
