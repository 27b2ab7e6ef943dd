#pragma once

#include <cmath>

namespace submx {

inline constexpr double kSqrt2 = 1.4142135623730950488016887242097;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

inline double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Survival function 1 - Phi(x). erfc carries us to x ~ 37.5 before
// underflow; beyond that switch to the tail expansion phi(x)/x * (1 - 1/x^2 + 3/x^4 - ...).
double normal_sf(double x);

inline double normal_cdf(double x) { return normal_sf(-x); }

// Inverse CDF (Acklam's rational approximation + one Halley refinement).
double normal_quantile(double p);

}  // namespace submx
