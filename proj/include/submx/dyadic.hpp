#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace submx {

// Largest supported scale. Values produced by the pipelines stay inside
// [-M-1, M+1], so 56 fractional bits keep every mantissa inside int64.
inline constexpr unsigned kMaxDyadicScale = 56;

// Exact dyadic rational: value = mantissa * 2^-scale. Construction never
// rounds; comparisons are by value, independent of the stored scale.
class DyadicReal {
 public:
  DyadicReal() = default;
  DyadicReal(std::int64_t mantissa, unsigned scale)
      : mantissa_(mantissa), scale_(scale) {
    if (scale > 62)
      throw std::invalid_argument("DyadicReal: scale " + std::to_string(scale) +
                                  " too large");
  }

  std::int64_t mantissa() const { return mantissa_; }
  unsigned scale() const { return scale_; }
  double value() const { return std::ldexp(static_cast<double>(mantissa_), -static_cast<int>(scale_)); }

  friend bool operator==(const DyadicReal& a, const DyadicReal& b) {
    return cross(a, b) == cross(b, a);
  }
  friend std::strong_ordering operator<=>(const DyadicReal& a, const DyadicReal& b) {
    return cross(a, b) <=> cross(b, a);
  }

 private:
  // a.mantissa brought to the common scale max(ta, tb); fits __int128.
  static __int128 cross(const DyadicReal& a, const DyadicReal& b) {
    const unsigned common = a.scale_ > b.scale_ ? a.scale_ : b.scale_;
    return static_cast<__int128>(a.mantissa_) << (common - a.scale_);
  }

  std::int64_t mantissa_ = 0;
  unsigned scale_ = 0;
};

// floor(2^t x) / 2^t with exact floor semantics (rounds toward -inf).
inline DyadicReal quantize(double x, unsigned t) {
  if (t > kMaxDyadicScale)
    throw std::invalid_argument("quantize: scale t=" + std::to_string(t) +
                                " exceeds " + std::to_string(kMaxDyadicScale));
  if (!std::isfinite(x))
    throw std::invalid_argument("quantize: non-finite input");
  const double scaled = std::ldexp(x, static_cast<int>(t));
  const double f = std::floor(scaled);
  if (!(f >= -9.223372036854775e18 && f < 9.223372036854775e18))
    throw std::overflow_error("quantize: mantissa overflow for x=" +
                              std::to_string(x) + " at t=" + std::to_string(t));
  return DyadicReal(static_cast<std::int64_t>(f), t);
}

}  // namespace submx
