#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace submx {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Hash a (seed, stream, a, b) key into a generator state. Draws keyed this
// way are independent of iteration order and thread count.
inline std::uint64_t key_hash(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (stream + kGolden));
  h = mix64(h ^ (a + kGolden));
  h = mix64(h ^ (b + kGolden));
  return h;
}

// Sequential splitmix64 stream.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in (0,1]
  double uniform_pos() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  // unbiased integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("SplitMix::below: n must be positive");
    const std::uint64_t cutoff = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t u = next();
      if (u < cutoff) return u % n;
    }
  }

  // standard normal; Box-Muller pair, one value cached
  double normal() {
    if (has_cache_) {
      has_cache_ = false;
      return cache_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cache_ = r * std::sin(a);
    has_cache_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double cache_ = 0.0;
  bool has_cache_ = false;
};

// One standard normal fully determined by (seed, stream, i, j).
inline double normal_at(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t i, std::uint64_t j) {
  SplitMix g(key_hash(seed, stream, i, j));
  const double u1 = g.uniform_pos();
  const double u2 = g.uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.283185307179586476925286766559 * u2);
}

// Addressable fair-bit source. Bit r of the stream is bit (r mod 64) of
// word(r / 64); reads never advance hidden state, so disjoint bit ranges
// can be consumed concurrently.
class CoinSource {
 public:
  virtual ~CoinSource() = default;
  virtual std::uint64_t word(std::uint64_t index) const = 0;
  // total bits available; reads past this throw
  virtual std::uint64_t limit_bits() const { return UINT64_MAX; }

  // count <= 64 bits starting at absolute offset, bit (offset) as LSB
  std::uint64_t bits(std::uint64_t offset, unsigned count) const {
    if (count == 0) return 0;
    if (count > 64) throw std::invalid_argument("CoinSource::bits: count > 64");
    if (limit_bits() != UINT64_MAX && offset + count > limit_bits())
      throw std::runtime_error("coin stream exhausted");
    const std::uint64_t w = offset >> 6;
    const unsigned s = static_cast<unsigned>(offset & 63);
    std::uint64_t v = word(w) >> s;
    if (s + count > 64) v |= word(w + 1) << (64 - s);
    if (count < 64) v &= (std::uint64_t{1} << count) - 1;
    return v;
  }
};

// Infinite counter-based stream keyed by (seed, stream).
class CounterCoins final : public CoinSource {
 public:
  explicit CounterCoins(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(key_hash(seed, stream)) {}
  std::uint64_t word(std::uint64_t index) const override {
    return mix64(key_ + index * kGolden);
  }

 private:
  std::uint64_t key_;
};

// Finite stream over a fixed word vector.
class FixedCoins final : public CoinSource {
 public:
  FixedCoins(std::vector<std::uint64_t> words, std::uint64_t nbits)
      : words_(std::move(words)), nbits_(nbits) {
    if (nbits_ > 64 * words_.size())
      throw std::invalid_argument("FixedCoins: bit count exceeds storage");
  }
  std::uint64_t word(std::uint64_t index) const override {
    if (index >= words_.size()) throw std::runtime_error("coin stream exhausted");
    return words_[index];
  }
  std::uint64_t limit_bits() const override { return nbits_; }

 private:
  std::vector<std::uint64_t> words_;
  std::uint64_t nbits_;
};

}  // namespace submx
