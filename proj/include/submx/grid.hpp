#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "submx/dyadic.hpp"

namespace submx {

// Dense row-major matrix.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using DataMatrix = Grid<double>;

// p x p matrix of dyadic values at a common scale t.
struct QuantizedMatrix {
  unsigned scale = 0;
  Grid<std::int64_t> mantissas;

  std::size_t dim() const { return mantissas.rows(); }
  DyadicReal entry(std::size_t i, std::size_t j) const {
    return DyadicReal(mantissas.at(i, j), scale);
  }
  double value(std::size_t i, std::size_t j) const {
    return entry(i, j).value();
  }
  DataMatrix to_real() const {
    DataMatrix out(mantissas.rows(), mantissas.cols());
    for (std::size_t i = 0; i < mantissas.rows(); ++i)
      for (std::size_t j = 0; j < mantissas.cols(); ++j)
        out.at(i, j) = value(i, j);
    return out;
  }
  friend bool operator==(const QuantizedMatrix& a, const QuantizedMatrix& b) {
    return a.scale == b.scale && a.mantissas == b.mantissas;
  }
};

// Packed 0/1 matrix, one bit per cell.
class BitGrid {
 public:
  BitGrid() = default;
  BitGrid(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_((cols + 63) / 64),
        words_(rows * stride_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t i, std::size_t j) const {
    return (words_[i * stride_ + (j >> 6)] >> (j & 63)) & 1u;
  }
  void set(std::size_t i, std::size_t j, bool v) {
    std::uint64_t& w = words_[i * stride_ + (j >> 6)];
    const std::uint64_t m = std::uint64_t{1} << (j & 63);
    if (v)
      w |= m;
    else
      w &= ~m;
  }

  std::size_t count_ones() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
  }

  friend bool operator==(const BitGrid& a, const BitGrid& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.words_ == b.words_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace submx
