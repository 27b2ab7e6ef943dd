#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "submx/grid.hpp"

namespace submx {

// Matrix container file: little-endian header (magic "SMX1", u32 p,
// i32 scale with -1 meaning real-valued, u64 seed tag), then p*p row-major
// entries (int64 mantissas for dyadic, IEEE-754 doubles for real).
struct MatrixFile {
  std::optional<DataMatrix> real;
  std::optional<QuantizedMatrix> dyadic;
  std::uint64_t seed = 0;

  std::size_t dim() const {
    return real ? real->rows() : dyadic->dim();
  }
  // Dyadic payloads are converted exactly when the mantissa magnitude stays
  // below 2^53.
  DataMatrix as_real() const { return real ? *real : dyadic->to_real(); }
};

void write_matrix(const std::string& path, const DataMatrix& m, std::uint64_t seed);
void write_matrix(const std::string& path, const QuantizedMatrix& m, std::uint64_t seed);
MatrixFile read_matrix(const std::string& path);
void write_matrix_csv(const std::string& path, const DataMatrix& m);

}  // namespace submx
