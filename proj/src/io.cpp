#include "submx/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace submx {

namespace {

constexpr std::uint32_t kMagic = 0x31584D53;  // "SMX1"
constexpr std::int32_t kRealSentinel = -1;

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::ifstream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw std::runtime_error("matrix file truncated");
  return v;
}

void write_header(std::ofstream& out, std::uint32_t p, std::int32_t scale,
                  std::uint64_t seed) {
  put(out, kMagic);
  put(out, p);
  put(out, scale);
  put(out, seed);
}

}  // namespace

void write_matrix(const std::string& path, const DataMatrix& m, std::uint64_t seed) {
  if (m.rows() != m.cols()) throw std::invalid_argument("write_matrix: matrix not square");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_header(out, static_cast<std::uint32_t>(m.rows()), kRealSentinel, seed);
  out.write(reinterpret_cast<const char*>(m.data().data()),
            static_cast<std::streamsize>(m.data().size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_matrix(const std::string& path, const QuantizedMatrix& m, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_header(out, static_cast<std::uint32_t>(m.dim()),
               static_cast<std::int32_t>(m.scale), seed);
  out.write(reinterpret_cast<const char*>(m.mantissas.data().data()),
            static_cast<std::streamsize>(m.mantissas.data().size() * sizeof(std::int64_t)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

MatrixFile read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (get<std::uint32_t>(in) != kMagic)
    throw std::runtime_error(path + ": not a matrix file");
  const auto p = get<std::uint32_t>(in);
  const auto scale = get<std::int32_t>(in);
  const auto seed = get<std::uint64_t>(in);
  MatrixFile f;
  f.seed = seed;
  if (scale == kRealSentinel) {
    DataMatrix m(p, p);
    in.read(reinterpret_cast<char*>(m.data().data()),
            static_cast<std::streamsize>(m.data().size() * sizeof(double)));
    if (!in) throw std::runtime_error("matrix file truncated");
    f.real = std::move(m);
  } else {
    QuantizedMatrix q;
    q.scale = static_cast<unsigned>(scale);
    q.mantissas = Grid<std::int64_t>(p, p);
    in.read(reinterpret_cast<char*>(q.mantissas.data().data()),
            static_cast<std::streamsize>(q.mantissas.data().size() * sizeof(std::int64_t)));
    if (!in) throw std::runtime_error("matrix file truncated");
    f.dyadic = std::move(q);
  }
  return f;
}

void write_matrix_csv(const std::string& path, const DataMatrix& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  char buf[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.at(i, j));
      out << buf << (j + 1 == m.cols() ? '\n' : ',');
    }
  }
}

}  // namespace submx
