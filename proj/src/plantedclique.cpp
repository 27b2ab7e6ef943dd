#include "submx/plantedclique.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "submx/rng.hpp"

namespace submx {

namespace {
constexpr std::uint64_t kEdgeStream = 0x6772617068ULL;    // edge coins
constexpr std::uint64_t kCliqueStream = 0x636c697175ULL;  // clique choice
constexpr std::uint32_t kGraphMagic = 0x31474D53;         // "SMG1"
}  // namespace

BitGrid AdjacencyMatrix::lower_left_quarter() const {
  if (n_ % 2 != 0)
    throw std::invalid_argument("lower_left_quarter: N must be even");
  const std::size_t n2 = n_ / 2;
  BitGrid q(n2, n2);
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      q.set(i, j, bits_.get(n2 + i, j));
  return q;
}

AdjacencyMatrix sample_er(std::size_t n, std::uint64_t seed, std::uint64_t graph_id) {
  if (n < 1) throw std::invalid_argument("sample_er: N < 1");
  AdjacencyMatrix a(n);
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = i + 1; j <= n; ++j)
      a.set_edge(i, j, key_hash(seed, kEdgeStream ^ graph_id, i, j) & 1u);
  return a;
}

AdjacencyMatrix sample_planted(std::size_t n, std::size_t kappa,
                               std::uint64_t seed, std::uint64_t graph_id) {
  if (kappa < 1 || kappa > n)
    throw std::invalid_argument("sample_planted: kappa outside [1,N]");
  AdjacencyMatrix a = sample_er(n, seed, graph_id);

  // uniform kappa-subset by partial Fisher-Yates
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 1u);
  SplitMix g(key_hash(seed, kCliqueStream ^ graph_id));
  for (std::size_t i = 0; i < kappa; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(g.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::uint32_t> clique(pool.begin(), pool.begin() + static_cast<long>(kappa));
  std::sort(clique.begin(), clique.end());

  for (std::size_t i = 0; i < clique.size(); ++i)
    for (std::size_t j = i + 1; j < clique.size(); ++j)
      a.set_edge(clique[i], clique[j], true);
  a.set_planted(std::move(clique));
  return a;
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> split_clique(
    const std::vector<std::uint32_t>& v, std::size_t n) {
  if (n % 2 != 0) throw std::invalid_argument("split_clique: N must be even");
  const std::uint32_t n2 = static_cast<std::uint32_t>(n / 2);
  std::vector<std::uint32_t> v1, v2;
  for (std::uint32_t x : v) {
    if (x < 1 || x > n) throw std::out_of_range("split_clique: vertex outside [1,N]");
    if (x > n2)
      v1.push_back(x - n2);
    else
      v2.push_back(x);
  }
  std::sort(v1.begin(), v1.end());
  std::sort(v2.begin(), v2.end());
  return {std::move(v1), std::move(v2)};
}

std::vector<std::uint32_t> fold_preimage(std::uint32_t a, std::size_t p,
                                         std::size_t ell) {
  if (a < 1 || a > p) throw std::out_of_range("fold_preimage: a outside [1,p]");
  std::vector<std::uint32_t> out(ell);
  for (std::size_t i = 0; i < ell; ++i)
    out[i] = a + static_cast<std::uint32_t>(i * p);
  return out;
}

std::vector<std::uint32_t> image_support(const std::vector<std::uint32_t>& v,
                                         std::size_t p) {
  std::vector<std::uint32_t> out;
  out.reserve(v.size());
  for (std::uint32_t x : v) out.push_back(fold_index(x, p));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FoldReport fold_report(const std::vector<std::uint32_t>& clique, std::size_t n,
                       std::size_t p, std::size_t k) {
  FoldReport r;
  auto [v1, v2] = split_clique(clique, n);
  r.v1 = std::move(v1);
  r.v2 = std::move(v2);
  r.u1 = image_support(r.v1, p);
  r.u2 = image_support(r.v2, p);
  r.event = event_holds(r.u1, r.u2, k);
  return r;
}

double event_failure_bound(std::size_t k, std::size_t p) {
  const double kk = static_cast<double>(k);
  const double first = 40.0 * kk * std::pow(std::exp(1.0) / 4.0, 5.0 * kk);
  const double second =
      2.0 * kk * std::exp(-4.0 * kk * std::log(static_cast<double>(p) / (20.0 * kk)));
  return first + second;
}

void write_edgelist(const std::string& path, const AdjacencyMatrix& a) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << a.size();
  if (!a.planted().empty()) out << ' ' << a.planted().size();
  out << '\n';
  if (!a.planted().empty()) {
    for (std::size_t i = 0; i < a.planted().size(); ++i)
      out << a.planted()[i] << (i + 1 == a.planted().size() ? '\n' : ' ');
  }
  for (std::uint32_t i = 1; i <= a.size(); ++i)
    for (std::uint32_t j = i + 1; j <= a.size(); ++j)
      if (a.edge(i, j)) out << i << ' ' << j << '\n';
}

AdjacencyMatrix read_edgelist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error(path + ": empty graph file");
  std::istringstream hs(header);
  std::size_t n = 0, kappa = 0;
  if (!(hs >> n)) throw std::runtime_error(path + ": bad header");
  hs >> kappa;
  AdjacencyMatrix a(n);
  if (kappa > 0) {
    std::vector<std::uint32_t> v(kappa);
    for (auto& x : v)
      if (!(in >> x)) throw std::runtime_error(path + ": truncated planted set");
    std::sort(v.begin(), v.end());
    a.set_planted(std::move(v));
  }
  std::uint32_t i, j;
  while (in >> i >> j) {
    if (i < 1 || j < 1 || i > n || j > n)
      throw std::runtime_error(path + ": edge endpoint outside [1,N]");
    a.set_edge(i, j, true);
  }
  return a;
}

void write_graph_bin(const std::string& path, const AdjacencyMatrix& a) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  const std::uint32_t n = static_cast<std::uint32_t>(a.size());
  const std::uint32_t kappa = static_cast<std::uint32_t>(a.planted().size());
  out.write(reinterpret_cast<const char*>(&kGraphMagic), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&kappa), 4);
  for (std::uint32_t v : a.planted()) out.write(reinterpret_cast<const char*>(&v), 4);
  // upper triangle, row by row, packed LSB-first
  std::uint64_t acc = 0;
  unsigned fill = 0;
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = i + 1; j <= n; ++j) {
      if (a.edge(i, j)) acc |= std::uint64_t{1} << fill;
      if (++fill == 64) {
        out.write(reinterpret_cast<const char*>(&acc), 8);
        acc = 0;
        fill = 0;
      }
    }
  if (fill > 0) out.write(reinterpret_cast<const char*>(&acc), 8);
  if (!out) throw std::runtime_error("write failed: " + path);
}

AdjacencyMatrix read_graph_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint32_t magic = 0, n = 0, kappa = 0;
  in.read(reinterpret_cast<char*>(&magic), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&kappa), 4);
  if (!in || magic != kGraphMagic) throw std::runtime_error(path + ": not a graph file");
  AdjacencyMatrix a(n);
  if (kappa > 0) {
    std::vector<std::uint32_t> v(kappa);
    in.read(reinterpret_cast<char*>(v.data()), 4 * kappa);
    if (!in) throw std::runtime_error(path + ": truncated planted set");
    a.set_planted(std::move(v));
  }
  std::uint64_t acc = 0;
  unsigned avail = 0;
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = i + 1; j <= n; ++j) {
      if (avail == 0) {
        in.read(reinterpret_cast<char*>(&acc), 8);
        if (!in) throw std::runtime_error(path + ": truncated bit payload");
        avail = 64;
      }
      a.set_edge(i, j, acc & 1u);
      acc >>= 1;
      --avail;
    }
  return a;
}

}  // namespace submx
