#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "submx/grid.hpp"

namespace submx {

// Symmetric 0/1 graph with zero diagonal. Vertices are labeled 1..N in all
// public interfaces; the i<j half is the source of truth and is mirrored.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(std::size_t n) : n_(n), bits_(n, n) {}

  std::size_t size() const { return n_; }
  bool edge(std::uint32_t i, std::uint32_t j) const {  // 1-based labels
    return i != j && bits_.get(i - 1, j - 1);
  }
  void set_edge(std::uint32_t i, std::uint32_t j, bool v) {
    if (i == j) return;
    bits_.set(i - 1, j - 1, v);
    bits_.set(j - 1, i - 1, v);
  }

  const std::vector<std::uint32_t>& planted() const { return planted_; }
  void set_planted(std::vector<std::uint32_t> v) { planted_ = std::move(v); }

  std::size_t edge_count() const { return bits_.count_ones() / 2; }

  // Lower-left quarter A0 = A[{N2+1..N}, {1..N2}]: entry (i,j) (0-based) is
  // the edge between vertices N2+i+1 and j+1. This is the only part the
  // reduction consumes.
  BitGrid lower_left_quarter() const;

 private:
  std::size_t n_ = 0;
  BitGrid bits_;
  std::vector<std::uint32_t> planted_;
};

// G(N, 1/2): each pair joined independently with probability 1/2. Edges are
// keyed by (seed, graph_id, i, j), so generation is pure and order-free.
AdjacencyMatrix sample_er(std::size_t n, std::uint64_t seed,
                          std::uint64_t graph_id = 0);

// G(N, 1/2, kappa): ER graph plus a clique on a uniformly random
// kappa-subset (partial Fisher-Yates), recorded in planted().
AdjacencyMatrix sample_planted(std::size_t n, std::size_t kappa,
                               std::uint64_t seed, std::uint64_t graph_id = 0);

// Split a vertex set against the two halves of [N]:
// V1 = (V intersect {N2+1..N}) - N2, V2 = V intersect [N2].
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> split_clique(
    const std::vector<std::uint32_t>& v, std::size_t n);

// Index folding h(x) = 1 + (x-1) mod p, mapping [N2] onto [p].
inline std::uint32_t fold_index(std::uint32_t x, std::size_t p) {
  return 1 + (x - 1) % static_cast<std::uint32_t>(p);
}

// h^{-1}(a) within [N2] = {a, a+p, ..., a+(ell-1)p} for N2 = p*ell.
std::vector<std::uint32_t> fold_preimage(std::uint32_t a, std::size_t p,
                                         std::size_t ell);

// Image of a vertex set under folding (sorted, unique).
std::vector<std::uint32_t> image_support(const std::vector<std::uint32_t>& v,
                                         std::size_t p);

// Both folded images reach size k.
inline bool event_holds(const std::vector<std::uint32_t>& u1,
                        const std::vector<std::uint32_t>& u2, std::size_t k) {
  return u1.size() >= k && u2.size() >= k;
}

struct FoldReport {
  std::vector<std::uint32_t> v1, v2;  // split halves
  std::vector<std::uint32_t> u1, u2;  // folded images
  bool event = false;                 // |u1| >= k and |u2| >= k
};
FoldReport fold_report(const std::vector<std::uint32_t>& clique, std::size_t n,
                       std::size_t p, std::size_t k);

// Analytic bound on the failure probability of the event:
// 40k (e/4)^{5k} + 2k exp(-4k log(p/(20k))).
double event_failure_bound(std::size_t k, std::size_t p);

// Graph I/O: text edge list with header "N" or "N kappa" (planted vertices
// on the following line when kappa > 0), and a packed binary format.
void write_edgelist(const std::string& path, const AdjacencyMatrix& a);
AdjacencyMatrix read_edgelist(const std::string& path);
void write_graph_bin(const std::string& path, const AdjacencyMatrix& a);
AdjacencyMatrix read_graph_bin(const std::string& path);

}  // namespace submx
