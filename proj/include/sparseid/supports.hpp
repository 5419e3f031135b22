#pragma once

// Rank-one support tuples, their observable bipartite graphs and the
// closure under inside/across completion, plus the butterfly support
// patterns used by the hierarchical factorization.

#include "sparseid/core.hpp"

#include <vector>

namespace sparseid {

// rows x cols product set. Both lists are sorted, 1-based, without repeats.
struct RankOneSupport {
  std::vector<int> rows;
  std::vector<int> cols;

  bool empty() const { return rows.empty() || cols.empty(); }
  std::size_t size() const { return rows.size() * cols.size(); }
  bool contains(Cell c) const;
  SupportMask mask(std::size_t m, std::size_t n) const;

  friend auto operator<=>(const RankOneSupport&, const RankOneSupport&) = default;
};

class RankOneSupportTuple {
 public:
  RankOneSupportTuple() = default;
  // Sorts each row/column list; throws if indices are out of range,
  // repeated, or exactly one of the two lists is empty.
  RankOneSupportTuple(std::size_t m, std::size_t n, std::vector<RankOneSupport> supports);

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t r() const { return supports_.size(); }
  const RankOneSupport& operator[](std::size_t i) const { return supports_[i]; }
  const std::vector<RankOneSupport>& supports() const { return supports_; }

  // Number of supports containing each cell, row-major.
  std::vector<int> coverage() const;

  friend bool operator==(const RankOneSupportTuple&, const RankOneSupportTuple&) = default;

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<RankOneSupport> supports_;
};

// Red vertices are rows, blue vertices are columns; `edges` is m x n.
struct BipartiteGraph {
  std::vector<int> red;
  std::vector<int> blue;
  SupportMask edges;

  bool is_complete() const;
  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;
};

using BipartiteGraphTuple = std::vector<BipartiteGraph>;

struct SupportFamilySpec {
  std::size_t left_col_sparsity = 1;   // a: ones per column of the left support
  std::size_t right_col_sparsity = 1;  // b: ones per column of the right support
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t r = 0;

  void validate() const;
};

// Support i is (column i of s_left) x (column i of s_right).
RankOneSupportTuple lift_supports(const SupportMask& s_left, const SupportMask& s_right);

BipartiteGraphTuple observable_graphs(const RankOneSupportTuple& s);

// Operation a: complete every connected component of each graph.
BipartiteGraphTuple complete_inside(const BipartiteGraphTuple& g);
// Operation b: add each edge missing only in graph i among the graphs whose
// completion contains it.
BipartiteGraphTuple complete_across(const BipartiteGraphTuple& g);

// (b o a)(g)
BipartiteGraphTuple closure_step(const BipartiteGraphTuple& g);

struct ClosureResult {
  BipartiteGraphTuple graphs;
  int steps = 0;  // minimal N with (b o a)^{N+1} = (b o a)^N
};

ClosureResult closure(const BipartiteGraphTuple& g);

bool is_closable(const RankOneSupportTuple& s);

// Componentwise edge inclusion; vertex sets must agree.
bool precedes(const BipartiteGraphTuple& g, const BipartiteGraphTuple& h);

// S^ell = I_{N/2^ell} (x) (U_2 (x) I_{2^{ell-1}}), N = 2^L.
SupportMask butterfly_support(int ell, int L);

// W^{[q;p]} = I_{N/2^q} (x) (U_{2^{q-p+1}} (x) I_{2^{p-1}}).
SupportMask partial_product_support(int q, int p, int L);

bool in_family(const SupportMask& s_left, const SupportMask& s_right, const SupportFamilySpec& fam);

}  // namespace sparseid
