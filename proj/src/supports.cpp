#include "sparseid/supports.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sparseid {

bool RankOneSupport::contains(Cell c) const {
  return std::binary_search(rows.begin(), rows.end(), c.row) && std::binary_search(cols.begin(), cols.end(), c.col);
}

SupportMask RankOneSupport::mask(std::size_t m, std::size_t n) const {
  SupportMask out(m, n);
  for (int k : rows)
    for (int l : cols) out.set(k - 1, l - 1);
  return out;
}

namespace {

void normalize_indices(std::vector<int>& idx, std::size_t bound, const char* what) {
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw std::invalid_argument(std::string("repeated ") + what + " index in rank-one support");
  for (int v : idx)
    if (v < 1 || static_cast<std::size_t>(v) > bound)
      throw std::invalid_argument(std::string(what) + " index " + std::to_string(v) + " out of range");
}

}  // namespace

RankOneSupportTuple::RankOneSupportTuple(std::size_t m, std::size_t n, std::vector<RankOneSupport> supports)
    : m_(m), n_(n), supports_(std::move(supports)) {
  for (auto& s : supports_) {
    normalize_indices(s.rows, m_, "row");
    normalize_indices(s.cols, n_, "column");
    if (s.rows.empty() != s.cols.empty())
      throw std::invalid_argument("rank-one support has an empty row set but not an empty column set (or vice versa)");
  }
}

std::vector<int> RankOneSupportTuple::coverage() const {
  std::vector<int> cover(m_ * n_, 0);
  for (const auto& s : supports_)
    for (int k : s.rows)
      for (int l : s.cols) ++cover[(k - 1) * n_ + (l - 1)];
  return cover;
}

bool BipartiteGraph::is_complete() const {
  for (int k : red)
    for (int l : blue)
      if (!edges(k - 1, l - 1)) return false;
  return true;
}

void SupportFamilySpec::validate() const {
  if (left_col_sparsity == 0 || right_col_sparsity == 0)
    throw std::invalid_argument("column sparsities must be positive");
  if (left_col_sparsity > m || right_col_sparsity > n)
    throw std::invalid_argument("column sparsity exceeds the matrix dimension");
  if (r == 0) throw std::invalid_argument("family rank r must be positive");
}

RankOneSupportTuple lift_supports(const SupportMask& s_left, const SupportMask& s_right) {
  if (s_left.cols() != s_right.cols())
    throw std::invalid_argument("lift_supports: left has " + std::to_string(s_left.cols()) + " columns, right has " +
                                std::to_string(s_right.cols()));
  std::vector<RankOneSupport> supports;
  supports.reserve(s_left.cols());
  for (std::size_t i = 0; i < s_left.cols(); ++i) {
    RankOneSupport s{s_left.col_support(i), s_right.col_support(i)};
    if (s.empty()) s = {};
    supports.push_back(std::move(s));
  }
  return RankOneSupportTuple(s_left.rows(), s_right.rows(), std::move(supports));
}

BipartiteGraphTuple observable_graphs(const RankOneSupportTuple& s) {
  const auto cover = s.coverage();
  BipartiteGraphTuple out;
  out.reserve(s.r());
  for (const auto& si : s.supports()) {
    BipartiteGraph g{si.rows, si.cols, SupportMask(s.m(), s.n())};
    for (int k : si.rows)
      for (int l : si.cols)
        if (cover[(k - 1) * s.n() + (l - 1)] == 1) g.edges.set(k - 1, l - 1);
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

BipartiteGraph complete_components(const BipartiteGraph& g) {
  // Vertices: red[0..R) then blue[0..B).
  const std::size_t R = g.red.size();
  DisjointSets sets(R + g.blue.size());
  for (std::size_t a = 0; a < R; ++a)
    for (std::size_t b = 0; b < g.blue.size(); ++b)
      if (g.edges(g.red[a] - 1, g.blue[b] - 1)) sets.unite(static_cast<int>(a), static_cast<int>(R + b));
  BipartiteGraph out = g;
  for (std::size_t a = 0; a < R; ++a)
    for (std::size_t b = 0; b < g.blue.size(); ++b)
      if (sets.find(static_cast<int>(a)) == sets.find(static_cast<int>(R + b)))
        out.edges.set(g.red[a] - 1, g.blue[b] - 1);
  return out;
}

bool in_completion(const BipartiteGraph& g, int k, int l) {
  return std::binary_search(g.red.begin(), g.red.end(), k) && std::binary_search(g.blue.begin(), g.blue.end(), l);
}

}  // namespace

BipartiteGraphTuple complete_inside(const BipartiteGraphTuple& g) {
  BipartiteGraphTuple out;
  out.reserve(g.size());
  for (const auto& gi : g) out.push_back(complete_components(gi));
  return out;
}

BipartiteGraphTuple complete_across(const BipartiteGraphTuple& g) {
  BipartiteGraphTuple out = g;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int k : g[i].red)
      for (int l : g[i].blue) {
        if (g[i].edges(k - 1, l - 1)) continue;
        bool known_elsewhere = true;
        for (std::size_t j = 0; j < g.size() && known_elsewhere; ++j) {
          if (j == i || !in_completion(g[j], k, l)) continue;
          known_elsewhere = g[j].edges(k - 1, l - 1);
        }
        if (known_elsewhere) out[i].edges.set(k - 1, l - 1);
      }
  }
  return out;
}

BipartiteGraphTuple closure_step(const BipartiteGraphTuple& g) { return complete_across(complete_inside(g)); }

ClosureResult closure(const BipartiteGraphTuple& g) {
  ClosureResult result{g, 0};
  for (;;) {
    BipartiteGraphTuple next = closure_step(result.graphs);
    if (next == result.graphs) return result;
    result.graphs = std::move(next);
    ++result.steps;
  }
}

bool is_closable(const RankOneSupportTuple& s) {
  const auto closed = closure(observable_graphs(s)).graphs;
  return std::all_of(closed.begin(), closed.end(), [](const BipartiteGraph& g) { return g.is_complete(); });
}

bool precedes(const BipartiteGraphTuple& g, const BipartiteGraphTuple& h) {
  if (g.size() != h.size()) return false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].red != h[i].red || g[i].blue != h[i].blue) return false;
    if (!g[i].edges.subset_of(h[i].edges)) return false;
  }
  return true;
}

SupportMask butterfly_support(int ell, int L) {
  if (L < 1 || ell < 1 || ell > L)
    throw std::invalid_argument("butterfly_support: need 1 <= ell <= L (ell=" + std::to_string(ell) +
                                ", L=" + std::to_string(L) + ")");
  return partial_product_support(ell, ell, L);
}

SupportMask partial_product_support(int q, int p, int L) {
  if (L < 1 || p < 1 || p > q || q > L)
    throw std::invalid_argument("partial_product_support: need 1 <= p <= q <= L (q=" + std::to_string(q) +
                                ", p=" + std::to_string(p) + ", L=" + std::to_string(L) + ")");
  const std::size_t n = std::size_t{1} << L;
  const SupportMask block = kronecker(SupportMask::full(std::size_t{1} << (q - p + 1), std::size_t{1} << (q - p + 1)),
                                      SupportMask::identity(std::size_t{1} << (p - 1)));
  return kronecker(SupportMask::identity(n >> q), block);
}

bool in_family(const SupportMask& s_left, const SupportMask& s_right, const SupportFamilySpec& fam) {
  if (s_left.rows() != fam.m || s_right.rows() != fam.n || s_left.cols() != fam.r || s_right.cols() != fam.r)
    throw std::invalid_argument("in_family: support dimensions do not match the family");
  for (std::size_t j = 0; j < fam.r; ++j) {
    if (s_left.col_count(j) > fam.left_col_sparsity) return false;
    if (s_right.col_count(j) > fam.right_col_sparsity) return false;
  }
  return true;
}

}  // namespace sparseid
