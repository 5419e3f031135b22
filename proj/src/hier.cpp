#include "sparseid/hier.hpp"

#include "sparseid/supports.hpp"
#include "sparseid/transforms.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace sparseid {

ComplexMatrix chain_product(std::span<const ComplexMatrix> chain) {
  if (chain.empty()) throw std::invalid_argument("chain_product: empty chain");
  // Right to left so that each step multiplies a sparse factor into a dense accumulator.
  ComplexMatrix acc = chain.back();
  for (std::size_t t = chain.size() - 1; t-- > 0;) acc = chain[t] * acc;
  return acc;
}

std::optional<TreeShape> parse_tree_shape(std::string_view name) {
  if (name == "left-comb") return TreeShape::LeftComb;
  if (name == "right-comb") return TreeShape::RightComb;
  if (name == "balanced") return TreeShape::Balanced;
  return std::nullopt;
}

class TreeBuilder {
 public:
  static PartitioningTree from_shape(TreeShape shape, int p, int q) {
    if (p < 1 || p > q) throw std::invalid_argument("make_tree: need 1 <= p <= q");
    PartitioningTree tree;
    build_shape(tree, shape, p, q);
    return tree;
  }

  static PartitioningTree from_description(const TreeDescription& d, int p, int q) {
    if (p < 1 || p > q) throw std::invalid_argument("make_tree: need 1 <= p <= q");
    PartitioningTree tree;
    build_description(tree, d);
    const auto& root = tree.root();
    if (root.lo != p || root.hi != q)
      throw std::invalid_argument("tree root covers {" + std::to_string(root.lo) + ".." + std::to_string(root.hi) +
                                  "}, expected {" + std::to_string(p) + ".." + std::to_string(q) + "}");
    return tree;
  }

 private:
  static int add(PartitioningTree& tree, int lo, int hi) {
    tree.nodes_.push_back({lo, hi, -1, -1});
    return static_cast<int>(tree.nodes_.size() - 1);
  }

  static int build_shape(PartitioningTree& tree, TreeShape shape, int lo, int hi) {
    const int id = add(tree, lo, hi);
    if (lo == hi) return id;
    int split = lo;  // right child is {lo..split}
    switch (shape) {
      case TreeShape::LeftComb: split = lo; break;
      case TreeShape::RightComb: split = hi - 1; break;
      case TreeShape::Balanced: split = lo + (hi - lo) / 2; break;
    }
    const int left = build_shape(tree, shape, split + 1, hi);
    const int right = build_shape(tree, shape, lo, split);
    tree.nodes_[id].left = left;
    tree.nodes_[id].right = right;
    return id;
  }

  static int build_description(PartitioningTree& tree, const TreeDescription& d) {
    if (d.children.empty()) {
      if (d.leaf < 1) throw std::invalid_argument("tree leaf index must be positive");
      return add(tree, d.leaf, d.leaf);
    }
    if (d.children.size() != 2) throw std::invalid_argument("internal tree node must have exactly two children");
    const int id = add(tree, 0, 0);
    const int left = build_description(tree, d.children[0]);
    const int right = build_description(tree, d.children[1]);
    const auto& l = tree.nodes_[left];
    const auto& r = tree.nodes_[right];
    if (l.lo <= r.hi) throw std::invalid_argument("left child indices must be larger than right child indices");
    if (l.lo != r.hi + 1) throw std::invalid_argument("children do not form a consecutive range");
    tree.nodes_[id] = {r.lo, l.hi, left, right};
    return id;
  }
};

PartitioningTree make_tree(TreeShape shape, int p, int q) { return TreeBuilder::from_shape(shape, p, q); }

PartitioningTree make_tree(const TreeDescription& description, int p, int q) {
  return TreeBuilder::from_description(description, p, q);
}

namespace {

TreeDescription describe_node(const PartitioningTree& tree, int id) {
  const auto& n = tree.node(id);
  if (n.is_leaf()) return {n.lo, {}};
  return {0, {describe_node(tree, n.left), describe_node(tree, n.right)}};
}

}  // namespace

TreeDescription describe(const PartitioningTree& tree) { return describe_node(tree, 0); }

SupportMask chain_partial_support(int q, int p, int L, bool dft_bit_reversal) {
  SupportMask w = partial_product_support(q, p, L);
  if (dft_bit_reversal && p == 1) w = permute_cols(w, bit_reversal_perm(std::size_t{1} << L));
  return w;
}

namespace {

struct Recursion {
  int L;
  FactorizeOptions options;
  TolerancePolicy tol;
  const PartitioningTree& tree;
  HierarchicalResult result;

  void run(const ComplexMatrix& z, int id) {
    const auto& node = tree.node(id);
    if (node.is_leaf()) {
      result.chain.push_back(z);
      return;
    }
    const int q = node.hi;
    const int p = node.lo;
    const int ell = tree.node(node.right).hi;

    const SupportMask left = chain_partial_support(q, ell + 1, L, options.dft_bit_reversal);
    const SupportMask right = chain_partial_support(ell, p, L, options.dft_bit_reversal);
    const RankOneSupportTuple s = lift_supports(left, right.transpose());

    std::vector<ComplexMatrix> blocks;
    blocks.reserve(s.r());
    for (std::size_t i = 0; i < s.r(); ++i) {
      const SupportMask mask = s[i].mask(s.m(), s.n());
      ComplexMatrix c = restrict_to(z, mask);
      if (options.mode == FactorizeMode::Exact) {
        if (!rank_le_one(c, mask, tol))
          throw std::domain_error("block " + std::to_string(i + 1) + " at level q=" + std::to_string(q) +
                                  ", ell=" + std::to_string(ell) + ", p=" + std::to_string(p) +
                                  " is not rank one");
      } else if (!s[i].empty()) {
        ComplexMatrix sub(s[i].rows.size(), s[i].cols.size());
        for (std::size_t a = 0; a < s[i].rows.size(); ++a)
          for (std::size_t b = 0; b < s[i].cols.size(); ++b) sub(a, b) = z(s[i].rows[a] - 1, s[i].cols[b] - 1);
        const ComplexMatrix approx = best_rank_one(sub);
        for (std::size_t a = 0; a < s[i].rows.size(); ++a)
          for (std::size_t b = 0; b < s[i].cols.size(); ++b) c(s[i].rows[a] - 1, s[i].cols[b] - 1) = approx(a, b);
      }
      blocks.push_back(std::move(c));
    }

    const FactorPair pair = contributions_to_factors(std::span<const ComplexMatrix>(blocks), tol);
    const ComplexMatrix h2 = pair.left;
    const ComplexMatrix h1 = pair.right.transpose();
    result.levels.push_back({q, p, ell, rel_frobenius_error(h2 * h1, z, tol)});
    run(h2, node.left);
    run(h1, node.right);
  }
};

}  // namespace

HierarchicalResult hierarchical_factorize(const ComplexMatrix& z, const PartitioningTree& tree, int L,
                                          const FactorizeOptions& options, const TolerancePolicy& tol) {
  if (L < 1 || L > 30) throw std::invalid_argument("hierarchical_factorize: invalid layer count");
  const std::size_t n = std::size_t{1} << L;
  if (z.rows() != n || z.cols() != n)
    throw std::invalid_argument("hierarchical_factorize: matrix is " + std::to_string(z.rows()) + "x" +
                                std::to_string(z.cols()) + ", expected " + std::to_string(n) + "x" +
                                std::to_string(n) + " for L=" + std::to_string(L));
  if (tree.lo() < 1 || tree.hi() > L) throw std::invalid_argument("hierarchical_factorize: tree exceeds {1..L}");
  Recursion rec{L, options, tol, tree, {}};
  rec.run(z, 0);
  return std::move(rec.result);
}

FactorChain random_butterfly_chain(int L, std::uint64_t seed) {
  if (L < 1 || L > 30) throw std::invalid_argument("random_butterfly_chain: invalid layer count");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.5, 1.5);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const std::size_t n = std::size_t{1} << L;
  FactorChain chain;
  for (int ell = L; ell >= 1; --ell) {
    const SupportMask s = butterfly_support(ell, L);
    ComplexMatrix x(n, n);
    for (const Cell& c : s.cells()) x(c.row - 1, c.col - 1) = std::polar(radius(rng), angle(rng));
    chain.push_back(std::move(x));
  }
  return chain;
}

std::optional<ScalingChain> verify_s_unique_recovery(std::span<const ComplexMatrix> original,
                                                     std::span<const ComplexMatrix> recovered,
                                                     const TolerancePolicy& tol) {
  return chain_scale_equivalent(original, recovered, tol);
}

}  // namespace sparseid
