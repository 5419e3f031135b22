#pragma once

// Hierarchical recovery of butterfly-supported factors X_q ... X_p from
// their product, steered by a partitioning binary tree.

#include "sparseid/core.hpp"
#include "sparseid/emd.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sparseid {

// Factors listed leftmost first: chain[0] = X_q, ..., chain.back() = X_p.
using FactorChain = std::vector<ComplexMatrix>;

ComplexMatrix chain_product(std::span<const ComplexMatrix> chain);

// Binary tree over consecutive index ranges. Every internal node's left
// child holds the larger indices.
class PartitioningTree {
 public:
  struct Node {
    int lo = 0;
    int hi = 0;
    int left = -1;   // node id, -1 for leaves
    int right = -1;
    bool is_leaf() const { return left < 0; }
  };

  const Node& root() const { return nodes_.front(); }
  const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return nodes_.size(); }
  int lo() const { return root().lo; }
  int hi() const { return root().hi; }

 private:
  friend class TreeBuilder;
  std::vector<Node> nodes_;
};

enum class TreeShape { LeftComb, RightComb, Balanced };

std::optional<TreeShape> parse_tree_shape(std::string_view name);

// Nested description: a leaf holds its index, an internal node holds
// exactly two children (left first).
struct TreeDescription {
  int leaf = 0;
  std::vector<TreeDescription> children;
};

PartitioningTree make_tree(TreeShape shape, int p, int q);
// Throws std::invalid_argument on any axiom violation.
PartitioningTree make_tree(const TreeDescription& description, int p, int q);

// Equivalent nested description of a tree (for serialization).
TreeDescription describe(const PartitioningTree& tree);

enum class FactorizeMode { Exact, SvdProject };

struct FactorizeOptions {
  FactorizeMode mode = FactorizeMode::Exact;
  // Fold R_N into the support of the innermost factor X_1.
  bool dft_bit_reversal = false;
};

struct LevelReport {
  int q = 0;
  int p = 0;
  int split = 0;          // ell: X_q..X_{ell+1} | X_ell..X_p
  double residual = 0.0;  // rel. Frobenius error of H2 H1 against the node's input
};

struct HierarchicalResult {
  FactorChain chain;
  std::vector<LevelReport> levels;  // preorder
};

// Support of X_q ... X_p under butterfly constraints, with R_N folded into
// the columns when p == 1 and `dft_bit_reversal` is set.
SupportMask chain_partial_support(int q, int p, int L, bool dft_bit_reversal);

// z must be N x N with N = 2^L and the tree must range within {1..L}.
// Exact mode throws std::domain_error when a block is not rank one.
HierarchicalResult hierarchical_factorize(const ComplexMatrix& z, const PartitioningTree& tree, int L,
                                          const FactorizeOptions& options = {}, const TolerancePolicy& tol = {});

// Fixture helper: X_L ... X_1 with exact supports S^ell and entries drawn
// uniformly from the annulus 0.5 <= |x| <= 1.5 (seeded).
FactorChain random_butterfly_chain(int L, std::uint64_t seed);

std::optional<ScalingChain> verify_s_unique_recovery(std::span<const ComplexMatrix> original,
                                                     std::span<const ComplexMatrix> recovered,
                                                     const TolerancePolicy& tol = {});

}  // namespace sparseid
