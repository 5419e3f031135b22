#pragma once

// Fixed-support exact matrix decomposition by iterative rank-one completion,
// conversion of rank-one contributions to factor pairs, and the scaling /
// permutation equivalence checks used to compare recovered factors.

#include "sparseid/core.hpp"
#include "sparseid/supports.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sparseid {

enum class CellState : unsigned char { Known, Missing, StructuralZero };

// One contribution C_i with per-cell state. StructuralZero cells lie outside
// the governing support and hold the value 0.
class PartialMatrix {
 public:
  PartialMatrix() = default;
  // All cells of `support` start Missing, every other cell is StructuralZero.
  PartialMatrix(std::size_t m, std::size_t n, const RankOneSupport& support);

  std::size_t rows() const { return values_.rows(); }
  std::size_t cols() const { return values_.cols(); }

  CellState state(std::size_t i, std::size_t j) const { return state_[i * cols() + j]; }
  bool known(std::size_t i, std::size_t j) const { return state(i, j) != CellState::Missing; }
  const Complex& value(std::size_t i, std::size_t j) const { return values_(i, j); }
  void fill(std::size_t i, std::size_t j, Complex v);

  std::size_t missing_count() const;
  // Throws std::logic_error while any cell is Missing.
  const ComplexMatrix& values() const;

 private:
  ComplexMatrix values_;
  std::vector<CellState> state_;
};

using ContributionTuple = std::vector<PartialMatrix>;

struct EmdOutcome {
  enum class Kind { Complete, Incompatible, Stalled };
  Kind kind = Kind::Stalled;
  ContributionTuple contributions;
  std::optional<Cell> cell;  // first offending cell (row-major) when Incompatible
};

std::string_view to_string(EmdOutcome::Kind kind);

// Runs passes of (inside completion, compatibility check, across completion)
// until a pass fills no Missing cell.
EmdOutcome emd_complete(const ComplexMatrix& z, const RankOneSupportTuple& s, const TolerancePolicy& tol = {});

ComplexMatrix sum_contributions(const ContributionTuple& c);
ComplexMatrix sum_contributions(std::span<const ComplexMatrix> c);

// Left factor X (m x r) and right factor Y (n x r), Z = X Y^T.
struct FactorPair {
  ComplexMatrix left;
  ComplexMatrix right;
};

// Pivot split of each rank-one C_i: u = first nonzero column, k0 = first row
// with |u_k0| > zero_threshold, v_l = C_i(k0, l) / u_k0. Throws
// std::domain_error if a contribution fails rank_le_one.
FactorPair contributions_to_factors(std::span<const ComplexMatrix> c, const TolerancePolicy& tol = {});
FactorPair contributions_to_factors(const ContributionTuple& c, const TolerancePolicy& tol = {});

// Columnwise X2_i = d_i X_i and Y2_i = Y_i / d_i for nonzero d_i.
bool pair_scale_equivalent(const FactorPair& a, const FactorPair& b, const TolerancePolicy& tol = {});
// As above after some permutation of the columns of b.
bool pair_perm_scale_equivalent(const FactorPair& a, const FactorPair& b, const TolerancePolicy& tol = {});

// diagonals[ell - 1] holds the diagonal of D_ell, ell = 1..L-1.
struct ScalingChain {
  std::vector<std::vector<Complex>> diagonals;
};

// Chains are listed leftmost factor first: chain[0] = X_L, ..., chain[L-1] = X_1.
// Returns D with chain2 factor X'_ell = D_ell^{-1} X_ell D_{ell-1}, D_L = D_0 = I.
std::optional<ScalingChain> chain_scale_equivalent(std::span<const ComplexMatrix> chain,
                                                   std::span<const ComplexMatrix> chain2,
                                                   const TolerancePolicy& tol = {});

}  // namespace sparseid
