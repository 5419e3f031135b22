#pragma once

// Exhaustive search for rank-one partitions of supp(Z) under column-sparsity
// families, and the uniqueness certificates built on top of it.

#include "sparseid/core.hpp"
#include "sparseid/supports.hpp"

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace sparseid {

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::uint64_t budget);
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t budget_;
};

struct PartitionCertificate {
  enum class Status { Unique, Multiple, None };
  Status status = Status::None;
  // Canonical partitions: nonempty supports sorted lexicographically, no duplicates.
  std::vector<RankOneSupportTuple> partitions;
  std::uint64_t nodes = 0;  // branch nodes visited
};

std::string_view to_string(PartitionCertificate::Status status);

// Sorts the supports of a tuple and drops empty ones.
RankOneSupportTuple canonicalize(const RankOneSupportTuple& s);

// All partitions of supp(z) into at most fam.r blocks of <= a rows x <= b
// columns whose restriction of z has rank <= 1. Branches on the first
// uncovered cell in row-major order.
PartitionCertificate enumerate_partitions(const ComplexMatrix& z, const SupportFamilySpec& fam,
                                          const TolerancePolicy& tol = {},
                                          std::uint64_t node_budget = kDefaultNodeBudget);

// Every support has rows of one parity and exactly two columns l1, l2 with
// l1 + l2 - 1 == n. Throws std::invalid_argument for supports outside n x n.
bool verify_parity_column_structure(const PartitionCertificate& cert, std::size_t n);

bool supports_pairwise_disjoint(const RankOneSupportTuple& s);

struct UniquenessReport {
  PartitionCertificate certificate;
  bool unique_partition = false;
  bool counting_forces_disjoint = false;  // ||Z||_0 == r * a * b
  bool fixed_support_complete = false;    // emd_complete on the unique partition
  bool ok() const { return unique_partition && counting_forces_disjoint && fixed_support_complete; }
};

UniquenessReport check_uniqueness(const ComplexMatrix& z, const SupportFamilySpec& fam,
                                  const TolerancePolicy& tol = {},
                                  std::uint64_t node_budget = kDefaultNodeBudget);

bool cross_check_uniqueness(const ComplexMatrix& z, const SupportFamilySpec& fam, const TolerancePolicy& tol = {},
                            std::uint64_t node_budget = kDefaultNodeBudget);

}  // namespace sparseid
