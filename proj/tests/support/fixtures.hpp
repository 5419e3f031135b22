#pragma once

// Concrete matrices and support tuples shared by the unit and acceptance tests.

#include "sparseid/core.hpp"
#include "sparseid/supports.hpp"

#include <vector>

namespace fixtures {

using sparseid::ComplexMatrix;
using sparseid::RankOneSupport;
using sparseid::RankOneSupportTuple;

// Three overlapping rank-one supports on a 4x4 grid; closable.
inline RankOneSupportTuple example_tuple() {
  return RankOneSupportTuple(4, 4, {{{2, 3, 4}, {1, 2}}, {{1, 2, 3}, {2, 3}}, {{3, 4}, {2, 3, 4}}});
}

inline ComplexMatrix example_matrix() {
  return ComplexMatrix::from_rows({{0, 1, 2, 0}, {1, 2, 2, 0}, {2, 6, 5, 6}, {3, 5, 2, 4}});
}

// Contributions obtained by tracing the completion by hand.
inline std::vector<ComplexMatrix> example_contributions() {
  return {
      ComplexMatrix::from_rows({{0, 0, 0, 0}, {1, 1, 0, 0}, {2, 2, 0, 0}, {3, 3, 0, 0}}),
      ComplexMatrix::from_rows({{0, 1, 2, 0}, {0, 1, 2, 0}, {0, 1, 2, 0}, {0, 0, 0, 0}}),
      ComplexMatrix::from_rows({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 3, 3, 6}, {0, 2, 2, 4}}),
  };
}

inline RankOneSupportTuple duplicated_tuple() {
  return RankOneSupportTuple(3, 3, {{{1, 2}, {2, 3}}, {{1, 2}, {2, 3}}});
}

// The only rank-one partition of supp(DFT_4) with blocks of at most 2 x 2.
inline RankOneSupportTuple dft4_partition() {
  return RankOneSupportTuple(4, 4, {{{1, 3}, {1, 3}}, {{1, 3}, {2, 4}}, {{2, 4}, {1, 3}}, {{2, 4}, {2, 4}}});
}

// The three partitions of supp(Hadamard_4) found by exhaustive search.
inline std::vector<RankOneSupportTuple> hadamard4_partitions() {
  return {
      RankOneSupportTuple(4, 4, {{{1, 2}, {1, 3}}, {{1, 2}, {2, 4}}, {{3, 4}, {1, 3}}, {{3, 4}, {2, 4}}}),
      RankOneSupportTuple(4, 4, {{{1, 3}, {1, 2}}, {{1, 3}, {3, 4}}, {{2, 4}, {1, 2}}, {{2, 4}, {3, 4}}}),
      RankOneSupportTuple(4, 4, {{{1, 4}, {1, 4}}, {{1, 4}, {2, 3}}, {{2, 3}, {1, 4}}, {{2, 3}, {2, 3}}}),
  };
}

inline constexpr std::size_t kHadamard8PartitionCount = 105;

}  // namespace fixtures
