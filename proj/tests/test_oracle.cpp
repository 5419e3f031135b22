#include "sparseid/oracle.hpp"
#include "sparseid/transforms.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace sparseid;

namespace {

SupportFamilySpec family(const ComplexMatrix& z, std::size_t a, std::size_t b, std::size_t r = 0) {
  return {a, b, z.rows(), z.cols(), r == 0 ? z.cols() : r};
}

std::set<oracle::Partition> as_blocks(const PartitionCertificate& cert) {
  std::set<oracle::Partition> out;
  for (const auto& p : cert.partitions) {
    oracle::Partition blocks;
    for (const auto& s : p.supports()) blocks.emplace_back(s.rows, s.cols);
    std::sort(blocks.begin(), blocks.end());
    out.insert(std::move(blocks));
  }
  return out;
}

}  // namespace

TEST_CASE("DFT_4 has a unique partition") {
  const ComplexMatrix z = gen_transform(TransformKind::DFT, 4);
  const PartitionCertificate cert = enumerate_partitions(z, family(z, 2, 2));
  CHECK(cert.status == PartitionCertificate::Status::Unique);
  REQUIRE(cert.partitions.size() == 1);
  CHECK(cert.partitions[0] == fixtures::dft4_partition());
  CHECK(cert.nodes > 0);
}

TEST_CASE("Hadamard_4 has several partitions") {
  const ComplexMatrix z = gen_transform(TransformKind::Hadamard, 4);
  const PartitionCertificate cert = enumerate_partitions(z, family(z, 2, 2));
  CHECK(cert.status == PartitionCertificate::Status::Multiple);
  CHECK(cert.partitions == fixtures::hadamard4_partitions());

  const ComplexMatrix h8 = gen_transform(TransformKind::Hadamard, 8);
  CHECK(enumerate_partitions(h8, family(h8, 4, 2)).partitions.size() == fixtures::kHadamard8PartitionCount);
}

TEST_CASE("identity with unit blocks") {
  const ComplexMatrix z = ComplexMatrix::identity(2);
  const PartitionCertificate cert = enumerate_partitions(z, family(z, 1, 1));
  CHECK(cert.status == PartitionCertificate::Status::Unique);
  REQUIRE(cert.partitions.size() == 1);
  CHECK(cert.partitions[0] == RankOneSupportTuple(2, 2, {{{1}, {1}}, {{2}, {2}}}));
}

TEST_CASE("no partition when the rank budget is too small") {
  const ComplexMatrix z = ComplexMatrix::identity(3);
  CHECK(enumerate_partitions(z, family(z, 1, 1, 2)).status == PartitionCertificate::Status::None);
}

TEST_CASE("node budget") {
  const ComplexMatrix z = gen_transform(TransformKind::Hadamard, 8);
  CHECK_THROWS_AS(enumerate_partitions(z, family(z, 4, 2), {}, 100), BudgetExceeded);
}

TEST_CASE("parity and column structure of DCT and DST partitions") {
  for (auto kind : {TransformKind::DCT2, TransformKind::DST2, TransformKind::DFT})
    for (std::size_t n : {4, 8}) {
      const ComplexMatrix z = gen_transform(kind, n);
      const PartitionCertificate cert = enumerate_partitions(z, family(z, n / 2, 2));
      CHECK(cert.status == PartitionCertificate::Status::Unique);
      if (kind != TransformKind::DFT) CHECK(verify_parity_column_structure(cert, n));
    }

  PartitionCertificate bad;
  bad.partitions.push_back(RankOneSupportTuple(4, 4, {{{1, 3}, {1, 2}}}));
  CHECK_FALSE(verify_parity_column_structure(bad, 4));
  CHECK_THROWS_AS(verify_parity_column_structure(bad, 8), std::invalid_argument);
}

TEST_CASE("pairwise disjointness") {
  CHECK_FALSE(supports_pairwise_disjoint(fixtures::example_tuple()));
  CHECK(supports_pairwise_disjoint(RankOneSupportTuple(3, 3, {{{1, 2}, {1, 3}}})));
  CHECK(supports_pairwise_disjoint(fixtures::dft4_partition()));
}

TEST_CASE("uniqueness cross-check") {
  for (auto kind : {TransformKind::DFT, TransformKind::DCT2, TransformKind::DST2}) {
    const ComplexMatrix z = gen_transform(kind, 4);
    CHECK(cross_check_uniqueness(z, family(z, 2, 2)));
  }
  const ComplexMatrix h = gen_transform(TransformKind::Hadamard, 4);
  const UniquenessReport report = check_uniqueness(h, family(h, 2, 2));
  CHECK_FALSE(report.ok());
  CHECK_FALSE(report.unique_partition);
  CHECK(report.counting_forces_disjoint);
}

TEST_CASE("canonical form ignores the order of supports") {
  const RankOneSupportTuple p = fixtures::dft4_partition();
  std::vector<RankOneSupport> shuffled = p.supports();
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto with_empty = shuffled;
    with_empty.push_back({});
    CHECK(canonicalize(RankOneSupportTuple(4, 4, with_empty)) == p);
  }
}

TEST_CASE("blocks fill the budget when the count is tight") {
  for (auto kind : {TransformKind::DFT, TransformKind::DCT2, TransformKind::DST2, TransformKind::Hadamard}) {
    const ComplexMatrix z = gen_transform(kind, 8);
    const PartitionCertificate cert = enumerate_partitions(z, family(z, 4, 2));
    for (const auto& p : cert.partitions)
      for (const auto& s : p.supports()) CHECK(s.size() == 8);
  }
}

TEST_CASE("agreement with labeled brute force on random 3x3 matrices") {
  std::mt19937_64 rng(333);
  std::uniform_int_distribution<int> small(0, 2), pick(1, 3);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 60; ++trial) {
    ComplexMatrix z(3, 3);
    if (coin(rng)) {
      for (auto& v : z.entries()) v = small(rng);
    } else {
      // Sums of integer rank-one blocks produce many proportional rows.
      for (int t = pick(rng); t > 0; --t) {
        const RankOneSupport s{oracle::random_subset(3, 1, 3, rng), oracle::random_subset(3, 1, 3, rng)};
        for (int k : s.rows)
          for (int l : s.cols) z(k - 1, l - 1) += Complex(pick(rng) * (l == s.cols[0] ? 1 : 2));
      }
    }
    const std::size_t a = pick(rng), b = pick(rng), r = pick(rng);
    const auto expected = oracle::labeled_partitions(z, a, b, r);
    const PartitionCertificate cert = enumerate_partitions(z, family(z, a, b, r));
    CHECK(as_blocks(cert) == expected);
  }
}
