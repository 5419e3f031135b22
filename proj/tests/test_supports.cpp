#include "sparseid/supports.hpp"
#include "sparseid/transforms.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace sparseid;

namespace {

bool all_complete(const BipartiteGraphTuple& g) {
  return std::all_of(g.begin(), g.end(), [](const BipartiteGraph& x) { return x.is_complete(); });
}

// Random tuple of rank-one supports, possibly overlapping.
RankOneSupportTuple random_tuple(std::mt19937_64& rng, std::size_t max_dim = 6, std::size_t max_r = 4) {
  std::uniform_int_distribution<std::size_t> dim(2, max_dim), count(1, max_r);
  const std::size_t m = dim(rng), n = dim(rng), r = count(rng);
  std::vector<RankOneSupport> s;
  for (std::size_t i = 0; i < r; ++i)
    s.push_back({oracle::random_subset(m, 1, 3, rng), oracle::random_subset(n, 1, 3, rng)});
  return RankOneSupportTuple(m, n, s);
}

}  // namespace

TEST_CASE("lifting support pairs") {
  const RankOneSupportTuple s = lift_supports(SupportMask::identity(2), SupportMask::full(2, 2));
  REQUIRE(s.r() == 2);
  CHECK(s[0] == RankOneSupport{{1}, {1, 2}});
  CHECK(s[1] == RankOneSupport{{2}, {1, 2}});

  SupportMask left(3, 2);
  left.set(0, 0);
  const RankOneSupportTuple t = lift_supports(left, SupportMask::full(3, 2));
  CHECK(t[1].empty());

  const RankOneSupportTuple b = lift_supports(support(butterfly_factor(2, 2)), support(butterfly_factor(1, 2)).transpose());
  REQUIRE(b.r() == 4);
  for (const auto& si : b.supports()) {
    REQUIRE(si.rows.size() == 2);
    REQUIRE(si.cols.size() == 2);
    CHECK(si.rows[0] % 2 == si.rows[1] % 2);
  }
  const auto cover = b.coverage();
  CHECK(std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; }));
}

TEST_CASE("tuple construction validates indices") {
  CHECK_THROWS_AS(RankOneSupportTuple(2, 2, {{{3}, {1}}}), std::invalid_argument);
  CHECK_THROWS_AS(RankOneSupportTuple(2, 2, {{{1, 1}, {1}}}), std::invalid_argument);
  CHECK_THROWS_AS(RankOneSupportTuple(2, 2, {{{1}, {}}}), std::invalid_argument);
}

TEST_CASE("observable graphs of the example tuple") {
  const auto g = observable_graphs(fixtures::example_tuple());
  REQUIRE(g.size() == 3);
  CHECK(g[0].edges.cells() == std::vector<Cell>{{2, 1}, {3, 1}, {4, 1}});
  CHECK(g[1].edges.cells() == std::vector<Cell>{{1, 2}, {1, 3}, {2, 3}});
  CHECK(g[2].edges.cells() == std::vector<Cell>{{3, 4}, {4, 3}, {4, 4}});
  CHECK(g[0].red == std::vector<int>{2, 3, 4});
  CHECK(g[2].blue == std::vector<int>{2, 3, 4});
}

TEST_CASE("observable graphs of disjoint and identical supports") {
  const RankOneSupportTuple disjoint(4, 4, {{{1, 2}, {1, 2}}, {{3, 4}, {3}}});
  for (const auto& g : observable_graphs(disjoint)) CHECK(g.is_complete());

  const RankOneSupportTuple same(3, 3, {{{1, 2}, {2, 3}}, {{1, 2}, {2, 3}}});
  for (const auto& g : observable_graphs(same)) CHECK(g.edges.count() == 0);
}

TEST_CASE("one closure step on the example tuple") {
  const auto g = observable_graphs(fixtures::example_tuple());
  const auto a = complete_inside(g);
  CHECK(a[1].edges.contains({2, 2}));
  CHECK(a[2].edges.contains({3, 3}));
  CHECK_FALSE(a[0].edges.contains({2, 2}));

  const auto step = closure_step(g);
  CHECK(step[0].edges.contains({2, 2}));
  CHECK(step[1].edges.contains({2, 2}));
  CHECK(step[1].edges.contains({3, 3}));
  CHECK(step[2].edges.contains({3, 3}));
  CHECK(step[0].edges.count() == 4);
  CHECK(step[1].edges.count() == 5);
  CHECK(step[2].edges.count() == 4);
}

TEST_CASE("closure fixed points") {
  const RankOneSupportTuple disjoint(4, 4, {{{1, 2}, {1, 2}}, {{3, 4}, {3}}});
  const auto g = observable_graphs(disjoint);
  const ClosureResult c = closure(g);
  CHECK(c.steps == 0);
  CHECK(c.graphs == g);

  const RankOneSupportTuple same(3, 3, {{{1, 2}, {2, 3}}, {{1, 2}, {2, 3}}});
  const auto h = observable_graphs(same);
  CHECK(closure_step(h) == h);
  const ClosureResult d = closure(h);
  CHECK(d.steps == 0);
  CHECK(d.graphs == h);

  const ClosureResult e = closure(observable_graphs(fixtures::example_tuple()));
  CHECK(all_complete(e.graphs));
  CHECK(e.steps == 2);
}

TEST_CASE("closability") {
  CHECK(is_closable(fixtures::example_tuple()));
  CHECK(is_closable(RankOneSupportTuple(4, 4, {{{1, 2}, {1, 2}}, {{3, 4}, {3}}})));
  CHECK_FALSE(is_closable(RankOneSupportTuple(3, 3, {{{1, 2}, {2, 3}}, {{1, 2}, {2, 3}}})));
}

TEST_CASE("closure is monotone, idempotent and keeps vertex sets") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const RankOneSupportTuple s = random_tuple(rng);
    const auto g = observable_graphs(s);
    const auto step = closure_step(g);
    const ClosureResult c = closure(g);
    CHECK(precedes(g, step));
    CHECK(precedes(step, c.graphs));
    CHECK(closure(c.graphs).graphs == c.graphs);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(c.graphs[i].red == g[i].red);
      CHECK(c.graphs[i].blue == g[i].blue);
    }
  }
}

TEST_CASE("disjoint tuples are closable") {
  std::mt19937_64 rng(99);
  int checked = 0;
  while (checked < 100) {
    const RankOneSupportTuple s = random_tuple(rng, 8, 6);
    bool disjoint = true;
    for (std::size_t i = 0; i < s.r() && disjoint; ++i)
      for (std::size_t j = i + 1; j < s.r() && disjoint; ++j) disjoint = oracle::disjoint(s[i], s[j]);
    if (!disjoint) continue;
    CHECK(is_closable(s));
    ++checked;
  }
}

TEST_CASE("butterfly supports") {
  const std::vector<Cell> b4{{1, 1}, {1, 3}, {2, 2}, {2, 4}, {3, 1}, {3, 3}, {4, 2}, {4, 4}};
  CHECK(butterfly_support(2, 2).cells() == b4);
  CHECK(butterfly_support(1, 2) == kronecker(SupportMask::identity(2), SupportMask::full(2, 2)));

  for (int L = 1; L <= 6; ++L)
    for (int ell = 1; ell <= L; ++ell) {
      const SupportMask s = butterfly_support(ell, L);
      CHECK(s == oracle::partial_support(ell, ell, L));
      for (std::size_t j = 0; j < s.cols(); ++j) CHECK(s.col_count(j) == 2);
      for (std::size_t i = 0; i < s.rows(); ++i) CHECK(s.row_support(i).size() == 2);
    }
}

TEST_CASE("partial-product supports") {
  CHECK(partial_product_support(2, 1, 2) == SupportMask::full(4, 4));
  const SupportMask w = partial_product_support(4, 3, 4);
  CHECK(w == kronecker(SupportMask::full(4, 4), SupportMask::identity(4)));
  for (int L = 1; L <= 5; ++L)
    for (int q = 1; q <= L; ++q)
      for (int p = 1; p <= q; ++p) CHECK(partial_product_support(q, p, L) == oracle::partial_support(q, p, L));
  CHECK_THROWS_AS(partial_product_support(1, 2, 3), std::invalid_argument);
}

TEST_CASE("support families") {
  CHECK(in_family(SupportMask::identity(4), SupportMask::identity(4), {1, 1, 4, 4, 4}));
  CHECK_FALSE(in_family(SupportMask::full(4, 4), SupportMask::identity(4), {2, 1, 4, 4, 4}));

  for (int L = 2; L <= 5; ++L) {
    const std::size_t n = std::size_t{1} << L;
    const SupportMask right = permute_cols(partial_product_support(L - 1, 1, L), bit_reversal_perm(n));
    CHECK(in_family(butterfly_support(L, L), right.transpose(), {2, n / 2, n, n, n}));
  }
}

TEST_CASE("lifted tuples have rank-one supports") {
  std::mt19937_64 rng(17);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 50; ++trial) {
    SupportMask x(5, 3), y(4, 3);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 3; ++j) x.set(i, j, coin(rng));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) y.set(i, j, coin(rng));
    const RankOneSupportTuple s = lift_supports(x, y);
    for (std::size_t i = 0; i < s.r(); ++i) {
      const SupportMask mask = s[i].mask(5, 4);
      const ComplexMatrix ones = restrict_to(ComplexMatrix(5, 4, std::vector<Complex>(20, 1.0)), mask);
      CHECK(rank_le_one(ones, SupportMask::full(5, 4)));
      CHECK(mask.count() == x.col_count(i) * y.col_count(i));
    }
  }
}
