#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "hlab/antiramsey.hpp"
#include "hlab/errors.hpp"

using namespace hlab;

namespace {

// Straight-line recursion written against the arena's e and c1 only.
std::size_t oracle_cn(const Arena& ar, std::vector<Ord> a) {
  while (a.size() > 2) {
    const Ord beta = a.back();
    std::vector<Ord> img;
    for (std::size_t x = 0; x + 1 < a.size(); ++x) img.push_back(ar.e(beta, a[x]));
    std::sort(img.begin(), img.end());
    a = img;
  }
  return ar.c1(a[0], a[1]);
}

Ord oracle_star(const Arena& ar, const std::vector<Ord>& a) {
  if (a.size() == 2) return a[0];
  const Ord beta = a.back();
  std::vector<Ord> img;
  for (std::size_t x = 0; x + 1 < a.size(); ++x) img.push_back(ar.e(beta, a[x]));
  std::sort(img.begin(), img.end());
  return *ar.e_inverse(beta, oracle_star(ar, img));
}

}  // namespace

TEST_CASE("c1 fibers") {
  const Arena id = Arena::identity(12, 1);
  CHECK(id.c1(2, 9) == 2);
  CHECK(id.c1(0, 1) == 0);
  CHECK_THROWS_AS(id.c1(9, 2), PreconditionError);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Arena ar = Arena::seeded(10, 2, seed);
    for (Ord beta = 1; beta < 10; ++beta) {
      std::set<std::size_t> fiber;
      std::set<Ord> image;
      for (Ord alpha = 0; alpha < beta; ++alpha) {
        fiber.insert(ar.c1(alpha, beta));
        image.insert(ar.e(beta, alpha));
        CHECK(*ar.e_inverse(beta, ar.e(beta, alpha)) == alpha);
      }
      CHECK(fiber.size() == beta);
      CHECK(image.size() == beta);
    }
  }
}

TEST_CASE("cn and star on identity arenas") {
  const Arena one = Arena::identity(12, 1);
  CHECK(cn(one, OrdSet{2, 9}) == 2);
  CHECK(star(one, OrdSet{4, 7}) == 4);
  const Arena two = Arena::identity(12, 2);
  CHECK(cn(two, OrdSet{2, 5, 9}) == 2);
  CHECK(star(two, OrdSet{2, 5, 9}) == 2);
  CHECK_THROWS(cn(two, OrdSet{2, 5}));
  CHECK_THROWS(star(two, OrdSet{2, 5, 7, 9}));
}

TEST_CASE("seeded cn and star match an independent recursion") {
  for (std::size_t n : {1u, 2u, 3u}) {
    for (std::uint64_t seed : {7u, 8u, 9u}) {
      const Arena ar = Arena::seeded(8, n, seed);
      for (const OrdSet& a : subsets_of_size(OrdSet::range(0, 8), n + 1)) {
        const std::vector<Ord> v(a.begin(), a.end());
        REQUIRE(cn(ar, a) == oracle_cn(ar, v));
        const Ord s = star(ar, a);
        REQUIRE(s == oracle_star(ar, v));
        CHECK(a.contains(s));
        if (n > 1) CHECK(s != a.max());
      }
    }
  }
}

TEST_CASE("difference lemma holds exhaustively at M = 8") {
  for (std::size_t n : {1u, 2u, 3u}) {
    std::vector<Arena> arenas{Arena::identity(8, n)};
    for (std::uint64_t seed : {1u, 2u, 3u}) arenas.push_back(Arena::seeded(8, n, seed));
    for (const Arena& ar : arenas) {
      const DifferenceReport rep = difference_check(ar);
      CHECK(rep.violations == 0);
      CHECK(rep.max_mismatches == 0);
      CHECK(rep.sets == binomial(8, n + 1));
      CHECK(rep.pairs > 0);
    }
  }
}

TEST_CASE("difference check pair count matches a brute force") {
  const Arena ar = Arena::seeded(8, 2, 4);
  std::uint64_t pairs = 0;
  const auto sets = subsets_of_size(OrdSet::range(0, 8), 3);
  for (const auto& a : sets) {
    for (const auto& b : sets) {
      if (!(a < b)) continue;
      const Ord sa = star(ar, a), sb = star(ar, b);
      if (sa != sb && a.without(sa) == b.without(sb)) {
        ++pairs;
        CHECK(cn(ar, a) != cn(ar, b));
      }
    }
  }
  CHECK(difference_check(ar).pairs == pairs);
}

TEST_CASE("c_full") {
  const Arena ar = Arena::identity(10, 1);
  const std::vector<Ord> diag{3, 3}, up{3, 7}, down{7, 3};
  CHECK(c_full(ar, diag) == TupleColor{2, 0});
  CHECK(c_full(ar, up) == TupleColor{0, 3});
  CHECK(c_full(ar, down) == TupleColor{1, 3});

  const Arena two = Arena::seeded(10, 2, 5);
  for (const OrdSet& a : subsets_of_size(OrdSet::range(0, 10), 3)) {
    std::vector<Ord> v(a.begin(), a.end());
    do {
      const TupleColor c = c_full(two, v);
      REQUIRE(c.slot < 3);
      CHECK(v[c.slot] == star(two, a));
      CHECK(c.value == cn(two, a));
    } while (std::next_permutation(v.begin(), v.end()));
  }
  const std::vector<Ord> rep{1, 4, 1};
  CHECK(c_full(two, rep) == TupleColor{3, 0});
}

TEST_CASE("Ramsey numbers") {
  const auto r11 = ramsey_m_star(1, 1);
  CHECK(r11.m_star == 3);
  const auto r12 = ramsey_m_star(1, 2);
  CHECK(r12.m_star == 6);
  CHECK(is_good_coloring(5, 1, r12.edges, r12.witness));
  CHECK(r12.edges.size() == 10);

  try {
    ramsey_m_star(2, 2, 200000);
    FAIL("expected budget exhaustion");
  } catch (const RamseyBudgetExceeded& e) {
    CHECK(e.lower >= 4);
    CHECK(e.nodes >= 200000);
  }

  CHECK(m_seq(1, 0) == 1);
  CHECK(m_seq(1, 1) == 6);
  CHECK(m_seq(1, 2) == 12);
}

TEST_CASE("good coloring checker") {
  const auto edges = subsets_of_size(OrdSet::range(0, 5), 2);
  // Pentagon and pentagram.
  std::vector<Color> colors;
  for (const auto& e : edges) colors.push_back((e.max() - e.min()) % 5 == 1 || (e.max() - e.min()) == 4 ? 0 : 1);
  CHECK(is_good_coloring(5, 1, edges, colors));
  std::vector<Color> mono(edges.size(), 0);
  CHECK_FALSE(is_good_coloring(5, 1, edges, mono));
}

TEST_CASE("product bound") {
  const Arena ar = Arena::identity(24, 1);
  const std::vector<OrdSet> singles{OrdSet{4}, OrdSet{9}};
  const auto r0 = verify_product_bound(ar, singles, 0, m_seq(1, 0));
  CHECK(r0.holds);
  CHECK(r0.census.size() == 1);

  const std::vector<OrdSet> six{OrdSet::range(0, 6), OrdSet::range(0, 6)};
  const auto r1 = verify_product_bound(ar, six, 1, m_seq(1, 1));
  CHECK(r1.holds);
  std::size_t total = 0;
  for (const auto& [c, count] : r1.census) total += count;
  CHECK(total == 36);
  CHECK(r1.census.size() >= 2);

  const std::vector<OrdSet> twelve{OrdSet::range(0, 12), OrdSet::range(12, 24)};
  CHECK(verify_product_bound(ar, twelve, 2, m_seq(1, 2)).holds);
  CHECK_THROWS_AS(verify_product_bound(ar, six, 2, m_seq(1, 2)), PreconditionError);

  CHECK(census_csv(r0.census).rfind("slot,value,count\n", 0) == 0);
}

TEST_CASE("grid coloring") {
  const TreeShape s0{2, 4, 0}, s1{2, 4, 1};
  const Arena ar = Arena::identity(24, 1);
  const BranchSet y0(s0, {word_from_string("0000")}), y1(s1, {word_from_string("1111")});
  const GridColoring single(ar, {{y0, {3}}, {y1, {5}}});
  CHECK(single.table().size() == 1);

  std::vector<Word> b0, b1;
  std::vector<Ord> i0, i1;
  const auto full0 = BranchSet::full(s0).branches();
  for (std::size_t x = 0; x < 12; ++x) {
    b0.push_back(full0[x]);
    b1.push_back(full0[x + 4]);
    i0.push_back(2 * x);
    i1.push_back(23 - 2 * x);
  }
  const GridColoring g(ar, {{BranchSet(s0, b0), i0}, {BranchSet(s1, b1), i1}});
  const auto table = g.table();
  CHECK(table.size() == 144);
  std::set<TupleColor> colors;
  for (const auto& [t, c] : table) colors.insert(c);
  CHECK(colors.size() > 2);

  CHECK_THROWS_AS(GridColoring(ar, {{y0, {3}}, {BranchSet(s1, {word_from_string("1111"), word_from_string("0000")}), {5, 5}}}),
                  PreconditionError);
  CHECK_THROWS_AS(g(BranchTuple{word_from_string("1111"), b1[0]}), PreconditionError);
}
