#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "hlab/errors.hpp"
#include "hlab/ordset.hpp"

using namespace hlab;

namespace {

std::vector<OrdSet> all_subsets(std::size_t m) {
  std::vector<OrdSet> out;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<Ord> v;
    for (std::size_t x = 0; x < m; ++x) {
      if (mask >> x & 1) v.push_back(x);
    }
    out.emplace_back(v);
  }
  return out;
}

// Position of g in a by counting smaller elements.
std::size_t rank_of(const OrdSet& a, Ord g) {
  return static_cast<std::size_t>(std::count_if(a.begin(), a.end(), [&](Ord x) { return x < g; }));
}

}  // namespace

TEST_CASE("construction rejects unsorted input") {
  CHECK_THROWS_AS(OrdSet(std::vector<Ord>{3, 1}), PreconditionError);
  CHECK_THROWS_AS(OrdSet(std::vector<Ord>{2, 2}), PreconditionError);
  CHECK(OrdSet::from_unsorted({5, 1, 5, 3}) == OrdSet{1, 3, 5});
  CHECK(OrdSet::range(2, 5) == OrdSet{2, 3, 4});
}

TEST_CASE("index picks the eta-th element") {
  CHECK(index(OrdSet{3, 8, 11}, 1) == 8);
  CHECK(index(OrdSet{5}, 0) == 5);
  CHECK_THROWS_AS(index(OrdSet{3, 8, 11}, 3), OutOfRangeError);
  const OrdSet a{3, 8, 11};
  for (std::size_t eta = 0; eta < a.otp(); ++eta) CHECK(rank_of(a, index(a, eta)) == eta);
}

TEST_CASE("slice") {
  const OrdSet a{3, 8, 11};
  CHECK(slice(a, OrdSet{0, 2}) == OrdSet{3, 11});
  CHECK(slice(a, OrdSet{0, 1, 2}) == a);
  CHECK(slice(a, OrdSet{}) == OrdSet{});
  CHECK_THROWS(slice(a, OrdSet{3}));
  for (std::size_t eta = 0; eta < a.otp(); ++eta) CHECK(slice(a, OrdSet{eta}) == OrdSet{index(a, eta)});
}

TEST_CASE("aligned and rset on small examples") {
  CHECK(aligned(OrdSet{1, 3, 5}, OrdSet{2, 3, 7}));
  CHECK_FALSE(aligned(OrdSet{1, 3}, OrdSet{3, 4}));
  CHECK(aligned(OrdSet{4, 9}, OrdSet{4, 9}));
  CHECK_FALSE(aligned(OrdSet{1, 2}, OrdSet{1, 2, 3}));
  CHECK(rset(OrdSet{1, 3, 5}, OrdSet{2, 3, 7}) == OrdSet{1});
  CHECK(rset(OrdSet{4, 6, 9}, OrdSet{4, 6, 9}) == OrdSet{0, 1, 2});
  CHECK_THROWS_AS(rset(OrdSet{1, 3}, OrdSet{3, 4}), PreconditionError);
}

TEST_CASE("rset slices out the intersection for every aligned pair in {0..9}") {
  const auto subsets = all_subsets(10);
  std::size_t pairs = 0;
  for (const auto& a : subsets) {
    for (const auto& b : subsets) {
      if (a.size() != b.size()) continue;
      bool brute = true;
      std::set<Ord> common;
      for (Ord g : a) {
        if (b.contains(g)) {
          common.insert(g);
          if (rank_of(a, g) != rank_of(b, g)) brute = false;
        }
      }
      REQUIRE(aligned(a, b) == brute);
      CHECK(aligned(b, a) == brute);
      if (!brute) continue;
      ++pairs;
      const OrdSet r = rset(a, b);
      const OrdSet meet(std::vector<Ord>(common.begin(), common.end()));
      REQUIRE(slice(a, r) == meet);
      REQUIRE(slice(b, r) == meet);
    }
  }
  CHECK(pairs > 1000);
}

TEST_CASE("set algebra and subsets") {
  const OrdSet a{1, 4, 6}, b{2, 4, 7};
  CHECK(intersect(a, b) == OrdSet{4});
  CHECK(unite(a, b) == OrdSet{1, 2, 4, 6, 7});
  CHECK(is_subset(OrdSet{4}, a));
  CHECK_FALSE(is_subset(b, a));
  CHECK(a.without(4) == OrdSet{1, 6});
  CHECK(a.with(5) == OrdSet{1, 4, 5, 6});
  CHECK(*a.position(6) == 2);
  CHECK_FALSE(a.position(5).has_value());

  const auto subs = subsets_of_size(OrdSet::range(0, 6), 3);
  CHECK(subs.size() == 20);
  CHECK(std::is_sorted(subs.begin(), subs.end()));
  CHECK(subs.front() == OrdSet{0, 1, 2});
  CHECK(binomial(10, 6) == 210);
  CHECK(binomial(3, 5) == 0);

  std::size_t seen = 0;
  for_each_subset(OrdSet::range(0, 6), 2, [&](const OrdSet&) { return ++seen < 4; });
  CHECK(seen == 4);
  CHECK(to_string(OrdSet{1, 2}) == "{1,2}");
}
