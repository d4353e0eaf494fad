#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "hlab/deltasys.hpp"
#include "hlab/errors.hpp"
#include "hlab/rng.hpp"

using namespace hlab;

namespace {

// Pairwise definition, no incremental bookkeeping.
bool brute_uniform(const Family& fam) {
  const auto& sets = fam.sets();
  std::optional<std::size_t> rho;
  std::map<OrdSet, OrdSet> pattern;
  for (const auto& [a, ua] : sets) {
    if (rho && *rho != ua.otp()) return false;
    rho = ua.otp();
  }
  for (const auto& [a, ua] : sets) {
    for (const auto& [b, ub] : sets) {
      if (!aligned(a, b)) continue;
      if (!aligned(ua, ub)) return false;
      const OrdSet m = rset(a, b), r = rset(ua, ub);
      auto [it, fresh] = pattern.emplace(m, r);
      if (!fresh && it->second != r) return false;
    }
  }
  for (const auto& [m0, r0] : pattern) {
    for (const auto& [m1, r1] : pattern) {
      auto it = pattern.find(intersect(m0, m1));
      if (it != pattern.end() && it->second != intersect(r0, r1)) return false;
    }
  }
  return true;
}

Family structured(std::size_t n, std::size_t H, Rng& rng, int perturb_percent) {
  std::vector<std::size_t> positions;
  for (std::size_t p = 0; p < n; ++p) {
    if (rng.below(2)) positions.push_back(p);
  }
  const Ord scale = 1 + rng.below(3);
  const bool with_root = rng.below(2);
  return Family::build(n, OrdSet::range(0, H), [&](const OrdSet& b) {
    std::vector<Ord> v;
    if (with_root) v.push_back(0);
    for (std::size_t p : positions) v.push_back(1 + scale * index(b, p));
    if (static_cast<int>(rng.below(100)) < perturb_percent) v.push_back(1 + scale * H + rng.below(3));
    return OrdSet::from_unsorted(v);
  });
}

}  // namespace

TEST_CASE("identity family certificate") {
  for (std::size_t n : {1u, 2u, 3u}) {
    const Family fam = Family::build(n, OrdSet::range(0, 6), [](const OrdSet& b) { return b; });
    const UniformVerdict v = verify_uniform(fam);
    REQUIRE(v.certified());
    CHECK(v.cert.rho == n);
    for (const auto& [m, r] : v.cert.r) CHECK(*r == m);
  }
}

TEST_CASE("min-singleton family certificate") {
  const Family fam = Family::build(2, OrdSet::range(0, 6), [](const OrdSet& b) { return OrdSet{b.min()}; });
  const UniformVerdict v = verify_uniform(fam);
  REQUIRE(v.certified());
  CHECK(v.cert.rho == 1);
  for (const auto& [m, r] : v.cert.r) CHECK(*r == (m.contains(0) ? OrdSet{0} : OrdSet{}));
}

TEST_CASE("a perturbed set is detected") {
  auto sets = Family::build(2, OrdSet::range(0, 6), [](const OrdSet& b) { return b; }).sets();
  sets[OrdSet{1, 4}] = OrdSet{1, 5};
  const UniformVerdict v = verify_uniform(Family(2, OrdSet::range(0, 6), sets));
  REQUIRE(v.violation);
  CHECK((v.violation->a == OrdSet{1, 4} || v.violation->b == OrdSet{1, 4}));

  sets[OrdSet{1, 4}] = OrdSet{1, 4, 5};
  const UniformVerdict w = verify_uniform(Family(2, OrdSet::range(0, 6), sets));
  REQUIRE(w.violation);
  CHECK(w.violation->kind == "order-type");
}

TEST_CASE("family construction checks its domain") {
  std::map<OrdSet, OrdSet> partial{{OrdSet{0, 1}, OrdSet{0}}};
  CHECK_THROWS_AS(Family(2, OrdSet::range(0, 3), partial), PreconditionError);
  const Family fam = Family::build(1, OrdSet::range(0, 5), [](const OrdSet& b) { return b; });
  CHECK(fam.restrict(OrdSet{1, 3}).sets().size() == 2);
  CHECK_THROWS(fam.restrict(OrdSet{1, 7}));
}

TEST_CASE("verify_uniform agrees with the pairwise definition") {
  Rng rng(17);
  int positives = 0, negatives = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(3);
    const Family fam = structured(n, 6, rng, trial % 3 == 0 ? 0 : 4);
    const bool brute = brute_uniform(fam);
    REQUIRE(verify_uniform(fam).ok() == brute);
    (brute ? positives : negatives) += 1;
  }
  CHECK(positives > 20);
  CHECK(negatives > 20);
}

TEST_CASE("realizable patterns") {
  CHECK(realizable_patterns(2, 4).size() == 4);
  CHECK(realizable_patterns(2, 3).size() == 3);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(realizable_patterns(n, 2 * n).size() == (1u << n));
}

TEST_CASE("extraction on easy families") {
  const Family id = Family::build(2, OrdSet::range(0, 10), [](const OrdSet& b) { return b; });
  const auto zero = [](const OrdSet&) -> std::size_t { return 0; };
  const ExtractResult r = extract_uniform(id, 5, zero);
  REQUIRE(r.status == ExtractStatus::found);
  CHECK(r.H == OrdSet::range(0, 5));
  CHECK(extract_uniform(id, 11, zero).status == ExtractStatus::none);
}

TEST_CASE("extraction matches exhaustive search on small index sets") {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.below(2);
    const std::size_t H = 5 + rng.below(4);
    const Family fam = structured(n, H, rng, 20);
    std::map<OrdSet, std::size_t> colors;
    for (const auto& [b, u] : fam.sets()) colors[b] = rng.below(4) == 0 ? 1 : 0;
    const SetColoring g = [&](const OrdSet& b) { return colors.at(b); };
    for (std::size_t h = n; h <= std::min<std::size_t>(H, n + 3); ++h) {
      const ExtractResult fast = extract_uniform(fam, h, g);
      const ExtractResult slow = extract_uniform_exhaustive(fam, h, g);
      REQUIRE(fast.status == slow.status);
      if (fast.status == ExtractStatus::found) {
        CHECK(fast.H == slow.H);
        CHECK(verify_uniform(fam.restrict(fast.H)).ok());
      }
    }
  }
}

TEST_CASE("planted instance is recovered") {
  const PlantedInstance inst = make_planted(200, 12, 200, 1);
  const SetColoring g = [&](const OrdSet& b) { return inst.g.at(b); };
  const ExtractResult r = extract_uniform(inst.fam, 6, g);
  REQUIRE(r.status == ExtractStatus::found);
  CHECK(r.H.size() == 6);
  const Family sub = inst.fam.restrict(r.H);
  CHECK(brute_uniform(sub));
  CHECK(verify_uniform(sub).ok());
  std::set<std::size_t> seen;
  for (const auto& [b, u] : sub.sets()) seen.insert(g(b));
  CHECK(seen.size() == 1);
  CHECK_THROWS_AS(make_planted(200, 12, 40, 1), PreconditionError);
}

TEST_CASE("derived subfamilies") {
  const Family id = Family::build(2, OrdSet::range(0, 6), [](const OrdSet& b) { return b; });
  const UniformCertificate cert = verify_uniform(id).cert;
  const Family root = derive_subfamily(id, cert, 0);
  REQUIRE(root.sets().size() == 1);
  CHECK(root.sets().begin()->second == OrdSet{});
  const Family ones = derive_subfamily(id, cert, 1);
  for (const auto& [a, u] : ones.sets()) CHECK(u == a);

  const Family mins = Family::build(2, OrdSet::range(0, 6), [](const OrdSet& b) { return OrdSet{b.min(), 40}; });
  const Family mroot = derive_subfamily(mins, verify_uniform(mins).cert, 0);
  CHECK(mroot.sets().begin()->second == OrdSet{40});

  auto sets = id.sets();
  sets[OrdSet{1, 4}] = OrdSet{0, 4};
  const Family bad(2, OrdSet::range(0, 6), sets);
  CHECK_THROWS_AS(derive_subfamily(bad, cert, 1), PreconditionError);
}
