#include "hlab/antiramsey.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "hlab/rng.hpp"

namespace hlab {

namespace {

constexpr std::uint64_t kTagE = 0x65;
constexpr std::uint64_t kTagC1 = 0x63;

std::vector<Ord> seeded_permutation(std::size_t M, std::uint64_t seed, std::uint64_t tag,
                                    std::uint64_t beta) {
  std::vector<Ord> p(M);
  std::iota(p.begin(), p.end(), Ord{0});
  Rng rng = Rng::derived(seed, (tag << 32) ^ beta);
  rng.shuffle(p);
  return p;
}

void require_arity(const Arena& arena, const OrdSet& a) {
  if (a.otp() < 2) throw PreconditionError("coloring needs a set of size at least 2");
  if (a.max() >= arena.size()) {
    throw PreconditionError("set " + to_string(a) + " leaves the arena");
  }
}

/// Image of a minus its max under e_{max(a)}, sorted.
OrdSet pushed(const Arena& arena, const OrdSet& a) {
  const Ord beta = a.max();
  std::vector<Ord> img;
  img.reserve(a.otp() - 1);
  for (std::size_t i = 0; i + 1 < a.otp(); ++i) img.push_back(arena.e(beta, a.elems()[i]));
  return OrdSet::from_unsorted(std::move(img));
}

}  // namespace

Arena::Arena(ArenaDescriptor desc) : desc_(desc) {
  if (desc_.n < 1) throw PreconditionError("arena dimension must be at least 1");
  if (desc_.M < 1) throw PreconditionError("arena must be nonempty");
  e_.resize(desc_.M);
  c1_.resize(desc_.M);
  for (Ord beta = 0; beta < desc_.M; ++beta) {
    if (desc_.mode == ArenaMode::identity) {
      e_[beta].resize(beta);
      std::iota(e_[beta].begin(), e_[beta].end(), Ord{0});
      c1_[beta].resize(beta);
      std::iota(c1_[beta].begin(), c1_[beta].end(), std::size_t{0});
    } else {
      auto pe = seeded_permutation(desc_.M, desc_.seed, kTagE, beta);
      e_[beta].assign(pe.begin(), pe.begin() + static_cast<std::ptrdiff_t>(beta));
      auto pc = seeded_permutation(desc_.M, desc_.seed, kTagC1, beta);
      c1_[beta].assign(pc.begin(), pc.begin() + static_cast<std::ptrdiff_t>(beta));
    }
  }
}

Ord Arena::e(Ord beta, Ord alpha) const {
  if (!(alpha < beta && beta < desc_.M)) {
    throw PreconditionError("e_beta(alpha) needs alpha < beta < M");
  }
  return e_[beta][alpha];
}

std::optional<Ord> Arena::e_inverse(Ord beta, Ord gamma) const {
  if (beta >= desc_.M) throw PreconditionError("e_beta needs beta < M");
  const auto& row = e_[beta];
  auto it = std::find(row.begin(), row.end(), gamma);
  if (it == row.end()) return std::nullopt;
  return static_cast<Ord>(it - row.begin());
}

std::size_t Arena::c1(Ord alpha, Ord beta) const {
  if (!(alpha < beta)) throw PreconditionError("c1(alpha, beta) needs alpha < beta");
  if (beta >= desc_.M) throw PreconditionError("c1(alpha, beta) needs beta < M");
  return c1_[beta][alpha];
}

std::size_t cn_dim(const Arena& arena, const OrdSet& a) {
  require_arity(arena, a);
  if (a.otp() == 2) return arena.c1(a.elems()[0], a.elems()[1]);
  return cn_dim(arena, pushed(arena, a));
}

std::size_t cn(const Arena& arena, const OrdSet& a) {
  if (a.otp() != arena.dim() + 1) {
    throw PreconditionError("c_n needs a set of size n+1 = " + std::to_string(arena.dim() + 1));
  }
  return cn_dim(arena, a);
}

Ord star_dim(const Arena& arena, const OrdSet& a) {
  require_arity(arena, a);
  if (a.otp() == 2) return a.min();
  Ord s = star_dim(arena, pushed(arena, a));
  auto back = arena.e_inverse(a.max(), s);
  if (!back) throw InternalError("distinguished element has no preimage");
  return *back;
}

Ord star(const Arena& arena, const OrdSet& a) {
  if (a.otp() != arena.dim() + 1) {
    throw PreconditionError("a(*) needs a set of size n+1 = " + std::to_string(arena.dim() + 1));
  }
  return star_dim(arena, a);
}

DifferenceReport difference_check(const Arena& arena) {
  const std::size_t n = arena.dim();
  DifferenceReport out;
  std::map<OrdSet, std::vector<std::pair<Ord, OrdSet>>> groups;
  for_each_subset(OrdSet::range(0, arena.size()), n + 1, [&](const OrdSet& a) {
    ++out.sets;
    const Ord s = star(arena, a);
    groups[a.without(s)].emplace_back(s, a);
    return true;
  });
  for (const auto& [rest, members] : groups) {
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const auto& [sa, a] = members[x];
        const auto& [sb, b] = members[y];
        if (sa == sb) continue;
        ++out.pairs;
        if (a.max() != b.max()) ++out.max_mismatches;
        if (cn(arena, a) == cn(arena, b)) {
          ++out.violations;
          if (!out.counterexample) out.counterexample = std::make_pair(a, b);
        }
      }
    }
  }
  return out;
}

TupleColor c_full(const Arena& arena, std::span<const Ord> alphas) {
  const std::size_t n = arena.dim();
  if (alphas.size() != n + 1) throw PreconditionError("c needs an (n+1)-tuple");
  for (Ord x : alphas) {
    if (x >= arena.size()) throw PreconditionError("tuple entry leaves the arena");
  }
  OrdSet a = OrdSet::from_unsorted(std::vector<Ord>(alphas.begin(), alphas.end()));
  if (a.otp() != alphas.size()) return {n + 1, 0};
  const Ord s = star(arena, a);
  const auto slot = static_cast<std::size_t>(std::find(alphas.begin(), alphas.end(), s) - alphas.begin());
  return {slot, cn(arena, a)};
}

Color encode_color(const TupleColor& c, std::size_t n) { return c.value * (n + 2) + c.slot; }

ProductBoundReport verify_product_bound(const Arena& arena, std::span<const OrdSet> As,
                                        std::size_t k, std::optional<std::size_t> expected_size) {
  const std::size_t n = arena.dim();
  if (As.size() != n + 1) throw PreconditionError("product bound needs n+1 sets");
  for (const auto& A : As) {
    if (expected_size && A.size() != *expected_size) {
      throw PreconditionError("set " + to_string(A) + " does not have size " +
                              std::to_string(*expected_size));
    }
    if (A.empty()) throw PreconditionError("product bound needs nonempty sets");
    if (A.max() >= arena.size()) throw PreconditionError("set leaves the arena");
  }
  ProductBoundReport out;
  std::vector<std::size_t> pos(As.size(), 0);
  std::vector<Ord> alphas(As.size());
  while (true) {
    for (std::size_t i = 0; i < As.size(); ++i) alphas[i] = As[i].elems()[pos[i]];
    ++out.census[c_full(arena, alphas)];
    std::size_t i = As.size();
    while (i > 0 && pos[i - 1] + 1 == As[i - 1].size()) {
      pos[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
    ++pos[i - 1];
  }
  out.holds = out.census.size() > k;
  return out;
}

std::string census_csv(const std::map<TupleColor, std::size_t>& census) {
  std::ostringstream os;
  os << "slot,value,count\n";
  for (const auto& [c, count] : census) os << c.slot << ',' << c.value << ',' << count << '\n';
  return os.str();
}

GridColoring::GridColoring(Arena arena, std::vector<BranchEnumeration> enums)
    : arena_(std::move(arena)), enums_(std::move(enums)) {
  if (enums_.size() != arena_.dim() + 1) {
    throw PreconditionError("grid coloring needs n+1 enumerations");
  }
  for (const auto& en : enums_) {
    if (en.index.size() != en.set.size()) throw PreconditionError("enumeration length mismatch");
    std::set<Ord> seen;
    std::map<Word, Ord> lk;
    for (std::size_t j = 0; j < en.index.size(); ++j) {
      if (en.index[j] >= arena_.size()) throw PreconditionError("enumeration leaves the arena");
      if (!seen.insert(en.index[j]).second) throw PreconditionError("enumeration is not injective");
      lk.emplace(en.set.branches()[j], en.index[j]);
    }
    lookup_.push_back(std::move(lk));
  }
}

TupleColor GridColoring::operator()(const BranchTuple& x) const {
  if (x.size() != enums_.size()) throw PreconditionError("branch tuple arity mismatch");
  std::vector<Ord> alphas;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = lookup_[i].find(x[i]);
    if (it == lookup_[i].end()) throw PreconditionError("branch outside the enumerated set");
    alphas.push_back(it->second);
  }
  return c_full(arena_, alphas);
}

std::map<BranchTuple, TupleColor> GridColoring::table() const {
  std::vector<BranchSet> sets;
  for (const auto& en : enums_) sets.push_back(en.set);
  std::map<BranchTuple, TupleColor> out;
  const BranchRelation prod = BranchRelation::product(sets);
  for (const auto& t : prod.tuples()) out.emplace(t, (*this)(t));
  return out;
}

}  // namespace hlab
