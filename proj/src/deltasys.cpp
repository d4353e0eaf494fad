#include "hlab/deltasys.hpp"

#include <algorithm>
#include <set>

#include "hlab/errors.hpp"
#include "hlab/rng.hpp"

namespace hlab {

namespace {

std::vector<OrdSet> all_patterns(std::size_t n) {
  std::vector<OrdSet> out;
  for (std::size_t s = 0; s <= n; ++s) {
    for (auto& m : subsets_of_size(OrdSet::range(0, n), s)) out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t mask_of(const OrdSet& m) {
  std::uint64_t out = 0;
  for (Ord i : m) out |= std::uint64_t{1} << i;
  return out;
}

OrdSet pattern_of(std::uint64_t mask) {
  std::vector<Ord> out;
  for (Ord i = 0; i < 64; ++i) {
    if (mask >> i & 1) out.push_back(i);
  }
  return OrdSet(std::move(out));
}

/// First violated lattice identity among determined entries, by mask.
std::optional<DeltaViolation> lattice_violation(const std::vector<std::optional<OrdSet>>& table) {
  for (std::uint64_t m0 = 0; m0 < table.size(); ++m0) {
    if (!table[m0]) continue;
    for (std::uint64_t m1 = m0 + 1; m1 < table.size(); ++m1) {
      if (!table[m1] || !table[m0 & m1]) continue;
      if (*table[m0 & m1] != intersect(*table[m0], *table[m1])) {
        return DeltaViolation{"lattice", {}, {},
                              "r" + to_string(pattern_of(m0 & m1)) + " != r" +
                                  to_string(pattern_of(m0)) + " & r" + to_string(pattern_of(m1))};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Family::Family(std::size_t n, OrdSet H, std::map<OrdSet, OrdSet> u)
    : n_(n), H_(std::move(H)), u_(std::move(u)) {
  if (n_ > 63) throw PreconditionError("family dimension too large");
  if (u_.size() != binomial(H_.size(), n_)) {
    throw PreconditionError("family is not defined on exactly [H]^n");
  }
  for (const auto& [b, ub] : u_) {
    if (b.size() != n_ || !is_subset(b, H_)) {
      throw PreconditionError("family index " + to_string(b) + " is not in [H]^n");
    }
  }
}

Family Family::build(std::size_t n, OrdSet H, const std::function<OrdSet(const OrdSet&)>& f) {
  std::map<OrdSet, OrdSet> u;
  for_each_subset(H, n, [&](const OrdSet& b) {
    u.emplace(b, f(b));
    return true;
  });
  return Family(n, std::move(H), std::move(u));
}

const OrdSet& Family::at(const OrdSet& b) const {
  auto it = u_.find(b);
  if (it == u_.end()) throw PreconditionError("no family member at " + to_string(b));
  return it->second;
}

Family Family::restrict(const OrdSet& Hp) const {
  if (!is_subset(Hp, H_)) throw PreconditionError("restriction is not a subset of H");
  std::map<OrdSet, OrdSet> u;
  for_each_subset(Hp, n_, [&](const OrdSet& b) {
    u.emplace(b, at(b));
    return true;
  });
  return Family(n_, Hp, std::move(u));
}

bool UniformCertificate::full() const {
  return std::all_of(r.begin(), r.end(), [](const auto& kv) { return kv.second.has_value(); });
}

std::vector<OrdSet> UniformCertificate::undetermined() const {
  std::vector<OrdSet> out;
  for (const auto& [m, rm] : r) {
    if (!rm) out.push_back(m);
  }
  return out;
}

UniformVerdict verify_uniform(const Family& fam) {
  UniformVerdict out;
  const std::size_t n = fam.dim();
  std::vector<std::optional<OrdSet>> table(std::size_t{1} << n);
  std::vector<std::pair<OrdSet, OrdSet>> witness(table.size());
  std::vector<std::pair<const OrdSet*, const OrdSet*>> sets;
  for (const auto& [b, ub] : fam.sets()) sets.emplace_back(&b, &ub);
  auto finish = [&]() {
    for (const auto& m : all_patterns(n)) out.cert.r[m] = table[mask_of(m)];
    return out;
  };
  if (!sets.empty()) out.cert.rho = sets[0].second->otp();
  for (const auto& [b, ub] : sets) {
    if (ub->otp() != out.cert.rho) {
      out.violation = DeltaViolation{"order-type", *sets[0].first, *b,
                                     "otp " + std::to_string(ub->otp()) + " != " +
                                         std::to_string(out.cert.rho)};
      return finish();
    }
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& [a, ua] = sets[i];
    for (std::size_t j = i; j < sets.size(); ++j) {
      const auto& [b, ub] = sets[j];
      if (!aligned(*a, *b)) continue;
      const std::uint64_t m = mask_of(rset(*a, *b));
      if (!aligned(*ua, *ub)) {
        out.violation = DeltaViolation{"unaligned", *a, *b,
                                       "u = " + to_string(*ua) + ", " + to_string(*ub)};
        return finish();
      }
      OrdSet r = rset(*ua, *ub);
      if (!table[m]) {
        table[m] = std::move(r);
        witness[m] = {*a, *b};
      } else if (*table[m] != r) {
        out.violation = DeltaViolation{
            "pattern", *a, *b,
            "r" + to_string(pattern_of(m)) + " = " + to_string(r) + " here but " +
                to_string(*table[m]) + " at " + to_string(witness[m].first) + ", " +
                to_string(witness[m].second)};
        return finish();
      }
    }
  }
  out.violation = lattice_violation(table);
  return finish();
}

std::vector<OrdSet> realizable_patterns(std::size_t n, std::size_t h) {
  std::set<OrdSet> seen;
  auto sets = subsets_of_size(OrdSet::range(0, h), n);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i; j < sets.size(); ++j) {
      if (aligned(sets[i], sets[j])) seen.insert(rset(sets[i], sets[j]));
    }
  }
  return {seen.begin(), seen.end()};
}

namespace {

struct TypeKey {
  std::size_t otp;
  std::size_t color;
  friend auto operator<=>(const TypeKey&, const TypeKey&) = default;
};

class Extractor {
 public:
  Extractor(const Family& fam, std::size_t h, std::uint64_t budget, ExtractResult& res)
      : fam_(fam), n_(fam.dim()), h_(h), budget_(budget), res_(res),
        hv_(fam.index_set().elems()) {}

  /// Lexicographically least solution whose sets all carry `key`, or nullopt.
  std::optional<std::vector<std::size_t>> run(const std::vector<std::size_t>& pool,
                                               const std::vector<std::size_t>* bound) {
    pool_ = pool;
    bound_ = bound;
    chosen_.clear();
    sets_.clear();
    table_.assign(std::size_t{1} << n_, std::nullopt);
    found_.reset();
    dfs(0);
    return found_;
  }

  bool exhausted() const { return res_.nodes > budget_; }

 private:
  struct Member {
    OrdSet b;
    const OrdSet* u;
  };

  /// Adds every new set that has hv_[x] on top; false on inconsistency, in
  /// which case nothing is left behind.
  bool push(std::size_t x, std::vector<std::uint64_t>& set_masks) {
    const std::size_t before = sets_.size();
    auto fail = [&]() {
      sets_.resize(before);
      for (auto m : set_masks) table_[m].reset();
      set_masks.clear();
      return false;
    };
    bool ok = true;
    std::vector<Ord> chosen_vals;
    for (std::size_t p : chosen_) chosen_vals.push_back(hv_[p]);
    for_each_subset(OrdSet(chosen_vals), n_ - 1, [&](const OrdSet& c) {
      OrdSet b = c.with(hv_[x]);
      const OrdSet& ub = fam_.at(b);
      for (std::size_t i = 0; i < sets_.size() && ok; ++i) {
        const Member& a = sets_[i];
        if (!aligned(a.b, b)) continue;
        const std::uint64_t m = mask_of(rset(a.b, b));
        if (!aligned(*a.u, ub)) {
          ok = false;
          break;
        }
        OrdSet r = rset(*a.u, ub);
        if (!table_[m]) {
          table_[m] = std::move(r);
          set_masks.push_back(m);
        } else if (*table_[m] != r) {
          ok = false;
        }
      }
      if (!ok) return false;
      sets_.push_back({std::move(b), &ub});
      return true;
    });
    if (!ok) return fail();
    return true;
  }

  void dfs(std::size_t start) {
    if (found_ || exhausted()) return;
    if (chosen_.size() == h_) {
      if (!lattice_violation(table_)) found_ = chosen_;
      return;
    }
    if (chosen_.size() > res_.best_partial.size()) {
      std::vector<Ord> vals;
      for (std::size_t p : chosen_) vals.push_back(hv_[p]);
      res_.best_partial = OrdSet(std::move(vals));
    }
    const std::size_t depth = chosen_.size();
    for (std::size_t i = start; i < pool_.size(); ++i) {
      if (pool_.size() - i < h_ - depth) return;
      const std::size_t x = pool_[i];
      if (bound_ && prefix_matches_bound() && x > (*bound_)[depth]) return;
      if (++res_.nodes > budget_) return;
      std::vector<std::uint64_t> masks;
      if (!typed(x)) continue;
      if (!push(x, masks)) continue;
      chosen_.push_back(x);
      dfs(i + 1);
      chosen_.pop_back();
      rollback(x, masks);
      if (found_ || exhausted()) return;
    }
  }

  bool prefix_matches_bound() const {
    return std::equal(chosen_.begin(), chosen_.end(), bound_->begin());
  }

  /// Every new set with x on top has the active type.
  bool typed(std::size_t x) const {
    bool ok = true;
    std::vector<Ord> chosen_vals;
    for (std::size_t p : chosen_) chosen_vals.push_back(hv_[p]);
    for_each_subset(OrdSet(chosen_vals), n_ - 1, [&](const OrdSet& c) {
      ok = in_type_->count(c.with(hv_[x])) > 0;
      return ok;
    });
    return ok;
  }

  void rollback(std::size_t x, const std::vector<std::uint64_t>& masks) {
    while (!sets_.empty() && sets_.back().b.max() == hv_[x]) sets_.pop_back();
    for (auto m : masks) table_[m].reset();
  }

 public:
  const std::set<OrdSet>* in_type_ = nullptr;

 private:
  const Family& fam_;
  std::size_t n_;
  std::size_t h_;
  std::uint64_t budget_;
  ExtractResult& res_;
  const std::vector<Ord>& hv_;
  std::vector<std::size_t> pool_;
  const std::vector<std::size_t>* bound_ = nullptr;
  std::vector<std::size_t> chosen_;
  std::vector<Member> sets_;
  std::vector<std::optional<OrdSet>> table_;
  std::optional<std::vector<std::size_t>> found_;
};

/// Indices lying in fewer than C(h-1, n-1) members of the type among the
/// surviving indices cannot be part of a solution; prune to a fixed point.
std::vector<std::size_t> core(const std::vector<std::vector<std::size_t>>& members,
                              std::size_t universe, std::size_t h, std::size_t n) {
  const std::size_t need = binomial(h - 1, n - 1);
  std::vector<char> alive(universe, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::size_t> count(universe, 0);
    for (const auto& b : members) {
      if (std::all_of(b.begin(), b.end(), [&](std::size_t p) { return alive[p]; })) {
        for (std::size_t p : b) ++count[p];
      }
    }
    for (std::size_t p = 0; p < universe; ++p) {
      if (alive[p] && count[p] < need) {
        alive[p] = 0;
        changed = true;
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < universe; ++p) {
    if (alive[p]) out.push_back(p);
  }
  return out;
}

}  // namespace

ExtractResult extract_uniform(const Family& fam, std::size_t h, const SetColoring& g,
                              std::uint64_t budget) {
  ExtractResult res;
  const std::size_t n = fam.dim();
  const auto& hv = fam.index_set().elems();
  if (h > hv.size()) return res;
  if (n == 0 || h < n) {
    // [H']^n has at most one member, so any H' works.
    res.status = ExtractStatus::found;
    res.H = OrdSet(std::vector<Ord>(hv.begin(), hv.begin() + static_cast<std::ptrdiff_t>(h)));
    if (n == 0) {
      res.rho = fam.at(OrdSet{}).otp();
      res.color = g(OrdSet{});
    }
    return res;
  }
  std::map<Ord, std::size_t> pos;
  for (std::size_t i = 0; i < hv.size(); ++i) pos.emplace(hv[i], i);
  std::map<TypeKey, std::set<OrdSet>> by_type;
  std::map<TypeKey, std::vector<std::vector<std::size_t>>> members;
  for (const auto& [b, ub] : fam.sets()) {
    TypeKey key{ub.otp(), g(b)};
    by_type[key].insert(b);
    std::vector<std::size_t> ps;
    for (Ord x : b) ps.push_back(pos.at(x));
    members[key].push_back(std::move(ps));
  }
  Extractor ex(fam, h, budget, res);
  std::optional<std::vector<std::size_t>> best;
  std::optional<TypeKey> best_key;
  for (const auto& [key, bs] : by_type) {
    std::vector<std::size_t> pool = core(members[key], hv.size(), h, n);
    if (pool.size() < h) continue;
    ex.in_type_ = &bs;
    auto sol = ex.run(pool, best ? &*best : nullptr);
    if (ex.exhausted()) {
      res.status = ExtractStatus::budget;
      return res;
    }
    if (sol && (!best || *sol < *best)) {
      best = std::move(sol);
      best_key = key;
    }
  }
  if (!best) return res;
  std::vector<Ord> vals;
  for (std::size_t p : *best) vals.push_back(hv[p]);
  res.status = ExtractStatus::found;
  res.H = OrdSet(std::move(vals));
  res.rho = best_key->otp;
  res.color = best_key->color;
  res.best_partial = {};
  return res;
}

ExtractResult extract_uniform_exhaustive(const Family& fam, std::size_t h, const SetColoring& g) {
  ExtractResult res;
  if (h > fam.index_set().size()) return res;
  for_each_subset(fam.index_set(), h, [&](const OrdSet& Hp) {
    ++res.nodes;
    Family sub = fam.restrict(Hp);
    std::set<std::size_t> colors;
    for (const auto& [b, ub] : sub.sets()) colors.insert(g(b));
    if (colors.size() > 1 || !verify_uniform(sub).ok()) return true;
    res.status = ExtractStatus::found;
    res.H = Hp;
    if (!sub.sets().empty()) {
      res.rho = sub.sets().begin()->second.otp();
      res.color = *colors.begin();
    }
    return false;
  });
  return res;
}

Family derive_subfamily(const Family& fam, const UniformCertificate& cert, std::size_t m) {
  const std::size_t n = fam.dim();
  if (m >= n) throw PreconditionError("derive_subfamily needs m < n");
  const OrdSet P = OrdSet::range(0, m);
  auto it = cert.r.find(P);
  if (it == cert.r.end() || !it->second) {
    throw PreconditionError("pattern " + to_string(P) + " is undetermined in the certificate");
  }
  const OrdSet& rm = *it->second;
  const auto& hv = fam.index_set().elems();
  OrdSet H0(std::vector<Ord>(hv.begin(), hv.end() - static_cast<std::ptrdiff_t>(std::min(hv.size(), n - m))));
  std::map<OrdSet, OrdSet> u;
  std::map<OrdSet, OrdSet> first;
  for (const auto& [b, ub] : fam.sets()) {
    OrdSet a(std::vector<Ord>(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(m)));
    OrdSet ua = slice(ub, rm);
    auto [pos, fresh] = u.emplace(a, ua);
    if (fresh) {
      first.emplace(a, b);
    } else if (pos->second != ua) {
      throw PreconditionError("choice of b matters at a = " + to_string(a) + ": b = " +
                              to_string(first.at(a)) + " gives " + to_string(pos->second) +
                              ", b' = " + to_string(b) + " gives " + to_string(ua));
    }
  }
  return Family(m, std::move(H0), std::move(u));
}

PlantedInstance make_planted(std::size_t total, std::size_t planted, std::size_t noise_range,
                             std::uint64_t seed) {
  if (planted > total) throw PreconditionError("more planted indices than indices");
  if (noise_range < total || noise_range < 4) throw PreconditionError("noise range too small");
  Rng rng = Rng::derived(seed, 0x706c);
  std::vector<Ord> idx(total);
  for (std::size_t i = 0; i < total; ++i) idx[i] = i;
  rng.shuffle(idx);
  idx.resize(planted);
  PlantedInstance out{Family(2, {}, {}), {}, OrdSet::from_unsorted(idx)};
  const Ord root = noise_range;
  std::map<OrdSet, OrdSet> u;
  for_each_subset(OrdSet::range(0, total), 2, [&](const OrdSet& b) {
    if (out.planted.contains(b.elems()[0]) && out.planted.contains(b.elems()[1])) {
      u.emplace(b, b.with(root));
      out.g.emplace(b, 0);
    } else {
      const std::size_t size = 2 + rng.below(3);
      std::set<Ord> vals;
      while (vals.size() < size) vals.insert(rng.below(noise_range));
      u.emplace(b, OrdSet(std::vector<Ord>(vals.begin(), vals.end())));
      out.g.emplace(b, rng.below(4));
    }
    return true;
  });
  out.fam = Family(2, OrdSet::range(0, total), std::move(u));
  return out;
}

}  // namespace hlab
