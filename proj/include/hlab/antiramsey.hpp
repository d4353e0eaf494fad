#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hlab/errors.hpp"
#include "hlab/ordset.hpp"
#include "hlab/trees.hpp"

namespace hlab {

enum class ArenaMode { identity, seeded };

struct ArenaDescriptor {
  std::size_t M = 0;
  std::size_t n = 1;
  ArenaMode mode = ArenaMode::identity;
  std::uint64_t seed = 0;

  friend bool operator==(const ArenaDescriptor&, const ArenaDescriptor&) = default;
};

/// The ordinals {0..M-1} with an injection e_beta : beta -> M and an
/// injective fiber c1(., beta) for every beta < M.
///
/// Identity mode uses e_beta(alpha) = alpha and c1(alpha, beta) = alpha.
/// Seeded mode takes e_beta as the first beta entries of a pseudorandom
/// permutation of {0..M-1} and c1(., beta) as another such permutation, both
/// drawn from streams derived from (seed, beta).
class Arena {
 public:
  explicit Arena(ArenaDescriptor desc);
  static Arena identity(std::size_t M, std::size_t n) { return Arena({M, n, ArenaMode::identity, 0}); }
  static Arena seeded(std::size_t M, std::size_t n, std::uint64_t seed) {
    return Arena({M, n, ArenaMode::seeded, seed});
  }

  const ArenaDescriptor& descriptor() const { return desc_; }
  std::size_t size() const { return desc_.M; }
  std::size_t dim() const { return desc_.n; }

  /// e_beta(alpha); requires alpha < beta < M.
  Ord e(Ord beta, Ord alpha) const;
  /// Preimage of gamma under e_beta, if any.
  std::optional<Ord> e_inverse(Ord beta, Ord gamma) const;
  /// Throws PreconditionError unless alpha < beta < M.
  std::size_t c1(Ord alpha, Ord beta) const;

 private:
  ArenaDescriptor desc_;
  std::vector<std::vector<Ord>> e_;
  std::vector<std::vector<std::size_t>> c1_;
};

/// c_n on an (n+1)-set, for n = arena.dim().
std::size_t cn(const Arena& arena, const OrdSet& a);
/// c_m for an explicit m = otp(a) - 1 >= 1.
std::size_t cn_dim(const Arena& arena, const OrdSet& a);

/// Distinguished element a(*): min for pairs, otherwise pulled back through
/// e_{max(a)} from the distinguished element of the image of the rest.
Ord star(const Arena& arena, const OrdSet& a);
Ord star_dim(const Arena& arena, const OrdSet& a);

struct DifferenceReport {
  std::uint64_t sets = 0;
  std::uint64_t pairs = 0;
  std::uint64_t violations = 0;
  /// Eligible pairs whose maxima differ; always zero when star(a) != max(a).
  std::uint64_t max_mismatches = 0;
  std::optional<std::pair<OrdSet, OrdSet>> counterexample;
};

/// Every pair a, b of (n+1)-subsets of the arena with star(a) != star(b) and
/// a - {star(a)} = b - {star(b)}, checking cn(a) != cn(b).
DifferenceReport difference_check(const Arena& arena);

struct TupleColor {
  std::size_t slot = 0;
  std::size_t value = 0;

  friend auto operator<=>(const TupleColor&, const TupleColor&) = default;
  friend bool operator==(const TupleColor&, const TupleColor&) = default;
};

/// (n+1, 0) on tuples with a repeat, else (i, c_n(a)) where alpha_i = a(*).
TupleColor c_full(const Arena& arena, std::span<const Ord> alphas);

/// Flattens a TupleColor into a single natural.
Color encode_color(const TupleColor& c, std::size_t n);

/// Search ran out of nodes. `lower` is a proven strict lower bound on m*
/// (a good coloring of [lower - 1] was found), `upper` is 0 when unknown.
class RamseyBudgetExceeded : public BudgetExceeded {
 public:
  RamseyBudgetExceeded(std::size_t lower, std::size_t upper, std::uint64_t nodes);
  std::size_t lower;
  std::size_t upper;
  std::uint64_t nodes;
};

struct RamseyResult {
  std::size_t m_star = 0;
  /// A k-coloring of [m_star - 1]^{n+1} with no monochromatic (n+2)-set,
  /// listed over `edges`.
  std::vector<OrdSet> edges;
  std::vector<Color> witness;
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultRamseyBudget = 20'000'000;

/// Least m with m -> (n+2)^{n+1}_k, by exhaustive search over colorings with
/// colors introduced in order. Throws RamseyBudgetExceeded past the budget.
RamseyResult ramsey_m_star(std::size_t n, std::size_t k,
                           std::uint64_t budget = kDefaultRamseyBudget);

/// True iff every (n+2)-subset of [m] sees at least two colors.
bool is_good_coloring(std::size_t m, std::size_t n, std::span<const OrdSet> edges,
                      std::span<const Color> colors);

/// m_0 = 1, m_k = (n+1) * m*_k. Memoized.
std::size_t m_seq(std::size_t n, std::size_t k, std::uint64_t budget = kDefaultRamseyBudget);

struct ProductBoundReport {
  bool holds = false;
  std::map<TupleColor, std::size_t> census;
};

/// Colors the full product of the A_i with c_full; holds iff more than k
/// distinct colors appear. With `expected_size` set, every |A_i| must equal it.
ProductBoundReport verify_product_bound(const Arena& arena, std::span<const OrdSet> As,
                                        std::size_t k,
                                        std::optional<std::size_t> expected_size = std::nullopt);

/// CSV with header slot,value,count.
std::string census_csv(const std::map<TupleColor, std::size_t>& census);

/// A finite branch set listed injectively into arena ordinals:
/// index[j] is the ordinal of set.branches()[j].
struct BranchEnumeration {
  BranchSet set;
  std::vector<Ord> index;
};

/// Pulls c_full back to products of enumerated branch sets.
class GridColoring {
 public:
  /// Requires one enumeration per coordinate (n+1 of them), each injective
  /// into the arena.
  GridColoring(Arena arena, std::vector<BranchEnumeration> enums);

  const Arena& arena() const { return arena_; }
  const std::vector<BranchEnumeration>& enumerations() const { return enums_; }
  std::size_t dim() const { return enums_.size(); }

  /// Throws PreconditionError if some branch lies outside its enumeration.
  TupleColor operator()(const BranchTuple& x) const;
  Color encoded(const BranchTuple& x) const { return encode_color((*this)(x), arena_.dim()); }

  /// Every tuple of the finite product with its color, lexicographically.
  std::map<BranchTuple, TupleColor> table() const;

 private:
  Arena arena_;
  std::vector<BranchEnumeration> enums_;
  std::vector<std::map<Word, Ord>> lookup_;
};

}  // namespace hlab
