#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hlab/antiramsey.hpp"
#include "hlab/ordset.hpp"

namespace hlab {

/// Finite sequence over Lambda = {0..domain-1}.
using Tuple = std::vector<Ord>;

/// x is a (not necessarily initial, not necessarily contiguous) subsequence of y.
bool is_subseq(const Tuple& x, const Tuple& y);

/// F : Lambda^{<=L} -> {0..range-1} on nonempty tuples with entries below `domain`.
class CofinalFn {
 public:
  CofinalFn(std::size_t max_len, std::size_t domain, std::size_t range,
            std::function<Ord(const Tuple&)> fn, std::string name, std::uint64_t seed = 0);

  /// max of the entries.
  static CofinalFn max_fn(std::size_t max_len, std::size_t domain, std::size_t range);
  /// max of the entries plus the length.
  static CofinalFn max_plus_length(std::size_t max_len, std::size_t domain, std::size_t range);
  static CofinalFn constant(std::size_t max_len, std::size_t domain, std::size_t range, Ord c);

  /// Table built by increasing length:
  /// F(x) = max(max(x) + g(x), 1 + max{F(y) : y a proper nonempty subsequence of x})
  /// with g(x) drawn from {1..gmax}. Returns nullopt when some value would
  /// reach `range` (a skipped seed) or the result fails the strict check.
  static std::optional<CofinalFn> random_strict(std::size_t max_len, std::size_t domain,
                                                std::size_t range, std::size_t gmax,
                                                std::uint64_t seed);

  std::size_t max_len() const { return max_len_; }
  std::size_t domain() const { return domain_; }
  std::size_t range() const { return range_; }
  const std::string& name() const { return name_; }
  std::uint64_t seed() const { return seed_; }

  /// Throws PreconditionError on an empty, overlong or out-of-domain tuple.
  Ord operator()(const Tuple& x) const;

 private:
  std::size_t max_len_;
  std::size_t domain_;
  std::size_t range_;
  std::function<Ord(const Tuple&)> fn_;
  std::string name_;
  std::uint64_t seed_;
};

struct CofinalViolation {
  /// "lower" when x > F(<x>), "monotone" or "strict" for a pair x below y.
  std::string clause;
  Tuple x;
  Tuple y;
};

/// Checks x <= F(<x>) and F(x) <= F(y) (strict: F(x) < F(y) for proper
/// subsequences) over every nonempty tuple of length <= L; the first
/// violation in enumeration order is returned.
std::optional<CofinalViolation> is_cofinal(const CofinalFn& F, bool strict);

/// sigma(i) has length i+1, entries below the domain, and sigma(i) is a
/// subsequence of sigma(i+1).
using SigmaSeq = std::vector<Tuple>;

/// Throws PreconditionError if sigma is not a valid L-sequence for F.
void validate_sigma(const CofinalFn& F, const SigmaSeq& sigma);

/// Entrywise F o sigma. Throws ArenaTooSmall if a value reaches F.range().
Tuple fstar(const CofinalFn& F, const SigmaSeq& sigma);

/// (<0>, <0,1>, ..., <0,..,L-1>).
SigmaSeq probe_sigma(std::size_t L);

struct SigmaPair {
  Ord alpha_star = 0;
  SigmaSeq sigma0;
  SigmaSeq sigma1;
};

/// alpha* = F(<0..i*>) + 1; the two sequences agree except at entry i*,
/// where sigma0 has <0..i*> and sigma1 has <0..i*-1, alpha*>. Throws
/// ArenaTooSmall if some entry would leave the domain.
SigmaPair sigma_pair(const CofinalFn& F, std::size_t i_star);

struct Refutation {
  SigmaSeq probe;
  TupleColor probe_value;
  /// Set when the probe value's slot allowed the paired construction.
  std::optional<std::size_t> i_star;
  std::optional<Ord> alpha_star;
  SigmaSeq sigma0;
  SigmaSeq sigma1;
  TupleColor value0;
  TupleColor value1;
  bool refuted = false;
  /// Fallback probes tried when the pair construction did not apply.
  std::size_t samples = 0;
  std::vector<std::string> transcript;
};

inline constexpr std::size_t kRefuteFallbackSamples = 1000;

/// Exhibits two sigmas on which c o F* differs, for c = c_full on the arena.
/// Requires F strictly increasing and F.max_len() == arena.dim() + 1.
Refutation refute(const CofinalFn& F, const Arena& arena, std::uint64_t sample_seed = 0);

/// Re-evaluates a refutation from scratch: valid sigmas, values recomputed
/// through fstar and c_full, and the two values distinct.
bool check_refutation(const CofinalFn& F, const Arena& arena, const Refutation& r);

}  // namespace hlab
