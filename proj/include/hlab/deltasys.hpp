#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hlab/ordset.hpp"

namespace hlab {

/// <u_b : b in [H]^n>.
class Family {
 public:
  /// Throws PreconditionError unless `u` is defined on exactly [H]^n.
  Family(std::size_t n, OrdSet H, std::map<OrdSet, OrdSet> u);
  /// Evaluates f on every b in [H]^n.
  static Family build(std::size_t n, OrdSet H, const std::function<OrdSet(const OrdSet&)>& f);

  std::size_t dim() const { return n_; }
  const OrdSet& index_set() const { return H_; }
  const std::map<OrdSet, OrdSet>& sets() const { return u_; }
  const OrdSet& at(const OrdSet& b) const;

  /// The subfamily indexed by [H']^n; H' must be a subset of H.
  Family restrict(const OrdSet& Hp) const;

  friend bool operator==(const Family&, const Family&) = default;

 private:
  std::size_t n_;
  OrdSet H_;
  std::map<OrdSet, OrdSet> u_;
};

/// rho plus the pattern map m -> r_m over all subsets m of {0..n-1};
/// nullopt marks a pattern no aligned pair realizes.
struct UniformCertificate {
  std::size_t rho = 0;
  std::map<OrdSet, std::optional<OrdSet>> r;

  bool full() const;
  std::vector<OrdSet> undetermined() const;

  friend bool operator==(const UniformCertificate&, const UniformCertificate&) = default;
};

struct DeltaViolation {
  /// "order-type", "unaligned", "pattern" or "lattice".
  std::string kind;
  OrdSet a;
  OrdSet b;
  std::string detail;
};

struct UniformVerdict {
  UniformCertificate cert;
  std::optional<DeltaViolation> violation;

  /// No violation; unrealized patterns allowed.
  bool ok() const { return !violation.has_value(); }
  /// No violation and every pattern determined.
  bool certified() const { return ok() && cert.full(); }
};

/// Constant order type, and for every aligned pair a, b the sets u_a, u_b
/// are aligned with rset(u_a, u_b) depending only on rset(a, b); then the
/// lattice identity r_{m0 & m1} = r_m0 & r_m1 over determined entries.
UniformVerdict verify_uniform(const Family& fam);

/// Patterns of [h]^n realized by some aligned pair.
std::vector<OrdSet> realizable_patterns(std::size_t n, std::size_t h);

using SetColoring = std::function<std::size_t(const OrdSet&)>;

enum class ExtractStatus { found, none, budget };

struct ExtractResult {
  ExtractStatus status = ExtractStatus::none;
  OrdSet H;
  /// Common order type and color on [H]^n, when n <= h.
  std::optional<std::size_t> rho;
  std::optional<std::size_t> color;
  /// Longest prefix reached when the search did not succeed.
  OrdSet best_partial;
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultExtractBudget = 50'000'000;

/// Lexicographically least H' in [H]^h on which the restricted family passes
/// verify_uniform and g is constant.
///
/// Subsets b are grouped by (otp(u_b), g(b)); per group, indices lying in too
/// few group members are pruned, then a lexicographic depth-first search adds
/// one index at a time and keeps the pattern map consistent incrementally.
/// The search is exhaustive within the budget, so `none` is a proof.
ExtractResult extract_uniform(const Family& fam, std::size_t h, const SetColoring& g,
                              std::uint64_t budget = kDefaultExtractBudget);

/// Reference search: every h-subset in lexicographic order, checked with
/// verify_uniform. For small instances only.
ExtractResult extract_uniform_exhaustive(const Family& fam, std::size_t h, const SetColoring& g);

/// u_a := u_b[r_m] for a in [H0]^m, where H0 drops the top n-m indices of H
/// and b is any index set with initial segment a. Throws PreconditionError
/// naming a, b, b' if two choices of b disagree, or if the needed pattern is
/// undetermined.
Family derive_subfamily(const Family& fam, const UniformCertificate& cert, std::size_t m);

struct PlantedInstance {
  Family fam;
  std::map<OrdSet, std::size_t> g;
  OrdSet planted;
};

/// n = 2 family on {0..total-1}: u_b = b + {root} with g = 0 on the planted
/// indices, random 2-4 element subsets of {0..noise_range-1} with random
/// g < 4 elsewhere. root = noise_range sits above every index and noise value.
PlantedInstance make_planted(std::size_t total, std::size_t planted, std::size_t noise_range,
                             std::uint64_t seed);

}  // namespace hlab
