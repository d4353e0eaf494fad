#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace hlab {

/// Naturals stand in for ordinals throughout.
using Ord = std::size_t;

/// Finite set of ordinals, stored as a strictly increasing sequence.
///
/// The set doubles as the increasing function from its order type onto
/// itself: index(a, eta) is the eta-th smallest element.
class OrdSet {
 public:
  OrdSet() = default;
  OrdSet(std::initializer_list<Ord> elems);
  /// Throws PreconditionError unless `elems` is strictly increasing.
  explicit OrdSet(std::vector<Ord> elems);

  /// Sorts and deduplicates.
  static OrdSet from_unsorted(std::vector<Ord> elems);
  /// {begin, ..., end - 1}
  static OrdSet range(Ord begin, Ord end);

  std::size_t otp() const { return elems_.size(); }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const std::vector<Ord>& elems() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  Ord min() const;
  Ord max() const;
  bool contains(Ord x) const;
  /// Position of x in the increasing enumeration, if present.
  std::optional<std::size_t> position(Ord x) const;
  OrdSet without(Ord x) const;
  OrdSet with(Ord x) const;

  friend auto operator<=>(const OrdSet&, const OrdSet&) = default;
  friend bool operator==(const OrdSet&, const OrdSet&) = default;

 private:
  std::vector<Ord> elems_;
};

/// a(eta). Throws OutOfRangeError when eta >= otp(a).
Ord index(const OrdSet& a, std::size_t eta);

/// a[I] = {a(eta) : eta in I}.
OrdSet slice(const OrdSet& a, const OrdSet& I);

/// Same order type, and every common element sits at the same position.
bool aligned(const OrdSet& a, const OrdSet& b);

/// Positions where aligned sets agree. Throws PreconditionError if the sets
/// are not aligned.
OrdSet rset(const OrdSet& a, const OrdSet& b);

OrdSet intersect(const OrdSet& a, const OrdSet& b);
OrdSet unite(const OrdSet& a, const OrdSet& b);
bool is_subset(const OrdSet& a, const OrdSet& b);

/// Calls f on every n-element subset of H in lexicographic order; stops early
/// when f returns false.
void for_each_subset(const OrdSet& H, std::size_t n,
                     const std::function<bool(const OrdSet&)>& f);

/// [H]^n in lexicographic order.
std::vector<OrdSet> subsets_of_size(const OrdSet& H, std::size_t n);

/// Number of n-subsets of an m-set, saturating at SIZE_MAX.
std::size_t binomial(std::size_t m, std::size_t n);

std::string to_string(const OrdSet& a);

}  // namespace hlab
