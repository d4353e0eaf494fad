#include "hlab/ordset.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <sstream>

#include "hlab/errors.hpp"

namespace hlab {

namespace {

void require_increasing(const std::vector<Ord>& elems) {
  for (std::size_t i = 1; i < elems.size(); ++i) {
    if (elems[i - 1] >= elems[i]) {
      throw PreconditionError("OrdSet elements must be strictly increasing");
    }
  }
}

}  // namespace

OrdSet::OrdSet(std::initializer_list<Ord> elems) : elems_(elems) {
  require_increasing(elems_);
}

OrdSet::OrdSet(std::vector<Ord> elems) : elems_(std::move(elems)) {
  require_increasing(elems_);
}

OrdSet OrdSet::from_unsorted(std::vector<Ord> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  OrdSet out;
  out.elems_ = std::move(elems);
  return out;
}

OrdSet OrdSet::range(Ord begin, Ord end) {
  OrdSet out;
  for (Ord x = begin; x < end; ++x) out.elems_.push_back(x);
  return out;
}

Ord OrdSet::min() const {
  if (elems_.empty()) throw PreconditionError("min of empty OrdSet");
  return elems_.front();
}

Ord OrdSet::max() const {
  if (elems_.empty()) throw PreconditionError("max of empty OrdSet");
  return elems_.back();
}

bool OrdSet::contains(Ord x) const {
  return std::binary_search(elems_.begin(), elems_.end(), x);
}

std::optional<std::size_t> OrdSet::position(Ord x) const {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
  if (it == elems_.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - elems_.begin());
}

OrdSet OrdSet::without(Ord x) const {
  OrdSet out;
  out.elems_.reserve(elems_.size());
  for (Ord y : elems_) {
    if (y != x) out.elems_.push_back(y);
  }
  return out;
}

OrdSet OrdSet::with(Ord x) const {
  OrdSet out = *this;
  auto it = std::lower_bound(out.elems_.begin(), out.elems_.end(), x);
  if (it == out.elems_.end() || *it != x) out.elems_.insert(it, x);
  return out;
}

Ord index(const OrdSet& a, std::size_t eta) {
  if (eta >= a.otp()) {
    throw OutOfRangeError("index " + std::to_string(eta) + " out of range for " +
                          to_string(a));
  }
  return a.elems()[eta];
}

OrdSet slice(const OrdSet& a, const OrdSet& I) {
  std::vector<Ord> out;
  out.reserve(I.size());
  for (Ord eta : I) out.push_back(index(a, eta));
  return OrdSet(std::move(out));
}

bool aligned(const OrdSet& a, const OrdSet& b) {
  if (a.otp() != b.otp()) return false;
  // Merge walk: a common element must be met at equal positions.
  std::size_t i = 0, j = 0;
  const auto& x = a.elems();
  const auto& y = b.elems();
  while (i < x.size() && j < y.size()) {
    if (x[i] < y[j]) {
      ++i;
    } else if (y[j] < x[i]) {
      ++j;
    } else {
      if (i != j) return false;
      ++i;
      ++j;
    }
  }
  return true;
}

OrdSet rset(const OrdSet& a, const OrdSet& b) {
  if (!aligned(a, b)) {
    throw PreconditionError("rset of unaligned sets " + to_string(a) + " and " +
                            to_string(b));
  }
  std::vector<Ord> out;
  for (std::size_t i = 0; i < a.otp(); ++i) {
    if (a.elems()[i] == b.elems()[i]) out.push_back(i);
  }
  return OrdSet(std::move(out));
}

OrdSet intersect(const OrdSet& a, const OrdSet& b) {
  std::vector<Ord> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return OrdSet(std::move(out));
}

OrdSet unite(const OrdSet& a, const OrdSet& b) {
  std::vector<Ord> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return OrdSet(std::move(out));
}

bool is_subset(const OrdSet& a, const OrdSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void for_each_subset(const OrdSet& H, std::size_t n,
                     const std::function<bool(const OrdSet&)>& f) {
  const auto& h = H.elems();
  if (n > h.size()) return;
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = i;
  std::vector<Ord> buf(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) buf[i] = h[pos[i]];
    if (!f(OrdSet(buf))) return;
    // Advance to the next combination in lexicographic order.
    std::size_t i = n;
    while (i > 0 && pos[i - 1] == h.size() - n + (i - 1)) --i;
    if (i == 0) return;
    ++pos[i - 1];
    for (std::size_t j = i; j < n; ++j) pos[j] = pos[j - 1] + 1;
  }
}

std::vector<OrdSet> subsets_of_size(const OrdSet& H, std::size_t n) {
  std::vector<OrdSet> out;
  for_each_subset(H, n, [&](const OrdSet& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::size_t binomial(std::size_t m, std::size_t n) {
  if (n > m) return 0;
  n = std::min(n, m - n);
  unsigned __int128 acc = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    acc = acc * (m - n + i) / i;
    if (acc > SIZE_MAX) return SIZE_MAX;
  }
  return static_cast<std::size_t>(acc);
}

std::string to_string(const OrdSet& a) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) os << ',';
    os << a.elems()[i];
  }
  os << '}';
  return os.str();
}

}  // namespace hlab
