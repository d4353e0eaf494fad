#include "hlab/ph.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

#include "hlab/errors.hpp"
#include "hlab/rng.hpp"

namespace hlab {

namespace {

std::string tuple_string(const Tuple& x) {
  std::ostringstream os;
  os << '<';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << '>';
  return os.str();
}

/// All nonempty tuples of length 1..L over {0..domain-1}, shorter first,
/// lexicographic within a length.
template <typename F>
void for_each_tuple(std::size_t L, std::size_t domain, F&& f) {
  for (std::size_t len = 1; len <= L; ++len) {
    Tuple x(len, 0);
    while (true) {
      if (!f(x)) return;
      std::size_t i = len;
      while (i > 0 && x[i - 1] + 1 == domain) {
        x[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
      ++x[i - 1];
    }
  }
}

/// Proper nonempty subsequences of y, by deletion mask.
std::vector<Tuple> proper_subseqs(const Tuple& y) {
  std::vector<Tuple> out;
  const std::size_t n = y.size();
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    Tuple x;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) x.push_back(y[i]);
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::size_t tuple_code(const Tuple& x, std::size_t domain) {
  std::size_t offset = 0, span = 1;
  for (std::size_t len = 1; len < x.size(); ++len) {
    span *= domain;
    offset += span;
  }
  std::size_t code = 0;
  for (Ord v : x) code = code * domain + v;
  return offset + code;
}

}  // namespace

bool is_subseq(const Tuple& x, const Tuple& y) {
  std::size_t j = 0;
  for (Ord v : y) {
    if (j < x.size() && x[j] == v) ++j;
  }
  return j == x.size();
}

CofinalFn::CofinalFn(std::size_t max_len, std::size_t domain, std::size_t range,
                     std::function<Ord(const Tuple&)> fn, std::string name, std::uint64_t seed)
    : max_len_(max_len), domain_(domain), range_(range), fn_(std::move(fn)), name_(std::move(name)),
      seed_(seed) {
  if (max_len_ < 1) throw PreconditionError("cofinal function needs max length >= 1");
  if (domain_ < 1 || range_ < 1) throw PreconditionError("cofinal function needs nonempty domain and range");
}

CofinalFn CofinalFn::max_fn(std::size_t max_len, std::size_t domain, std::size_t range) {
  return CofinalFn(max_len, domain, range,
                   [](const Tuple& x) { return *std::max_element(x.begin(), x.end()); }, "max");
}

CofinalFn CofinalFn::max_plus_length(std::size_t max_len, std::size_t domain, std::size_t range) {
  return CofinalFn(
      max_len, domain, range,
      [](const Tuple& x) { return *std::max_element(x.begin(), x.end()) + x.size(); },
      "max-plus-length");
}

CofinalFn CofinalFn::constant(std::size_t max_len, std::size_t domain, std::size_t range, Ord c) {
  return CofinalFn(max_len, domain, range, [c](const Tuple&) { return c; }, "constant");
}

std::optional<CofinalFn> CofinalFn::random_strict(std::size_t max_len, std::size_t domain,
                                                  std::size_t range, std::size_t gmax,
                                                  std::uint64_t seed) {
  if (gmax < 1) throw PreconditionError("gap bound must be at least 1");
  auto table = std::make_shared<std::vector<Ord>>(tuple_code(Tuple(max_len + 1, 0), domain), 0);
  Rng rng = Rng::derived(seed, 0x7068);
  bool overflow = false;
  for_each_tuple(max_len, domain, [&](const Tuple& x) {
    Ord v = *std::max_element(x.begin(), x.end()) + 1 + rng.below(gmax);
    for (const auto& y : proper_subseqs(x)) v = std::max(v, (*table)[tuple_code(y, domain)] + 1);
    if (v >= range) {
      overflow = true;
      return false;
    }
    (*table)[tuple_code(x, domain)] = v;
    return true;
  });
  if (overflow) return std::nullopt;
  CofinalFn F(
      max_len, domain, range,
      [table, domain](const Tuple& x) { return (*table)[tuple_code(x, domain)]; }, "random-strict",
      seed);
  if (is_cofinal(F, true)) return std::nullopt;
  return F;
}

Ord CofinalFn::operator()(const Tuple& x) const {
  if (x.empty() || x.size() > max_len_) {
    throw PreconditionError("tuple length " + std::to_string(x.size()) + " outside 1.." +
                            std::to_string(max_len_));
  }
  for (Ord v : x) {
    if (v >= domain_) throw PreconditionError("tuple entry " + std::to_string(v) + " outside the domain");
  }
  return fn_(x);
}

std::optional<CofinalViolation> is_cofinal(const CofinalFn& F, bool strict) {
  std::optional<CofinalViolation> bad;
  for_each_tuple(F.max_len(), F.domain(), [&](const Tuple& y) {
    const Ord fy = F(y);
    if (y.size() == 1 && y[0] > fy) {
      bad = CofinalViolation{"lower", y, {}};
      return false;
    }
    for (const auto& x : proper_subseqs(y)) {
      const Ord fx = F(x);
      if (fx > fy || (strict && fx == fy)) {
        bad = CofinalViolation{fx > fy ? "monotone" : "strict", x, y};
        return false;
      }
    }
    return true;
  });
  return bad;
}

void validate_sigma(const CofinalFn& F, const SigmaSeq& sigma) {
  if (sigma.size() != F.max_len()) {
    throw PreconditionError("sigma must have length " + std::to_string(F.max_len()));
  }
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i].size() != i + 1) throw PreconditionError("sigma entry " + std::to_string(i) + " has wrong length");
    for (Ord v : sigma[i]) {
      if (v >= F.domain()) throw PreconditionError("sigma entry leaves the domain");
    }
    if (i > 0 && !is_subseq(sigma[i - 1], sigma[i])) {
      throw PreconditionError("sigma is not increasing at entry " + std::to_string(i));
    }
  }
}

Tuple fstar(const CofinalFn& F, const SigmaSeq& sigma) {
  validate_sigma(F, sigma);
  Tuple out;
  for (const auto& x : sigma) {
    Ord v = F(x);
    if (v >= F.range()) throw ArenaTooSmall("F" + tuple_string(x) + " = " + std::to_string(v) + " leaves the arena");
    out.push_back(v);
  }
  return out;
}

SigmaSeq probe_sigma(std::size_t L) {
  SigmaSeq out;
  for (std::size_t i = 0; i < L; ++i) {
    Tuple x(i + 1);
    for (std::size_t j = 0; j <= i; ++j) x[j] = j;
    out.push_back(std::move(x));
  }
  return out;
}

SigmaPair sigma_pair(const CofinalFn& F, std::size_t i_star) {
  const std::size_t L = F.max_len();
  if (i_star >= L) throw PreconditionError("i* must be below the sigma length");
  Tuple base(i_star + 1);
  for (std::size_t j = 0; j <= i_star; ++j) base[j] = j;
  SigmaPair out;
  out.alpha_star = F(base) + 1;
  const Ord top = out.alpha_star + (L - 1 - i_star);
  if (out.alpha_star >= F.domain() || (i_star + 1 < L && top - 1 >= F.domain())) {
    throw ArenaTooSmall("alpha* = " + std::to_string(out.alpha_star) + " overflows the domain of size " +
                        std::to_string(F.domain()));
  }
  for (std::size_t i = 0; i < L; ++i) {
    Tuple s0, s1;
    if (i < i_star) {
      for (std::size_t j = 0; j <= i; ++j) s0.push_back(j);
      s1 = s0;
    } else if (i == i_star) {
      s0 = base;
      s1 = base;
      s1.back() = out.alpha_star;
    } else {
      s0 = base;
      for (std::size_t l = 0; l < i - i_star; ++l) s0.push_back(out.alpha_star + l);
      s1 = s0;
    }
    out.sigma0.push_back(std::move(s0));
    out.sigma1.push_back(std::move(s1));
  }
  return out;
}

namespace {

TupleColor color_of(const CofinalFn& F, const Arena& arena, const SigmaSeq& sigma) {
  return c_full(arena, fstar(F, sigma));
}

SigmaSeq random_sigma(std::size_t L, std::size_t domain, Rng& rng) {
  SigmaSeq s;
  Tuple x{static_cast<Ord>(rng.below(domain))};
  s.push_back(x);
  while (s.size() < L) {
    const auto at = static_cast<std::ptrdiff_t>(rng.below(x.size() + 1));
    x.insert(x.begin() + at, static_cast<Ord>(rng.below(domain)));
    s.push_back(x);
  }
  return s;
}

}  // namespace

Refutation refute(const CofinalFn& F, const Arena& arena, std::uint64_t sample_seed) {
  const std::size_t n = arena.dim();
  if (F.max_len() != n + 1) throw PreconditionError("F must take tuples of length up to n+1");
  if (F.range() > arena.size()) throw PreconditionError("F's range exceeds the arena");
  if (auto bad = is_cofinal(F, true)) {
    throw PreconditionError("F is not strictly increasing cofinal: " + bad->clause + " at " +
                            tuple_string(bad->x) + " " + tuple_string(bad->y));
  }
  Refutation r;
  r.probe = probe_sigma(n + 1);
  r.probe_value = color_of(F, arena, r.probe);
  r.transcript.push_back("probe value (" + std::to_string(r.probe_value.slot) + "," +
                         std::to_string(r.probe_value.value) + ")");
  if (r.probe_value.slot < n) {
    const std::size_t i = r.probe_value.slot;
    SigmaPair p = sigma_pair(F, i);
    r.i_star = i;
    r.alpha_star = p.alpha_star;
    r.sigma0 = std::move(p.sigma0);
    r.sigma1 = std::move(p.sigma1);
    const Tuple a0 = fstar(F, r.sigma0);
    const Tuple a1 = fstar(F, r.sigma1);
    r.value0 = c_full(arena, a0);
    r.value1 = c_full(arena, a1);
    if (r.value0.slot == i && r.value1.slot == i) {
      // Both images put the distinguished element at slot i*, so they meet
      // the difference lemma's hypothesis.
      OrdSet s0 = OrdSet::from_unsorted(a0), s1 = OrdSet::from_unsorted(a1);
      const Ord x0 = star(arena, s0), x1 = star(arena, s1);
      if (x0 == x1 || s0.without(x0) != s1.without(x1)) {
        throw InternalError("paired images fail the difference-lemma hypothesis");
      }
    }
    r.refuted = r.value0 != r.value1;
    if (!r.refuted) throw InternalError("paired sigmas received the same color");
    r.transcript.push_back("pair at i* = " + std::to_string(i) + ", alpha* = " + std::to_string(*r.alpha_star));
    return r;
  }
  r.transcript.push_back("probe slot " + std::to_string(r.probe_value.slot) + " >= n; sampling");
  Rng rng = Rng::derived(sample_seed, 0x736d);
  for (; r.samples < kRefuteFallbackSamples; ++r.samples) {
    SigmaSeq s = random_sigma(n + 1, F.domain(), rng);
    TupleColor v;
    try {
      v = color_of(F, arena, s);
    } catch (const ArenaTooSmall&) {
      continue;
    }
    if (v != r.probe_value) {
      ++r.samples;
      r.sigma0 = r.probe;
      r.value0 = r.probe_value;
      r.sigma1 = std::move(s);
      r.value1 = v;
      r.refuted = true;
      return r;
    }
  }
  r.transcript.push_back("no second value among " + std::to_string(r.samples) + " samples");
  return r;
}

bool check_refutation(const CofinalFn& F, const Arena& arena, const Refutation& r) {
  if (!r.refuted) return false;
  try {
    const TupleColor v0 = c_full(arena, fstar(F, r.sigma0));
    const TupleColor v1 = c_full(arena, fstar(F, r.sigma1));
    return v0 == r.value0 && v1 == r.value1 && v0 != v1;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace hlab
