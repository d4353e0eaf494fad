#include "hlab/forcing.hpp"

#include <algorithm>
#include <sstream>

#include "hlab/errors.hpp"
#include "hlab/rng.hpp"

namespace hlab {

bool leq(const Condition& q, const Condition& p) {
  for (const auto& [alpha, pt] : p) {
    auto it = q.find(alpha);
    if (it == q.end() || it->second.size() != pt.size()) return false;
    for (std::size_t i = 0; i < pt.size(); ++i) {
      if (!is_prefix(pt[i], it->second[i])) return false;
    }
  }
  return true;
}

bool compatible(const Condition& p, const Condition& q) {
  for (const auto& [alpha, pt] : p) {
    auto it = q.find(alpha);
    if (it == q.end()) continue;
    if (it->second.size() != pt.size()) return false;
    for (std::size_t i = 0; i < pt.size(); ++i) {
      if (!comparable(pt[i], it->second[i])) return false;
    }
  }
  return true;
}

std::optional<Condition> join(const Condition& p, const Condition& q) {
  if (!compatible(p, q)) return std::nullopt;
  Condition out = p;
  for (const auto& [alpha, qt] : q) {
    auto [it, fresh] = out.emplace(alpha, qt);
    if (fresh) continue;
    for (std::size_t i = 0; i < qt.size(); ++i) {
      if (qt[i].size() > it->second[i].size()) it->second[i] = qt[i];
    }
  }
  return out;
}

CollapsedCondition collapse(const Condition& p) {
  CollapsedCondition out;
  out.reserve(p.size());
  for (const auto& [alpha, t] : p) out.push_back(t);
  return out;
}

Condition restrict_to(const Condition& p, const OrdSet& dom) {
  Condition out;
  for (Ord alpha : dom) {
    auto it = p.find(alpha);
    if (it != p.end()) out.emplace(alpha, it->second);
  }
  return out;
}

OrdSet domain_of(const Condition& p) {
  std::vector<Ord> out;
  for (const auto& [alpha, t] : p) out.push_back(alpha);
  return OrdSet(std::move(out));
}

void validate_condition(const Condition& p, std::span<const TreeShape> shapes) {
  for (const auto& [alpha, t] : p) {
    if (t.size() != shapes.size()) {
      throw PreconditionError("condition value at " + std::to_string(alpha) + " has wrong arity");
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!is_valid_node(t[i], shapes[i])) {
        throw PreconditionError("condition value at " + std::to_string(alpha) + " is not a node tuple");
      }
    }
  }
}

std::string to_string(const Condition& p) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [alpha, t] : p) {
    os << (first ? "" : ", ") << alpha << ":(";
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << word_to_string(t[i]);
    os << ')';
    first = false;
  }
  os << '}';
  return os.str();
}

namespace {

std::size_t cells(std::size_t d, std::size_t k, std::size_t depth) {
  std::size_t per = 1;
  for (std::size_t m = 0; m < depth; ++m) per *= k;
  std::size_t out = 1;
  for (std::size_t i = 0; i < d; ++i) out *= per;
  return out;
}

}  // namespace

ColoringOracle::ColoringOracle(std::size_t d, std::size_t k, std::size_t depth, std::size_t colors,
                               std::vector<Color> table, std::string kind, std::uint64_t seed)
    : d_(d), k_(k), depth_(depth), colors_(colors), table_(std::move(table)), kind_(std::move(kind)),
      seed_(seed) {
  if (d_ < 1) throw PreconditionError("oracle dimension must be at least 1");
  TreeShape{k_, std::max<std::size_t>(depth_, 1), 0}.validate();
  if (colors_ < 1) throw PreconditionError("oracle needs at least one color");
  if (table_.size() != cells(d_, k_, depth_)) {
    throw PreconditionError("oracle table must have " + std::to_string(cells(d_, k_, depth_)) + " entries");
  }
  for (Color c : table_) {
    if (c >= colors_) throw PreconditionError("oracle color out of range");
  }
}

ColoringOracle ColoringOracle::constant(std::size_t d, std::size_t k, std::size_t depth, Color c) {
  return ColoringOracle(d, k, depth, c + 1, std::vector<Color>(cells(d, k, depth), c), "constant");
}

ColoringOracle ColoringOracle::first_letter(std::size_t d, std::size_t k, std::size_t depth) {
  if (depth < 1) throw PreconditionError("first-letter oracle needs depth >= 1");
  const std::size_t n = cells(d, k, depth);
  const std::size_t block = n / k;
  std::vector<Color> table(n);
  for (std::size_t x = 0; x < n; ++x) table[x] = x / block;
  return ColoringOracle(d, k, depth, k, std::move(table), "first-letter");
}

ColoringOracle ColoringOracle::seeded(std::size_t d, std::size_t k, std::size_t depth,
                                      std::size_t colors, std::uint64_t seed) {
  if (colors < 1) throw PreconditionError("oracle needs at least one color");
  Rng rng = Rng::derived(seed, 0x6f72);
  std::vector<Color> table(cells(d, k, depth));
  for (auto& c : table) c = rng.below(colors);
  return ColoringOracle(d, k, depth, colors, std::move(table), "seeded", seed);
}

Color ColoringOracle::operator()(const NodeTuple& nodes) const {
  if (nodes.size() != d_) throw PreconditionError("oracle arity mismatch");
  std::size_t code = 0;
  for (const auto& w : nodes) {
    if (w.size() < depth_) throw PreconditionError("node too short for the oracle depth");
    for (std::size_t m = 0; m < depth_; ++m) {
      if (w[m] >= k_) throw PreconditionError("letter out of range");
      code = code * k_ + w[m];
    }
  }
  return table_[code];
}

DecidedColor decide_color(const Condition& p, const OrdSet& a, const ColoringOracle& oracle,
                          std::size_t theta) {
  const std::size_t d = oracle.dim();
  if (a.size() != d) throw PreconditionError("decide_color needs a d-element index set");
  if (!a.empty() && a.max() >= theta) {
    throw PreconditionError("index set " + to_string(a) + " is not below theta = " + std::to_string(theta));
  }
  DecidedColor out{p, 0};
  NodeTuple probe;
  for (std::size_t i = 0; i < d; ++i) {
    auto [it, fresh] = out.q.emplace(a.elems()[i], NodeTuple(d));
    Word& w = it->second.at(i);
    if (w.size() < oracle.depth()) w = leftmost_completion(w, oracle.depth());
    probe.push_back(w);
  }
  out.j = oracle(probe);
  return out;
}

PredenseResult predense_check(const std::vector<Condition>& D, const Condition& q,
                              const OrdSet& window, std::size_t depth_bound,
                              std::span<const TreeShape> shapes, std::uint64_t budget) {
  PredenseResult out;
  const std::size_t d = shapes.size();
  validate_condition(q, shapes);
  // One slot per (index, coordinate); each slot runs over the extensions of
  // its base node to the target height.
  struct Slot {
    Ord alpha;
    std::size_t i;
    std::vector<Word> choices;
  };
  std::vector<Slot> slots;
  OrdSet dom = unite(domain_of(q), window);
  for (Ord alpha : dom) {
    auto it = q.find(alpha);
    for (std::size_t i = 0; i < d; ++i) {
      Word base = it == q.end() ? Word{} : it->second[i];
      const std::size_t target = std::max(base.size(), std::min(depth_bound, shapes[i].depth));
      slots.push_back({alpha, i, extensions(base, shapes[i].k, target)});
    }
  }
  std::vector<std::size_t> pos(slots.size(), 0);
  while (true) {
    if (out.checked >= budget) {
      out.verdict = Verdict::indeterminate;
      return out;
    }
    ++out.checked;
    Condition r;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      auto& t = r[slots[s].alpha];
      if (t.empty()) t.resize(d);
      t[slots[s].i] = slots[s].choices[pos[s]];
    }
    if (std::none_of(D.begin(), D.end(), [&](const Condition& e) { return compatible(r, e); })) {
      out.verdict = Verdict::no;
      out.counterexample = std::move(r);
      return out;
    }
    std::size_t s = slots.size();
    while (s > 0 && pos[s - 1] + 1 == slots[s - 1].choices.size()) {
      pos[s - 1] = 0;
      --s;
    }
    if (s == 0) break;
    ++pos[s - 1];
  }
  out.verdict = Verdict::yes;
  return out;
}

Condition meet_step(const DenseStep& step, const Condition& current) {
  Condition next = step.extend(current);
  if (!leq(next, current)) {
    throw PreconditionError("dense-set step '" + step.label + "' returned a non-extension");
  }
  if (step.member && !step.member(next)) {
    throw PreconditionError("dense-set step '" + step.label + "' left its dense set");
  }
  return next;
}

std::vector<Condition> meet_dense(const std::vector<DenseStep>& schedule, const Condition& start) {
  std::vector<Condition> chain{start};
  for (const auto& step : schedule) chain.push_back(meet_step(step, chain.back()));
  return chain;
}

}  // namespace hlab
