#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "hlab/antiramsey.hpp"

namespace hlab {

namespace {

/// Edges of [m]^{n+1} in colex order, and for each edge the (n+2)-sets it
/// completes: those whose colex-largest edge it is, as lists of the other
/// edges' indices.
struct Hypergraph {
  std::vector<OrdSet> edges;
  std::vector<std::vector<std::vector<std::size_t>>> closes;
};

bool colex_less(const OrdSet& a, const OrdSet& b) {
  return std::lexicographical_compare(a.elems().rbegin(), a.elems().rend(), b.elems().rbegin(),
                                      b.elems().rend());
}

Hypergraph build(std::size_t m, std::size_t n) {
  Hypergraph g;
  g.edges = subsets_of_size(OrdSet::range(0, m), n + 1);
  std::sort(g.edges.begin(), g.edges.end(), colex_less);
  std::map<OrdSet, std::size_t> at;
  for (std::size_t i = 0; i < g.edges.size(); ++i) at.emplace(g.edges[i], i);
  g.closes.resize(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const OrdSet& e = g.edges[i];
    for (Ord x = 0; x < e.min(); ++x) {
      OrdSet S = e.with(x);
      std::vector<std::size_t> others;
      for (Ord s : e) others.push_back(at.at(S.without(s)));
      g.closes[i].push_back(std::move(others));
    }
  }
  return g;
}

class Search {
 public:
  Search(const Hypergraph& g, std::size_t k, std::uint64_t& nodes, std::uint64_t budget)
      : g_(g), k_(k), nodes_(nodes), budget_(budget), colors_(g.edges.size(), 0) {}

  /// A good coloring if one exists; nullopt also when the budget runs out.
  std::optional<std::vector<Color>> run() {
    if (dfs(0, 0)) return colors_;
    return std::nullopt;
  }

  bool budget_hit() const { return hit_; }

 private:
  bool dfs(std::size_t i, std::size_t used) {
    if (i == colors_.size()) return true;
    for (Color c = 0; c < k_ && c <= used; ++c) {
      if (++nodes_ > budget_) {
        hit_ = true;
        return false;
      }
      colors_[i] = c;
      bool ok = true;
      for (const auto& others : g_.closes[i]) {
        if (std::all_of(others.begin(), others.end(), [&](std::size_t j) { return colors_[j] == c; })) {
          ok = false;
          break;
        }
      }
      if (ok && dfs(i + 1, std::max(used, c + 1))) return true;
      if (hit_) return false;
    }
    return false;
  }

  const Hypergraph& g_;
  std::size_t k_;
  std::uint64_t& nodes_;
  std::uint64_t budget_;
  std::vector<Color> colors_;
  bool hit_ = false;
};

}  // namespace

RamseyBudgetExceeded::RamseyBudgetExceeded(std::size_t lower_, std::size_t upper_,
                                           std::uint64_t nodes_)
    : BudgetExceeded("Ramsey search infeasible at desk scale: m* >= " + std::to_string(lower_) +
                     (upper_ ? ", m* <= " + std::to_string(upper_) : std::string(", no upper bound")) +
                     " after " + std::to_string(nodes_) + " nodes"),
      lower(lower_),
      upper(upper_),
      nodes(nodes_) {}

bool is_good_coloring(std::size_t m, std::size_t n, std::span<const OrdSet> edges,
                      std::span<const Color> colors) {
  if (edges.size() != colors.size()) throw PreconditionError("coloring length mismatch");
  std::map<OrdSet, Color> col;
  for (std::size_t i = 0; i < edges.size(); ++i) col.emplace(edges[i], colors[i]);
  if (col.size() != binomial(m, n + 1)) return false;
  bool good = true;
  for_each_subset(OrdSet::range(0, m), n + 2, [&](const OrdSet& S) {
    std::set<Color> seen;
    for (Ord s : S) {
      auto it = col.find(S.without(s));
      if (it == col.end()) {
        seen.insert(SIZE_MAX);
        seen.insert(SIZE_MAX - 1);
        break;
      }
      seen.insert(it->second);
    }
    good = seen.size() > 1;
    return good;
  });
  return good;
}

RamseyResult ramsey_m_star(std::size_t n, std::size_t k, std::uint64_t budget) {
  if (n < 1) throw PreconditionError("ramsey_m_star needs n >= 1");
  if (k < 1) throw PreconditionError("ramsey_m_star needs k >= 1");
  RamseyResult out;
  // Below n+2 points there is no (n+2)-set, so any coloring is good.
  std::size_t m = n + 2;
  Hypergraph prev = build(n + 1, n);
  std::vector<Color> prev_witness(prev.edges.size(), 0);
  while (true) {
    Hypergraph g = build(m, n);
    Search s(g, k, out.nodes, budget);
    auto good = s.run();
    if (s.budget_hit()) throw RamseyBudgetExceeded(m, 0, out.nodes);
    if (!good) {
      out.m_star = m;
      out.edges = std::move(prev.edges);
      out.witness = std::move(prev_witness);
      return out;
    }
    prev = std::move(g);
    prev_witness = std::move(*good);
    ++m;
  }
}

std::size_t m_seq(std::size_t n, std::size_t k, std::uint64_t budget) {
  if (k == 0) return 1;
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find({n, k});
    if (it != memo.end()) return it->second;
  }
  const std::size_t v = (n + 1) * ramsey_m_star(n, k, budget).m_star;
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(std::make_pair(n, k), v);
  return v;
}

}  // namespace hlab
