#include "hlab/trees.hpp"

#include <algorithm>
#include <climits>
#include <map>

#include "hlab/errors.hpp"

namespace hlab {

void TreeShape::validate() const {
  if (k < 2) throw PreconditionError("tree branching must be at least 2");
  if (k > 256) throw PreconditionError("tree branching must be at most 256");
  if (depth < 1) throw PreconditionError("tree depth must be at least 1");
}

std::size_t TreeShape::branch_count() const {
  std::size_t out = 1;
  for (std::size_t m = 0; m < depth; ++m) {
    if (out > SIZE_MAX / k) return SIZE_MAX;
    out *= k;
  }
  return out;
}

std::vector<TreeShape> uniform_shapes(std::size_t d, std::size_t k, std::size_t depth) {
  std::vector<TreeShape> out;
  for (std::size_t i = 0; i < d; ++i) {
    TreeShape s{k, depth, i};
    s.validate();
    out.push_back(s);
  }
  return out;
}

bool is_prefix(const Word& u, const Word& v) {
  return u.size() <= v.size() && std::equal(u.begin(), u.end(), v.begin());
}

bool comparable(const Word& u, const Word& v) {
  return is_prefix(u, v) || is_prefix(v, u);
}

Word prefix(const Word& w, std::size_t m) {
  if (m > w.size()) throw PreconditionError("prefix longer than word");
  return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(m));
}

Word leftmost_completion(const Word& w, std::size_t length) {
  if (w.size() > length) throw PreconditionError("word already longer than completion length");
  Word out = w;
  out.resize(length, 0);
  return out;
}

bool is_valid_node(const Word& w, const TreeShape& shape) {
  if (w.size() > shape.depth) return false;
  return std::all_of(w.begin(), w.end(), [&](Letter c) { return c < shape.k; });
}

std::vector<Word> extensions(const Word& t, std::size_t k, std::size_t len) {
  if (len < t.size()) return {};
  std::vector<Word> out;
  Word w = leftmost_completion(t, len);
  const std::size_t base = t.size();
  while (true) {
    out.push_back(w);
    std::size_t i = len;
    while (i > base && w[i - 1] + 1u == k) {
      w[i - 1] = 0;
      --i;
    }
    if (i == base) break;
    ++w[i - 1];
  }
  return out;
}

std::vector<Word> shortlex_words(std::size_t k, std::size_t count) {
  std::vector<Word> out;
  for (std::size_t len = 0; out.size() < count; ++len) {
    for (auto& w : extensions({}, k, len)) {
      if (out.size() == count) break;
      out.push_back(std::move(w));
    }
  }
  return out;
}

std::string word_to_string(const Word& w) {
  std::string out;
  out.reserve(w.size());
  for (Letter c : w) {
    if (c >= 10) throw PreconditionError("letter too large for digit-string form");
    out.push_back(static_cast<char>('0' + c));
  }
  return out;
}

Word word_from_string(std::string_view s) {
  Word out;
  out.reserve(s.size());
  for (char ch : s) {
    if (ch < '0' || ch > '9') {
      throw PreconditionError("bad word '" + std::string(s) + "'");
    }
    out.push_back(static_cast<Letter>(ch - '0'));
  }
  return out;
}

std::vector<LevelTuple> level_product(std::span<const TreeShape> shapes, std::size_t m) {
  std::vector<std::vector<Word>> levels;
  for (const auto& s : shapes) {
    s.validate();
    if (m > s.depth) {
      throw PreconditionError("level " + std::to_string(m) + " exceeds tree depth " +
                              std::to_string(s.depth));
    }
    levels.push_back(extensions({}, s.k, m));
  }
  std::vector<LevelTuple> out;
  if (shapes.empty()) return out;
  std::vector<std::size_t> pos(shapes.size(), 0);
  while (true) {
    LevelTuple t;
    for (std::size_t i = 0; i < shapes.size(); ++i) t.push_back(levels[i][pos[i]]);
    out.push_back(std::move(t));
    std::size_t i = shapes.size();
    while (i > 0 && pos[i - 1] + 1 == levels[i - 1].size()) {
      pos[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
    ++pos[i - 1];
  }
  return out;
}

BranchSet::BranchSet(TreeShape shape, std::vector<Word> branches)
    : shape_(shape), branches_(std::move(branches)) {
  shape_.validate();
  for (const auto& y : branches_) {
    if (y.size() != shape_.depth || !is_valid_node(y, shape_)) {
      throw PreconditionError("not a branch of the tree");
    }
  }
  std::sort(branches_.begin(), branches_.end());
  branches_.erase(std::unique(branches_.begin(), branches_.end()), branches_.end());
}

BranchSet BranchSet::full(const TreeShape& shape) {
  shape.validate();
  return BranchSet(shape, extensions({}, shape.k, shape.depth));
}

BranchSet BranchSet::through(const TreeShape& shape, const Word& t) {
  shape.validate();
  if (!is_valid_node(t, shape)) throw PreconditionError("not a node of the tree");
  return BranchSet(shape, extensions(t, shape.k, shape.depth));
}

bool BranchSet::contains(const Word& y) const {
  return std::binary_search(branches_.begin(), branches_.end(), y);
}

std::optional<Word> BranchSet::least_through(const Word& t) const {
  auto it = std::lower_bound(branches_.begin(), branches_.end(), t);
  if (it != branches_.end() && is_prefix(t, *it)) return *it;
  return std::nullopt;
}

bool BranchSet::passes_through(const Word& t) const { return least_through(t).has_value(); }

BranchSet intersect(const BranchSet& a, const BranchSet& b) {
  if (!(a.shape() == b.shape())) throw PreconditionError("intersecting branch sets of different trees");
  std::vector<Word> out;
  std::set_intersection(a.branches().begin(), a.branches().end(), b.branches().begin(),
                        b.branches().end(), std::back_inserter(out));
  return BranchSet(a.shape(), std::move(out));
}

bool is_dense_above(const BranchSet& Y, const Word& t, std::size_t D) {
  const TreeShape& s = Y.shape();
  if (D > s.depth) throw PreconditionError("density depth exceeds tree depth");
  if (t.size() > D) throw PreconditionError("node higher than density depth");
  if (!is_valid_node(t, s)) throw PreconditionError("not a node of the tree");
  // Every depth-D node above t must be met; shorter nodes then are too.
  std::size_t need = 1;
  for (std::size_t m = t.size(); m < D; ++m) need *= s.k;
  auto it = std::lower_bound(Y.branches().begin(), Y.branches().end(), t);
  std::size_t seen = 0;
  const Word* last = nullptr;
  for (; it != Y.branches().end() && is_prefix(t, *it); ++it) {
    if (last == nullptr || !std::equal(last->begin(), last->begin() + static_cast<std::ptrdiff_t>(D),
                                       it->begin())) {
      ++seen;
      last = &*it;
    }
  }
  return seen == need;
}

std::optional<Word> least_dense_root(const BranchSet& Y, std::size_t D) {
  const TreeShape& s = Y.shape();
  if (D > s.depth) throw PreconditionError("density depth exceeds tree depth");
  if (D == 0) {
    if (Y.empty()) return std::nullopt;
    return Word{};
  }
  // Preorder walk over heights < D is lexicographic order with prefixes first.
  std::vector<Word> stack{Word{}};
  while (!stack.empty()) {
    Word t = std::move(stack.back());
    stack.pop_back();
    if (!Y.passes_through(t)) continue;
    if (is_dense_above(Y, t, D)) return t;
    if (t.size() + 1 < D) {
      for (std::size_t c = s.k; c-- > 0;) {
        Word u = t;
        u.push_back(static_cast<Letter>(c));
        stack.push_back(std::move(u));
      }
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Word>> is_somewhere_dense_grid(std::span<const BranchSet> Ys,
                                                         std::size_t D) {
  std::vector<Word> roots;
  for (const auto& Y : Ys) {
    auto t = least_dense_root(Y, D);
    if (!t) return std::nullopt;
    roots.push_back(std::move(*t));
  }
  return roots;
}

bool is_strong_subtree(const StrongSubtreeWitness& w, const TreeShape& shape) {
  if (w.levels.empty() || w.nodes.size() != w.levels.size()) return false;
  if (w.levels.max() > shape.depth) return false;
  const auto& a = w.levels.elems();
  if (w.nodes[0].size() != 1) return false;
  const Word& t0 = w.nodes[0][0];
  if (t0.size() != a[0] || !is_valid_node(t0, shape)) return false;
  for (std::size_t m = 0; m + 1 < a.size(); ++m) {
    std::map<Word, std::size_t> hits;
    for (const auto& u : w.nodes[m]) {
      for (std::size_t c = 0; c < shape.k; ++c) {
        Word v = u;
        v.push_back(static_cast<Letter>(c));
        hits.emplace(std::move(v), 0);
      }
    }
    if (hits.size() != w.nodes[m].size() * shape.k) return false;
    if (w.nodes[m + 1].size() != hits.size()) return false;
    for (const auto& v : w.nodes[m + 1]) {
      if (v.size() != a[m + 1] || !is_valid_node(v, shape)) return false;
      auto it = hits.find(prefix(v, a[m] + 1));
      if (it == hits.end() || it->second++ != 0) return false;
    }
  }
  return true;
}

TreeShape product_shape(std::span<const TreeShape> shapes) {
  if (shapes.empty()) throw PreconditionError("empty level product");
  std::size_t k = 1;
  for (const auto& s : shapes) {
    s.validate();
    if (s.depth != shapes[0].depth) throw PreconditionError("level product of trees of different depth");
    k *= s.k;
    if (k > 256) throw PreconditionError("product branching too large");
  }
  return TreeShape{k, shapes[0].depth, 0};
}

Word encode_level_tuple(const LevelTuple& t, std::span<const TreeShape> shapes) {
  if (t.size() != shapes.size()) throw PreconditionError("tuple arity mismatch");
  const std::size_t h = t.empty() ? 0 : t[0].size();
  Word out(h, 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].size() != h) throw PreconditionError("level tuple nodes of different heights");
    if (!is_valid_node(t[i], shapes[i])) throw PreconditionError("not a node of the tree");
    for (std::size_t m = 0; m < h; ++m) {
      out[m] = static_cast<Letter>(out[m] * shapes[i].k + t[i][m]);
    }
  }
  return out;
}

StrongSubtreeWitness product_witness(std::span<const StrongSubtreeWitness> parts,
                                     std::span<const TreeShape> shapes) {
  if (parts.size() != shapes.size() || parts.empty()) throw PreconditionError("arity mismatch");
  for (const auto& p : parts) {
    if (p.levels != parts[0].levels) throw PreconditionError("strong subtrees with different level sets");
    if (p.nodes.size() != p.levels.size()) throw PreconditionError("malformed strong subtree");
  }
  StrongSubtreeWitness out;
  out.levels = parts[0].levels;
  for (std::size_t m = 0; m < out.levels.size(); ++m) {
    std::vector<Word> level;
    std::vector<std::size_t> pos(parts.size(), 0);
    bool any = std::all_of(parts.begin(), parts.end(), [&](const auto& p) { return !p.nodes[m].empty(); });
    while (any) {
      LevelTuple t;
      for (std::size_t i = 0; i < parts.size(); ++i) t.push_back(parts[i].nodes[m][pos[i]]);
      level.push_back(encode_level_tuple(t, shapes));
      std::size_t i = parts.size();
      while (i > 0 && pos[i - 1] + 1 == parts[i - 1].nodes[m].size()) {
        pos[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
      ++pos[i - 1];
    }
    std::sort(level.begin(), level.end());
    out.nodes.push_back(std::move(level));
  }
  return out;
}

BranchRelation::BranchRelation(std::vector<TreeShape> shapes, std::set<BranchTuple> tuples)
    : shapes_(std::move(shapes)) {
  for (auto t : tuples) insert(std::move(t));
}

BranchRelation BranchRelation::product(std::span<const BranchSet> sets) {
  std::vector<TreeShape> shapes;
  for (const auto& Y : sets) shapes.push_back(Y.shape());
  BranchRelation out(shapes);
  if (sets.empty() || std::any_of(sets.begin(), sets.end(), [](const auto& Y) { return Y.empty(); })) {
    return out;
  }
  std::vector<std::size_t> pos(sets.size(), 0);
  while (true) {
    BranchTuple t;
    for (std::size_t i = 0; i < sets.size(); ++i) t.push_back(sets[i].branches()[pos[i]]);
    out.tuples_.insert(std::move(t));
    std::size_t i = sets.size();
    while (i > 0 && pos[i - 1] + 1 == sets[i - 1].size()) {
      pos[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
    ++pos[i - 1];
  }
  return out;
}

void BranchRelation::insert(BranchTuple t) {
  if (t.size() != shapes_.size()) throw PreconditionError("branch tuple arity mismatch");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].size() != shapes_[i].depth || !is_valid_node(t[i], shapes_[i])) {
      throw PreconditionError("not a branch of the tree");
    }
  }
  tuples_.insert(std::move(t));
}

BranchRelation BranchRelation::projection() const {
  if (shapes_.empty()) throw PreconditionError("projection of a 0-dimensional relation");
  BranchRelation out(std::vector<TreeShape>(shapes_.begin(), shapes_.end() - 1));
  for (const auto& t : tuples_) out.tuples_.insert(BranchTuple(t.begin(), t.end() - 1));
  return out;
}

BranchSet BranchRelation::fiber(const BranchTuple& x) const {
  if (x.size() + 1 != shapes_.size()) throw PreconditionError("fiber base arity mismatch");
  std::vector<Word> ys;
  for (auto it = tuples_.lower_bound(x); it != tuples_.end(); ++it) {
    if (!std::equal(x.begin(), x.end(), it->begin())) break;
    ys.push_back(it->back());
  }
  return BranchSet(shapes_.back(), std::move(ys));
}

BranchSet BranchRelation::as_branch_set() const {
  if (shapes_.size() != 1) throw PreconditionError("relation is not one-dimensional");
  std::vector<Word> ys;
  for (const auto& t : tuples_) ys.push_back(t[0]);
  return BranchSet(shapes_[0], std::move(ys));
}

bool is_ddf_to_depth(const BranchRelation& Z, std::size_t D, std::size_t mcap) {
  if (Z.dim() == 0) throw PreconditionError("DDF check needs dimension at least 1");
  if (Z.dim() == 1) return is_dense_above(Z.as_branch_set(), {}, D);
  BranchRelation P = Z.projection();
  if (!is_ddf_to_depth(P, D, mcap)) return false;
  std::vector<BranchSet> fibers;
  for (const auto& x : P.tuples()) fibers.push_back(Z.fiber(x));
  // Every nonempty family of at most mcap fibers must have a dense meet.
  bool ok = true;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t from, const BranchSet& acc) -> void {
    for (std::size_t j = from; j < fibers.size() && ok; ++j) {
      BranchSet next = pick.empty() ? fibers[j] : intersect(acc, fibers[j]);
      if (!is_dense_above(next, {}, D)) {
        ok = false;
        return;
      }
      if (pick.size() + 1 < mcap) {
        pick.push_back(j);
        self(self, j + 1, next);
        pick.pop_back();
      }
    }
  };
  if (mcap > 0) rec(rec, 0, BranchSet());
  return ok;
}

bool is_u_set(const BranchSet& Y, std::span<const Word> cones, std::size_t D) {
  for (const auto& u : cones) {
    if (u.size() > D) throw PreconditionError("cone root higher than density depth");
    if (!Y.passes_through(u)) return false;
  }
  return true;
}

std::optional<std::vector<BranchSet>> u_sets_inside(const BranchRelation& Z,
                                                    std::span<const std::vector<Word>> families,
                                                    std::size_t D) {
  if (families.size() != Z.dim() || Z.dim() == 0) throw PreconditionError("one cone family per coordinate");
  if (Z.dim() == 1) {
    BranchSet Y = Z.as_branch_set();
    if (!is_u_set(Y, families[0], D)) return std::nullopt;
    return std::vector<BranchSet>{Y};
  }
  const std::size_t d = Z.dim() - 1;
  auto lower = u_sets_inside(Z.projection(), families.first(d), D);
  if (!lower) return std::nullopt;
  // Shrink each lower set to a finite U-set: the least branch through each cone.
  std::vector<BranchSet> out;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Word> picks;
    for (const auto& u : families[i]) {
      auto y = (*lower)[i].least_through(u);
      if (!y) throw InternalError("lower U-set misses a cone");
      picks.push_back(*y);
    }
    out.emplace_back((*lower)[i].shape(), std::move(picks));
  }
  BranchRelation base = BranchRelation::product(out);
  BranchSet last = BranchSet::full(Z.shapes().back());
  for (const auto& x : base.tuples()) last = intersect(last, Z.fiber(x));
  if (!is_u_set(last, families[d], D)) return std::nullopt;
  out.push_back(std::move(last));
  return out;
}

}  // namespace hlab
