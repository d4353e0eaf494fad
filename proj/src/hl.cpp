#include "hlab/hl.hpp"

#include <algorithm>
#include <map>

#include "hlab/errors.hpp"
#include "hlab/rng.hpp"

namespace hlab {

namespace {

std::size_t power(std::size_t b, std::size_t e) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= b;
  return out;
}

std::size_t nodes_up_to(std::size_t k, std::size_t height) {
  std::size_t out = 0;
  for (std::size_t m = 0; m <= height; ++m) out += power(k, m);
  return out;
}

std::string tuple_string(const std::vector<Word>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + word_to_string(t[i]);
  return s + ")";
}

/// Calls f on every tuple choosing one entry from each list; stops when f
/// returns false and reports whether it ran to the end.
bool all_tuples(const std::vector<const std::vector<Word>*>& lists,
                const std::function<bool(const std::vector<Word>&)>& f) {
  for (const auto* l : lists) {
    if (l->empty()) return true;
  }
  std::vector<std::size_t> pos(lists.size(), 0);
  std::vector<Word> t(lists.size());
  while (true) {
    for (std::size_t i = 0; i < lists.size(); ++i) t[i] = (*lists[i])[pos[i]];
    if (!f(t)) return false;
    std::size_t i = lists.size();
    while (i > 0 && pos[i - 1] + 1 == lists[i - 1]->size()) {
      pos[i - 1] = 0;
      --i;
    }
    if (i == 0) return true;
    ++pos[i - 1];
  }
}

}  // namespace

LevelColoring::LevelColoring(std::size_t d, std::size_t k, std::size_t N, std::size_t r, std::string kind)
    : d_(d), k_(k), N_(N), r_(r), kind_(std::move(kind)) {
  if (d_ < 1) throw PreconditionError("level coloring needs dimension at least 1");
  TreeShape{k_, N_, 0}.validate();
  if (k_ > 10) throw PreconditionError("level colorings support branching at most 10");
  if (r_ < 1) throw PreconditionError("level coloring needs at least one color");
}

LevelColoring LevelColoring::constant(std::size_t d, std::size_t k, std::size_t N, Color c) {
  LevelColoring g(d, k, N, c + 1, "constant");
  g.j_ = c;
  return g;
}

LevelColoring LevelColoring::level_parity(std::size_t d, std::size_t k, std::size_t N, std::size_t offset) {
  LevelColoring g(d, k, N, 2, "level-parity");
  g.offset_ = offset % 2;
  return g;
}

LevelColoring LevelColoring::seeded(std::size_t d, std::size_t k, std::size_t N, std::size_t r,
                                    std::uint64_t seed) {
  LevelColoring g(d, k, N, r, "seeded");
  g.seed_ = seed;
  return g;
}

LevelColoring LevelColoring::planted(std::size_t d, std::size_t k, std::size_t N, std::size_t r,
                                     std::vector<Word> roots, Color j, std::uint64_t seed) {
  LevelColoring g(d, k, N, r, "planted");
  if (roots.size() != d) throw PreconditionError("one planted root per coordinate");
  for (const auto& t : roots) {
    if (!is_valid_node(t, TreeShape{k, N, 0})) throw PreconditionError("planted root is not a node");
  }
  if (j >= r) throw PreconditionError("planted color out of range");
  g.roots_ = std::move(roots);
  g.j_ = j;
  g.seed_ = seed;
  return g;
}

LevelColoring LevelColoring::adversarial(std::size_t d, std::size_t k, std::size_t N) {
  return LevelColoring(d, k, N, 2, "adversarial");
}

LevelColoring LevelColoring::table(std::size_t d, std::size_t k, std::size_t N, std::size_t r,
                                   std::vector<std::vector<Color>> tables) {
  LevelColoring g(d, k, N, r, "table");
  if (tables.size() != N + 1) throw PreconditionError("level table needs one row per level 0..N");
  for (std::size_t m = 0; m <= N; ++m) {
    if (tables[m].size() != power(k, d * m)) {
      throw PreconditionError("level table row " + std::to_string(m) + " must have " +
                              std::to_string(power(k, d * m)) + " entries");
    }
    for (Color c : tables[m]) {
      if (c >= r) throw PreconditionError("level table color out of range");
    }
  }
  g.tables_ = std::move(tables);
  return g;
}

Color LevelColoring::operator()(const LevelTuple& t) const {
  if (t.size() != d_) throw PreconditionError("level tuple arity mismatch");
  const std::size_t m = t[0].size();
  if (m > N_) throw PreconditionError("level tuple above depth N");
  for (const auto& w : t) {
    if (w.size() != m) throw PreconditionError("level tuple nodes of different heights");
    for (Letter x : w) {
      if (x >= k_) throw PreconditionError("letter out of range");
    }
  }
  auto hashed = [&]() -> Color {
    std::uint64_t h = Rng::mix(seed_ ^ Rng::mix(m + 1));
    for (const auto& w : t) {
      for (Letter x : w) h = Rng::mix(h ^ (x + 1));
      h = Rng::mix(h + 0x5bd1e995ULL);
    }
    return h % r_;
  };
  if (kind_ == "constant") return j_;
  if (kind_ == "level-parity") return (m + offset_) % 2;
  if (kind_ == "seeded") return hashed();
  if (kind_ == "planted") {
    for (std::size_t i = 0; i < d_; ++i) {
      if (!comparable(t[i], roots_[i])) return hashed();
    }
    return j_;
  }
  if (kind_ == "adversarial") return m == 0 ? 0 : (m + t[0][0]) % 2;
  std::size_t code = 0;
  for (const auto& w : t) {
    for (Letter x : w) code = code * k_ + x;
  }
  return tables_[m][code];
}

LevelTuple LevelColoring::at_level(const BranchTuple& x, std::size_t m) {
  LevelTuple out;
  out.reserve(x.size());
  for (const auto& y : x) {
    if (y.size() < m) throw PreconditionError("branch shorter than the requested level");
    out.push_back(prefix(y, m));
  }
  return out;
}

Color surrogate_color(const LevelColoring& gamma, const BranchTuple& x, std::size_t L) {
  if (L < 1 || L > gamma.depth()) throw PreconditionError("surrogate length must lie in 1..N");
  std::vector<std::size_t> count(gamma.colors(), 0);
  for (std::size_t m = 0; m < L; ++m) ++count[gamma(LevelColoring::at_level(x, m))];
  return static_cast<Color>(std::max_element(count.begin(), count.end()) - count.begin());
}

BranchColoring surrogate_coloring(const LevelColoring& gamma) {
  return [gamma](const BranchTuple& x) { return surrogate_color(gamma, x, gamma.depth()); };
}

std::optional<std::string> validate_grid(const BranchColoring& color, std::size_t d, const GridWitness& w) {
  if (w.sets.size() != d || w.roots.size() != d) return "witness arity does not match the coloring";
  std::vector<const std::vector<Word>*> lists;
  for (std::size_t i = 0; i < d; ++i) {
    const BranchSet& Y = w.sets[i];
    if (Y.empty()) return "Y_" + std::to_string(i) + " is empty";
    if (w.density_depth > Y.shape().depth) return "density depth exceeds the tree depth";
    if (w.roots[i].size() > w.density_depth) return "root s_" + std::to_string(i) + " lies above the density depth";
    if (!is_dense_above(Y, w.roots[i], w.density_depth)) {
      return "Y_" + std::to_string(i) + " is not dense above " + word_to_string(w.roots[i]);
    }
    lists.push_back(&Y.branches());
  }
  std::optional<std::string> err;
  all_tuples(lists, [&](const std::vector<Word>& t) {
    const Color c = color(t);
    if (c != w.color) {
      err = "tuple " + tuple_string(t) + " has color " + std::to_string(c) + ", not " + std::to_string(w.color);
      return false;
    }
    return true;
  });
  return err;
}

namespace {

class GridSearch {
 public:
  GridSearch(const BranchColoring& color, const std::vector<TreeShape>& shapes, const GridSearchOptions& opt)
      : color_(color), shapes_(shapes), opt_(opt), d_(shapes.size()) {}

  GridSearchResult run() {
    if (d_ == 0) throw PreconditionError("grid search needs dimension at least 1");
    std::vector<BranchSet> universe = opt_.universe;
    if (universe.empty()) {
      for (const auto& s : shapes_) universe.push_back(BranchSet::full(s));
    }
    if (universe.size() != d_) throw PreconditionError("one universe per coordinate");
    std::vector<std::vector<Word>> candidates(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      shapes_[i].validate();
      if (opt_.density_depth > shapes_[i].depth) throw PreconditionError("density depth exceeds tree depth");
      if (universe[i].shape() != shapes_[i]) throw PreconditionError("universe lives in the wrong tree");
      const std::size_t count = opt_.density_depth == 0 ? 1 : nodes_up_to(shapes_[i].k, opt_.density_depth - 1);
      candidates[i] = shortlex_words(shapes_[i].k, count);
    }
    std::vector<std::size_t> pos(d_, 0);
    while (true) {
      std::vector<Word> roots(d_);
      for (std::size_t i = 0; i < d_; ++i) roots[i] = candidates[i][pos[i]];
      if (try_roots(roots, universe)) return std::move(result_);
      if (result_.status == SearchStatus::budget) return std::move(result_);
      std::size_t i = d_;
      while (i > 0 && pos[i - 1] + 1 == candidates[i - 1].size()) {
        pos[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
      ++pos[i - 1];
    }
    result_.status = SearchStatus::none;
    return std::move(result_);
  }

 private:
  struct Var {
    std::size_t coord;
    /// Cell index for a representative, or npos for an extra branch.
    std::size_t cell;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool try_roots(const std::vector<Word>& roots, const std::vector<BranchSet>& universe) {
    const std::size_t D = opt_.density_depth;
    cells_.assign(d_, {});
    cell_of_.assign(d_, {});
    pool_.assign(d_, {});
    std::vector<std::vector<Var>> per(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      const auto cells = extensions(roots[i], shapes_[i].k, D);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        std::vector<Word> dom;
        for (const auto& y : universe[i].branches()) {
          if (is_prefix(cells[c], y)) {
            dom.push_back(y);
            cell_of_[i][y] = c;
          }
        }
        if (dom.empty()) return false;
        cells_[i].push_back(std::move(dom));
        per[i].push_back({i, c});
      }
      for (const auto& y : universe[i].branches()) {
        if (is_prefix(roots[i], y)) pool_[i].push_back(y);
      }
      const std::size_t size = std::max(opt_.min_size, cells.size());
      if (size > opt_.size_cap || size > pool_[i].size()) return false;
      for (std::size_t e = cells.size(); e < size; ++e) per[i].push_back({i, npos});
    }
    order_.clear();
    for (std::size_t idx = 0;; ++idx) {
      bool any = false;
      for (std::size_t i = 0; i < d_; ++i) {
        if (idx < per[i].size()) {
          order_.push_back(per[i][idx]);
          any = true;
        }
      }
      if (!any) break;
    }
    assigned_.assign(d_, {});
    reps_.assign(d_, std::vector<Word>());
    for (std::size_t i = 0; i < d_; ++i) reps_[i].assign(cells_[i].size(), Word{});
    color_set_ = false;
    if (!assign(0)) return false;
    GridWitness w;
    w.color = color_value_;
    w.roots = roots;
    w.density_depth = D;
    for (std::size_t i = 0; i < d_; ++i) w.sets.emplace_back(shapes_[i], assigned_[i]);
    result_.witness = std::move(w);
    result_.status = SearchStatus::found;
    return true;
  }

  /// Checks every full tuple through the newly assigned branch y at coord i.
  bool consistent(std::size_t i, const Word& y, std::size_t& set_here) {
    std::vector<const std::vector<Word>*> lists;
    std::vector<Word> only{y};
    for (std::size_t j = 0; j < d_; ++j) {
      if (j == i) {
        lists.push_back(&only);
      } else {
        if (assigned_[j].empty()) return true;
        lists.push_back(&assigned_[j]);
      }
    }
    return all_tuples(lists, [&](const std::vector<Word>& t) {
      const Color c = color_(t);
      if (!color_set_) {
        color_set_ = true;
        color_value_ = c;
        set_here = 1;
        return true;
      }
      return c == color_value_;
    });
  }

  bool assign(std::size_t v) {
    if (v == order_.size()) return true;
    const Var& var = order_[v];
    const std::size_t i = var.coord;
    const std::vector<Word>& dom = var.cell == npos ? pool_[i] : cells_[i][var.cell];
    for (const auto& y : dom) {
      if (var.cell == npos) {
        if (assigned_[i].size() > cells_[i].size() && !(assigned_[i].back() < y)) continue;
        const std::size_t c = cell_of_[i].at(y);
        if (!(reps_[i][c] < y)) continue;
      }
      if (++result_.nodes > opt_.budget) {
        result_.status = SearchStatus::budget;
        return false;
      }
      std::size_t set_here = 0;
      if (consistent(i, y, set_here)) {
        if (var.cell != npos) reps_[i][var.cell] = y;
        assigned_[i].push_back(y);
        if (assign(v + 1)) return true;
        assigned_[i].pop_back();
        if (result_.status == SearchStatus::budget) return false;
      }
      if (set_here) color_set_ = false;
    }
    return false;
  }

  const BranchColoring& color_;
  const std::vector<TreeShape>& shapes_;
  const GridSearchOptions& opt_;
  std::size_t d_;
  std::vector<std::vector<std::vector<Word>>> cells_;
  std::vector<std::map<Word, std::size_t>> cell_of_;
  std::vector<std::vector<Word>> pool_;
  std::vector<Var> order_;
  std::vector<std::vector<Word>> assigned_;
  std::vector<std::vector<Word>> reps_;
  bool color_set_ = false;
  Color color_value_ = 0;
  GridSearchResult result_;
};

}  // namespace

GridSearchResult search_grid(const BranchColoring& color, const std::vector<TreeShape>& shapes,
                             const GridSearchOptions& opt) {
  return GridSearch(color, shapes, opt).run();
}

HLDerivation derive_strong_subtrees(const LevelColoring& gamma, const GridWitness& w, std::size_t h) {
  const std::size_t d = gamma.dim();
  const std::size_t N = gamma.depth();
  if (h < 1) throw PreconditionError("witness height must be at least 1");
  if (w.sets.size() != d || w.roots.size() != d) throw PreconditionError("grid witness arity mismatch");
  for (const auto& Y : w.sets) {
    if (Y.shape().k != gamma.branching() || Y.shape().depth != N) {
      throw PreconditionError("grid witness lives in different trees");
    }
  }
  HLDerivation out;
  std::vector<Ord> levels;
  std::vector<std::vector<std::vector<Word>>> nodes(d);
  std::size_t lo = 0;
  for (const auto& t : w.roots) lo = std::max(lo, t.size());

  for (std::size_t n = 0; n < h; ++n) {
    std::vector<std::vector<Word>> Z(d);
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<Word> through;
      if (n == 0) {
        through.push_back(w.roots[i]);
      } else {
        for (const auto& s : nodes[i].back()) {
          for (std::size_t c = 0; c < gamma.branching(); ++c) {
            Word u = s;
            u.push_back(static_cast<Letter>(c));
            through.push_back(std::move(u));
          }
        }
      }
      for (const auto& u : through) {
        auto y = w.sets[i].least_through(u);
        if (!y) {
          out.failed_stage = n;
          out.reason = "Y_" + std::to_string(i) + " has no branch through " + word_to_string(u);
          break;
        }
        Z[i].push_back(std::move(*y));
      }
      if (out.failed_stage) break;
    }
    if (out.failed_stage) break;
    std::vector<const std::vector<Word>*> lists;
    for (const auto& z : Z) lists.push_back(&z);
    const std::size_t from = n == 0 ? lo : levels.back() + 1;
    std::optional<std::size_t> level;
    for (std::size_t m = from; m <= N && !level; ++m) {
      const bool mono = all_tuples(lists, [&](const std::vector<Word>& t) {
        return gamma(LevelColoring::at_level(t, m)) == w.color;
      });
      if (mono) level = m;
    }
    if (!level) {
      out.failed_stage = n;
      out.reason = "no level in " + std::to_string(from) + ".." + std::to_string(N) +
                   " where every tuple of the stage families has color " + std::to_string(w.color);
      break;
    }
    levels.push_back(*level);
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<Word> S;
      for (const auto& y : Z[i]) S.push_back(prefix(y, *level));
      nodes[i].push_back(std::move(S));
    }
  }

  out.height = levels.size();
  out.full = out.height == h;
  out.witness.levels = OrdSet(levels);
  for (std::size_t i = 0; i < d; ++i) out.witness.subtrees.push_back({out.witness.levels, nodes[i]});
  if (out.full && !verify_hl_witness(gamma, out.witness)) {
    throw InternalError("derived strong subtrees failed verification");
  }
  return out;
}

bool verify_hl_witness(const LevelColoring& gamma, const HLWitness& w) {
  const std::size_t d = gamma.dim();
  if (w.subtrees.size() != d || w.levels.empty()) return false;
  const auto shapes = gamma.shapes();
  for (std::size_t i = 0; i < d; ++i) {
    if (w.subtrees[i].levels != w.levels) return false;
    if (!is_strong_subtree(w.subtrees[i], shapes[i])) return false;
  }
  std::optional<Color> color;
  for (std::size_t m = 0; m < w.levels.size(); ++m) {
    std::vector<const std::vector<Word>*> lists;
    for (const auto& s : w.subtrees) lists.push_back(&s.nodes[m]);
    const bool ok = all_tuples(lists, [&](const std::vector<Word>& t) {
      const Color c = gamma(t);
      if (!color) color = c;
      return c == *color;
    });
    if (!ok) return false;
  }
  return true;
}

bool s_member(std::size_t n, const Word& x) {
  if (n + 1 > x.size()) throw PreconditionError("S_" + std::to_string(n) + " needs branches of depth > n");
  return x[n] == 0;
}

BranchColoring sideways_build(BranchColoring jmap, std::size_t d, std::size_t J, std::size_t N) {
  if (J + 1 > N) {
    throw PreconditionError("sideways coloring with J = " + std::to_string(J) + " needs depth N > J, got " +
                            std::to_string(N));
  }
  return [jmap = std::move(jmap), d, J](const BranchTuple& x) -> Color {
    if (x.size() != d + 1) throw PreconditionError("sideways coloring arity mismatch");
    const Color j = jmap(BranchTuple(x.begin(), x.end() - 1));
    if (j >= J) throw PreconditionError("jmap value out of range");
    return s_member(j, x[d]) ? 0 : 1;
  };
}

SidewaysScan sideways_containment_scan(std::size_t k, std::size_t N, std::size_t D, std::size_t J) {
  if (J + 1 > N) throw PreconditionError("sideways scan needs J + 1 <= N");
  if (D > N) throw PreconditionError("density depth exceeds the tree depth");
  const TreeShape shape{k, N, 0};
  shape.validate();
  const auto all = extensions({}, k, N);
  if (all.size() > 20) throw PreconditionError("sideways scan limited to 20 branches");
  const auto roots = shortlex_words(k, nodes_up_to(k, D));
  SidewaysScan out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << all.size()); ++mask) {
    std::vector<Word> ys;
    for (std::size_t b = 0; b < all.size(); ++b) {
      if (mask >> b & 1) ys.push_back(all[b]);
    }
    const BranchSet Y(shape, ys);
    for (const auto& t : roots) {
      if (!is_dense_above(Y, t, D)) continue;
      for (std::size_t j = 0; j < J; ++j) {
        const bool first = s_member(j, ys[0]);
        const bool constant =
            std::all_of(ys.begin(), ys.end(), [&](const Word& y) { return s_member(j, y) == first; });
        if (!constant) continue;
        ++out.checked;
        if (!(j < t.size())) {
          ++out.violations;
          if (!out.counterexample) {
            out.counterexample = "j = " + std::to_string(j) + ", t = " + word_to_string(t) + ", Y = " +
                                 tuple_string(ys);
          }
        }
      }
    }
  }
  return out;
}

namespace {

/// Subsets of the nodes of height <= D with at most fam_cap members.
std::vector<std::vector<Word>> cone_families(std::size_t k, std::size_t D, std::size_t fam_cap) {
  const auto cones = shortlex_words(k, nodes_up_to(k, D));
  std::vector<std::vector<Word>> fams{{}};
  for (std::size_t size = 1; size <= fam_cap; ++size) {
    for_each_subset(OrdSet::range(0, cones.size()), size, [&](const OrdSet& s) {
      std::vector<Word> f;
      for (Ord x : s) f.push_back(cones[x]);
      fams.push_back(std::move(f));
      return true;
    });
  }
  return fams;
}

void check_bridge(const BranchRelation& Z, const std::vector<std::vector<Word>>& fams, std::size_t D,
                  const std::string& label, DdfBridgeReport& out) {
  const std::size_t d = Z.dim();
  std::vector<std::size_t> pos(d, 0);
  while (true) {
    std::vector<std::vector<Word>> families(d);
    for (std::size_t i = 0; i < d; ++i) families[i] = fams[pos[i]];
    ++out.families;
    auto sets = u_sets_inside(Z, families, D);
    std::string problem;
    if (!sets) {
      problem = "no product U-sets";
    } else {
      for (std::size_t i = 0; i < d && problem.empty(); ++i) {
        if (!is_u_set((*sets)[i], families[i], D)) problem = "set " + std::to_string(i) + " misses a cone";
      }
      if (problem.empty()) {
        const BranchRelation prod = BranchRelation::product(*sets);
        for (const auto& t : prod.tuples()) {
          if (!Z.contains(t)) {
            problem = "product leaves Z at " + tuple_string(t);
            break;
          }
        }
      }
    }
    if (!problem.empty()) {
      ++out.failures;
      if (!out.counterexample) out.counterexample = label + ": " + problem;
    }
    std::size_t i = d;
    while (i > 0 && pos[i - 1] + 1 == fams.size()) {
      pos[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
    ++pos[i - 1];
  }
}

BranchSet random_subset(const BranchSet& from, Rng& rng, std::uint64_t keep_per_8) {
  std::vector<Word> out;
  for (const auto& y : from.branches()) {
    if (rng.below(8) < keep_per_8) out.push_back(y);
  }
  return BranchSet(from.shape(), std::move(out));
}

/// A random relation built to be dense-by-dense: a random dense projection,
/// and fibers that all contain one random dense core.
BranchRelation random_ddf_candidate(const std::vector<TreeShape>& shapes, std::size_t D, Rng& rng) {
  auto dense = [&](const TreeShape& s) {
    while (true) {
      BranchSet Y = random_subset(BranchSet::full(s), rng, 4);
      if (is_dense_above(Y, {}, D)) return Y;
    }
  };
  if (shapes.size() == 1) {
    BranchRelation Z(shapes);
    const BranchSet Y = dense(shapes[0]);
    for (const auto& y : Y.branches()) Z.insert({y});
    return Z;
  }
  const std::vector<TreeShape> lower(shapes.begin(), shapes.end() - 1);
  const BranchRelation P = random_ddf_candidate(lower, D, rng);
  const BranchSet core = dense(shapes.back());
  BranchRelation Z(shapes);
  for (const auto& x : P.tuples()) {
    const BranchSet extra = random_subset(BranchSet::full(shapes.back()), rng, 3);
    for (const auto* part : {&core, &extra}) {
      for (const auto& y : part->branches()) {
        BranchTuple t = x;
        t.push_back(y);
        Z.insert(std::move(t));
      }
    }
  }
  return Z;
}

}  // namespace

DdfBridgeReport ddf_bridge_scan(std::size_t d, std::size_t k, std::size_t N, std::size_t D,
                                std::size_t mcap, std::size_t fam_cap) {
  if (d < 1) throw PreconditionError("bridge scan needs dimension at least 1");
  if (D > N) throw PreconditionError("density depth exceeds the tree depth");
  const auto shapes = uniform_shapes(d, k, N);
  std::vector<BranchSet> full;
  for (const auto& s : shapes) full.push_back(BranchSet::full(s));
  std::vector<BranchTuple> tuples;
  {
    std::vector<const std::vector<Word>*> lists;
    for (const auto& f : full) lists.push_back(&f.branches());
    all_tuples(lists, [&](const std::vector<Word>& t) {
      tuples.push_back(t);
      return true;
    });
  }
  if (tuples.size() > 20) throw PreconditionError("bridge scan limited to 20 branch tuples");
  const auto fams = cone_families(k, D, fam_cap);

  DdfBridgeReport out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << tuples.size()); ++mask) {
    ++out.relations;
    std::set<BranchTuple> rel;
    for (std::size_t b = 0; b < tuples.size(); ++b) {
      if (mask >> b & 1) rel.insert(tuples[b]);
    }
    const BranchRelation Z(shapes, rel);
    if (!is_ddf_to_depth(Z, D, mcap)) continue;
    ++out.ddf;
    check_bridge(Z, fams, D, "relation mask " + std::to_string(mask), out);
  }
  return out;
}

DdfBridgeReport ddf_bridge_sample(std::size_t d, std::size_t k, std::size_t N, std::size_t D, std::size_t mcap,
                                  std::size_t fam_cap, std::size_t samples, std::uint64_t seed) {
  if (d < 1) throw PreconditionError("bridge scan needs dimension at least 1");
  if (D > N) throw PreconditionError("density depth exceeds the tree depth");
  const auto shapes = uniform_shapes(d, k, N);
  const auto fams = cone_families(k, D, fam_cap);
  Rng rng = Rng::derived(seed, 0x6464);
  DdfBridgeReport out;
  for (std::size_t x = 0; x < samples; ++x) {
    ++out.relations;
    const BranchRelation Z = random_ddf_candidate(shapes, D, rng);
    if (!is_ddf_to_depth(Z, D, mcap)) continue;
    ++out.ddf;
    check_bridge(Z, fams, D, "sample " + std::to_string(x), out);
  }
  return out;
}

}  // namespace hlab
