#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hlab/ordset.hpp"

namespace hlab {

using Letter = std::uint8_t;

/// A node of the k-branching tree is the word of letters leading to it from
/// the root; its height is the word length. Branches of the depth-N
/// truncation are the words of length exactly N, and x(m) is the length-m
/// prefix of x.
using Word = std::vector<Letter>;

using Color = std::size_t;

/// One coordinate tree: the complete k-branching tree cut at depth N.
struct TreeShape {
  std::size_t k = 2;
  std::size_t depth = 1;
  std::size_t coord = 0;

  /// Throws PreconditionError unless k >= 2 and depth >= 1.
  void validate() const;
  /// k^depth, saturating.
  std::size_t branch_count() const;

  friend bool operator==(const TreeShape&, const TreeShape&) = default;
};

/// d trees with the same branching and depth, coordinates 0..d-1.
std::vector<TreeShape> uniform_shapes(std::size_t d, std::size_t k, std::size_t depth);

bool is_prefix(const Word& u, const Word& v);
bool comparable(const Word& u, const Word& v);
Word prefix(const Word& w, std::size_t m);
/// Pads w with letter 0 up to `length`.
Word leftmost_completion(const Word& w, std::size_t length);
/// True iff every letter is < k and the height is at most the depth.
bool is_valid_node(const Word& w, const TreeShape& shape);

/// All words of length len over {0..k-1} extending t, in lexicographic order.
std::vector<Word> extensions(const Word& t, std::size_t k, std::size_t len);
/// The first `count` words of the k-ary tree in shortlex order (root first).
std::vector<Word> shortlex_words(std::size_t k, std::size_t count);

/// Digit-string form; letters must be below 10.
std::string word_to_string(const Word& w);
Word word_from_string(std::string_view s);

/// One node per coordinate, all of the same height.
using LevelTuple = std::vector<Word>;
/// One branch per coordinate.
using BranchTuple = std::vector<Word>;

/// Level m of the level product, in lexicographic order of tuples.
/// Throws PreconditionError if m exceeds the depth of some tree.
std::vector<LevelTuple> level_product(std::span<const TreeShape> shapes, std::size_t m);

/// Finite set of branches of one coordinate tree, kept sorted.
class BranchSet {
 public:
  BranchSet() = default;
  /// Throws PreconditionError if some word is not a full-length branch.
  BranchSet(TreeShape shape, std::vector<Word> branches);

  static BranchSet full(const TreeShape& shape);
  /// Every branch through the node t.
  static BranchSet through(const TreeShape& shape, const Word& t);

  const TreeShape& shape() const { return shape_; }
  const std::vector<Word>& branches() const { return branches_; }
  std::size_t size() const { return branches_.size(); }
  bool empty() const { return branches_.empty(); }
  bool contains(const Word& y) const;
  bool passes_through(const Word& t) const;
  /// Lexicographically least branch through t.
  std::optional<Word> least_through(const Word& t) const;

  friend bool operator==(const BranchSet&, const BranchSet&) = default;

 private:
  TreeShape shape_;
  std::vector<Word> branches_;
};

BranchSet intersect(const BranchSet& a, const BranchSet& b);

/// Every node u extending t with height(u) <= D lies on some branch of Y.
/// Requires D <= depth and height(t) <= D.
bool is_dense_above(const BranchSet& Y, const Word& t, std::size_t D);

/// Lexicographically least node t with is_dense_above(Y, t, D).
///
/// Candidates have height < D (just the root when D = 0): above a node of
/// height D density to depth D only asks that the node be met, which any
/// single branch does.
std::optional<Word> least_dense_root(const BranchSet& Y, std::size_t D);

/// Least root tuple witnessing that the product of the Ys is a somewhere
/// dense grid to depth D.
std::optional<std::vector<Word>> is_somewhere_dense_grid(std::span<const BranchSet> Ys,
                                                         std::size_t D);

/// Level set a plus the node sets S(0), S(1), ... of an a-strong subtree.
struct StrongSubtreeWitness {
  OrdSet levels;
  std::vector<std::vector<Word>> nodes;

  friend bool operator==(const StrongSubtreeWitness&, const StrongSubtreeWitness&) = default;
};

/// S(0) is one node at height a(0); S(m+1) holds exactly one node at height
/// a(m+1) above each immediate successor of each node of S(m), and nothing else.
bool is_strong_subtree(const StrongSubtreeWitness& w, const TreeShape& shape);

/// The level product viewed as a single tree: letters are mixed-radix codes
/// of per-coordinate letters, branching is the product of the k_i.
TreeShape product_shape(std::span<const TreeShape> shapes);
Word encode_level_tuple(const LevelTuple& t, std::span<const TreeShape> shapes);
/// The product of strong subtrees sharing one level set, encoded in the
/// product tree. Throws PreconditionError if the level sets differ.
StrongSubtreeWitness product_witness(std::span<const StrongSubtreeWitness> parts,
                                     std::span<const TreeShape> shapes);

/// A set of d-tuples of branches.
class BranchRelation {
 public:
  explicit BranchRelation(std::vector<TreeShape> shapes) : shapes_(std::move(shapes)) {}
  BranchRelation(std::vector<TreeShape> shapes, std::set<BranchTuple> tuples);

  /// Full product of the given sets.
  static BranchRelation product(std::span<const BranchSet> sets);

  std::size_t dim() const { return shapes_.size(); }
  const std::vector<TreeShape>& shapes() const { return shapes_; }
  const std::set<BranchTuple>& tuples() const { return tuples_; }
  void insert(BranchTuple t);
  bool contains(const BranchTuple& t) const { return tuples_.count(t) > 0; }

  /// Drop the last coordinate.
  BranchRelation projection() const;
  /// Last-coordinate branches above a tuple of the projection.
  BranchSet fiber(const BranchTuple& x) const;
  /// Sole coordinate as a BranchSet; requires dim() == 1.
  BranchSet as_branch_set() const;

 private:
  std::vector<TreeShape> shapes_;
  std::set<BranchTuple> tuples_;
};

/// Dense-by-dense filter test at cut-off depth D, with filter generation
/// truncated to intersections of at most mcap fibers.
bool is_ddf_to_depth(const BranchRelation& Z, std::size_t D, std::size_t mcap);

/// Y meets every basic cone in `cones`; cone roots must have height <= D.
bool is_u_set(const BranchSet& Y, std::span<const Word> cones, std::size_t D);

/// Builds product U-sets inside a DDF relation, coordinate by coordinate:
/// finite U-sets F_i for the first d-1 coordinates, then the intersection of
/// the fibers above their product for the last. Returns nullopt if the last
/// set fails to meet every cone (possible only through the mcap truncation).
std::optional<std::vector<BranchSet>> u_sets_inside(const BranchRelation& Z,
                                                    std::span<const std::vector<Word>> families,
                                                    std::size_t D);

/// Monochromatic somewhere dense grid: each sets[i] is dense above roots[i]
/// to density_depth, and the product takes a single color.
struct GridWitness {
  Color color = 0;
  std::vector<Word> roots;
  std::vector<BranchSet> sets;
  std::size_t density_depth = 0;

  friend bool operator==(const GridWitness&, const GridWitness&) = default;
};

}  // namespace hlab
