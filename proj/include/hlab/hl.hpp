#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hlab/trees.hpp"

namespace hlab {

/// Coloring of d-tuples of branches.
using BranchColoring = std::function<Color(const BranchTuple&)>;

/// Coloring of the level product of d copies of the k-branching tree of
/// depth N, total on levels 0..N.
class LevelColoring {
 public:
  static LevelColoring constant(std::size_t d, std::size_t k, std::size_t N, Color c);
  /// Level m gets color (m + offset) mod 2.
  static LevelColoring level_parity(std::size_t d, std::size_t k, std::size_t N, std::size_t offset);
  /// Colors drawn from a hash of (seed, level, tuple).
  static LevelColoring seeded(std::size_t d, std::size_t k, std::size_t N, std::size_t r, std::uint64_t seed);
  /// Tuples whose i-th node is comparable with roots[i] for every i get color
  /// j; every other tuple is seeded.
  static LevelColoring planted(std::size_t d, std::size_t k, std::size_t N, std::size_t r,
                               std::vector<Word> roots, Color j, std::uint64_t seed);
  /// Level 0 gets 0; level m >= 1 gets (m + first letter of the coordinate-0
  /// node) mod 2. For k = 2 every branch has surrogate color 0 at even L, yet
  /// branches starting with 0 and with 1 never share a 0-level above the root.
  static LevelColoring adversarial(std::size_t d, std::size_t k, std::size_t N);
  /// tables[m][code] with code the mixed-radix index of the tuple
  /// (coordinate 0 most significant, nodes read as base-k numerals).
  static LevelColoring table(std::size_t d, std::size_t k, std::size_t N, std::size_t r,
                             std::vector<std::vector<Color>> tables);

  std::size_t dim() const { return d_; }
  std::size_t branching() const { return k_; }
  std::size_t depth() const { return N_; }
  std::size_t colors() const { return r_; }
  const std::string& kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t offset() const { return offset_; }
  Color planted_color() const { return j_; }
  const std::vector<Word>& roots() const { return roots_; }
  const std::vector<std::vector<Color>>& tables() const { return tables_; }
  std::vector<TreeShape> shapes() const { return uniform_shapes(d_, k_, N_); }

  /// Throws PreconditionError unless t is a level tuple of height <= N.
  Color operator()(const LevelTuple& t) const;

  /// The tuple of length-m prefixes of a branch tuple.
  static LevelTuple at_level(const BranchTuple& x, std::size_t m);

 private:
  LevelColoring(std::size_t d, std::size_t k, std::size_t N, std::size_t r, std::string kind);

  std::size_t d_, k_, N_, r_;
  std::string kind_;
  std::uint64_t seed_ = 0;
  std::size_t offset_ = 0;
  Color j_ = 0;
  std::vector<Word> roots_;
  std::vector<std::vector<Color>> tables_;
};

/// The color most frequent among gamma(x(m)) for m < L, ties going to the
/// least color. Requires 1 <= L <= N.
Color surrogate_color(const LevelColoring& gamma, const BranchTuple& x, std::size_t L);

/// surrogate_color with L = N as a branch coloring.
BranchColoring surrogate_coloring(const LevelColoring& gamma);

/// Checks a grid witness against an arbitrary branch coloring: arity, each
/// set dense above its root, and a monochromatic product.
std::optional<std::string> validate_grid(const BranchColoring& color, std::size_t d, const GridWitness& w);

struct GridSearchOptions {
  std::size_t density_depth = 1;
  /// Exact size of each Y_i is max(min_size, number of depth-D cells above t_i).
  std::size_t min_size = 0;
  std::size_t size_cap = 64;
  /// Branches allowed per coordinate; empty means all branches.
  std::vector<BranchSet> universe;
  std::uint64_t budget = 10'000'000;
};

enum class SearchStatus { found, none, budget };

struct GridSearchResult {
  SearchStatus status = SearchStatus::none;
  std::optional<GridWitness> witness;
  std::uint64_t nodes = 0;
};

/// Backtracking search for a monochromatic somewhere dense grid. Root tuples
/// run over nodes of height < D (just the root when D = 0) in shortlex order
/// per coordinate, the last coordinate varying fastest. For a root tuple each
/// Y_i is its least branch in every depth-D cell above t_i plus extra
/// branches up to the required size; the first witness found in this order is
/// returned.
GridSearchResult search_grid(const BranchColoring& color, const std::vector<TreeShape>& shapes,
                             const GridSearchOptions& opt);

/// One strong subtree per coordinate over a shared level set.
struct HLWitness {
  OrdSet levels;
  std::vector<StrongSubtreeWitness> subtrees;

  friend bool operator==(const HLWitness&, const HLWitness&) = default;
};

struct HLDerivation {
  HLWitness witness;
  bool full = false;
  /// Number of levels built.
  std::size_t height = 0;
  /// Stage at which no common level was found, when not full.
  std::optional<std::size_t> failed_stage;
  std::string reason;
};

/// Stage n takes, for each node of S_i(n-1) and each immediate successor,
/// the least branch of Y_i through it (stage 0 takes the least branch through
/// t_i), and picks the least level above the previous one (at least the
/// greatest root height at stage 0) where every tuple from the product of
/// these branch families has the witness color.
HLDerivation derive_strong_subtrees(const LevelColoring& gamma, const GridWitness& w, std::size_t h);

bool verify_hl_witness(const LevelColoring& gamma, const HLWitness& w);

/// x takes the leftmost step at level n: x(n+1) = x(n)^0. Requires n + 1 <= |x|.
bool s_member(std::size_t n, const Word& x);

/// Colors a (d+1)-tuple 0 if its last branch is in S_j for j = jmap of the
/// first d branches, and 1 otherwise. Throws PreconditionError unless
/// J + 1 <= N; the returned coloring throws if jmap leaves {0..J-1}.
BranchColoring sideways_build(BranchColoring jmap, std::size_t d, std::size_t J, std::size_t N);

struct SidewaysScan {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::optional<std::string> counterexample;
};

/// Exhaustive containment check for d = 1: for every j < J, every node t of
/// height <= D and every set Y of branches dense above t to depth D on which
/// x -> s_member(j, x) is constant, j < height(t). A monochromatic grid row
/// with jmap value j is exactly such a Y, so this covers every jmap and grid.
SidewaysScan sideways_containment_scan(std::size_t k, std::size_t N, std::size_t D, std::size_t J);

struct DdfBridgeReport {
  std::uint64_t relations = 0;
  std::uint64_t ddf = 0;
  std::uint64_t families = 0;
  std::uint64_t failures = 0;
  std::optional<std::string> counterexample;
};

/// Every relation Z on the d-fold product of depth-N trees with
/// is_ddf_to_depth(Z, D, mcap) gets u_sets_inside for every choice of at most
/// fam_cap cones of height <= D per coordinate; the sets must be U-sets with
/// product inside Z. Exhaustive over all 2^(k^(dN)) relations.
DdfBridgeReport ddf_bridge_scan(std::size_t d, std::size_t k, std::size_t N, std::size_t D,
                                std::size_t mcap, std::size_t fam_cap);

/// The same check on `samples` seeded relations built to be dense-by-dense
/// (a random dense projection whose fibers share a random dense core), for
/// sizes beyond exhaustive reach.
DdfBridgeReport ddf_bridge_sample(std::size_t d, std::size_t k, std::size_t N, std::size_t D, std::size_t mcap,
                                  std::size_t fam_cap, std::size_t samples, std::uint64_t seed);

}  // namespace hlab
