#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlab/deltasys.hpp"
#include "hlab/ordset.hpp"
#include "hlab/trees.hpp"

namespace hlab {

/// One node per coordinate tree; heights may differ.
using NodeTuple = std::vector<Word>;

/// Finite partial map from index ordinals to node tuples.
using Condition = std::map<Ord, NodeTuple>;

/// A condition with its domain relabeled to 0..l-1 in order.
using CollapsedCondition = std::vector<NodeTuple>;

/// q <= p: q's domain contains p's and every node of p is extended in q.
bool leq(const Condition& q, const Condition& p);
/// Nodes are coordinatewise comparable at every common index.
bool compatible(const Condition& p, const Condition& q);
/// Greatest common extension, if p and q are compatible.
std::optional<Condition> join(const Condition& p, const Condition& q);
CollapsedCondition collapse(const Condition& p);
/// p restricted to the indices in dom.
Condition restrict_to(const Condition& p, const OrdSet& dom);
OrdSet domain_of(const Condition& p);
/// Throws PreconditionError if some value is not a valid node tuple.
void validate_condition(const Condition& p, std::span<const TreeShape> shapes);

std::string to_string(const Condition& p);

/// A coloring of d-tuples of branches that depends only on the depth-D_o
/// prefixes, stored as a table over d-tuples of depth-D_o nodes (coordinate 0
/// most significant, each node read as a base-k numeral).
class ColoringOracle {
 public:
  ColoringOracle(std::size_t d, std::size_t k, std::size_t depth, std::size_t colors,
                 std::vector<Color> table, std::string kind = "table", std::uint64_t seed = 0);

  static ColoringOracle constant(std::size_t d, std::size_t k, std::size_t depth, Color c);
  /// First letter of the coordinate-0 node; k colors.
  static ColoringOracle first_letter(std::size_t d, std::size_t k, std::size_t depth);
  static ColoringOracle seeded(std::size_t d, std::size_t k, std::size_t depth, std::size_t colors,
                               std::uint64_t seed);

  std::size_t dim() const { return d_; }
  std::size_t branching() const { return k_; }
  std::size_t depth() const { return depth_; }
  std::size_t colors() const { return colors_; }
  const std::vector<Color>& table() const { return table_; }
  const std::string& kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  /// Nodes must have height >= depth(); only their depth() prefixes matter.
  Color operator()(const NodeTuple& nodes) const;

 private:
  std::size_t d_;
  std::size_t k_;
  std::size_t depth_;
  std::size_t colors_;
  std::vector<Color> table_;
  std::string kind_;
  std::uint64_t seed_;
};

struct DecidedColor {
  Condition q;
  Color j = 0;
};

/// Leftmost extension of p deciding the color of a: at index a(i) coordinate
/// i is padded with zeros to the oracle depth (indices missing from p start at
/// the root tuple). Throws PreconditionError if a is not below theta.
DecidedColor decide_color(const Condition& p, const OrdSet& a, const ColoringOracle& oracle,
                          std::size_t theta);

enum class Verdict { yes, no, indeterminate };

struct PredenseResult {
  Verdict verdict = Verdict::indeterminate;
  /// An extension of q incompatible with every member, when the verdict is no.
  std::optional<Condition> counterexample;
  std::uint64_t checked = 0;
};

/// Is D predense below q, for extensions r <= q with domain inside
/// dom(q) + window and nodes of height at most depth_bound (nodes of q
/// already deeper are kept)? Only the maximal such r are enumerated: any
/// incompatibility of a smaller r persists in its maximal extensions.
PredenseResult predense_check(const std::vector<Condition>& D, const Condition& q,
                              const OrdSet& window, std::size_t depth_bound,
                              std::span<const TreeShape> shapes, std::uint64_t budget);

/// One scheduled dense set: a procedure moving a condition into the set, and
/// a membership test for the set.
struct DenseStep {
  std::string label;
  std::function<Condition(const Condition&)> extend;
  std::function<bool(const Condition&)> member;
};

/// Applies one step; throws PreconditionError if the result is not an
/// extension lying in the declared set.
Condition meet_step(const DenseStep& step, const Condition& current);

/// Folds the schedule starting from `start`; the chain includes `start`.
std::vector<Condition> meet_dense(const std::vector<DenseStep>& schedule, const Condition& start);

struct PipelineConfig {
  std::size_t density_depth = 3;
  std::size_t branches = 8;
  std::size_t buffer = 4;
  std::size_t theta0 = 64;
  std::size_t theta_cap = std::size_t{1} << 14;
  std::size_t tree_depth = 10;
  std::uint64_t extract_budget = kDefaultExtractBudget;
  std::size_t threads = 1;
  Condition start;
};

/// The pipeline could not produce a witness for a declared reason
/// (extraction failed up to the index cap, no candidate met a dense set, or
/// the trees are too shallow).
class PipelineFailure : public std::runtime_error {
 public:
  PipelineFailure(const std::string& what, std::vector<std::string> transcript)
      : std::runtime_error(what), transcript(std::move(transcript)) {}
  std::vector<std::string> transcript;
};

struct PipelineResult {
  GridWitness witness;
  std::size_t theta = 0;
  OrdSet H;
  UniformCertificate cert;
  OrdSet delta;
  /// A[i][k] = alpha_{i,k}.
  std::vector<std::vector<Ord>> A;
  std::vector<Word> tags;
  Condition root_condition;
  std::vector<Condition> chain;
  std::vector<std::string> transcript;
};

/// Decides colors on all of [theta]^d, extracts a uniform Delta-system with
/// constant collapsed condition, color and position pattern, builds the
/// matrix of ordinals against the scheduled dense sets, and returns the grid
/// read off the final condition after the independent validator accepts it.
PipelineResult run_pipeline(const ColoringOracle& oracle, const PipelineConfig& cfg);

}  // namespace hlab
