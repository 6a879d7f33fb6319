#ifndef DCPROOF_STITCHER_HPP
#define DCPROOF_STITCHER_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "dcproof/checker.hpp"
#include "dcproof/core.hpp"
#include "dcproof/io.hpp"
#include "dcproof/trimmer.hpp"

namespace dcproof {

// Full binary decision tree rebuilt from the cubes of a bundle. Nodes live in
// one vector; node 0 is the root.
class CubeTree {
 public:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct Node {
    Cube cube;            // decisions from the root down to this node
    Var var = 0;          // decision variable; 0 for leaves
    std::size_t pos = kNone;  // child with cube extended by +var
    std::size_t neg = kNone;  // child with cube extended by -var
    Refutation proof;     // leaves only
    std::filesystem::path source;

    bool is_leaf() const { return var == 0; }
  };

  const Node& root() const { return nodes_.front(); }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t leaf_count() const;
  std::size_t max_depth() const;

 private:
  friend CubeTree build_cube_tree(ProofBundle bundle);
  std::vector<Node> nodes_;
};

// Throws Error(kEmptyBundle), Error(kIncompletePartition) when the cubes of
// one node split on different variables, Error(kMissingSibling) when one
// polarity is missing, and Error(kInconsistentDecisionOrder) when a cube is a
// proper prefix of another.
CubeTree build_cube_tree(ProofBundle bundle);

struct StitchJob {
  std::size_t node = 0;
  std::size_t depth = 0;
  Var var = 0;
  std::size_t pos = 0;
  std::size_t neg = 0;
};

// Inner nodes grouped by depth, deepest first. Jobs within a group touch
// disjoint nodes and only consume results of earlier groups.
struct StitchPlan {
  std::vector<std::vector<StitchJob>> levels;
  std::size_t widest() const;
};

StitchPlan make_plan(const CubeTree& tree);

struct StitchOptions {
  // Check that both inputs are valid, preserving refutations of their
  // sub-instances before combining them.
  bool validate_inputs = true;
  CheckMode mode = CheckMode::kStrict;
};

// Combines refutations of formula + {x} (positive) and formula + {~x}
// (negative) into one of the formula: the positive proof with ~x appended to
// every clause, then the negative proof with x appended, then the empty
// clause. Appended literals go last so each clause keeps its pivot. Each
// input is cut after its first added empty clause.
//
// Throws Error(kInvalidSubProof) or Error(kNonPreservingInput) when
// validation is on and fails.
Refutation stitch(const Formula& formula, Literal x, const Refutation& positive,
                  const Refutation& negative, const StitchOptions& options = {});

// Mean clause length over additions; deletions do not count.
struct ClauseLengthStats {
  std::uint64_t literals = 0;
  std::uint64_t additions = 0;

  double value() const {
    return additions == 0 ? 0.0 : static_cast<double>(literals) / additions;
  }
  // Exact integer comparison with a threshold.
  bool exceeds(std::int64_t threshold) const {
    return static_cast<std::int64_t>(literals) >
           threshold * static_cast<std::int64_t>(additions);
  }
};

ClauseLengthStats clause_length_stats(const Refutation& proof);
double average_clause_length(const Refutation& proof);

struct CombineOptions {
  // -1 never trims, 0 trims after every stitch, n > 0 trims a stitched proof
  // whose average clause length exceeds n.
  int cl_avg = -1;
  unsigned jobs = 1;
  // Validate every leaf refutation before stitching.
  bool precheck = true;
  // Deletion handling for leaf proofs during the precheck. Deletions of
  // absent clauses that permissive mode skips are dropped from the leaf.
  CheckMode leaf_mode = CheckMode::kPermissive;
  // Repair non-preserving leaves by dropping all deletions, provided the
  // repaired proof still checks with AT alone.
  bool strip_deletions = false;
  // Hold intermediate proofs with at least spill_threshold steps on disk.
  std::optional<std::filesystem::path> spill_dir;
  std::size_t spill_threshold = 100000;
  bool resynthesize_deletions = true;
};

struct StitchRecord {
  Cube cube;  // position of the inner node
  std::size_t depth = 0;
  std::size_t steps = 0;  // stitched proof, before any trim
  ClauseLengthStats lengths;
  bool trimmed = false;
  std::size_t steps_after = 0;
  double merge_ms = 0;
  double trim_ms = 0;
};

struct LevelReport {
  std::size_t depth = 0;
  std::size_t stitched = 0;
  std::size_t trimmed = 0;
  double merge_ms = 0;
  double trim_ms = 0;
};

struct CombineResult {
  Refutation proof;
  std::vector<StitchRecord> stitches;  // in plan order
  std::vector<LevelReport> levels;     // deepest first
  std::size_t leaves = 0;
  double precheck_ms = 0;
};

// Stitches the whole tree bottom-up, one depth level at a time, running the
// jobs of a level on up to `jobs` threads. The instance of an inner node is
// the formula plus the units of its cube. Output is identical for any `jobs`.
CombineResult combine_all(const Formula& formula, const CubeTree& tree,
                          const CombineOptions& options);

}  // namespace dcproof

#endif  // DCPROOF_STITCHER_HPP
