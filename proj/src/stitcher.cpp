#include "dcproof/stitcher.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <string>
#include <variant>

#include "dcproof/parallel.hpp"

namespace dcproof {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Steps up to and including the first added empty clause.
std::size_t effective_length(const Refutation& proof) {
  for (std::size_t i = 0; i < proof.size(); ++i) {
    if (proof[i].is_empty_add()) return i + 1;
  }
  return proof.size();
}

Refutation truncated(Refutation proof) {
  proof.resize(effective_length(proof));
  return proof;
}

void lift(const Refutation& proof, Literal lit, Refutation& out) {
  const std::size_t n = effective_length(proof);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({proof[i].op, proof[i].clause.with_appended(lit)});
  }
}

std::string clause_text(const Clause& c) {
  std::string s = "{";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i].value());
  }
  return s + "}";
}

std::string describe(const CheckReport& r) {
  std::string s = std::string(to_string(r.reason));
  if (r.failing_step) s += " at step " + std::to_string(*r.failing_step);
  return s;
}

class TreeBuilder {
 public:
  TreeBuilder(std::vector<BundleEntry>& entries,
              std::vector<CubeTree::Node>& nodes)
      : entries_(entries), nodes_(nodes) {}

  std::size_t build(const std::vector<std::size_t>& members, const Cube& prefix) {
    const std::size_t depth = prefix.depth();
    const std::size_t self = nodes_.size();
    nodes_.emplace_back();
    nodes_[self].cube = prefix;

    if (members.size() == 1 && entries_[members[0]].cube.depth() == depth) {
      BundleEntry& e = entries_[members[0]];
      nodes_[self].proof = std::move(e.proof);
      nodes_[self].source = e.source;
      return self;
    }
    std::set<Var> vars;
    for (std::size_t m : members) {
      const Cube& cube = entries_[m].cube;
      if (cube.depth() == depth) {
        throw Error(ErrorCode::kInconsistentDecisionOrder,
                    "cube " + to_string(cube) +
                        " is a proper prefix of another cube");
      }
      vars.insert(cube[depth].var());
    }
    if (vars.size() > 1) {
      std::string list;
      for (Var v : vars) list += (list.empty() ? "" : ", ") + std::to_string(v);
      throw Error(ErrorCode::kIncompletePartition,
                  "cubes below " + to_string(prefix) +
                      " decide different variables (" + list +
                      "); the sub-problems do not partition the instance");
    }
    const Var var = *vars.begin();
    std::vector<std::size_t> pos, neg;
    for (std::size_t m : members) {
      (entries_[m].cube[depth].positive() ? pos : neg).push_back(m);
    }
    if (pos.empty() || neg.empty()) {
      const Literal missing(pos.empty() ? var : -var);
      throw Error(ErrorCode::kMissingSibling,
                  "no cube starts with " + to_string(prefix.extended(missing)) +
                      ", the sibling of " + to_string(prefix.extended(~missing)));
    }
    const std::size_t p = build(pos, prefix.extended(Literal(var)));
    const std::size_t n = build(neg, prefix.extended(Literal(-var)));
    nodes_[self].var = var;
    nodes_[self].pos = p;
    nodes_[self].neg = n;
    return self;
  }

 private:
  std::vector<BundleEntry>& entries_;
  std::vector<CubeTree::Node>& nodes_;
};

// Intermediate proof, held in memory or spilled to a file.
class Slot {
 public:
  void put(Refutation proof, const CombineOptions& opts, std::size_t node) {
    if (opts.spill_dir && proof.size() >= opts.spill_threshold) {
      path_ = *opts.spill_dir / ("node-" + std::to_string(node) + ".drat");
      write_file(path_, write_drat(proof));
      data_ = {};
      spilled_ = true;
    } else {
      data_ = std::move(proof);
      spilled_ = false;
    }
  }

  Refutation take() {
    if (!spilled_) return std::move(data_);
    Refutation proof = load_drat(path_);
    std::error_code ec;
    std::filesystem::remove(path_, ec);
    spilled_ = false;
    return proof;
  }

 private:
  Refutation data_;
  std::filesystem::path path_;
  bool spilled_ = false;
};

Refutation prepare_leaf(const Formula& formula, const CubeTree::Node& leaf,
                        const CombineOptions& opts) {
  Refutation proof = leaf.proof;
  if (!opts.precheck) return proof;
  const std::string where =
      "leaf " + to_string(leaf.cube) +
      (leaf.source.empty() ? "" : " ('" + leaf.source.string() + "')");

  const Formula instance = with_cube_units(formula, leaf.cube);
  const CheckReport report = check_refutation(instance, proof, opts.leaf_mode);
  if (!report.valid()) {
    throw Error(ErrorCode::kInvalidSubProof,
                where + ": invalid refutation (" + describe(report) + ")");
  }
  if (!report.skipped_deletions.empty()) {
    Refutation kept;
    kept.reserve(proof.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < proof.size(); ++i) {
      if (k < report.skipped_deletions.size() &&
          report.skipped_deletions[k] == i + 1) {
        ++k;
        continue;
      }
      kept.push_back(std::move(proof[i]));
    }
    proof = std::move(kept);
  }
  proof = truncated(std::move(proof));

  if (auto bad = first_unpreserved_clause(proof)) {
    if (!opts.strip_deletions) {
      throw Error(ErrorCode::kNonPreservingInput,
                  where + ": clause " + clause_text(*bad) +
                      " is deleted more often than it is added");
    }
    std::erase_if(proof, [](const ProofStep& s) { return !s.is_add(); });
    const CheckReport repaired =
        check_refutation(instance, proof, CheckMode::kStrict);
    if (!repaired.valid() || repaired.stats.rat_steps > 0) {
      throw Error(ErrorCode::kNonPreservingInput,
                  where + ": dropping deletions does not repair the proof (" +
                      (repaired.valid() ? std::string("additions need RAT")
                                        : describe(repaired)) +
                      ")");
    }
  }
  return proof;
}

}  // namespace

std::size_t CubeTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::size_t CubeTree::max_depth() const {
  std::size_t d = 0;
  for (const Node& n : nodes_) d = std::max(d, n.cube.depth());
  return d;
}

CubeTree build_cube_tree(ProofBundle bundle) {
  if (bundle.entries.empty()) {
    throw Error(ErrorCode::kEmptyBundle, "no sub-problem refutations given");
  }
  std::vector<std::size_t> all(bundle.entries.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  CubeTree tree;
  TreeBuilder(bundle.entries, tree.nodes_).build(all, Cube());
  return tree;
}

std::size_t StitchPlan::widest() const {
  std::size_t w = 0;
  for (const auto& level : levels) w = std::max(w, level.size());
  return w;
}

StitchPlan make_plan(const CubeTree& tree) {
  std::map<std::size_t, std::vector<StitchJob>, std::greater<>> by_depth;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const CubeTree::Node& n = tree.node(i);
    if (n.is_leaf()) continue;
    by_depth[n.cube.depth()].push_back({i, n.cube.depth(), n.var, n.pos, n.neg});
  }
  StitchPlan plan;
  for (auto& [depth, jobs] : by_depth) plan.levels.push_back(std::move(jobs));
  return plan;
}

Refutation stitch(const Formula& formula, Literal x, const Refutation& positive,
                  const Refutation& negative, const StitchOptions& options) {
  if (options.validate_inputs) {
    const std::pair<const Refutation*, Literal> halves[] = {{&positive, x},
                                                            {&negative, ~x}};
    for (const auto& [proof, unit] : halves) {
      const std::string which = "sub-proof for decision " +
                                std::to_string(unit.value());
      const Formula instance = formula_add(formula, Clause(std::vector{unit}));
      const CheckReport r = check_refutation(instance, *proof, options.mode);
      if (!r.valid()) {
        throw Error(ErrorCode::kInvalidSubProof,
                    which + " is not a valid refutation (" + describe(r) + ")");
      }
      Refutation cut(proof->begin(), proof->begin() + effective_length(*proof));
      if (auto bad = first_unpreserved_clause(cut)) {
        throw Error(ErrorCode::kNonPreservingInput,
                    which + " deletes clause " + clause_text(*bad) +
                        " more often than it adds it");
      }
    }
  }
  Refutation out;
  out.reserve(effective_length(positive) + effective_length(negative) + 1);
  lift(positive, ~x, out);
  lift(negative, x, out);
  out.push_back(ProofStep::add(Clause()));
  return out;
}

ClauseLengthStats clause_length_stats(const Refutation& proof) {
  ClauseLengthStats s;
  for (const ProofStep& step : proof) {
    if (!step.is_add()) continue;
    ++s.additions;
    s.literals += step.clause.size();
  }
  return s;
}

double average_clause_length(const Refutation& proof) {
  return clause_length_stats(proof).value();
}

CombineResult combine_all(const Formula& formula, const CubeTree& tree,
                          const CombineOptions& options) {
  if (options.cl_avg < -1) {
    throw Error(ErrorCode::kInvalidArgument,
                "cl_avg must be -1 or a nonnegative integer");
  }
  const unsigned jobs = std::max(1u, options.jobs);
  CombineResult result;
  std::vector<Slot> slots(tree.size());

  std::vector<std::size_t> leaves;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (tree.node(i).is_leaf()) leaves.push_back(i);
  }
  result.leaves = leaves.size();
  const auto t_pre = Clock::now();
  parallel_for(leaves.size(), jobs, [&](std::size_t k) {
    const std::size_t i = leaves[k];
    slots[i].put(prepare_leaf(formula, tree.node(i), options), options, i);
  });
  result.precheck_ms = ms_since(t_pre);

  const StitchPlan plan = make_plan(tree);
  for (const auto& level : plan.levels) {
    std::vector<StitchRecord> records(level.size());
    parallel_for(level.size(), jobs, [&](std::size_t k) {
      const StitchJob& job = level[k];
      const CubeTree::Node& node = tree.node(job.node);
      StitchRecord& rec = records[k];
      rec.cube = node.cube;
      rec.depth = job.depth;
      try {
        const Formula instance = with_cube_units(formula, node.cube);
        const Refutation pos = slots[job.pos].take();
        const Refutation neg = slots[job.neg].take();
        auto t0 = Clock::now();
        Refutation merged = stitch(instance, Literal(job.var), pos, neg,
                                   {.validate_inputs = false});
        rec.merge_ms = ms_since(t0);
        rec.steps = merged.size();
        rec.lengths = clause_length_stats(merged);
        if (options.cl_avg >= 0 && rec.lengths.exceeds(options.cl_avg)) {
          t0 = Clock::now();
          TrimResult trimmed =
              trim(instance, merged,
                   {.resynthesize_deletions = options.resynthesize_deletions,
                    .input_mode = CheckMode::kStrict});
          merged = std::move(trimmed.proof);
          rec.trimmed = true;
          rec.trim_ms = ms_since(t0);
        }
        rec.steps_after = merged.size();
        slots[job.node].put(std::move(merged), options, job.node);
      } catch (const Error& e) {
        throw Error(e.code(), "at node " + to_string(node.cube) + ": " + e.what());
      }
    });

    LevelReport lr;
    lr.depth = level.front().depth;
    for (const StitchRecord& rec : records) {
      ++lr.stitched;
      lr.trimmed += rec.trimmed ? 1 : 0;
      lr.merge_ms += rec.merge_ms;
      lr.trim_ms += rec.trim_ms;
    }
    result.levels.push_back(lr);
    for (StitchRecord& rec : records) result.stitches.push_back(std::move(rec));
  }
  result.proof = slots[0].take();
  return result;
}

}  // namespace dcproof
