#include <gtest/gtest.h>

#include <random>

#include "dcproof/harness.hpp"
#include "dcproof/stitcher.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace dcproof;

namespace {

const Refutation kEmpty{ProofStep::add(Clause())};

ProofBundle bundle_of(Formula f, std::vector<std::pair<Cube, Refutation>> parts) {
  ProofBundle b;
  b.instance = std::move(f);
  for (auto& [cube, proof] : parts) b.entries.push_back({cube, proof, {}});
  std::sort(b.entries.begin(), b.entries.end(),
            [](const auto& x, const auto& y) { return x.cube < y.cube; });
  return b;
}

ErrorCode tree_error(std::vector<Cube> cubes) {
  std::vector<std::pair<Cube, Refutation>> parts;
  for (Cube& c : cubes) parts.emplace_back(std::move(c), kEmpty);
  try {
    build_cube_tree(bundle_of(Formula(), std::move(parts)));
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "tree built";
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST(Stitch, TrivialExample) {
  const Formula f{Clause{1}, Clause{-1}};
  const Refutation out = stitch(f, Literal(1), kEmpty, kEmpty);
  const Refutation expected{ProofStep::add(Clause{-1}), ProofStep::add(Clause{1}),
                            ProofStep::add(Clause())};
  EXPECT_EQ(out, expected);
  EXPECT_TRUE(check_refutation(f, out).valid());
}

TEST(Stitch, StepCountIsSumPlusOne) {
  const Refutation pi{ProofStep::add(Clause{2}), ProofStep::del(Clause{2}),
                      ProofStep::add(Clause())};
  const Refutation pi2{ProofStep::add(Clause{3}), ProofStep::add(Clause())};
  const Refutation out =
      stitch(Formula(), Literal(1), pi, pi2, {.validate_inputs = false});
  EXPECT_EQ(out.size(), 6u);
}

TEST(Stitch, LiftsDeletionsWithDecisionLast) {
  const Refutation pi{ProofStep::del(Clause{2, 3}), ProofStep::add(Clause())};
  const Refutation out =
      stitch(Formula(), Literal(1), pi, kEmpty, {.validate_inputs = false});
  EXPECT_EQ(out[0], ProofStep::del(Clause{2, 3, -1}));
  EXPECT_EQ(out[1], ProofStep::add(Clause{-1}));
  EXPECT_EQ(out[2], ProofStep::add(Clause{1}));
}

TEST(Stitch, ExistingLiteralIsNotDuplicatedAndTautologiesStay) {
  const Refutation pi{ProofStep::add(Clause{4, -1}), ProofStep::add(Clause{1, 5}),
                      ProofStep::add(Clause())};
  const Refutation out =
      stitch(Formula(), Literal(1), pi, kEmpty, {.validate_inputs = false});
  EXPECT_TRUE(out[0].clause.identical(Clause{4, -1}));
  EXPECT_TRUE(out[1].clause.identical(Clause{1, 5, -1}));
}

TEST(Stitch, CutsInputsAfterTheirEmptyClause) {
  const Refutation pi{ProofStep::add(Clause()), ProofStep::add(Clause{9})};
  const Refutation out =
      stitch(Formula{Clause{1}, Clause{-1}}, Literal(1), pi, kEmpty);
  EXPECT_EQ(out.size(), 3u);
}

TEST(Stitch, ValidationRejectsBadInputs) {
  const Formula f{Clause{2, 3}};
  try {
    stitch(f, Literal(1), kEmpty, kEmpty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidSubProof);
  }
  // Deletes the input clause {3}, which it never added.
  const Refutation non_preserving{ProofStep::add(Clause{2}), ProofStep::del(Clause{3}),
                                  ProofStep::add(Clause())};
  const Formula g{Clause{-1, 2}, Clause{-2}, Clause{3}, Clause{1, -3}};
  try {
    stitch(g, Literal(1), non_preserving, {ProofStep::add(Clause())});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonPreservingInput);
  }
}

TEST(CubeTree, ImbalancedShape) {
  const CubeTree t = build_cube_tree(bundle_of(
      Formula(), {{Cube{1, 2}, kEmpty}, {Cube{1, -2}, kEmpty}, {Cube{-1}, kEmpty}}));
  EXPECT_EQ(t.root().var, 1);
  const auto& pos = t.node(t.root().pos);
  const auto& neg = t.node(t.root().neg);
  EXPECT_EQ(pos.var, 2);
  EXPECT_TRUE(neg.is_leaf());
  EXPECT_EQ(neg.cube, (Cube{-1}));
  EXPECT_EQ(t.node(pos.pos).cube, (Cube{1, 2}));
  EXPECT_EQ(t.node(pos.neg).cube, (Cube{1, -2}));
  EXPECT_EQ(t.leaf_count(), 3u);
  EXPECT_EQ(t.max_depth(), 2u);
}

TEST(CubeTree, Errors) {
  EXPECT_EQ(tree_error({Cube{1}, Cube{-2}}), ErrorCode::kIncompletePartition);
  EXPECT_EQ(tree_error({Cube{1}}), ErrorCode::kMissingSibling);
  EXPECT_EQ(tree_error({Cube{1, 2}, Cube{1, -2}, Cube{-1, 3}}), ErrorCode::kMissingSibling);
  EXPECT_EQ(tree_error({Cube(), Cube{1}, Cube{-1}}), ErrorCode::kInconsistentDecisionOrder);
  EXPECT_EQ(tree_error({Cube{1}, Cube{1, 2}, Cube{1, -2}, Cube{-1}}),
            ErrorCode::kInconsistentDecisionOrder);
  EXPECT_EQ(tree_error({Cube{1, 2}, Cube{1, -2}, Cube{-1, 3}, Cube{-1, -4}}),
            ErrorCode::kIncompletePartition);
  EXPECT_EQ(tree_error({}), ErrorCode::kEmptyBundle);
}

TEST(CubeTree, RootLeaf) {
  const CubeTree t = build_cube_tree(bundle_of(Formula(), {{Cube(), kEmpty}}));
  EXPECT_TRUE(t.root().is_leaf());
  EXPECT_TRUE(make_plan(t).levels.empty());
}

TEST(CubeTreeProperty, SplitAlwaysBuilds) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const Formula f = oracle::formula(oracle::random_formula(rng, 8, 12, 3));
    std::size_t vars = 0;
    for (Var v = 1; v <= f.max_var(); ++v) {
      bool occurs = false;
      f.for_each([&](const Clause& c, std::size_t) {
        occurs = occurs || c.contains(Literal(v)) || c.contains(Literal(-v));
      });
      vars += occurs;
    }
    for (std::size_t d = 0; d <= std::min<std::size_t>(vars, 4); ++d) {
      std::vector<std::pair<Cube, Refutation>> parts;
      for (const Cube& c : split(f, d)) parts.emplace_back(c, kEmpty);
      const CubeTree t = build_cube_tree(bundle_of(f, parts));
      ASSERT_EQ(t.leaf_count(), std::size_t{1} << d);
      ASSERT_EQ(t.max_depth(), d);
    }
  }
}

TEST(Plan, DeepestLevelFirstAndDisjoint) {
  const CubeTree t = build_cube_tree(bundle_of(
      Formula(), {{Cube{1, 2}, kEmpty},
                  {Cube{1, -2}, kEmpty},
                  {Cube{-1, 2}, kEmpty},
                  {Cube{-1, -2}, kEmpty}}));
  const StitchPlan plan = make_plan(t);
  ASSERT_EQ(plan.levels.size(), 2u);
  EXPECT_EQ(plan.levels[0].size(), 2u);
  EXPECT_EQ(plan.levels[1].size(), 1u);
  EXPECT_EQ(plan.widest(), 2u);
  EXPECT_EQ(plan.levels[1][0].node, 0u);
  std::set<std::size_t> used;
  for (const StitchJob& j : plan.levels[0]) {
    EXPECT_EQ(j.depth, 1u);
    EXPECT_TRUE(used.insert(j.pos).second);
    EXPECT_TRUE(used.insert(j.neg).second);
    EXPECT_TRUE(used.insert(j.node).second);
  }
}

TEST(ClauseLength, Examples) {
  EXPECT_DOUBLE_EQ(average_clause_length({ProofStep::add(Clause{1, 2}),
                                          ProofStep::add(Clause{1}),
                                          ProofStep::add(Clause())}),
                   1.0);
  EXPECT_DOUBLE_EQ(average_clause_length(kEmpty), 0.0);
  EXPECT_DOUBLE_EQ(average_clause_length({ProofStep::add(Clause{1, 2}),
                                          ProofStep::del(Clause{1, 2, 3}),
                                          ProofStep::add(Clause{3, 4})}),
                   2.0);
  EXPECT_DOUBLE_EQ(average_clause_length({}), 0.0);
}

TEST(ClauseLength, GateIsStrictAndExact) {
  const ClauseLengthStats ten{.literals = 30, .additions = 3};
  EXPECT_FALSE(ten.exceeds(10));
  EXPECT_TRUE(ten.exceeds(9));
  EXPECT_TRUE(ten.exceeds(0));
  EXPECT_TRUE(ten.exceeds(-1));
  const ClauseLengthStats none{};
  EXPECT_FALSE(none.exceeds(0));
  const ClauseLengthStats just_above{.literals = 31, .additions = 3};
  EXPECT_TRUE(just_above.exceeds(10));
}

// Stitching DRAT sub-proofs that carry RAT additions and deletions.
TEST(StitchProperty, ValidAndPreserving) {
  std::mt19937_64 rng(32);
  int checked = 0;
  for (int i = 0; i < 300 && checked < 150; ++i) {
    const Formula f = gen_random_unsat(6 + static_cast<int>(rng() % 5), 4.5, rng());
    const Var x = 1 + static_cast<Var>(rng() % f.max_var());
    const Formula pos = formula_add(f, Clause{x});
    const Formula neg = formula_add(f, Clause{-x});
    const Refutation p = fixtures::drat_refutation(pos, rng);
    const Refutation q = fixtures::drat_refutation(neg, rng);
    ASSERT_TRUE(check_refutation(pos, p).valid());
    ASSERT_TRUE(check_refutation(neg, q).valid());
    const Refutation out = stitch(f, Literal(x), p, q);
    ASSERT_EQ(out.size(), p.size() + q.size() + 1);
    const CheckReport r = check_refutation(f, out);
    ASSERT_TRUE(r.valid()) << i << " " << to_string(r.reason) << " at "
                           << r.failing_step.value_or(0);
    ASSERT_TRUE(is_preserving(out));
    ++checked;
  }
  EXPECT_EQ(checked, 150);
}

TEST(Combine, UnoptimizedKeepsEveryStepOnce) {
  const Formula f = gen_random_unsat(12, 4.5, 7);
  const CubeTree t = build_cube_tree(fixtures::solved_bundle(f, 3));
  std::size_t leaf_steps = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.node(i).is_leaf()) leaf_steps += t.node(i).proof.size();
  }
  const CombineResult r = combine_all(f, t, {.cl_avg = -1});
  EXPECT_EQ(r.proof.size(), leaf_steps + (t.size() - t.leaf_count()));
  EXPECT_TRUE(check_refutation(f, r.proof).valid());
  EXPECT_TRUE(is_preserving(r.proof));
  for (const StitchRecord& s : r.stitches) EXPECT_FALSE(s.trimmed);
  ASSERT_EQ(r.levels.size(), 3u);
  EXPECT_EQ(r.levels[0].depth, 2u);
  EXPECT_EQ(r.levels[0].stitched, 4u);
  EXPECT_EQ(r.levels[2].stitched, 1u);
}

TEST(Combine, MatchesManualStitching) {
  const Formula f = gen_random_unsat(10, 5.0, 8);
  const ProofBundle b = fixtures::solved_bundle(f, 2);
  const CubeTree t = build_cube_tree(b);
  const CubeTree& tree = t;
  auto leaf = [&](const Cube& c) {
    for (const auto& e : b.entries) {
      if (e.cube == c) return e.proof;
    }
    throw std::logic_error("no leaf");
  };
  const Var x = tree.root().var;
  const Var y = tree.node(tree.root().pos).var;
  const Formula fx = with_cube_units(f, Cube{x});
  const Formula fnx = with_cube_units(f, Cube{-x});
  const Refutation left =
      stitch(fx, Literal(y), leaf(Cube{x, y}), leaf(Cube{x, -y}), {.validate_inputs = false});
  const Refutation right = stitch(fnx, Literal(y), leaf(Cube{-x, y}), leaf(Cube{-x, -y}),
                                  {.validate_inputs = false});
  const Refutation expected = stitch(f, Literal(x), left, right, {.validate_inputs = false});
  EXPECT_EQ(combine_all(f, t, {.cl_avg = -1}).proof, expected);
}

TEST(Combine, GateDecisions) {
  const Formula f = gen_random_unsat(14, 4.5, 9);
  const CubeTree t = build_cube_tree(fixtures::solved_bundle(f, 3));
  const CombineResult never = combine_all(f, t, {.cl_avg = -1});
  const CombineResult always = combine_all(f, t, {.cl_avg = 0});
  const CombineResult gated = combine_all(f, t, {.cl_avg = 3});
  for (const auto& s : never.stitches) EXPECT_FALSE(s.trimmed);
  for (const auto& s : always.stitches) EXPECT_TRUE(s.trimmed);
  for (const auto& s : gated.stitches) {
    EXPECT_EQ(s.trimmed, s.lengths.literals > 3 * s.lengths.additions);
  }
  EXPECT_TRUE(check_refutation(f, always.proof).valid());
  EXPECT_TRUE(check_refutation(f, gated.proof).valid());
  EXPECT_LE(always.proof.size(), never.proof.size());
}

TEST(Combine, OutputIndependentOfJobsAndSpilling) {
  const Formula f = gen_random_unsat(16, 4.4, 10);
  const CubeTree t = build_cube_tree(fixtures::solved_bundle(f, 3));
  TempDir spill;
  for (int cl : {-1, 0, 10}) {
    const std::string one = write_drat(combine_all(f, t, {.cl_avg = cl, .jobs = 1}).proof);
    const std::string eight = write_drat(combine_all(f, t, {.cl_avg = cl, .jobs = 8}).proof);
    CombineOptions spilled{.cl_avg = cl, .jobs = 3};
    spilled.spill_dir = spill.path();
    spilled.spill_threshold = 1;
    const std::string disk = write_drat(combine_all(f, t, spilled).proof);
    EXPECT_EQ(one, eight) << cl;
    EXPECT_EQ(one, disk) << cl;
  }
  EXPECT_TRUE(std::filesystem::is_empty(spill.path()));
}

TEST(Combine, SingleLeafIsReturnedUnchanged) {
  const Formula f{Clause{1}, Clause{-1}};
  const Refutation p{ProofStep::add(Clause{1}), ProofStep::add(Clause())};
  const CubeTree t = build_cube_tree(bundle_of(f, {{Cube(), p}}));
  EXPECT_EQ(combine_all(f, t, {.cl_avg = 0}).proof, p);
}

TEST(Combine, PrecheckNamesTheLeaf) {
  const Formula f{Clause{1, 2}, Clause{-1, 2}};
  const CubeTree t =
      build_cube_tree(bundle_of(f, {{Cube{2}, kEmpty}, {Cube{-2}, kEmpty}}));
  try {
    combine_all(f, t, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidSubProof);
    EXPECT_NE(std::string(e.what()).find("(2)"), std::string::npos) << e.what();
  }
}

TEST(Combine, PermissiveLeavesLoseAbsentDeletions) {
  const Formula f{Clause{1, 2}, Clause{1, -2}, Clause{-1, 2}, Clause{-1, -2}};
  const Refutation dangling{ProofStep::del(Clause{7}), ProofStep::add(Clause())};
  const CubeTree t =
      build_cube_tree(bundle_of(f, {{Cube{1}, dangling}, {Cube{-1}, dangling}}));
  const CombineResult r = combine_all(f, t, {.cl_avg = -1});
  EXPECT_EQ(r.proof.size(), 3u);
  EXPECT_TRUE(check_refutation(f, r.proof, CheckMode::kStrict).valid());
  try {
    combine_all(f, t, {.cl_avg = -1, .leaf_mode = CheckMode::kStrict});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidSubProof);
  }
}

TEST(Combine, StripDeletionsRepairsDrupLeaves) {
  // The leaf deletes the input clause {1, 2} even though the proof never
  // added it: valid, but not preserving.
  const Formula f{Clause{1, 2}, Clause{1, -2}, Clause{-1, 2}, Clause{-1, -2}};
  const Refutation leaf{ProofStep::del(Clause{1, 2}), ProofStep::add(Clause())};
  const CubeTree t = build_cube_tree(bundle_of(f, {{Cube{1}, leaf}, {Cube{-1}, kEmpty}}));
  try {
    combine_all(f, t, {.cl_avg = -1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonPreservingInput);
  }
  CombineOptions repair{.cl_avg = -1};
  repair.strip_deletions = true;
  const CombineResult r = combine_all(f, t, repair);
  EXPECT_TRUE(check_refutation(f, r.proof).valid());
  EXPECT_TRUE(is_preserving(r.proof));
}

TEST(Combine, StripDeletionsRefusesRatLeaves) {
  // Under cube (1) the leaf adds {5} by RAT only (nothing contains -5), then
  // deletes an input clause it never added.
  const Formula f{Clause{-1, 2, 3}, Clause{-1, 2, -3}, Clause{-1, -2, 3},
                  Clause{-1, -2, -3}, Clause{1, 2}, Clause{1, -2}};
  const Refutation leaf{ProofStep::add(Clause{5}), ProofStep::del(Clause{1, 2}),
                        ProofStep::add(Clause{2}), ProofStep::add(Clause())};
  const CubeTree t = build_cube_tree(bundle_of(f, {{Cube{1}, leaf}, {Cube{-1}, kEmpty}}));
  EXPECT_TRUE(check_refutation(with_cube_units(f, Cube{1}), leaf).valid());
  CombineOptions repair{.cl_avg = -1};
  repair.strip_deletions = true;
  try {
    combine_all(f, t, repair);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonPreservingInput);
    EXPECT_NE(std::string(e.what()).find("RAT"), std::string::npos) << e.what();
  }
}

TEST(Combine, RejectsBadThreshold) {
  const Formula f{Clause{1}, Clause{-1}};
  const CubeTree t = build_cube_tree(bundle_of(f, {{Cube(), kEmpty}}));
  try {
    combine_all(f, t, {.cl_avg = -2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}
