#include <gtest/gtest.h>

#include <random>

#include "dcproof/checker.hpp"
#include "dcproof/harness.hpp"
#include "dcproof/io.hpp"
#include "dcproof/stitcher.hpp"
#include "oracles.hpp"

using namespace dcproof;

TEST(Solve, ContradictoryUnits) {
  const SolveOutcome s = solve_drup(Formula{Clause{1}, Clause{-1}});
  ASSERT_EQ(s.result, SolveResult::kUnsat);
  EXPECT_EQ(s.refutation, (Refutation{ProofStep::add(Clause())}));
}

TEST(Solve, SatisfiableExamples) {
  const Formula f{Clause{1, 2}};
  const SolveOutcome s = solve_drup(f);
  ASSERT_EQ(s.result, SolveResult::kSat);
  EXPECT_TRUE(satisfies(f, s.assignment));

  const Formula intro{Clause{-1}, Clause{2, 3}, Clause{-2, 3}};
  const SolveOutcome t = solve_drup(intro);
  ASSERT_EQ(t.result, SolveResult::kSat);
  EXPECT_TRUE(satisfies(intro, t.assignment));
  EXPECT_FALSE(t.assignment[1]);
  EXPECT_TRUE(t.assignment[3]);
}

TEST(Solve, EmptyClauseAndEmptyFormula) {
  EXPECT_EQ(solve_drup(Formula{Clause()}).result, SolveResult::kUnsat);
  EXPECT_EQ(solve_drup(Formula()).result, SolveResult::kSat);
}

TEST(Solve, ConflictBudget) {
  const Formula f = gen_random_unsat(18, 4.6, 3);
  try {
    solve_drup(f, 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kResourceLimit);
  }
}

// 500 random instances: verdicts agree with the truth table, refutations
// check in strict mode, carry no deletions and are preserving.
TEST(SolveProperty, AgreesWithTruthTableAndProofsCheck) {
  std::mt19937_64 rng(51);
  int unsat = 0;
  for (int i = 0; i < 500; ++i) {
    const int vars = 1 + static_cast<int>(rng() % 16);
    const oracle::RawFormula raw = oracle::random_formula(
        rng, vars, 1 + static_cast<int>(rng() % (5 * vars)), 3);
    const Formula f = oracle::formula(raw);
    const SolveOutcome s = solve_drup(f, rng());
    ASSERT_EQ(s.result == SolveResult::kSat, oracle::satisfiable(raw, vars)) << i;
    if (s.result == SolveResult::kSat) {
      ASSERT_TRUE(satisfies(f, s.assignment));
      continue;
    }
    ++unsat;
    const CheckReport r = check_refutation(f, s.refutation, CheckMode::kStrict);
    ASSERT_TRUE(r.valid()) << i;
    ASSERT_EQ(r.stats.rat_steps, 0u);
    ASSERT_EQ(r.stats.deletions, 0u);
    ASSERT_TRUE(is_preserving(s.refutation));
    ASSERT_TRUE(s.refutation.back().is_empty_add());
  }
  EXPECT_GT(unsat, 100);
}

TEST(SolveProperty, DeterministicPerSeed) {
  const Formula f = gen_random_unsat(20, 4.3, 5);
  EXPECT_EQ(write_drat(solve_drup(f, 9).refutation),
            write_drat(solve_drup(f, 9).refutation));
}

TEST(BruteForce, MatchesOracle) {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 300; ++i) {
    const int vars = 1 + static_cast<int>(rng() % 10);
    const oracle::RawFormula raw = oracle::random_formula(rng, vars, 3 * vars, 3);
    ASSERT_EQ(brute_force_satisfiable(oracle::formula(raw)),
              oracle::satisfiable(raw, vars));
  }
}

TEST(Split, MostFrequentVariablesFirst) {
  const Formula f{Clause{1, 2}, Clause{-1, 2}, Clause{2, 3}, Clause{1, 3}, Clause{1}};
  EXPECT_EQ(split(f, 1), (std::vector<Cube>{Cube{1}, Cube{-1}}));
  const auto cubes = split(f, 2);
  ASSERT_EQ(cubes.size(), 4u);
  for (const Cube& c : cubes) EXPECT_EQ(c[0].var(), 1);
  EXPECT_EQ(cubes[0], (Cube{1, 2}));
  EXPECT_EQ(split(f, 0), (std::vector<Cube>{Cube()}));
}

TEST(Split, TiesGoToLowerIndex) {
  const Formula f{Clause{3, 2}, Clause{-2, -3}};
  EXPECT_EQ(split(f, 1)[0], (Cube{2}));
}

TEST(Split, DepthTooLarge) {
  try {
    split(Formula{Clause{1, 2}}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDepthTooLarge);
  }
}

// The cube-extended sub-problems are jointly equisatisfiable with F.
TEST(SplitProperty, CoversTheSearchSpace) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 200; ++i) {
    const int vars = 3 + static_cast<int>(rng() % 6);
    const oracle::RawFormula raw = oracle::random_formula(rng, vars, 3 * vars, 3);
    const Formula f = oracle::formula(raw);
    const std::size_t depth = 1 + rng() % 3;
    std::vector<Cube> cubes;
    try {
      cubes = split(f, depth);
    } catch (const Error&) {
      continue;
    }
    bool any = false;
    for (const Cube& c : cubes) any = any || brute_force_satisfiable(with_cube_units(f, c));
    ASSERT_EQ(any, oracle::satisfiable(raw, vars));
  }
}

TEST(GenRandomUnsat, OneVariable) {
  EXPECT_EQ(gen_random_unsat(1, 4.26, 1), (Formula{Clause{1}, Clause{-1}}));
}

TEST(GenRandomUnsat, DeterministicAndUnsat) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int vars = 2 + static_cast<int>(seed % 14);
    const Formula f = gen_random_unsat(vars, 5.0, seed);
    EXPECT_EQ(f, gen_random_unsat(vars, 5.0, seed));
    EXPECT_FALSE(oracle::satisfiable(oracle::raw(f), vars)) << seed;
    f.for_each([&](const Clause& c, std::size_t n) {
      EXPECT_EQ(n, 1u);
      EXPECT_EQ(c.size(), static_cast<std::size_t>(std::min(3, vars)));
    });
  }
}

TEST(GenRandomUnsat, GivesUp) {
  try {
    gen_random_unsat(20, 0.5, 1, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGiveUp);
  }
}
