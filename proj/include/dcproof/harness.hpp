#ifndef DCPROOF_HARNESS_HPP
#define DCPROOF_HARNESS_HPP

#include <cstdint>
#include <vector>

#include "dcproof/core.hpp"
#include "dcproof/io.hpp"

namespace dcproof {

enum class SolveResult { kSat, kUnsat };

struct SolveOutcome {
  SolveResult result = SolveResult::kSat;
  // kSat: assignment[v] is the value of variable v (index 0 unused).
  std::vector<bool> assignment;
  // kUnsat: learned clauses in order, then the empty clause. No deletions.
  Refutation refutation;
  std::uint64_t conflicts = 0;
};

// Small CDCL solver with first-UIP learning that logs a DRUP proof. The
// asserting literal of each learned clause is written first. Deterministic
// given (formula, seed). Throws Error(kResourceLimit) once more than
// max_conflicts conflicts occur; 0 means no limit.
SolveOutcome solve_drup(const Formula& formula, std::uint64_t seed = 0,
                        std::uint64_t max_conflicts = 0);

bool satisfies(const Formula& formula, const std::vector<bool>& assignment);

// Truth-table check, 64 assignments per word. Throws Error(kInvalidArgument)
// above 30 variables.
bool brute_force_satisfiable(const Formula& formula);

// The 2^depth cubes over the `depth` most frequent variables (ties go to the
// lower index), decided in that order, positive branch first. Depth 0 gives
// the single empty cube. Throws Error(kDepthTooLarge) when depth exceeds the
// number of variables that occur in the formula.
std::vector<Cube> split(const Formula& formula, std::size_t depth);

// Random unsatisfiable CNF with clauses of width min(3, vars), made of
// distinct clauses, about ratio * vars of them. Throws Error(kGiveUp) after
// max_attempts satisfiable samples.
Formula gen_random_unsat(int vars, double ratio, std::uint64_t seed,
                         int max_attempts = 1000);

}  // namespace dcproof

#endif  // DCPROOF_HARNESS_HPP
