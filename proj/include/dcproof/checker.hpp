#ifndef DCPROOF_CHECKER_HPP
#define DCPROOF_CHECKER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "dcproof/core.hpp"

namespace dcproof {

// The formula unit-propagates to one containing the empty clause.
struct Conflict {
  friend bool operator==(Conflict, Conflict) = default;
};

// Either the unique propagation fixpoint or a conflict.
using PropagationOutcome = std::variant<Formula, Conflict>;

inline bool is_conflict(const PropagationOutcome& o) {
  return std::holds_alternative<Conflict>(o);
}

// One propagation step on `lit`: every clause containing `lit` is dropped,
// `~lit` is removed from the rest, and {lit} is added. Applicable iff some
// clause {lit, l1, ..., lk} has every {~li} as a unit clause of the formula;
// std::nullopt otherwise.
std::optional<Formula> propagate_step(const Formula& formula, Literal lit);

// Indexed propagation; the result equals the step-by-step definition.
PropagationOutcome propagate_fixpoint(const Formula& formula);

// The step-by-step definition itself, choosing the next literal to propagate
// uniformly at random among the applicable ones. Slow; meant for testing
// that the fixpoint does not depend on the propagation order.
PropagationOutcome propagate_fixpoint_shuffled(const Formula& formula,
                                               std::uint64_t seed);

// Asymmetric tautology: the formula plus the unit negation of every literal
// of `clause` propagates to a conflict.
bool has_at(const Formula& formula, const Clause& clause);

// Resolution asymmetric tautology on `pivot`: every resolvent with a clause
// containing ~pivot has AT. Vacuously true without such clauses. Clause
// multiplicity does not matter. Throws Error(kPivotNotInClause).
bool has_rat(const Formula& formula, const Clause& clause, Literal pivot);

// Deleting an absent clause fails the check in strict mode and is skipped in
// permissive mode.
enum class CheckMode { kStrict, kPermissive };

enum class Verdict { kValid, kInvalid };

enum class FailReason {
  kNone,
  kNotAT,
  kNotRAT,
  kMissingEmptyClause,
  kDeletionAbsent,
};

std::string_view to_string(Verdict v);
std::string_view to_string(FailReason r);
std::string_view to_string(CheckMode m);

struct CheckStats {
  std::size_t steps_checked = 0;
  std::size_t additions = 0;
  std::size_t deletions = 0;
  std::size_t at_steps = 0;   // additions justified by AT
  std::size_t rat_steps = 0;  // additions that needed RAT
  std::uint64_t propagations = 0;
  double wall_ms = 0;
};

struct CheckReport {
  Verdict verdict = Verdict::kInvalid;
  std::optional<std::size_t> failing_step;  // 1-based
  FailReason reason = FailReason::kNone;
  // 1-based index of the empty clause that ended the check.
  std::optional<std::size_t> empty_clause_step;
  // Steps after the empty clause; ignored.
  std::size_t ignored_trailing_steps = 0;
  // 1-based indices of deletions of absent clauses (permissive mode).
  std::vector<std::size_t> skipped_deletions;
  CheckStats stats;

  bool valid() const { return verdict == Verdict::kValid; }
};

// Replays the proof over the formula. Every addition must have RAT on its
// first literal (AT for the empty clause), and checking ends successfully at
// the first added empty clause.
CheckReport check_refutation(const Formula& formula, const Refutation& proof,
                             CheckMode mode = CheckMode::kStrict);

// No clause is deleted more often than it is added, counting occurrences over
// the whole sequence regardless of order.
bool is_preserving(const Refutation& proof);

// The first clause (by step order) that is deleted more often than added.
std::optional<Clause> first_unpreserved_clause(const Refutation& proof);

}  // namespace dcproof

#endif  // DCPROOF_CHECKER_HPP
