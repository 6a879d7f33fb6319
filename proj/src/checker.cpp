#include "dcproof/checker.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>
#include <unordered_map>

#include "propagator.hpp"

namespace dcproof {
namespace {

using detail::InstanceId;
using detail::Propagator;

void load(Propagator& prop, const Formula& formula) {
  formula.for_each([&](const Clause& c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) prop.add(c);
  });
}

Clause without(const Clause& c, Literal lit) {
  std::vector<Literal> lits;
  lits.reserve(c.size());
  for (Literal l : c) {
    if (l != lit) lits.push_back(l);
  }
  return Clause(std::move(lits));
}

std::set<Literal> unit_literals(const Formula& formula) {
  std::set<Literal> units;
  formula.for_each([&](const Clause& c, std::size_t) {
    if (c.size() == 1) units.insert(c.front());
  });
  return units;
}

bool step_applicable(const Formula& formula, Literal lit,
                     const std::set<Literal>& units) {
  bool found = false;
  formula.for_each([&](const Clause& c, std::size_t) {
    if (found || !c.contains(lit)) return;
    found = std::all_of(c.begin(), c.end(), [&](Literal other) {
      return other == lit || units.contains(~other);
    });
  });
  return found;
}

Formula apply_step(const Formula& formula, Literal lit) {
  Formula next;
  formula.for_each([&](const Clause& c, std::size_t n) {
    if (c.contains(lit)) return;
    next.add(c.contains(~lit) ? without(c, ~lit) : c, n);
  });
  next.add(Clause(std::vector{lit}));
  return next;
}

bool has_empty_clause(const Formula& formula) {
  return formula.contains(Clause());
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::optional<Formula> propagate_step(const Formula& formula, Literal lit) {
  if (!step_applicable(formula, lit, unit_literals(formula))) {
    return std::nullopt;
  }
  return apply_step(formula, lit);
}

PropagationOutcome propagate_fixpoint(const Formula& formula) {
  Propagator prop;
  load(prop, formula);
  std::vector<Literal> assigned;
  if (!prop.closure(&assigned)) return Conflict{};

  std::set<Literal> truth(assigned.begin(), assigned.end());
  Formula fixpoint;
  formula.for_each([&](const Clause& c, std::size_t n) {
    std::vector<Literal> kept;
    for (Literal lit : c) {
      if (truth.contains(lit)) return;
      if (!truth.contains(~lit)) kept.push_back(lit);
    }
    fixpoint.add(Clause(std::move(kept)), n);
  });
  for (Literal lit : assigned) fixpoint.add(Clause(std::vector{lit}));
  return fixpoint;
}

PropagationOutcome propagate_fixpoint_shuffled(const Formula& formula,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Formula current = formula;
  while (true) {
    if (has_empty_clause(current)) return Conflict{};
    const std::set<Literal> units = unit_literals(current);
    std::set<Literal> candidates;
    current.for_each([&](const Clause& c, std::size_t) {
      for (Literal lit : c) {
        if (!candidates.contains(lit) && step_applicable(current, lit, units)) {
          candidates.insert(lit);
        }
      }
    });
    std::vector<Formula> moves;
    for (Literal lit : candidates) {
      Formula next = apply_step(current, lit);
      if (!(next == current)) moves.push_back(std::move(next));
    }
    if (moves.empty()) return current;
    current = std::move(moves[rng() % moves.size()]);
  }
}

bool has_at(const Formula& formula, const Clause& clause) {
  Propagator prop;
  load(prop, formula);
  return prop.refutes_negation(clause.literals());
}

bool has_rat(const Formula& formula, const Clause& clause, Literal pivot) {
  if (!clause.contains(pivot)) {
    throw Error(ErrorCode::kPivotNotInClause,
                "pivot " + std::to_string(pivot.value()) +
                    " is not in the clause");
  }
  Propagator prop;
  load(prop, formula);
  return prop.refutes_negation(clause.literals()) || prop.rat(clause, pivot);
}

std::string_view to_string(Verdict v) {
  return v == Verdict::kValid ? "valid" : "invalid";
}

std::string_view to_string(FailReason r) {
  switch (r) {
    case FailReason::kNone: return "none";
    case FailReason::kNotAT: return "not_at";
    case FailReason::kNotRAT: return "not_rat";
    case FailReason::kMissingEmptyClause: return "missing_empty_clause";
    case FailReason::kDeletionAbsent: return "deletion_absent";
  }
  return "unknown";
}

std::string_view to_string(CheckMode m) {
  return m == CheckMode::kStrict ? "strict" : "permissive";
}

CheckReport check_refutation(const Formula& formula, const Refutation& proof,
                             CheckMode mode) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport report;
  Propagator prop;
  std::unordered_map<Clause, std::vector<InstanceId>, ClauseHash> live;
  formula.for_each([&](const Clause& c, std::size_t n) {
    auto& stack = live[c];
    for (std::size_t i = 0; i < n; ++i) stack.push_back(prop.add(c));
  });

  auto fail = [&](std::size_t step, FailReason reason) {
    report.verdict = Verdict::kInvalid;
    report.failing_step = step;
    report.reason = reason;
  };

  bool done = false;
  for (std::size_t i = 0; i < proof.size() && !done; ++i) {
    const ProofStep& step = proof[i];
    ++report.stats.steps_checked;
    if (step.is_add()) {
      ++report.stats.additions;
      const Clause& c = step.clause;
      if (prop.refutes_negation(c.literals())) {
        ++report.stats.at_steps;
      } else if (!c.empty() && prop.rat(c, c.front())) {
        ++report.stats.rat_steps;
      } else {
        fail(i + 1, c.empty() ? FailReason::kNotAT : FailReason::kNotRAT);
        break;
      }
      if (c.empty()) {
        report.verdict = Verdict::kValid;
        report.empty_clause_step = i + 1;
        report.ignored_trailing_steps = proof.size() - i - 1;
        done = true;
        break;
      }
      live[c].push_back(prop.add(c));
    } else {
      ++report.stats.deletions;
      auto it = live.find(step.clause);
      if (it == live.end() || it->second.empty()) {
        if (mode == CheckMode::kStrict) {
          fail(i + 1, FailReason::kDeletionAbsent);
          break;
        }
        report.skipped_deletions.push_back(i + 1);
        continue;
      }
      prop.deactivate(it->second.back());
      it->second.pop_back();
    }
  }
  if (!done && !report.failing_step) {
    report.verdict = Verdict::kInvalid;
    report.reason = FailReason::kMissingEmptyClause;
  }
  report.stats.propagations = prop.propagations();
  report.stats.wall_ms = ms_since(t0);
  return report;
}

namespace {

std::unordered_map<Clause, std::pair<std::size_t, std::size_t>, ClauseHash>
count_occurrences(const Refutation& proof) {
  std::unordered_map<Clause, std::pair<std::size_t, std::size_t>, ClauseHash>
      counts;
  for (const ProofStep& step : proof) {
    auto& [adds, dels] = counts[step.clause];
    ++(step.is_add() ? adds : dels);
  }
  return counts;
}

}  // namespace

bool is_preserving(const Refutation& proof) {
  for (const auto& [clause, n] : count_occurrences(proof)) {
    if (n.second > n.first) return false;
  }
  return true;
}

std::optional<Clause> first_unpreserved_clause(const Refutation& proof) {
  const auto counts = count_occurrences(proof);
  for (const ProofStep& step : proof) {
    const auto& n = counts.at(step.clause);
    if (n.second > n.first) return step.clause;
  }
  return std::nullopt;
}

}  // namespace dcproof
