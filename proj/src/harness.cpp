#include "dcproof/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace dcproof {
namespace {

constexpr int kNoReason = -1;

class Solver {
 public:
  Solver(const Formula& formula, std::uint64_t seed, std::uint64_t max_conflicts)
      : max_conflicts_(max_conflicts) {
    n_ = formula.max_var();
    val_.assign(n_ + 1, 0);
    level_.assign(n_ + 1, 0);
    reason_.assign(n_ + 1, kNoReason);
    seen_.assign(n_ + 1, 0);
    phase_.assign(n_ + 1, false);
    activity_.assign(n_ + 1, 0.0);
    watches_.resize(2 * static_cast<std::size_t>(n_) + 2);
    std::mt19937_64 rng(seed);
    for (Var v = 1; v <= n_; ++v) activity_[v] = (rng() % 1000) * 1e-6;

    formula.for_each([&](const Clause& c, std::size_t) {
      if (c.empty()) {
        trivially_unsat_ = true;
      } else if (c.is_tautology()) {
        return;
      } else if (c.size() == 1) {
        units_.push_back(c.front());
      } else {
        attach({c.begin(), c.end()});
      }
    });
  }

  SolveOutcome run() {
    SolveOutcome out;
    if (trivially_unsat_ || !assert_units()) return unsat(out);
    while (true) {
      const int confl = propagate();
      if (confl != kNoReason) {
        ++out.conflicts;
        if (max_conflicts_ && out.conflicts > max_conflicts_) {
          throw Error(ErrorCode::kResourceLimit,
                      "solver gave up after " + std::to_string(max_conflicts_) +
                          " conflicts");
        }
        if (trail_lim_.empty()) return unsat(out);
        auto [learnt, back] = analyze(confl);
        backtrack(back);
        out.refutation.push_back(ProofStep::add(Clause(learnt)));
        if (learnt.size() == 1) {
          assign(learnt[0], kNoReason);
        } else {
          assign(learnt[0], attach(learnt));
        }
        inc_ *= 1.05;
        continue;
      }
      const Var v = pick();
      if (v == 0) break;
      trail_lim_.push_back(trail_.size());
      assign(Literal(phase_[v] ? v : -v), kNoReason);
    }
    out.result = SolveResult::kSat;
    out.assignment.assign(n_ + 1, false);
    for (Var v = 1; v <= n_; ++v) out.assignment[v] = val_[v] > 0;
    out.refutation.clear();
    return out;
  }

 private:
  SolveOutcome& unsat(SolveOutcome& out) {
    out.result = SolveResult::kUnsat;
    out.refutation.push_back(ProofStep::add(Clause()));
    return out;
  }

  int value(Literal lit) const {
    const int v = val_[lit.var()];
    return lit.positive() ? v : -v;
  }

  int attach(std::vector<Literal> lits) {
    const int id = static_cast<int>(clauses_.size());
    watches_[lits[0].code()].push_back(id);
    watches_[lits[1].code()].push_back(id);
    clauses_.push_back(std::move(lits));
    return id;
  }

  void assign(Literal lit, int reason) {
    const Var v = lit.var();
    val_[v] = lit.positive() ? 1 : -1;
    level_[v] = static_cast<int>(trail_lim_.size());
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  bool assert_units() {
    for (Literal u : units_) {
      if (value(u) < 0) return false;
      if (value(u) == 0) assign(u, kNoReason);
    }
    return true;
  }

  // A clause sits in watches_[l] for both of its first two literals and is
  // visited when l becomes false. Implied literals end up in position 0.
  int propagate() {
    while (head_ < trail_.size()) {
      const Literal falsified = ~trail_[head_++];
      auto& ws = watches_[falsified.code()];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        const int id = ws[i++];
        auto& c = clauses_[id];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (value(c[0]) > 0) {
          ws[j++] = id;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) >= 0) {
            std::swap(c[1], c[k]);
            watches_[c[1].code()].push_back(id);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = id;
        if (value(c[0]) < 0) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          head_ = trail_.size();
          return id;
        }
        assign(c[0], id);
      }
      ws.resize(j);
    }
    return kNoReason;
  }

  void bump(Var v) {
    activity_[v] += inc_;
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      inc_ *= 1e-100;
    }
  }

  std::pair<std::vector<Literal>, std::size_t> analyze(int confl) {
    const int dl = static_cast<int>(trail_lim_.size());
    std::vector<Literal> learnt(1, Literal(1));
    int open = 0;
    std::size_t idx = trail_.size();
    bool first = true;
    Literal p(1);
    while (true) {
      const auto& c = clauses_[confl];
      for (std::size_t k = first ? 0 : 1; k < c.size(); ++k) {
        const Var v = c[k].var();
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump(v);
        if (level_[v] == dl) {
          ++open;
        } else {
          learnt.push_back(c[k]);
        }
      }
      first = false;
      do {
        --idx;
      } while (!seen_[trail_[idx].var()]);
      p = trail_[idx];
      seen_[p.var()] = 0;
      confl = reason_[p.var()];
      if (--open == 0) break;
    }
    learnt[0] = ~p;
    for (std::size_t k = 1; k < learnt.size(); ++k) seen_[learnt[k].var()] = 0;

    std::size_t back = 0;
    if (learnt.size() > 1) {
      std::size_t top = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k) {
        if (level_[learnt[k].var()] > level_[learnt[top].var()]) top = k;
      }
      std::swap(learnt[1], learnt[top]);
      back = static_cast<std::size_t>(level_[learnt[1].var()]);
    }
    return {std::move(learnt), back};
  }

  void backtrack(std::size_t level) {
    if (trail_lim_.size() <= level) return;
    const std::size_t keep = trail_lim_[level];
    for (std::size_t k = trail_.size(); k-- > keep;) {
      const Var v = trail_[k].var();
      phase_[v] = val_[v] > 0;
      val_[v] = 0;
      reason_[v] = kNoReason;
    }
    trail_.erase(trail_.begin() + keep, trail_.end());
    trail_lim_.resize(level);
    head_ = keep;
  }

  Var pick() const {
    Var best = 0;
    for (Var v = 1; v <= n_; ++v) {
      if (val_[v] == 0 && (best == 0 || activity_[v] > activity_[best])) best = v;
    }
    return best;
  }

  Var n_ = 0;
  std::uint64_t max_conflicts_;
  bool trivially_unsat_ = false;
  std::vector<Literal> units_;
  std::vector<std::vector<Literal>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<std::int8_t> val_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<std::uint8_t> seen_;
  std::vector<bool> phase_;
  std::vector<double> activity_;
  double inc_ = 1.0;
  std::vector<Literal> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t head_ = 0;
};

std::uint64_t distinct_clause_count(int vars, int width) {
  double n = 1;
  for (int i = 0; i < width; ++i) n = n * (vars - i) / (i + 1);
  n *= std::ldexp(1.0, width);
  return n > 1e18 ? static_cast<std::uint64_t>(1e18)
                  : static_cast<std::uint64_t>(std::llround(n));
}

}  // namespace

SolveOutcome solve_drup(const Formula& formula, std::uint64_t seed,
                        std::uint64_t max_conflicts) {
  return Solver(formula, seed, max_conflicts).run();
}

bool satisfies(const Formula& formula, const std::vector<bool>& assignment) {
  bool ok = true;
  formula.for_each([&](const Clause& c, std::size_t) {
    if (!ok) return;
    ok = std::any_of(c.begin(), c.end(), [&](Literal l) {
      return static_cast<std::size_t>(l.var()) < assignment.size() &&
             assignment[l.var()] == l.positive();
    });
  });
  return ok;
}

bool brute_force_satisfiable(const Formula& formula) {
  const Var n = formula.max_var();
  if (n > 30) {
    throw Error(ErrorCode::kInvalidArgument,
                "truth table limited to 30 variables, got " + std::to_string(n));
  }
  if (formula.contains(Clause())) return false;
  static constexpr std::uint64_t kPattern[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  const std::uint64_t valid =
      n >= 6 ? ~0ull : (1ull << (1u << static_cast<unsigned>(n))) - 1;
  const std::uint64_t blocks = n > 6 ? 1ull << (n - 6) : 1;

  std::vector<std::vector<Literal>> clauses;
  formula.for_each([&](const Clause& c, std::size_t) {
    if (!c.is_tautology()) clauses.emplace_back(c.begin(), c.end());
  });
  for (std::uint64_t block = 0; block < blocks; ++block) {
    std::uint64_t sat = valid;
    for (const auto& c : clauses) {
      std::uint64_t any = 0;
      for (Literal l : c) {
        const int b = l.var() - 1;
        std::uint64_t word =
            b < 6 ? kPattern[b] : (((block >> (b - 6)) & 1) ? ~0ull : 0ull);
        any |= l.positive() ? word : ~word;
      }
      sat &= any;
      if (!sat) break;
    }
    if (sat) return true;
  }
  return false;
}

std::vector<Cube> split(const Formula& formula, std::size_t depth) {
  std::vector<std::uint64_t> count(formula.max_var() + 1, 0);
  formula.for_each([&](const Clause& c, std::size_t n) {
    for (Literal l : c) count[l.var()] += n;
  });
  std::vector<Var> vars;
  for (Var v = 1; v < static_cast<Var>(count.size()); ++v) {
    if (count[v]) vars.push_back(v);
  }
  if (depth > vars.size() || depth > 30) {
    throw Error(ErrorCode::kDepthTooLarge,
                "split depth " + std::to_string(depth) + " exceeds the " +
                    std::to_string(vars.size()) + " variables in the formula");
  }
  std::stable_sort(vars.begin(), vars.end(),
                   [&](Var a, Var b) { return count[a] > count[b]; });

  std::vector<Cube> cubes;
  cubes.reserve(std::size_t{1} << depth);
  for (std::uint64_t mask = 0; mask < (1ull << depth); ++mask) {
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < depth; ++i) {
      const bool neg = (mask >> (depth - 1 - i)) & 1;
      lits.emplace_back(neg ? -vars[i] : vars[i]);
    }
    cubes.emplace_back(std::move(lits));
  }
  return cubes;
}

Formula gen_random_unsat(int vars, double ratio, std::uint64_t seed,
                         int max_attempts) {
  if (vars < 1 || !(ratio > 0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "need vars >= 1 and a positive clause ratio");
  }
  const int width = std::min(3, vars);
  const std::uint64_t cap = distinct_clause_count(vars, width);
  const std::uint64_t want = std::min<std::uint64_t>(
      cap, std::max<std::int64_t>(1, std::llround(ratio * vars)));

  std::mt19937_64 rng(seed);
  std::vector<Var> pool(vars);
  std::iota(pool.begin(), pool.end(), 1);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Formula f;
    while (f.total_clauses() < want) {
      std::vector<Literal> lits;
      for (int k = 0; k < width; ++k) {
        const std::size_t pick = k + rng() % (vars - k);
        std::swap(pool[k], pool[pick]);
        lits.emplace_back((rng() & 1) ? pool[k] : -pool[k]);
      }
      Clause c(std::move(lits));
      if (!f.contains(c)) f.add(std::move(c));
    }
    const bool sat = vars <= 24
                         ? brute_force_satisfiable(f)
                         : solve_drup(f, seed).result == SolveResult::kSat;
    if (!sat) return f;
  }
  throw Error(ErrorCode::kGiveUp,
              "no unsatisfiable sample in " + std::to_string(max_attempts) +
                  " attempts (vars=" + std::to_string(vars) + ")");
}

}  // namespace dcproof
