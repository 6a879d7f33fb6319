#ifndef DCPROOF_TESTS_FIXTURES_HPP
#define DCPROOF_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "dcproof/checker.hpp"
#include "dcproof/harness.hpp"
#include "dcproof/io.hpp"

namespace fixtures {

// Splits the formula and refutes every cube with the built-in solver.
inline dcproof::ProofBundle solved_bundle(const dcproof::Formula& f,
                                          std::size_t depth,
                                          std::uint64_t seed = 0) {
  dcproof::ProofBundle b;
  b.instance = f;
  for (const dcproof::Cube& cube : dcproof::split(f, depth)) {
    dcproof::SolveOutcome s =
        dcproof::solve_drup(dcproof::with_cube_units(f, cube), seed);
    if (s.result != dcproof::SolveResult::kUnsat) {
      throw std::logic_error("satisfiable cube " + dcproof::to_string(cube));
    }
    b.entries.push_back({cube, std::move(s.refutation), {}});
  }
  std::sort(b.entries.begin(), b.entries.end(),
            [](const auto& x, const auto& y) { return x.cube < y.cube; });
  return b;
}

// A preserving DRAT refutation of `f` (assumed unsatisfiable) that starts
// with clauses admitted by RAT, deletes some of them again, and finishes with
// a solver refutation of what is left.
inline dcproof::Refutation drat_refutation(const dcproof::Formula& f,
                                           std::mt19937_64& rng) {
  using namespace dcproof;
  Refutation proof;
  Formula cur = f;
  std::vector<Clause> added;
  const Var n = std::max<Var>(f.max_var(), 1);
  for (int tries = 0; tries < 40 && added.size() < 6; ++tries) {
    std::vector<Literal> lits;
    const int width = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < width; ++k) {
      // Fresh variables make RAT additions that are not AT likely.
      const Var v = 1 + static_cast<Var>(rng() % (n + 3));
      lits.emplace_back((rng() & 1) ? v : -v);
    }
    Clause c(std::move(lits));
    if (c.is_tautology() || !has_rat(cur, c, c.front())) continue;
    proof.push_back(ProofStep::add(c));
    cur.add(c);
    added.push_back(c);
  }
  for (const Clause& c : added) {
    if (rng() % 3 == 0) {
      proof.push_back(ProofStep::del(c));
      cur.remove(c);
    }
  }
  SolveOutcome s = solve_drup(cur, rng());
  if (s.result != SolveResult::kUnsat) {
    throw std::logic_error("drat_refutation: formula is satisfiable");
  }
  proof.insert(proof.end(), s.refutation.begin(), s.refutation.end());
  return proof;
}

}  // namespace fixtures

#endif  // DCPROOF_TESTS_FIXTURES_HPP
