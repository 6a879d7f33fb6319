#ifndef DCPROOF_TRIMMER_HPP
#define DCPROOF_TRIMMER_HPP

#include <cstddef>

#include "dcproof/checker.hpp"
#include "dcproof/core.hpp"

namespace dcproof {

struct TrimOptions {
  // Emit a deletion right after the last use of each kept lemma. Moving an
  // existing deletion earlier is free; new deletions may spend at most half
  // of the steps and bytes the trim removed, so output never grows.
  bool resynthesize_deletions = true;
  // How deletions of absent clauses in the input are treated.
  CheckMode input_mode = CheckMode::kStrict;
};

struct TrimReport {
  std::size_t input_steps = 0;
  std::size_t output_steps = 0;
  std::size_t input_bytes = 0;
  std::size_t output_bytes = 0;
  std::size_t core_clauses = 0;
  std::size_t passes = 0;
  double wall_ms = 0;
};

struct TrimResult {
  Refutation proof;
  Formula core;  // sub-multiset of the input formula
  TrimReport report;
};

// Keeps only the additions the final empty clause depends on, found by
// checking backward from the empty clause with core-first propagation.
// Passes repeat until one removes nothing, so the result is a fixpoint: all of
// its additions are needed, and it checks against `core` alone.
//
// Throws Error(kInvalidInput) if the proof does not check, and
// Error(kTrimInternalMismatch) if the trimmed proof fails its re-check.
TrimResult trim(const Formula& formula, const Refutation& proof,
                const TrimOptions& options = {});

Formula unsat_core(const Formula& formula, const Refutation& proof,
                   const TrimOptions& options = {});

}  // namespace dcproof

#endif  // DCPROOF_TRIMMER_HPP
