#include "dcproof/trimmer.hpp"

#include <algorithm>
#include <chrono>
#include <string>
#include <unordered_map>

#include "dcproof/io.hpp"
#include "propagator.hpp"

namespace dcproof {
namespace {

using detail::InstanceId;
using detail::kNoInstance;
using detail::Propagator;

constexpr std::size_t kNever = static_cast<std::size_t>(-1);

struct Pass {
  Refutation proof;
  Formula core;
  std::size_t adds_in = 0;
  std::size_t adds_kept = 0;
};

[[noreturn]] void mismatch(const std::string& what) {
  throw Error(ErrorCode::kTrimInternalMismatch, "trim: " + what);
}

// One backward marking pass over proof[0..end], where proof[end] is the
// empty clause that ends the refutation.
Pass run_pass(const Formula& formula, const Refutation& proof, std::size_t end,
              bool resynthesize) {
  Propagator prop;
  std::unordered_map<Clause, std::vector<InstanceId>, ClauseHash> live;

  formula.for_each([&](const Clause& c, std::size_t n) {
    auto& stack = live[c];
    for (std::size_t k = 0; k < n; ++k) stack.push_back(prop.add(c));
  });
  const InstanceId originals = static_cast<InstanceId>(prop.size());
  prop.set_core_first(true, originals);

  std::vector<InstanceId> step_inst(end + 1, kNoInstance);
  std::vector<InstanceId> del_target(end + 1, kNoInstance);
  for (std::size_t i = 0; i < end; ++i) {
    const ProofStep& step = proof[i];
    if (step.is_add()) {
      step_inst[i] = prop.add(step.clause);
      live[step.clause].push_back(step_inst[i]);
    } else {
      auto it = live.find(step.clause);
      if (it == live.end() || it->second.empty()) continue;
      del_target[i] = it->second.back();
      it->second.pop_back();
      prop.deactivate(del_target[i]);
    }
  }

  std::vector<std::uint8_t> marked(prop.size(), 0);
  std::vector<std::size_t> last_use(prop.size(), kNever);
  auto use = [&](InstanceId id, std::size_t at) {
    if (marked[id]) return;
    marked[id] = 1;
    last_use[id] = at;
    prop.mark_core(id);
  };

  std::vector<InstanceId> deps;
  std::vector<InstanceId> candidates;
  if (!prop.refutes_negation({}, &deps)) {
    mismatch("empty clause at step " + std::to_string(end + 1) +
             " does not check");
  }
  for (InstanceId d : deps) use(d, end);

  for (std::size_t i = end; i-- > 0;) {
    const ProofStep& step = proof[i];
    if (!step.is_add()) {
      if (del_target[i] == kNoInstance) continue;
      prop.activate(del_target[i]);
      // A deleted input clause stays in the core so the deletion still finds
      // it when the proof is checked against the core alone.
      if (del_target[i] < originals) use(del_target[i], i);
      continue;
    }
    const InstanceId id = step_inst[i];
    prop.deactivate(id);
    if (!marked[id]) continue;
    const Clause& c = step.clause;
    deps.clear();
    if (!prop.refutes_negation(c.literals(), &deps)) {
      deps.clear();
      candidates.clear();
      if (c.empty() || !prop.rat(c, c.front(), &deps, &candidates)) {
        mismatch("lemma at step " + std::to_string(i + 1) + " does not check");
      }
      for (InstanceId d : candidates) use(d, i);
    }
    for (InstanceId d : deps) use(d, i);
  }

  // Deletions to place right after a lemma's last use.
  std::vector<std::vector<InstanceId>> delete_after(end + 1);
  std::vector<std::uint8_t> has_input_delete(prop.size(), 0);
  for (std::size_t i = 0; i < end; ++i) {
    if (del_target[i] != kNoInstance) has_input_delete[del_target[i]] = 1;
  }

  Pass pass;
  std::size_t base_steps = 0;
  std::size_t base_bytes = 0;
  for (std::size_t i = 0; i <= end; ++i) {
    const ProofStep& step = proof[i];
    bool kept = false;
    if (step.is_add()) {
      ++pass.adds_in;
      kept = i == end || marked[step_inst[i]];
    } else if (del_target[i] != kNoInstance) {
      kept = del_target[i] < originals || marked[del_target[i]];
    }
    if (kept) {
      ++base_steps;
      base_bytes += serialized_size(step);
    }
  }

  if (resynthesize) {
    std::vector<InstanceId> fresh;
    for (InstanceId id = originals; id < prop.size(); ++id) {
      if (!marked[id] || last_use[id] == kNever || last_use[id] >= end) continue;
      if (has_input_delete[id]) {
        delete_after[last_use[id]].push_back(id);
      } else {
        fresh.push_back(id);
      }
    }
    std::stable_sort(fresh.begin(), fresh.end(), [&](InstanceId a, InstanceId b) {
      return last_use[a] < last_use[b];
    });
    const std::size_t input_steps = proof.size();
    const std::size_t input_bytes = serialized_size(proof);
    std::size_t step_budget = (input_steps - std::min(input_steps, base_steps)) / 2;
    std::size_t byte_budget = (input_bytes - std::min(input_bytes, base_bytes)) / 2;
    for (InstanceId id : fresh) {
      const std::size_t bytes = serialized_size(ProofStep::del(prop.clause(id)));
      if (step_budget == 0) break;
      if (bytes > byte_budget) continue;
      --step_budget;
      byte_budget -= bytes;
      delete_after[last_use[id]].push_back(id);
    }
    for (auto& ids : delete_after) std::sort(ids.begin(), ids.end());
  }

  std::vector<std::uint8_t> gone(prop.size(), 0);
  for (std::size_t i = 0; i <= end; ++i) {
    const ProofStep& step = proof[i];
    if (step.is_add()) {
      if (i == end || marked[step_inst[i]]) {
        pass.proof.push_back(step);
        ++pass.adds_kept;
      }
    } else {
      const InstanceId target = del_target[i];
      if (target != kNoInstance && !gone[target] &&
          (target < originals || marked[target])) {
        pass.proof.push_back(step);
        gone[target] = 1;
      }
    }
    for (InstanceId id : delete_after[i]) {
      pass.proof.push_back(ProofStep::del(prop.clause(id)));
      gone[id] = 1;
    }
  }

  for (InstanceId id = 0; id < originals; ++id) {
    if (marked[id]) pass.core.add(prop.clause(id));
  }
  return pass;
}

}  // namespace

TrimResult trim(const Formula& formula, const Refutation& proof,
                const TrimOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const CheckReport input = check_refutation(formula, proof, options.input_mode);
  if (!input.valid()) {
    std::string where = input.failing_step
                            ? "step " + std::to_string(*input.failing_step)
                            : std::string("end of proof");
    throw Error(ErrorCode::kInvalidInput,
                "trim: input proof is invalid at " + where + " (" +
                    std::string(to_string(input.reason)) + ")");
  }

  TrimResult result;
  result.report.input_steps = proof.size();
  result.report.input_bytes = serialized_size(proof);

  Refutation current;
  const Refutation* source = &proof;
  std::size_t end = *input.empty_clause_step - 1;
  while (true) {
    Pass pass = run_pass(formula, *source, end, options.resynthesize_deletions);
    ++result.report.passes;
    const CheckReport recheck =
        check_refutation(formula, pass.proof, CheckMode::kStrict);
    if (!recheck.valid() || recheck.ignored_trailing_steps != 0) {
      mismatch("trimmed proof fails its re-check at step " +
               std::to_string(recheck.failing_step.value_or(0)) + " (" +
               std::string(to_string(recheck.reason)) + ")");
    }
    const bool fixpoint = pass.adds_kept == pass.adds_in;
    current = std::move(pass.proof);
    result.core = std::move(pass.core);
    if (fixpoint) break;
    source = &current;
    end = current.size() - 1;
  }
  result.proof = std::move(current);
  result.report.output_steps = result.proof.size();
  result.report.output_bytes = serialized_size(result.proof);
  result.report.core_clauses = result.core.total_clauses();
  result.report.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
  return result;
}

Formula unsat_core(const Formula& formula, const Refutation& proof,
                   const TrimOptions& options) {
  return trim(formula, proof, options).core;
}

}  // namespace dcproof
