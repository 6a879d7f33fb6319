#include "propagator.hpp"

#include <algorithm>
#include <unordered_set>

namespace dcproof::detail {

void Propagator::ensure_var(Var v) {
  const std::size_t codes = 2 * static_cast<std::size_t>(v) + 2;
  if (val_.size() >= codes) return;
  val_.resize(codes, 0);
  watches_.resize(codes);
  occurs_.resize(codes);
  reason_.resize(static_cast<std::size_t>(v) + 1, kNoInstance);
  seen_.resize(static_cast<std::size_t>(v) + 1, 0);
}

InstanceId Propagator::add(const Clause& clause, bool active) {
  const InstanceId id = static_cast<InstanceId>(inst_.size());
  ensure_var(clause.max_var());
  Instance& c = inst_.emplace_back();
  c.clause = clause;
  c.lits.assign(clause.begin(), clause.end());
  for (Literal lit : c.lits) occurs_[lit.code()].push_back(id);
  if (c.lits.size() >= 2) {
    watches_[c.lits[0].code()].push_back(id);
    watches_[c.lits[1].code()].push_back(id);
  }
  if (active) activate(id);
  return id;
}

void Propagator::activate(InstanceId id) {
  Instance& c = inst_[id];
  if (c.active) return;
  c.active = true;
  if (c.lits.size() == 1) {
    c.slot = units_.size();
    units_.push_back(id);
  } else if (c.lits.empty()) {
    c.slot = empties_.size();
    empties_.push_back(id);
  }
}

void Propagator::deactivate(InstanceId id) {
  Instance& c = inst_[id];
  if (!c.active) return;
  c.active = false;
  auto drop = [&](std::vector<InstanceId>& list) {
    InstanceId last = list.back();
    list[c.slot] = last;
    inst_[last].slot = c.slot;
    list.pop_back();
  };
  if (c.lits.size() == 1) {
    drop(units_);
  } else if (c.lits.empty()) {
    drop(empties_);
  }
}

void Propagator::assign(Literal lit, InstanceId reason) {
  val_[lit.code()] = 1;
  val_[(~lit).code()] = -1;
  reason_[static_cast<std::size_t>(lit.var())] = reason;
  trail_.push_back(lit);
  ++propagations_;
}

void Propagator::backtrack() {
  for (Literal lit : trail_) {
    val_[lit.code()] = 0;
    val_[(~lit).code()] = 0;
    reason_[static_cast<std::size_t>(lit.var())] = kNoInstance;
  }
  trail_.clear();
}

int Propagator::tier(InstanceId id) const {
  if (!core_first_ || inst_[id].core) return 0;
  return id < free_below_ ? 1 : 2;
}

bool Propagator::start(std::span<const Literal> lits) {
  conflict_ = kNoInstance;
  if (!empties_.empty()) {
    conflict_ = empties_.front();
    return true;
  }
  for (Literal lit : lits) ensure_var(lit.var());
  for (Literal lit : lits) {
    const Literal neg = ~lit;
    const std::int8_t v = value(neg);
    if (v > 0) continue;
    if (v < 0) return true;  // the clause is a tautology
    assign(neg, kNoInstance);
  }
  for (InstanceId id : units_) {
    if (tier(id) == 0 && assign_unit(id)) return true;
  }
  return propagate();
}

bool Propagator::assign_unit(InstanceId id) {
  const Literal unit = inst_[id].lits[0];
  const std::int8_t v = value(unit);
  if (v < 0) {
    conflict_ = id;
    return true;
  }
  if (v == 0) assign(unit, id);
  return false;
}

bool Propagator::visit(Literal falsified, int want_tier) {
  std::vector<InstanceId>& ws = watches_[falsified.code()];
  std::size_t i = 0, j = 0;
  const std::size_t n = ws.size();
  for (; i < n; ++i) {
    const InstanceId id = ws[i];
    Instance& c = inst_[id];
    if (!c.active || tier(id) != want_tier) {
      ws[j++] = id;
      continue;
    }
    if (c.lits[0] == falsified) std::swap(c.lits[0], c.lits[1]);
    if (value(c.lits[0]) > 0) {
      ws[j++] = id;
      continue;
    }
    bool moved = false;
    for (std::size_t k = 2; k < c.lits.size(); ++k) {
      if (value(c.lits[k]) >= 0) {
        std::swap(c.lits[1], c.lits[k]);
        watches_[c.lits[1].code()].push_back(id);
        moved = true;
        break;
      }
    }
    if (moved) continue;
    ws[j++] = id;
    if (value(c.lits[0]) < 0) {
      conflict_ = id;
      for (++i; i < n; ++i) ws[j++] = ws[i];
      ws.resize(j);
      return true;
    }
    assign(c.lits[0], id);
  }
  ws.resize(j);
  return false;
}

// Tier 0 runs to fixpoint; after each single implication from a later tier
// (a unit first, then a longer clause) control returns to tier 0.
bool Propagator::propagate() {
  std::size_t head[3] = {0, 0, 0};
  std::size_t next_unit[3] = {0, 0, 0};
  while (true) {
    while (head[0] < trail_.size()) {
      if (visit(~trail_[head[0]++], 0)) return true;
    }
    if (!core_first_) return false;
    bool grew = false;
    for (int t = 1; t < 3 && !grew; ++t) {
      while (next_unit[t] < units_.size()) {
        const InstanceId id = units_[next_unit[t]++];
        if (tier(id) != t || value(inst_[id].lits[0]) > 0) continue;
        if (assign_unit(id)) return true;
        grew = true;
        break;
      }
      while (!grew && head[t] < trail_.size()) {
        const std::size_t before = trail_.size();
        if (visit(~trail_[head[t]++], t)) return true;
        grew = trail_.size() > before;
      }
    }
    if (!grew) return false;
  }
}

void Propagator::collect(std::vector<InstanceId>& deps) {
  if (conflict_ == kNoInstance) return;
  std::vector<InstanceId> stack{conflict_};
  std::vector<Var> marked;
  while (!stack.empty()) {
    const InstanceId id = stack.back();
    stack.pop_back();
    deps.push_back(id);
    for (Literal lit : inst_[id].lits) {
      const auto v = static_cast<std::size_t>(lit.var());
      if (seen_[v] || reason_[v] == kNoInstance) continue;
      seen_[v] = 1;
      marked.push_back(lit.var());
      stack.push_back(reason_[v]);
    }
  }
  for (Var v : marked) seen_[static_cast<std::size_t>(v)] = 0;
}

bool Propagator::refutes_negation(std::span<const Literal> lits,
                                  std::vector<InstanceId>* deps) {
  const bool conflict = start(lits);
  if (conflict && deps) collect(*deps);
  backtrack();
  return conflict;
}

bool Propagator::rat(const Clause& clause, Literal pivot,
                     std::vector<InstanceId>* deps,
                     std::vector<InstanceId>* candidates) {
  const Literal neg = ~pivot;
  ensure_var(pivot.var());
  // Copy: refutes_negation may grow the occurrence tables.
  const std::vector<InstanceId> occ = occurs_[neg.code()];
  std::unordered_set<Clause, ClauseHash> tried;
  std::vector<Literal> resolvent;
  for (InstanceId id : occ) {
    if (!inst_[id].active) continue;
    if (candidates) candidates->push_back(id);
    const Clause& other = inst_[id].clause;
    if (!tried.insert(other).second) continue;
    resolvent.assign(clause.begin(), clause.end());
    for (Literal lit : other) {
      if (lit != neg) resolvent.push_back(lit);
    }
    if (!refutes_negation(resolvent, deps)) return false;
  }
  return true;
}

bool Propagator::closure(std::vector<Literal>* assigned) {
  const bool conflict = start({});
  if (!conflict && assigned) *assigned = trail_;
  backtrack();
  return !conflict;
}

}  // namespace dcproof::detail
