#ifndef DCPROOF_SRC_PROPAGATOR_HPP
#define DCPROOF_SRC_PROPAGATOR_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "dcproof/core.hpp"

namespace dcproof::detail {

using InstanceId = std::uint32_t;
inline constexpr InstanceId kNoInstance = std::numeric_limits<InstanceId>::max();

// Unit propagation over a mutable multiset of clause instances. Every copy of
// a clause is its own instance so that callers can track which copy a
// derivation used and which copy a deletion removed.
//
// Queries always start from the empty assignment and undo everything before
// returning, so two-watched-literal invariants only have to hold within one
// query and instances can be switched on and off freely between queries.
class Propagator {
 public:
  InstanceId add(const Clause& clause, bool active = true);
  void activate(InstanceId id);
  void deactivate(InstanceId id);
  bool active(InstanceId id) const { return inst_[id].active; }
  const Clause& clause(InstanceId id) const { return inst_[id].clause; }
  std::size_t size() const { return inst_.size(); }

  // Core-first mode propagates with marked instances to fixpoint before each
  // single implication from an unmarked one, which steers derivations toward
  // clauses already known to be needed. Unmarked instances below
  // `free_below` (the input clauses) are tried before unmarked lemmas.
  void set_core_first(bool on, InstanceId free_below = 0) {
    core_first_ = on;
    free_below_ = free_below;
  }
  void mark_core(InstanceId id) { inst_[id].core = true; }
  bool is_core(InstanceId id) const { return inst_[id].core; }

  // True iff the active instances plus the unit negations of `lits` propagate
  // to a conflict. On conflict, `deps` (if given) receives the instances the
  // conflict derivation used.
  bool refutes_negation(std::span<const Literal> lits,
                        std::vector<InstanceId>* deps = nullptr);

  // RAT of `clause` on `pivot` against the active instances. `deps` collects
  // the derivations of every resolvent, `candidates` every active instance
  // containing the negated pivot.
  bool rat(const Clause& clause, Literal pivot,
           std::vector<InstanceId>* deps = nullptr,
           std::vector<InstanceId>* candidates = nullptr);

  // Propagates the active units. Returns false on conflict; otherwise
  // `assigned` receives every literal made true, in propagation order.
  bool closure(std::vector<Literal>* assigned);

  std::uint64_t propagations() const { return propagations_; }

 private:
  struct Instance {
    Clause clause;
    std::vector<Literal> lits;  // lits[0], lits[1] are watched
    bool active = false;
    bool core = false;
    std::size_t slot = 0;  // position in units_/empties_ while active
  };

  void ensure_var(Var v);
  std::int8_t value(Literal lit) const { return val_[lit.code()]; }
  void assign(Literal lit, InstanceId reason);
  void backtrack();
  // These return true on conflict and leave the conflicting instance in
  // conflict_ (kNoInstance when two assumptions clash).
  bool start(std::span<const Literal> lits);
  bool propagate();
  bool assign_unit(InstanceId id);
  bool visit(Literal falsified, int want_tier);
  int tier(InstanceId id) const;
  void collect(std::vector<InstanceId>& deps);

  std::vector<Instance> inst_;
  std::vector<std::vector<InstanceId>> watches_;  // by literal code
  std::vector<std::vector<InstanceId>> occurs_;   // by literal code
  std::vector<InstanceId> units_;    // active unit instances
  std::vector<InstanceId> empties_;  // active empty instances

  std::vector<std::int8_t> val_;       // by literal code: 1 true, -1 false
  std::vector<InstanceId> reason_;     // by variable
  std::vector<std::uint8_t> seen_;     // by variable
  std::vector<Literal> trail_;
  InstanceId conflict_ = kNoInstance;
  bool core_first_ = false;
  InstanceId free_below_ = 0;
  std::uint64_t propagations_ = 0;
};

}  // namespace dcproof::detail

#endif  // DCPROOF_SRC_PROPAGATOR_HPP
