#ifndef DCPROOF_CORE_HPP
#define DCPROOF_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dcproof/error.hpp"

namespace dcproof {

using Var = std::int32_t;

// A nonzero signed integer: the absolute value is the variable, the sign the
// polarity. Zero is reserved as the clause terminator of the text formats.
class Literal {
 public:
  // Throws Error(kInvalidLiteral) for 0 and for INT32_MIN.
  explicit Literal(std::int32_t value) : value_(value) {
    if (value == 0 || value == INT32_MIN) throw_invalid(value);
  }

  constexpr std::int32_t value() const noexcept { return value_; }
  constexpr Var var() const noexcept { return value_ < 0 ? -value_ : value_; }
  constexpr bool positive() const noexcept { return value_ > 0; }

  // Dense index for per-literal tables: 2 * var + (negative ? 1 : 0).
  constexpr std::size_t code() const noexcept {
    return 2 * static_cast<std::size_t>(var()) + (value_ < 0 ? 1 : 0);
  }

  constexpr Literal operator~() const noexcept { return Literal(-value_, 0); }

  friend constexpr bool operator==(Literal a, Literal b) noexcept {
    return a.value_ == b.value_;
  }
  friend constexpr auto operator<=>(Literal a, Literal b) noexcept {
    return a.value_ <=> b.value_;
  }

 private:
  constexpr Literal(std::int32_t value, int /*unchecked*/) noexcept
      : value_(value) {}
  [[noreturn]] static void throw_invalid(std::int32_t value);

  std::int32_t value_;
};

inline Literal negate(Literal lit) noexcept { return ~lit; }

// A set of literals. Identity is set identity, but the clause keeps the order
// in which its literals were first given: that order is what gets serialized,
// and its first literal is the RAT pivot.
class Clause {
 public:
  Clause() = default;
  // Duplicate literals are dropped, keeping the first occurrence.
  explicit Clause(std::vector<Literal> literals);
  Clause(std::initializer_list<std::int32_t> values);

  std::span<const Literal> literals() const noexcept { return literals_; }
  std::size_t size() const noexcept { return literals_.size(); }
  bool empty() const noexcept { return literals_.empty(); }
  Literal front() const { return literals_.front(); }
  Literal operator[](std::size_t i) const { return literals_[i]; }
  auto begin() const noexcept { return literals_.begin(); }
  auto end() const noexcept { return literals_.end(); }

  bool contains(Literal lit) const noexcept;
  bool is_tautology() const noexcept;
  Var max_var() const noexcept;

  // Set union with {lit}; the literal goes last when it is new.
  Clause with_appended(Literal lit) const;

  std::size_t hash() const noexcept { return hash_; }

  // Set equality; serialization order is ignored.
  friend bool operator==(const Clause& a, const Clause& b) noexcept {
    return a.hash_ == b.hash_ && a.sorted_ == b.sorted_;
  }

  // Same literals in the same serialization order.
  bool identical(const Clause& other) const noexcept {
    return literals_ == other.literals_;
  }

 private:
  void finish();

  std::vector<Literal> literals_;
  std::vector<Literal> sorted_;
  std::size_t hash_ = 1469598103934665603ull;
};

struct ClauseHash {
  std::size_t operator()(const Clause& c) const noexcept { return c.hash(); }
};

// A multiset of clauses. Iteration follows first-insertion order so that
// anything derived from a formula (serialized cores, checker state) is
// reproducible.
class Formula {
 public:
  struct Entry {
    Clause clause;
    std::size_t count = 0;
  };

  Formula() = default;
  Formula(std::initializer_list<Clause> clauses);

  void add(const Clause& clause, std::size_t count = 1);
  // Decrements the multiplicity; false when the clause is absent.
  bool remove(const Clause& clause);

  std::size_t multiplicity(const Clause& clause) const;
  bool contains(const Clause& clause) const { return multiplicity(clause) > 0; }
  std::size_t total_clauses() const noexcept { return total_; }
  std::size_t distinct_clauses() const noexcept { return index_.size(); }
  bool empty() const noexcept { return total_ == 0; }
  Var max_var() const noexcept;

  // Calls fn(clause, multiplicity) for every present clause.
  void for_each(const std::function<void(const Clause&, std::size_t)>& fn) const;
  std::vector<Entry> entries() const;

  // Multiset inclusion.
  bool is_subset_of(const Formula& other) const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  void compact();

  std::vector<Entry> entries_;
  std::unordered_map<Clause, std::size_t, ClauseHash> index_;
  std::size_t total_ = 0;
  std::size_t dead_ = 0;
};

Formula formula_add(Formula formula, const Clause& clause);
// std::nullopt signals AbsentClause.
std::optional<Formula> formula_remove(Formula formula, const Clause& clause);
// Multiplicity-summing union.
Formula formula_union(Formula a, const Formula& b);

enum class StepKind : std::uint8_t { kAdd, kDelete };

struct ProofStep {
  StepKind op = StepKind::kAdd;
  Clause clause;

  static ProofStep add(Clause c) { return {StepKind::kAdd, std::move(c)}; }
  static ProofStep del(Clause c) { return {StepKind::kDelete, std::move(c)}; }

  bool is_add() const noexcept { return op == StepKind::kAdd; }
  bool is_empty_add() const noexcept { return is_add() && clause.empty(); }

  // Same operation and same serialized clause.
  friend bool operator==(const ProofStep& a, const ProofStep& b) noexcept {
    return a.op == b.op && a.clause.identical(b.clause);
  }
};

using Refutation = std::vector<ProofStep>;

}  // namespace dcproof

#endif  // DCPROOF_CORE_HPP
