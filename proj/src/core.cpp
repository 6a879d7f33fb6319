#include "dcproof/core.hpp"

#include <algorithm>
#include <string>

namespace dcproof {

void Literal::throw_invalid(std::int32_t value) {
  throw Error(ErrorCode::kInvalidLiteral,
              "invalid literal " + std::to_string(value));
}

Clause::Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {
  finish();
}

Clause::Clause(std::initializer_list<std::int32_t> values) {
  literals_.reserve(values.size());
  for (std::int32_t v : values) literals_.emplace_back(v);
  finish();
}

void Clause::finish() {
  sorted_ = literals_;
  std::sort(sorted_.begin(), sorted_.end());
  if (std::adjacent_find(sorted_.begin(), sorted_.end()) != sorted_.end()) {
    sorted_.erase(std::unique(sorted_.begin(), sorted_.end()), sorted_.end());
    std::vector<Literal> kept;
    kept.reserve(sorted_.size());
    for (Literal lit : literals_) {
      if (std::find(kept.begin(), kept.end(), lit) == kept.end()) {
        kept.push_back(lit);
      }
    }
    literals_ = std::move(kept);
  }
  // FNV-1a over the sorted literal values.
  std::size_t h = 1469598103934665603ull;
  for (Literal lit : sorted_) {
    h ^= static_cast<std::uint32_t>(lit.value());
    h *= 1099511628211ull;
  }
  hash_ = h ^ sorted_.size();
}

bool Clause::contains(Literal lit) const noexcept {
  return std::binary_search(sorted_.begin(), sorted_.end(), lit);
}

bool Clause::is_tautology() const noexcept {
  for (Literal lit : sorted_) {
    if (lit.positive()) break;
    if (contains(~lit)) return true;
  }
  return false;
}

Var Clause::max_var() const noexcept {
  Var m = 0;
  for (Literal lit : sorted_) m = std::max(m, lit.var());
  return m;
}

Clause Clause::with_appended(Literal lit) const {
  if (contains(lit)) return *this;
  std::vector<Literal> lits = literals_;
  lits.push_back(lit);
  return Clause(std::move(lits));
}

Formula::Formula(std::initializer_list<Clause> clauses) {
  for (const Clause& c : clauses) add(c);
}

void Formula::add(const Clause& clause, std::size_t count) {
  if (count == 0) return;
  auto it = index_.find(clause);
  if (it == index_.end()) {
    index_.emplace(clause, entries_.size());
    entries_.push_back({clause, count});
  } else {
    entries_[it->second].count += count;
  }
  total_ += count;
}

bool Formula::remove(const Clause& clause) {
  auto it = index_.find(clause);
  if (it == index_.end()) return false;
  Entry& e = entries_[it->second];
  --e.count;
  --total_;
  if (e.count == 0) {
    index_.erase(it);
    ++dead_;
    if (dead_ > 32 && dead_ * 2 > entries_.size()) compact();
  }
  return true;
}

void Formula::compact() {
  std::vector<Entry> live;
  live.reserve(entries_.size() - dead_);
  for (Entry& e : entries_) {
    if (e.count == 0) continue;
    index_[e.clause] = live.size();
    live.push_back(std::move(e));
  }
  entries_ = std::move(live);
  dead_ = 0;
}

std::size_t Formula::multiplicity(const Clause& clause) const {
  auto it = index_.find(clause);
  return it == index_.end() ? 0 : entries_[it->second].count;
}

Var Formula::max_var() const noexcept {
  Var m = 0;
  for (const Entry& e : entries_) {
    if (e.count > 0) m = std::max(m, e.clause.max_var());
  }
  return m;
}

void Formula::for_each(
    const std::function<void(const Clause&, std::size_t)>& fn) const {
  for (const Entry& e : entries_) {
    if (e.count > 0) fn(e.clause, e.count);
  }
}

std::vector<Formula::Entry> Formula::entries() const {
  std::vector<Entry> out;
  out.reserve(index_.size());
  for (const Entry& e : entries_) {
    if (e.count > 0) out.push_back(e);
  }
  return out;
}

bool Formula::is_subset_of(const Formula& other) const {
  if (total_ > other.total_) return false;
  for (const Entry& e : entries_) {
    if (e.count > other.multiplicity(e.clause)) return false;
  }
  return true;
}

bool operator==(const Formula& a, const Formula& b) {
  return a.total_ == b.total_ && a.index_.size() == b.index_.size() &&
         a.is_subset_of(b);
}

Formula formula_add(Formula formula, const Clause& clause) {
  formula.add(clause);
  return formula;
}

std::optional<Formula> formula_remove(Formula formula, const Clause& clause) {
  if (!formula.remove(clause)) return std::nullopt;
  return formula;
}

Formula formula_union(Formula a, const Formula& b) {
  b.for_each([&](const Clause& c, std::size_t n) { a.add(c, n); });
  return a;
}

}  // namespace dcproof
