#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alpp/term.hpp"

namespace alpp {

// Idempotent variable binding map. Ranges are stored fully resolved against
// the map itself, and resolve() walks chains, so applying twice equals
// applying once. Occurs-check is enforced at bind time.
class Substitution {
 public:
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  bool bound(VarId id) const { return map_.count(id) != 0; }

  // Term with every bound variable replaced, recursively.
  TermPtr resolve(const TermPtr& t) const;

  // Records id -> t. t must already be resolved; returns false on occurs
  // violation (binding refused).
  bool bind(VarId id, const TermPtr& t);

  // Merges delta into this map (delta ranges are resolved against *this*
  // first so idempotence is preserved).
  void merge(const Substitution& delta);

  const std::unordered_map<VarId, TermPtr>& bindings() const { return map_; }

 private:
  std::unordered_map<VarId, TermPtr> map_;
};

// Thrown for the quantifier patterns the rewriting rules do not cover
// (disequality between two plain universal variables).
class UnsupportedPattern : public std::runtime_error {
 public:
  explicit UnsupportedPattern(const std::string& what) : std::runtime_error(what) {}
};

enum class NeqTag {
  Entailed,  // the two terms can never be equal
  Violated,  // the two terms are identical (or a universal variable is constrained)
  Residual,  // undecided; keep as a store constraint
};

// Pure disequality evaluation under a substitution context.
NeqTag check_neq(const TermPtr& lhs, const TermPtr& rhs, const Substitution& ctx);

// Pending disequality obligations. A pair (s, t) means s and t must not
// become identical; compound pairs act as the disjunction of their argument
// disequalities.
class DisequalityStore {
 public:
  bool empty() const { return pairs_.empty(); }
  std::size_t size() const { return pairs_.size(); }
  const std::vector<std::pair<TermPtr, TermPtr>>& pairs() const { return pairs_; }

  // Adds a constraint. Entailed constraints are dropped, violated ones
  // return false (the caller's branch fails).
  bool add(const TermPtr& lhs, const TermPtr& rhs, const Substitution& ctx);

  // Re-evaluates every pair after new bindings. Returns false if any pair
  // collapsed to identical terms; discharged pairs are pruned.
  bool recheck(const Substitution& ctx);

 private:
  std::vector<std::pair<TermPtr, TermPtr>> pairs_;
};

struct EqOutcome {
  enum class Tag { Bound, True, False } tag;
  Substitution theta;  // new bindings only (valid when tag == Bound)

  static EqOutcome truth() { return {Tag::True, {}}; }
  static EqOutcome falsity() { return {Tag::False, {}}; }
  static EqOutcome bound(Substitution s) { return {Tag::Bound, std::move(s)}; }
  bool failed() const { return tag == Tag::False; }
};

// Equality rewriting. Implements the full rule set: universal/existential
// binding, occurs-check failure, pairwise decomposition, functor or arity
// clash, and the post-binding store recheck (a violated store pair turns the
// result into False). ctx is the substitution accumulated so far; the
// returned theta contains only the new bindings.
EqOutcome solve_eq(const TermPtr& lhs, const TermPtr& rhs, const DisequalityStore& store,
                   const Substitution& ctx);

struct NeqOutcome {
  NeqTag tag;
  DisequalityStore store;
};

// Disequality rewriting: Entailed when a clash or occurs-check decides the
// terms apart, Violated when they are identical, otherwise the residual
// constraint is recorded in the returned store.
NeqOutcome solve_neq(const TermPtr& lhs, const TermPtr& rhs, DisequalityStore store,
                     const Substitution& ctx);

}  // namespace alpp
