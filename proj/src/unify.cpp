#include "alpp/unify.hpp"

#include <deque>

namespace alpp {

TermPtr Substitution::resolve(const TermPtr& t) const {
  switch (t->kind()) {
    case Term::Kind::Var: {
      auto it = map_.find(t->var_id());
      if (it == map_.end()) return t;
      return resolve(it->second);
    }
    case Term::Kind::Int:
      return t;
    case Term::Kind::App: {
      if (t->args().empty()) return t;
      bool changed = false;
      std::vector<TermPtr> args;
      args.reserve(t->args().size());
      for (const auto& a : t->args()) {
        TermPtr r = resolve(a);
        changed = changed || r.get() != a.get();
        args.push_back(std::move(r));
      }
      if (!changed) return t;
      return Term::app(t->name(), std::move(args));
    }
  }
  return t;
}

bool Substitution::bind(VarId id, const TermPtr& t) {
  if (occurs(id, t)) return false;
  map_[id] = t;
  return true;
}

void Substitution::merge(const Substitution& delta) {
  for (const auto& [id, t] : delta.map_) map_[id] = resolve(t);
}

namespace {

// Variable-to-variable binding order: the larger id is bound so the older
// variable survives; when quantifiers differ the universal one is bound,
// keeping the surviving variable existential.
void bind_var_pair(Substitution& theta, const TermPtr& a, const TermPtr& b) {
  const bool a_univ = a->quant() == Quant::Universal;
  const bool b_univ = b->quant() == Quant::Universal;
  if (a_univ != b_univ) {
    if (a_univ)
      theta.bind(a->var_id(), b);
    else
      theta.bind(b->var_id(), a);
    return;
  }
  if (a->var_id() > b->var_id())
    theta.bind(a->var_id(), b);
  else
    theta.bind(b->var_id(), a);
}

}  // namespace

EqOutcome solve_eq(const TermPtr& lhs, const TermPtr& rhs, const DisequalityStore& store,
                   const Substitution& ctx) {
  Substitution theta;
  auto res = [&](const TermPtr& t) { return theta.resolve(ctx.resolve(t)); };

  std::deque<std::pair<TermPtr, TermPtr>> work;
  work.emplace_back(lhs, rhs);
  while (!work.empty()) {
    auto [raw_a, raw_b] = work.front();
    work.pop_front();
    TermPtr a = res(raw_a);
    TermPtr b = res(raw_b);
    if (equal_terms(a, b)) continue;

    if (a->is_var() || b->is_var()) {
      if (a->is_var() && b->is_var()) {
        bind_var_pair(theta, a, b);
        continue;
      }
      const TermPtr& v = a->is_var() ? a : b;
      const TermPtr& t = a->is_var() ? b : a;
      if (!theta.bind(v->var_id(), t)) return EqOutcome::falsity();  // t contains v
      continue;
    }
    if (a->is_int() || b->is_int()) return EqOutcome::falsity();  // int vs non-equal int/app
    // both compound
    if (a->name() != b->name() || a->args().size() != b->args().size())
      return EqOutcome::falsity();
    for (std::size_t i = 0; i < a->args().size(); ++i)
      work.emplace_back(a->args()[i], b->args()[i]);
  }

  if (theta.empty()) return EqOutcome::truth();

  // New bindings may have collapsed a pending disequality.
  Substitution merged = ctx;
  merged.merge(theta);
  DisequalityStore probe = store;
  if (!probe.recheck(merged)) return EqOutcome::falsity();
  return EqOutcome::bound(std::move(theta));
}

NeqTag check_neq(const TermPtr& raw_lhs, const TermPtr& raw_rhs, const Substitution& ctx) {
  TermPtr a = ctx.resolve(raw_lhs);
  TermPtr b = ctx.resolve(raw_rhs);
  if (equal_terms(a, b)) return NeqTag::Violated;

  auto universal_var = [](const TermPtr& t) {
    return t->is_var() && t->quant() == Quant::Universal;
  };
  if (universal_var(a) || universal_var(b)) {
    const TermPtr& v = universal_var(a) ? a : b;
    const TermPtr& t = universal_var(a) ? b : a;
    if (occurs(v->var_id(), t)) return NeqTag::Entailed;
    if (universal_var(t))
      throw UnsupportedPattern("disequality between two universal variables is not supported");
    // A universal variable ranges over every term, so it cannot be
    // constrained apart from anything that does not contain it.
    return NeqTag::Violated;
  }
  if (a->is_var() || b->is_var()) {
    const TermPtr& v = a->is_var() ? a : b;
    const TermPtr& t = a->is_var() ? b : a;
    if (occurs(v->var_id(), t)) return NeqTag::Entailed;
    return NeqTag::Residual;
  }
  if (a->is_int() || b->is_int()) return NeqTag::Entailed;  // non-identical scalars
  if (a->name() != b->name() || a->args().size() != b->args().size()) return NeqTag::Entailed;
  // Same functor and arity: the disjunction of argument disequalities.
  bool all_violated = true;
  for (std::size_t i = 0; i < a->args().size(); ++i) {
    NeqTag t = check_neq(a->args()[i], b->args()[i], ctx);
    if (t == NeqTag::Entailed) return NeqTag::Entailed;
    if (t != NeqTag::Violated) all_violated = false;
  }
  return all_violated ? NeqTag::Violated : NeqTag::Residual;
}

bool DisequalityStore::add(const TermPtr& lhs, const TermPtr& rhs, const Substitution& ctx) {
  switch (check_neq(lhs, rhs, ctx)) {
    case NeqTag::Entailed:
      return true;
    case NeqTag::Violated:
      return false;
    case NeqTag::Residual:
      pairs_.emplace_back(ctx.resolve(lhs), ctx.resolve(rhs));
      return true;
  }
  return true;
}

bool DisequalityStore::recheck(const Substitution& ctx) {
  std::vector<std::pair<TermPtr, TermPtr>> kept;
  kept.reserve(pairs_.size());
  for (const auto& [l, r] : pairs_) {
    switch (check_neq(l, r, ctx)) {
      case NeqTag::Entailed:
        break;  // discharged
      case NeqTag::Violated:
        return false;
      case NeqTag::Residual:
        kept.emplace_back(ctx.resolve(l), ctx.resolve(r));
        break;
    }
  }
  pairs_ = std::move(kept);
  return true;
}

NeqOutcome solve_neq(const TermPtr& lhs, const TermPtr& rhs, DisequalityStore store,
                     const Substitution& ctx) {
  NeqTag tag = check_neq(lhs, rhs, ctx);
  if (tag == NeqTag::Residual) store.add(lhs, rhs, ctx);
  return {tag, std::move(store)};
}

}  // namespace alpp
