#include "doctest.h"

#include <random>

#include "alpp/unify.hpp"

using namespace alpp;

namespace {

TermPtr evar(VarId id, const char* name = "E") { return Term::var(id, name, Quant::Existential); }
TermPtr uvar(VarId id, const char* name = "A") { return Term::var(id, name, Quant::Universal); }
TermPtr cst(const char* name) { return Term::constant(name); }

EqOutcome eq(const TermPtr& a, const TermPtr& b) {
  DisequalityStore store;
  Substitution ctx;
  return solve_eq(a, b, store, ctx);
}

}  // namespace

TEST_CASE("universal = existential binds the universal side") {
  TermPtr a = uvar(1);
  TermPtr e = evar(2);
  EqOutcome out = eq(a, e);
  REQUIRE(out.tag == EqOutcome::Tag::Bound);
  CHECK(equal_terms(out.theta.resolve(a), e));
  // surviving variable is the existential one
  CHECK(out.theta.resolve(a)->quant() == Quant::Existential);
}

TEST_CASE("universal variable = ground term binds") {
  TermPtr a = uvar(1, "X");
  EqOutcome out = eq(a, cst("husband"));
  REQUIRE(out.tag == EqOutcome::Tag::Bound);
  CHECK(term_to_string(out.theta.resolve(a)) == "husband");
}

TEST_CASE("existential = existential binds deterministically") {
  TermPtr e1 = evar(1, "E1");
  TermPtr e2 = evar(2, "E2");
  EqOutcome out = eq(e1, e2);
  REQUIRE(out.tag == EqOutcome::Tag::Bound);
  // same surviving variable regardless of argument order
  EqOutcome out2 = eq(e2, e1);
  REQUIRE(out2.tag == EqOutcome::Tag::Bound);
  CHECK(equal_terms(out.theta.resolve(e1), out2.theta.resolve(e1)));
  CHECK(equal_terms(out.theta.resolve(e2), out2.theta.resolve(e2)));
}

TEST_CASE("X = t with occurs-check failure") {
  TermPtr x = evar(1, "X");
  EqOutcome out = eq(Term::app("f", {x}), x);
  CHECK(out.tag == EqOutcome::Tag::False);
}

TEST_CASE("X = t binds when t does not contain X") {
  TermPtr x = evar(1, "X");
  TermPtr t = Term::app("f", {cst("a")});
  EqOutcome out = eq(x, t);
  REQUIRE(out.tag == EqOutcome::Tag::Bound);
  CHECK(term_to_string(out.theta.resolve(x)) == "f(a)");
}

TEST_CASE("decomposition of same functor and arity") {
  TermPtr y = evar(1, "Y");
  EqOutcome out = eq(Term::app("p", {cst("a"), y}), Term::app("p", {cst("a"), cst("b")}));
  REQUIRE(out.tag == EqOutcome::Tag::Bound);
  CHECK(term_to_string(out.theta.resolve(y)) == "b");
}

TEST_CASE("functor clash fails") {
  CHECK(eq(Term::app("p", {cst("a")}), Term::app("q", {cst("a")})).tag == EqOutcome::Tag::False);
  CHECK(eq(Term::app("p", {cst("a")}), Term::app("p", {cst("a"), cst("b")})).tag ==
        EqOutcome::Tag::False);
  CHECK(eq(Term::integer(1), Term::integer(2)).tag == EqOutcome::Tag::False);
  CHECK(eq(Term::integer(1), cst("a")).tag == EqOutcome::Tag::False);
}

TEST_CASE("identical terms need no bindings") {
  CHECK(eq(cst("a"), cst("a")).tag == EqOutcome::Tag::True);
  TermPtr x = evar(5, "X");
  CHECK(eq(Term::app("f", {x}), Term::app("f", {x})).tag == EqOutcome::Tag::True);
}

TEST_CASE("universal != existential is false") {
  Substitution ctx;
  CHECK(check_neq(uvar(1), evar(2), ctx) == NeqTag::Violated);
  CHECK(check_neq(uvar(1), cst("a"), ctx) == NeqTag::Violated);
}

TEST_CASE("X != t with t containing X is entailed") {
  Substitution ctx;
  TermPtr x = evar(1, "X");
  CHECK(check_neq(x, Term::app("f", {x}), ctx) == NeqTag::Entailed);
  DisequalityStore store;
  NeqOutcome out = solve_neq(x, Term::app("f", {x}), store, ctx);
  CHECK(out.tag == NeqTag::Entailed);
  CHECK(out.store.empty());
}

TEST_CASE("identical terms violate a disequality") {
  Substitution ctx;
  DisequalityStore store;
  CHECK(solve_neq(cst("a"), cst("a"), store, ctx).tag == NeqTag::Violated);
}

TEST_CASE("functor clash entails a disequality") {
  Substitution ctx;
  CHECK(check_neq(Term::app("p", {cst("a")}), Term::app("q", {cst("a")}), ctx) ==
        NeqTag::Entailed);
}

TEST_CASE("residual disequality blocks a later unification") {
  Substitution ctx;
  DisequalityStore store;
  TermPtr x = evar(1, "X");
  NeqOutcome out = solve_neq(x, cst("a"), store, ctx);
  REQUIRE(out.tag == NeqTag::Residual);
  CHECK(out.store.size() == 1);
  // binding X to a must now fail
  EqOutcome bind = solve_eq(x, cst("a"), out.store, ctx);
  CHECK(bind.tag == EqOutcome::Tag::False);
  // binding X to b is fine
  EqOutcome bind2 = solve_eq(x, cst("b"), out.store, ctx);
  CHECK(bind2.tag == EqOutcome::Tag::Bound);
}

TEST_CASE("compound residual disequality acts as a disjunction") {
  Substitution ctx;
  DisequalityStore store;
  TermPtr x = evar(1, "X");
  TermPtr y = evar(2, "Y");
  // (X,b) != (a,Y): satisfied unless X=a and Y=b together
  NeqOutcome out = solve_neq(Term::app("t", {x, cst("b")}), Term::app("t", {cst("a"), y}), store,
                             ctx);
  REQUIRE(out.tag == NeqTag::Residual);
  Substitution s1;
  s1.bind(1, cst("a"));
  DisequalityStore probe = out.store;
  CHECK(probe.recheck(s1));  // Y side still open
  s1.bind(2, cst("b"));
  DisequalityStore probe2 = out.store;
  CHECK_FALSE(probe2.recheck(s1));  // both collapsed: violated
  Substitution s2;
  s2.bind(1, cst("c"));
  DisequalityStore probe3 = out.store;
  CHECK(probe3.recheck(s2));
  CHECK(probe3.empty());  // X side differs for good: discharged
}

TEST_CASE("disequality between two universal variables is rejected") {
  Substitution ctx;
  CHECK_THROWS_AS(check_neq(uvar(1), uvar(2), ctx), UnsupportedPattern);
}

TEST_CASE("apply: substitution application, identity, composition") {
  Substitution theta;
  TermPtr x = evar(1, "X");
  TermPtr y = evar(2, "Y");
  theta.bind(1, cst("a"));
  CHECK(term_to_string(theta.resolve(Term::app("p", {x, y}))) == "p(a,Y)");
  Substitution empty;
  TermPtr t = Term::app("p", {x, y});
  CHECK(equal_terms(empty.resolve(t), t));
  // {X/Y} then {Y/b} composes to X -> b
  Substitution comp;
  comp.bind(1, y);
  Substitution delta;
  delta.bind(2, cst("b"));
  comp.merge(delta);
  CHECK(term_to_string(comp.resolve(Term::app("p", {x}))) == "p(b)");
}

namespace {

// simple random term generator over a tiny signature
TermPtr random_term(std::mt19937& rng, std::vector<TermPtr>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 3 : 1);
  switch (pick(rng)) {
    case 0:
      return vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)];
    case 1: {
      const char* consts[] = {"a", "b", "c"};
      return Term::constant(consts[std::uniform_int_distribution<int>(0, 2)(rng)]);
    }
    case 2:
      return Term::app("f", {random_term(rng, vars, depth - 1)});
    default:
      return Term::app("g", {random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1)});
  }
}

}  // namespace

TEST_CASE("properties: unifier correctness, idempotence, failure symmetry, occurs soundness") {
  std::mt19937 rng(42);
  for (int round = 0; round < 500; ++round) {
    std::vector<TermPtr> vars;
    for (VarId i = 1; i <= 3; ++i) vars.push_back(evar(i, "V"));
    TermPtr t1 = random_term(rng, vars, 3);
    TermPtr t2 = random_term(rng, vars, 3);
    DisequalityStore store;
    Substitution ctx;
    EqOutcome out = solve_eq(t1, t2, store, ctx);
    EqOutcome rev = solve_eq(t2, t1, store, ctx);
    CHECK((out.tag == EqOutcome::Tag::False) == (rev.tag == EqOutcome::Tag::False));
    if (out.tag == EqOutcome::Tag::False) continue;
    // a returned substitution really unifies the two terms
    CHECK(equal_terms(out.theta.resolve(t1), out.theta.resolve(t2)));
    // idempotence: applying twice equals applying once
    TermPtr once = out.theta.resolve(t1);
    CHECK(equal_terms(once, out.theta.resolve(once)));
    // occurs soundness: no binding contains its own variable
    for (const auto& [id, term] : out.theta.bindings()) CHECK_FALSE(occurs(id, term));
  }
}

TEST_CASE("property: store monotonicity under solve_neq") {
  std::mt19937 rng(7);
  for (int round = 0; round < 200; ++round) {
    std::vector<TermPtr> vars;
    for (VarId i = 1; i <= 3; ++i) vars.push_back(evar(i, "V"));
    DisequalityStore store;
    Substitution ctx;
    std::size_t last = 0;
    for (int k = 0; k < 5; ++k) {
      TermPtr t1 = random_term(rng, vars, 2);
      TermPtr t2 = random_term(rng, vars, 2);
      NeqOutcome out = solve_neq(t1, t2, store, ctx);
      if (out.tag == NeqTag::Violated) break;
      CHECK(out.store.size() >= last);
      // a consistent store stays consistent under the empty substitution
      DisequalityStore probe = out.store;
      CHECK(probe.recheck(ctx));
      store = out.store;
      last = store.size();
    }
  }
}
