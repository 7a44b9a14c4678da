#include "doctest.h"

#include "alpp/parser.hpp"

using namespace alpp;

TEST_CASE("parse the keys example fragment") {
  Program p = parse_program(
      "abducible enter/2.\n"
      "0.7 :: enter(P,H) -> has_keys(P,H).\n"
      "has_keys(husband,house1).\n");
  CHECK(p.kb.size() == 1);
  CHECK(p.kb[0].body.empty());
  REQUIRE(p.ics.size() == 1);
  CHECK(p.ics[0].id == 1);
  REQUIRE(p.ics[0].prob.has_value());
  CHECK(*p.ics[0].prob == doctest::Approx(0.7));
  CHECK(p.abducibles.count({"enter", 2}) == 1);
  CHECK(p.ics[0].body[0].kind == AtomKind::Abducible);
  CHECK(p.ics[0].head[0][0].kind == AtomKind::Defined);
  CHECK(p.ics[0].orig_body_vars == std::vector<std::string>{"P", "H"});
}

TEST_CASE("empty program") {
  Program p = parse_program("");
  CHECK(p.kb.empty());
  CHECK(p.ics.empty());
  CHECK(p.abducibles.empty());
}

TEST_CASE("probability outside the unit interval is rejected") {
  CHECK_THROWS_AS(parse_program("1.5 :: a(X) -> false."), ParseError);
  CHECK_NOTHROW(parse_program("abducible a/1.\n1 :: a(X) -> false."));
  CHECK_NOTHROW(parse_program("abducible a/1.\n0.0 :: a(X) -> false."));
}

TEST_CASE("abducible predicate as clause head is rejected") {
  CHECK_THROWS_AS(parse_program("abducible a/1.\na(x)."), ParseError);
}

TEST_CASE("duplicate abducible declarations are idempotent") {
  Program p = parse_program("abducible a/1.\nabducible a/1.");
  CHECK(p.abducibles.size() == 1);
}

TEST_CASE("predicate identity includes arity") {
  Program p = parse_program("p(a).\np(a,b).");
  CHECK(p.kb.size() == 2);
  CHECK(p.clauses_for({"p", 1}).size() == 1);
  CHECK(p.clauses_for({"p", 2}).size() == 1);
}

TEST_CASE("negated literals and disequality atoms are rejected") {
  CHECK_THROWS_AS(parse_program("p :- \\+ q."), ParseError);
  CHECK_THROWS_AS(parse_program("p :- X \\= a."), ParseError);
}

TEST_CASE("constraint head variables must occur in the body") {
  CHECK_THROWS_AS(parse_program("abducible a/1.\n0.5 :: a(X) -> b(Y)."), ParseError);
  CHECK_NOTHROW(parse_program("abducible a/1.\n0.5 :: a(X) -> b(X)."));
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_program("p(a.\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.col > 1);
  }
}

TEST_CASE("disjunctive constraint heads and comments") {
  Program p = parse_program(
      "% a comment\n"
      "abducible a/1.\n"
      "a(X), p(X) -> q(X) ; r(X), s(X) ; false.\n");
  REQUIRE(p.ics.size() == 1);
  CHECK_FALSE(p.ics[0].prob.has_value());
  CHECK(p.ics[0].id == 0);
  CHECK(p.ics[0].head.size() == 3);
  CHECK(p.ics[0].head[1].size() == 2);
  CHECK(p.ics[0].head[2][0].kind == AtomKind::False);
}

TEST_CASE("probabilistic constraint ids follow source order") {
  Program p = parse_program(
      "abducible a/1.\n"
      "a(X) -> false.\n"
      "0.1 :: a(X) -> false.\n"
      "0.2 :: a(X) -> false.\n");
  REQUIRE(p.ics.size() == 3);
  CHECK(p.ics[0].id == 0);
  CHECK(p.ics[1].id == 1);
  CHECK(p.ics[2].id == 2);
  // ids are stable across rename_apart
  VarGen gen(1000);
  CHECK(rename_apart(p.ics[2], gen).id == 2);
}

TEST_CASE("goal parsing records free variables") {
  Goal g = parse_goal("enter(M,house1), killed(M,woman), enter(M,house2)");
  CHECK(g.literals.size() == 3);
  REQUIRE(g.free_vars.size() == 1);
  CHECK(g.free_vars[0]->name() == "M");
  CHECK(g.free_vars[0]->quant() == Quant::Existential);
  // the same variable object is shared across the literals
  CHECK(equal_terms(g.literals[0].args[0], g.literals[1].args[0]));
}

TEST_CASE("trivially satisfiable goal") {
  Goal g = parse_goal("true");
  CHECK(g.literals.size() == 1);
  CHECK(g.literals[0].kind == AtomKind::True);
}

TEST_CASE("empty goal is an error") { CHECK_THROWS_AS(parse_goal(""), ParseError); }

TEST_CASE("goal variables are renamed above the program's") {
  Program p = parse_program("p(X) :- q(X).\nq(a).");
  Goal g = parse_goal("p(Y)", p);
  CHECK(g.free_vars[0]->var_id() > p.max_var_id);
}

TEST_CASE("statements with equations and integers") {
  Program p = parse_program("p(X) :- X = 1.\np(X) :- X = f(2).");
  CHECK(p.kb.size() == 2);
  CHECK(p.kb[0].body[0].kind == AtomKind::Eq);
}

TEST_CASE("round trip: print then parse is stable") {
  const char* text =
      "abducible enter/2.\n"
      "abducible killed/2.\n"
      "has_keys(husband,house1).\n"
      "has_keys(husband,house2).\n"
      "0.7 :: enter(P,H) -> has_keys(P,H).\n"
      "up(X), down(X) -> false.\n"
      "p(X) :- q(X,Y), r(Y).\n";
  Program p1 = parse_program(text);
  std::string printed = program_to_string(p1);
  Program p2 = parse_program(printed);
  CHECK(program_to_string(p2) == printed);
  CHECK(p1.kb.size() == p2.kb.size());
  CHECK(p1.ics.size() == p2.ics.size());
  CHECK(p1.abducibles == p2.abducibles);
}
