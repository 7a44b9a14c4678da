// Acceptance suite: one check per criterion, one pass/fail line each.
// Exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "alpp/bdd.hpp"
#include "alpp/bench.hpp"
#include "alpp/engine.hpp"
#include "alpp/explain.hpp"
#include "alpp/oracle.hpp"
#include "alpp/parser.hpp"
#include "alpp/report.hpp"
#include "generators.hpp"

using namespace alpp;
using namespace alpp::test;

namespace {

int failures = 0;

struct Criterion {
  explicit Criterion(std::string name_) : name(std::move(name_)) {}
  std::string name;
  std::vector<std::string> problems;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  void expect_near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s: got %.12g, want %.12g (tol %.1e)", what.c_str(), got,
                    want, tol);
      problems.push_back(buf);
    }
  }
  ~Criterion() {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (problems.empty()) {
      std::printf("[PASS] %s (%.2f s)\n", name.c_str(), secs);
    } else {
      ++failures;
      std::printf("[FAIL] %s (%.2f s)\n", name.c_str(), secs);
      for (const auto& p : problems) std::printf("       - %s\n", p.c_str());
    }
  }
};

std::string read_sample(const std::string& name) {
  std::ifstream in(std::string(ALPP_SAMPLES_DIR) + "/" + name);
  if (!in) {
    std::fprintf(stderr, "cannot open sample %s\n", name.c_str());
    std::exit(2);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMurderGoal = "enter(M,house1), killed(M,woman), enter(M,house2)";
const char* kPowerGoal =
    "hasnopower(v1), hasnopower(v2), hasnopower(v3), hasnopower(v4), hasnopower(v5)";

std::string murder_with_prob(const std::string& q) {
  return "abducible enter/2.\nabducible killed/2.\n"
         "has_keys(husband,house1).\nhas_keys(husband,house2).\n" +
         q + " :: enter(P,H) -> has_keys(P,H).\n";
}

void criterion_1() {
  Criterion c("criterion 1: murder example answers and explanation probabilities");
  Program p = parse_program(read_sample("murder.alp"));
  Goal g = parse_goal(kMurderGoal, p);
  auto t0 = std::chrono::steady_clock::now();
  DeriveResult r = derive(p, g);
  QueryReport report = build_report(p, g, kMurderGoal, r);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  c.expect(r.complete(), "derivation did not complete");
  c.expect(report.answers.size() == 2, "expected exactly two answers");
  if (report.answers.size() == 2) {
    const AnswerReport& a0 = report.answers[0];
    const AnswerReport& a1 = report.answers[1];
    c.expect(a0.answer.theta.count("M") && a0.answer.theta.at("M") == "husband",
             "first answer should bind M to husband");
    c.expect_near(a0.probability, 0.91, 1e-9, "P(M=husband)");
    c.expect(a1.answer.theta.empty(), "second answer should leave M unbound");
    c.expect_near(a1.probability, 0.09, 1e-9, "P(M unbound)");

    std::vector<double> expl_probs;
    for (const auto& ar : report.answers)
      for (const auto& er : ar.explanations) expl_probs.push_back(er.probability);
    std::sort(expl_probs.begin(), expl_probs.end(), std::greater<double>());
    const double want[] = {0.49, 0.21, 0.21, 0.09};
    c.expect(expl_probs.size() == 4, "expected four explanations");
    for (std::size_t i = 0; i < expl_probs.size() && i < 4; ++i)
      c.expect_near(expl_probs[i], want[i], 1e-9, "explanation probability " + std::to_string(i));
  }
  c.expect(secs < 1.0, "runtime exceeded 1 s");
}

void criterion_2() {
  Criterion c("criterion 2: threshold sweep flips below 1 - sqrt(2)/2");
  for (const char* q : {"0.292", "0.294"}) {
    Program p = parse_program(murder_with_prob(q));
    Goal g = parse_goal(kMurderGoal, p);
    DeriveResult r = derive(p, g);
    QueryReport report = build_report(p, g, kMurderGoal, r);
    if (report.answers.size() != 2) {
      c.expect(false, "expected two answers at q=" + std::string(q));
      continue;
    }
    double known = 0.0, unknown = 0.0;
    for (const auto& ar : report.answers) {
      double sum = 0.0;
      for (const auto& er : ar.explanations) sum += er.probability;
      if (ar.answer.theta.empty())
        unknown = sum;  // the relaxed-only explanation
      else
        known = sum;  // sum over the three bound-answer explanations
    }
    double qv = std::stod(q);
    c.expect_near(known, 1.0 - (1.0 - qv) * (1.0 - qv), 1e-9,
                  "closed form of the bound-answer mass at q=" + std::string(q));
    c.expect_near(unknown, (1.0 - qv) * (1.0 - qv), 1e-9,
                  "closed form of the unknown-answer mass at q=" + std::string(q));
    bool flipped = known < unknown;
    bool should_flip = qv < 1.0 - std::sqrt(2.0) / 2.0;
    c.expect(flipped == should_flip, std::string("inequality direction wrong at q=") + q);
  }
}

void criterion_3() {
  Criterion c("criterion 3: power grid probability, world count and top answers");
  Program p = parse_program(read_sample("power_grid.alp"));
  Goal g = parse_goal(kPowerGoal, p);
  auto t0 = std::chrono::steady_clock::now();
  DeriveResult r = derive(p, g);
  QueryReport report = build_report(p, g, kPowerGoal, r);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  c.expect(r.complete(), "derivation did not complete");
  c.expect(report.worlds_found == 1600,
           "worlds found = " + std::to_string(report.worlds_found) + ", want 1600");
  c.expect_near(report.total_probability, 0.199695, 5e-7, "P(G)");
  if (report.answers.size() >= 2) {
    c.expect(report.answers[0].answer.delta == std::vector<std::string>{"down(pp)"},
             "most probable answer should be down(pp)");
    c.expect(report.answers[1].answer.delta == std::vector<std::string>{"down(w1)"},
             "second answer should be down(w1)");
    for (int i = 0; i < 2; ++i) {
      c.expect(report.answers[i].explanations.size() == 1, "top answers have one explanation");
      c.expect_near(report.answers[i].explanations[0].probability, 0.1, 1e-9,
                    "top explanation probability");
      c.expect(format_probability(report.answers[i].explanations[0].probability, 6) == "0.100000",
               "printed probability should be 0.100000");
    }
  } else {
    c.expect(false, "fewer than two answers");
  }
  c.expect(secs < 10.0, "runtime exceeded 10 s");
}

void criterion_4() {
  Criterion c("criterion 4: chain family world counts for n = 1..8");
  const long long want[] = {5, 17, 53, 161, 485, 1457, 4373, 13121};
  for (int n = 1; n <= 8; ++n) {
    Program p = parse_program(gen_bench(n));
    Goal g = parse_goal("b0(X)", p);
    DeriveResult r = derive(p, g);
    c.expect(r.complete(), "n=" + std::to_string(n) + ": derivation did not complete");
    long long got = static_cast<long long>(r.leaves.size());
    c.expect(got == want[n - 1], "n=" + std::to_string(n) + ": worlds " + std::to_string(got) +
                                     ", want " + std::to_string(want[n - 1]));
  }
}

void criterion_5() {
  Criterion c("criterion 5: oracle equivalence on 200 random ground-enumerable programs");
  std::mt19937 rng(20240817);
  int compared = 0, attempts = 0;
  double worst = 0.0;
  while (compared < 200 && attempts < 4000) {
    ++attempts;
    Generated gen = random_program(rng);
    Program program;
    Goal goal;
    try {
      program = parse_program(gen.program);
      goal = parse_goal(gen.goal, program);
    } catch (const ParseError&) {
      continue;
    }
    OracleOptions opts;
    opts.max_instances = 6;
    try {
      OracleUniverse u = build_universe(program, goal, opts.max_instances);
      EngineOptions eopts;
      eopts.limits.max_depth = 2000;
      eopts.limits.max_nodes = 200000;
      DeriveResult r = derive(program, goal, eopts);
      if (!r.complete() || u.instances.empty()) continue;
      double oracle_p = oracle_probability(program, goal, opts);
      double engine_p = ground_expanded_probability(r.leaves, program, goal, u);
      double sum = world_probability_sum(program, goal, opts);
      ++compared;
      double diff = std::abs(oracle_p - engine_p);
      worst = std::max(worst, diff);
      if (diff > 1e-9)
        c.expect(false, "mismatch " + std::to_string(diff) + " on goal " + gen.goal +
                            " of program:\n" + gen.program);
      if (std::abs(sum - 1.0) > 1e-9)
        c.expect(false, "world probabilities sum to " + std::to_string(sum));
    } catch (const UniverseError&) {
      continue;
    } catch (const std::runtime_error&) {
      continue;  // outside the supported fragment
    }
  }
  c.expect(compared >= 200, "only " + std::to_string(compared) + " programs compared");
  std::printf("       largest |engine - oracle| = %.3g over %d programs\n", worst, compared);
}

void criterion_6() {
  Criterion c("criterion 6: world probabilities sum to one on every acceptance program");
  auto check = [&](const std::string& name, const std::string& text, const std::string& goal_text,
                   std::size_t max_instances) {
    Program p = parse_program(text);
    Goal g = parse_goal(goal_text, p);
    OracleOptions opts;
    opts.max_instances = max_instances;
    double sum = world_probability_sum(p, g, opts);
    c.expect_near(sum, 1.0, 1e-9, name);
  };
  check("murder", read_sample("murder.alp"), kMurderGoal, 8);
  check("threshold q=0.292", murder_with_prob("0.292"), kMurderGoal, 8);
  check("threshold q=0.294", murder_with_prob("0.294"), kMurderGoal, 8);
  check("power grid", read_sample("power_grid.alp"), kPowerGoal, 20);
  for (int n = 1; n <= 8; ++n)
    check("chain n=" + std::to_string(n), gen_bench(n), "b0(X)", 24);
  // the criterion-5 programs are checked inside criterion 5's loop
}

void criterion_7() {
  Criterion c("criterion 7: BDD counting matches weighted truth tables");
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pr(0.05, 0.95);
  double worst = 0.0;
  for (int round = 0; round < 1000; ++round) {
    DnfFormula f = random_dnf(rng, 12);
    std::vector<double> probs;
    for (int i = 0; i < f.num_vars; ++i) probs.push_back(pr(rng));
    BddManager m;
    double via_bdd = m.prob(m.compile(f), probs);
    double via_table = truth_table_prob(f, probs);
    double diff = std::abs(via_bdd - via_table);
    worst = std::max(worst, diff);
    if (diff > 1e-12) {
      c.expect(false, "round " + std::to_string(round) + ": diff " + std::to_string(diff));
      break;
    }
  }
  std::printf("       largest drift over 1000 formulas = %.3g\n", worst);

  DnfFormula fig;  // (x11 and x21) or (x12 and x21)
  fig.num_vars = 3;
  fig.cubes = {{1, 3}, {2, 3}};
  BddManager m;
  auto root = m.compile(fig);
  c.expect_near(m.prob(root, {0.5, 0.5, 0.5}), 0.375, 1e-12,
                "two-path conjunction formula at p=0.5");
  c.expect(m.reachable_count(root) == 3, "expected the three-node diagram");
}

void criterion_8() {
  Criterion c("criterion 8: equality rewriting rule suite");
  Substitution ctx;
  DisequalityStore store;
  auto evar = [](VarId id) { return Term::var(id, "E", Quant::Existential); };
  auto uvar = [](VarId id) { return Term::var(id, "A", Quant::Universal); };
  auto cst = [](const char* s) { return Term::constant(s); };

  EqOutcome r1 = solve_eq(uvar(1), evar(2), store, ctx);
  c.expect(r1.tag == EqOutcome::Tag::Bound && r1.theta.bound(1), "A = E binds A");
  c.expect(check_neq(uvar(1), evar(2), ctx) == NeqTag::Violated, "A != E is false");
  c.expect(solve_eq(evar(1), evar(2), store, ctx).tag == EqOutcome::Tag::Bound, "E1 = E2 binds");
  c.expect(solve_eq(evar(1), Term::app("f", {cst("a")}), store, ctx).tag == EqOutcome::Tag::Bound,
           "X = f(a) binds");
  c.expect(solve_eq(evar(1), Term::app("f", {evar(1)}), store, ctx).tag == EqOutcome::Tag::False,
           "X = f(X) is false");
  c.expect(check_neq(evar(1), Term::app("f", {evar(1)}), ctx) == NeqTag::Entailed,
           "X != f(X) is true");
  EqOutcome r7 = solve_eq(Term::app("p", {cst("a"), evar(1)}),
                          Term::app("p", {cst("a"), cst("b")}), store, ctx);
  c.expect(r7.tag == EqOutcome::Tag::Bound && term_to_string(r7.theta.resolve(evar(1))) == "b",
           "decomposition binds argument-wise");
  c.expect(check_neq(Term::app("p", {evar(1)}), Term::app("p", {evar(1)}), ctx) ==
               NeqTag::Violated,
           "p(X) != p(X) is false");
  c.expect(solve_eq(Term::app("p", {cst("a")}), Term::app("q", {cst("a")}), store, ctx).tag ==
               EqOutcome::Tag::False,
           "p(a) = q(a) is false");
  c.expect(check_neq(Term::app("p", {cst("a")}), Term::app("q", {cst("a")}), ctx) ==
               NeqTag::Entailed,
           "p(a) != q(a) is true");

  // substitution idempotence on random cases
  std::mt19937 rng(11);
  std::function<TermPtr(int)> rand_term = [&](int depth) -> TermPtr {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 3 : 1);
    switch (pick(rng)) {
      case 0: {
        std::uniform_int_distribution<VarId> v(1, 3);
        return Term::var(v(rng), "V", Quant::Existential);
      }
      case 1: {
        const char* consts[] = {"a", "b"};
        std::uniform_int_distribution<int> k(0, 1);
        return Term::constant(consts[k(rng)]);
      }
      case 2:
        return Term::app("f", {rand_term(depth - 1)});
      default:
        return Term::app("g", {rand_term(depth - 1), rand_term(depth - 1)});
    }
  };
  for (int round = 0; round < 500; ++round) {
    TermPtr t1 = rand_term(3), t2 = rand_term(3);
    EqOutcome out = solve_eq(t1, t2, store, ctx);
    if (out.tag != EqOutcome::Tag::Bound) continue;
    TermPtr once = out.theta.resolve(t1);
    if (!equal_terms(once, out.theta.resolve(once))) {
      c.expect(false, "substitution not idempotent on " + term_to_string(t1) + " = " +
                          term_to_string(t2));
      break;
    }
    if (!equal_terms(out.theta.resolve(t1), out.theta.resolve(t2))) {
      c.expect(false, "returned substitution does not unify its inputs");
      break;
    }
  }
}

void criterion_9() {
  Criterion c("criterion 9: consistency, monotonicity and crisp-constraint safety");
  struct Case {
    std::string name, text, goal;
  };
  std::vector<Case> cases = {
      {"murder", read_sample("murder.alp"), kMurderGoal},
      {"power grid", read_sample("power_grid.alp"), kPowerGoal},
      {"chain n=3", gen_bench(3), "b0(X)"},
  };
  for (const auto& cs : cases) {
    Program p = parse_program(cs.text);
    Goal g = parse_goal(cs.goal, p);
    long long violations = 0;
    EngineOptions opts;
    opts.observer = [&](const DerivationNode& parent, const std::vector<DerivationNode>& children) {
      if (!choices_consistent(parent.expl, parent.subst)) ++violations;
      for (const auto& child : children) {
        if (!choices_consistent(child.expl, child.subst)) ++violations;
        if (child.expl.size() < parent.expl.size()) ++violations;
        for (std::size_t i = 0; i < parent.expl.size(); ++i)
          if (child.expl[i].ic_id != parent.expl[i].ic_id || child.expl[i].k != parent.expl[i].k)
            ++violations;
      }
    };
    DeriveResult r = derive(p, g, opts);
    c.expect(r.complete(), cs.name + ": derivation did not complete");
    c.expect(violations == 0,
             cs.name + ": " + std::to_string(violations) + " invariant violations");

    // crisp constraints hold in every success leaf
    std::vector<IntegrityConstraint> crisp;
    for (const auto& ic : p.ics)
      if (!ic.prob) crisp.push_back(ic);
    if (crisp.empty()) continue;
    OracleUniverse u = build_universe(p, g, 64);
    GroundEvaluator eval(p, u.constants);
    long long bad = 0;
    for (const auto& leaf : r.leaves)
      if (!eval.ics_satisfied(crisp, leaf.delta)) ++bad;
    c.expect(bad == 0, cs.name + ": " + std::to_string(bad) + " leaves violate crisp constraints");
  }
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("================\n%d of 9 criteria passed\n", 9 - failures);
  return failures;
}
