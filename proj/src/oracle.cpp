#include "alpp/oracle.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <unordered_map>

namespace alpp {

namespace {

TermPtr subst_vars(const TermPtr& t, const std::map<VarId, TermPtr>& m) {
  switch (t->kind()) {
    case Term::Kind::Var: {
      auto it = m.find(t->var_id());
      return it == m.end() ? t : it->second;
    }
    case Term::Kind::Int:
      return t;
    case Term::Kind::App: {
      if (t->args().empty()) return t;
      std::vector<TermPtr> args;
      args.reserve(t->args().size());
      for (const auto& a : t->args()) args.push_back(subst_vars(a, m));
      return Term::app(t->name(), std::move(args));
    }
  }
  return t;
}

Atom subst_atom(const Atom& a, const std::map<VarId, TermPtr>& m) {
  Atom out = a;
  for (auto& t : out.args) t = subst_vars(t, m);
  return out;
}

void collect_constants_term(const TermPtr& t, std::map<std::string, TermPtr>& out) {
  switch (t->kind()) {
    case Term::Kind::Var:
      return;
    case Term::Kind::Int:
      out.emplace(term_to_string(t), t);
      return;
    case Term::Kind::App:
      if (t->args().empty()) {
        out.emplace(t->name(), t);
        return;
      }
      for (const auto& a : t->args()) collect_constants_term(a, out);
      return;
  }
}

void collect_atom_vars(const Atom& a, std::vector<VarId>& order, std::set<VarId>& seen) {
  for (const auto& t : a.args) {
    std::vector<VarId> vs;
    collect_vars(t, vs);
    for (VarId v : vs)
      if (seen.insert(v).second) order.push_back(v);
  }
}

// Enumerates all assignments of vars over constants.
void for_each_assignment(const std::vector<VarId>& vars, const std::vector<TermPtr>& constants,
                         const std::function<void(const std::map<VarId, TermPtr>&)>& fn) {
  std::map<VarId, TermPtr> m;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == vars.size()) {
      fn(m);
      return;
    }
    for (const auto& c : constants) {
      m[vars[i]] = c;
      go(i + 1);
    }
  };
  go(0);
}

bool ground_eq_holds(const Atom& a) { return equal_terms(a.args[0], a.args[1]); }

struct GroundClauseRaw {
  std::string head;
  std::vector<std::pair<AtomKind, std::string>> body;  // kind + rendered atom
  bool body_possible = true;
};

// Ground all clauses over the constants; equations are evaluated during
// grounding.
std::vector<GroundClauseRaw> ground_clauses(const Program& program,
                                         const std::vector<TermPtr>& constants) {
  std::vector<GroundClauseRaw> out;
  for (const auto& c : program.kb) {
    std::vector<VarId> vars;
    std::set<VarId> seen;
    collect_atom_vars(c.head, vars, seen);
    for (const auto& b : c.body) collect_atom_vars(b, vars, seen);
    for_each_assignment(vars, constants, [&](const std::map<VarId, TermPtr>& m) {
      GroundClauseRaw gc;
      gc.head = atom_to_string(subst_atom(c.head, m));
      for (const auto& b : c.body) {
        Atom g = subst_atom(b, m);
        switch (g.kind) {
          case AtomKind::True:
            break;
          case AtomKind::False:
            gc.body_possible = false;
            break;
          case AtomKind::Eq:
            if (!ground_eq_holds(g)) gc.body_possible = false;
            break;
          case AtomKind::Neq:
            if (ground_eq_holds(g)) gc.body_possible = false;
            break;
          default:
            gc.body.emplace_back(g.kind, atom_to_string(g));
        }
      }
      if (gc.body_possible) out.push_back(std::move(gc));
    });
  }
  return out;
}

std::set<std::string> least_model_impl(const std::vector<GroundClauseRaw>& clauses,
                                       const std::set<std::string>& abducible_facts) {
  std::set<std::string> model = abducible_facts;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& gc : clauses) {
      if (model.count(gc.head)) continue;
      bool all = true;
      for (const auto& [kind, s] : gc.body)
        if (!model.count(s)) {
          all = false;
          break;
        }
      if (all) {
        model.insert(gc.head);
        changed = true;
      }
    }
  }
  return model;
}

std::set<std::string> all_ground_abducibles(const Program& program,
                                            const std::vector<TermPtr>& constants) {
  std::set<std::string> out;
  for (const auto& key : program.abducibles) {
    std::vector<std::size_t> idx(key.arity, 0);
    // odometer over argument positions
    for (;;) {
      std::vector<TermPtr> args;
      for (std::size_t i = 0; i < key.arity; ++i) args.push_back(constants[idx[i]]);
      Atom a{key.name, args, AtomKind::Abducible};
      out.insert(atom_to_string(a));
      std::size_t i = 0;
      for (; i < key.arity; ++i) {
        if (++idx[i] < constants.size()) break;
        idx[i] = 0;
      }
      if (i == key.arity) break;
    }
  }
  return out;
}

}  // namespace

namespace {

bool atom_holds(const Atom& g, const std::set<std::string>& model) {
  switch (g.kind) {
    case AtomKind::True:
      return true;
    case AtomKind::False:
      return false;
    case AtomKind::Eq:
      return ground_eq_holds(g);
    case AtomKind::Neq:
      return !ground_eq_holds(g);
    default:
      return model.count(atom_to_string(g)) != 0;
  }
}

}  // namespace

GroundEvaluator::GroundEvaluator(const Program& program, std::vector<TermPtr> constants)
    : program_(program), constants_(std::move(constants)) {
  std::vector<GroundClauseRaw> raw = ground_clauses(program_, constants_);
  // prune clause instances that cannot fire under any delta
  std::set<std::string> generous = least_model_impl(raw, all_ground_abducibles(program_, constants_));
  for (const auto& gc : raw) {
    bool feasible = true;
    for (const auto& [kind, s] : gc.body)
      if (!generous.count(s)) {
        feasible = false;
        break;
      }
    if (!feasible) continue;
    GroundClause out;
    out.head = gc.head;
    for (const auto& [kind, s] : gc.body) out.body.push_back(s);
    clauses_.push_back(std::move(out));
  }
}

std::set<std::string> GroundEvaluator::least_model(const std::vector<Atom>& ground_delta) const {
  std::set<std::string> model;
  for (const auto& a : ground_delta) model.insert(atom_to_string(a));
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& gc : clauses_) {
      if (model.count(gc.head)) continue;
      bool all = true;
      for (const auto& s : gc.body)
        if (!model.count(s)) {
          all = false;
          break;
        }
      if (all) {
        model.insert(gc.head);
        changed = true;
      }
    }
  }
  return model;
}

bool GroundEvaluator::ics_satisfied(const std::vector<IntegrityConstraint>& ics,
                                    const std::vector<Atom>& ground_delta) const {
  std::set<std::string> model = least_model(ground_delta);
  for (const auto& ic : ics) {
    std::vector<VarId> vars;
    std::set<VarId> seen;
    for (const auto& a : ic.body) collect_atom_vars(a, vars, seen);
    for (const auto& d : ic.head)
      for (const auto& a : d) collect_atom_vars(a, vars, seen);
    bool ok = true;
    for_each_assignment(vars, constants_, [&](const std::map<VarId, TermPtr>& m) {
      if (!ok) return;
      bool body_true = true;
      for (const auto& a : ic.body)
        if (!atom_holds(subst_atom(a, m), model)) {
          body_true = false;
          break;
        }
      if (!body_true) return;
      for (const auto& d : ic.head) {
        bool disjunct_true = true;
        for (const auto& a : d)
          if (!atom_holds(subst_atom(a, m), model)) {
            disjunct_true = false;
            break;
          }
        if (disjunct_true) return;
      }
      ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

bool GroundEvaluator::goal_holds(const std::vector<Atom>& ground_goal,
                                 const std::vector<Atom>& ground_delta) const {
  std::set<std::string> model = least_model(ground_delta);
  for (const auto& a : ground_goal)
    if (!atom_holds(a, model)) return false;
  return true;
}

std::set<std::string> least_model(const Program& program, const std::vector<Atom>& ground_delta,
                                  const std::vector<TermPtr>& constants) {
  return GroundEvaluator(program, constants).least_model(ground_delta);
}

bool ground_ics_satisfied(const Program& program, const std::vector<IntegrityConstraint>& ics,
                          const std::vector<Atom>& ground_delta,
                          const std::vector<TermPtr>& constants) {
  return GroundEvaluator(program, constants).ics_satisfied(ics, ground_delta);
}

bool ground_goal_holds(const Program& program, const std::vector<Atom>& ground_goal,
                       const std::vector<Atom>& ground_delta,
                       const std::vector<TermPtr>& constants) {
  return GroundEvaluator(program, constants).goal_holds(ground_goal, ground_delta);
}

OracleUniverse build_universe(const Program& program, const Goal& goal,
                              std::size_t max_instances) {
  OracleUniverse u;

  std::map<std::string, TermPtr> consts;
  for (const auto& c : program.kb) {
    for (const auto& t : c.head.args) collect_constants_term(t, consts);
    for (const auto& a : c.body)
      for (const auto& t : a.args) collect_constants_term(t, consts);
  }
  for (const auto& ic : program.ics) {
    for (const auto& a : ic.body)
      for (const auto& t : a.args) collect_constants_term(t, consts);
    for (const auto& d : ic.head)
      for (const auto& a : d)
        for (const auto& t : a.args) collect_constants_term(t, consts);
  }
  for (const auto& a : goal.literals)
    for (const auto& t : a.args) collect_constants_term(t, consts);
  if (consts.empty()) consts.emplace("c1", Term::constant("c1"));
  for (const auto& [name, t] : consts) u.constants.push_back(t);

  // Most generous model: everything derivable when every ground abducible is
  // assumed; used to decide which clause instances are usable at all.
  std::vector<GroundClauseRaw> gclauses = ground_clauses(program, u.constants);
  std::set<std::string> generous =
      least_model_impl(gclauses, all_ground_abducibles(program, u.constants));

  auto derivable = [&](AtomKind kind, const std::string& s, const std::set<std::string>& rel) {
    return kind == AtomKind::Abducible ? rel.count(s) != 0 : generous.count(s) != 0;
  };

  // Relevant abducible base: goal abducibles, abducibles of usable clause
  // bodies, and abducibles forced by constraint heads, to fixpoint.
  std::set<std::string> relevant;
  for (const auto& a : goal.literals) {
    if (a.kind != AtomKind::Abducible) continue;
    std::vector<VarId> vars;
    std::set<VarId> seen;
    collect_atom_vars(a, vars, seen);
    for_each_assignment(vars, u.constants, [&](const std::map<VarId, TermPtr>& m) {
      relevant.insert(atom_to_string(subst_atom(a, m)));
    });
  }
  for (const auto& c : program.kb) {
    std::vector<VarId> vars;
    std::set<VarId> seen;
    collect_atom_vars(c.head, vars, seen);
    for (const auto& b : c.body) collect_atom_vars(b, vars, seen);
    for_each_assignment(vars, u.constants, [&](const std::map<VarId, TermPtr>& m) {
      bool usable = true;
      for (const auto& b : c.body) {
        Atom g = subst_atom(b, m);
        if (g.kind == AtomKind::Defined && !generous.count(atom_to_string(g))) usable = false;
        if (g.kind == AtomKind::Eq && !ground_eq_holds(g)) usable = false;
        if (g.kind == AtomKind::False) usable = false;
      }
      if (!usable) return;
      for (const auto& b : c.body) {
        Atom g = subst_atom(b, m);
        if (g.kind == AtomKind::Abducible) relevant.insert(atom_to_string(g));
      }
    });
  }

  // Constraint instances; head abducibles of admitted instances enlarge the
  // relevant base, so iterate.
  bool grew = true;
  std::set<std::string> instance_seen;
  while (grew) {
    grew = false;
    for (const auto& ic : program.ics) {
      if (!ic.prob) continue;
      std::vector<VarId> vars;
      for (const auto& t : ic.theta) vars.push_back(t->var_id());
      for_each_assignment(vars, u.constants, [&](const std::map<VarId, TermPtr>& m) {
        bool fires = true;
        for (const auto& a : ic.body) {
          Atom g = subst_atom(a, m);
          switch (g.kind) {
            case AtomKind::Abducible:
              if (!relevant.count(atom_to_string(g))) fires = false;
              break;
            case AtomKind::Defined:
              if (!generous.count(atom_to_string(g))) fires = false;
              break;
            case AtomKind::Eq:
              if (!ground_eq_holds(g)) fires = false;
              break;
            case AtomKind::False:
              fires = false;
              break;
            default:
              break;
          }
          if (!fires) break;
        }
        if (!fires) return;
        std::vector<TermPtr> rng;
        for (VarId v : vars) rng.push_back(m.at(v));
        Substitution empty;
        std::string key = "ic" + std::to_string(ic.id) + "{" +
                          canonical_subst_key(ic.orig_body_vars, rng, empty) + "}";
        if (!instance_seen.insert(key).second) return;
        GroundInstance gi;
        gi.pic_id = ic.id;
        gi.prob = *ic.prob;
        gi.instance_key = key;
        gi.crisp_ic.id = 0;
        gi.crisp_ic.prob.reset();
        for (const auto& a : ic.body) gi.crisp_ic.body.push_back(subst_atom(a, m));
        for (const auto& d : ic.head) {
          std::vector<Atom> disj;
          for (const auto& a : d) {
            Atom g = subst_atom(a, m);
            if (g.kind == AtomKind::Abducible) {
              if (relevant.insert(atom_to_string(g)).second) grew = true;
            }
            disj.push_back(std::move(g));
          }
          gi.crisp_ic.head.push_back(std::move(disj));
        }
        u.instances.push_back(std::move(gi));
        grew = true;
      });
    }
  }

  std::sort(u.instances.begin(), u.instances.end(),
            [](const GroundInstance& a, const GroundInstance& b) {
              return a.pic_id != b.pic_id ? a.pic_id < b.pic_id : a.instance_key < b.instance_key;
            });
  if (u.instances.size() > max_instances)
    throw UniverseError("ground instance universe too large: " +
                        std::to_string(u.instances.size()) + " instances (limit " +
                        std::to_string(max_instances) + ")");
  return u;
}

namespace {

// Crisp world program shared by every selection: the knowledge base, the
// non-probabilistic constraints, and domain closure. Closure pins every
// abduced argument to one of the universe constants, so per-world entailment
// is decided over the same finite instance space the worlds range over.
Program world_base(const Program& program, const OracleUniverse& u, VarId& next_var) {
  Program world;
  world.kb = program.kb;
  world.abducibles = program.abducibles;
  next_var = program.max_var_id + 1;
  for (const auto& ic : program.ics)
    if (!ic.prob) world.ics.push_back(ic);

  const std::string dom = "$dom";
  for (const auto& c : u.constants) {
    Clause fact;
    fact.head = {dom, {c}, AtomKind::Defined};
    world.kb.push_back(std::move(fact));
  }
  for (const auto& key : program.abducibles) {
    if (key.arity == 0) continue;
    IntegrityConstraint closure;
    Atom body{key.name, {}, AtomKind::Abducible};
    std::vector<Atom> head;
    for (std::size_t i = 0; i < key.arity; ++i) {
      TermPtr v = Term::var(next_var++, "D" + std::to_string(i), Quant::Universal);
      body.args.push_back(v);
      head.push_back({dom, {v}, AtomKind::Defined});
    }
    closure.body.push_back(std::move(body));
    closure.head.push_back(std::move(head));
    world.ics.push_back(std::move(closure));
  }
  world.max_var_id = next_var;
  return world;
}

bool world_entails(const Program& base, const Goal& goal, const OracleUniverse& u,
                   std::uint64_t mask, const OracleOptions& opts) {
  Program world = base;
  for (std::size_t i = 0; i < u.instances.size(); ++i)
    if (mask & (std::uint64_t{1} << i)) world.ics.push_back(u.instances[i].crisp_ic);

  EngineOptions eopts;
  eopts.limits = opts.world_limits;
  eopts.limits.max_leaves = 0;  // stop at the first success leaf
  DeriveResult r = derive(world, goal, eopts);
  if (!r.leaves.empty()) return true;
  if (r.status != DeriveStatus::Complete && r.status != DeriveStatus::LeafLimit)
    throw UniverseError("world entailment undecided: search resource limit hit");
  return false;
}

double mask_prob(const OracleUniverse& u, std::uint64_t mask) {
  double p = 1.0;
  for (std::size_t i = 0; i < u.instances.size(); ++i)
    p *= (mask & (std::uint64_t{1} << i)) ? u.instances[i].prob : 1.0 - u.instances[i].prob;
  return p;
}

}  // namespace

std::vector<WorldRecord> enumerate_worlds(const Program& program, const Goal& goal,
                                          const OracleOptions& opts, bool with_entailment) {
  OracleUniverse u = build_universe(program, goal, opts.max_instances);
  VarId next_var = 0;
  Program base = world_base(program, u, next_var);
  const std::size_t n = u.instances.size();
  std::vector<WorldRecord> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    WorldRecord w;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) w.chosen.push_back(static_cast<int>(i));
    w.prob = mask_prob(u, mask);
    if (with_entailment) w.entails = world_entails(base, goal, u, mask, opts);
    out.push_back(std::move(w));
  }
  return out;
}

double oracle_probability(const Program& program, const Goal& goal, const OracleOptions& opts) {
  OracleUniverse u = build_universe(program, goal, opts.max_instances);
  VarId next_var = 0;
  Program base = world_base(program, u, next_var);
  const std::size_t n = u.instances.size();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
    if (world_entails(base, goal, u, mask, opts)) total += mask_prob(u, mask);
  return total;
}

double world_probability_sum(const Program& program, const Goal& goal,
                             const OracleOptions& opts) {
  OracleUniverse u = build_universe(program, goal, opts.max_instances);
  const std::size_t n = u.instances.size();
  // byte-indexed partial products keep the full enumeration cheap
  std::vector<std::array<double, 256>> tables((n + 7) / 8);
  for (std::size_t b = 0; b < tables.size(); ++b) {
    for (int byte = 0; byte < 256; ++byte) {
      double p = 1.0;
      for (std::size_t j = 0; j < 8; ++j) {
        std::size_t i = b * 8 + j;
        if (i >= n) break;
        p *= (byte & (1 << j)) ? u.instances[i].prob : 1.0 - u.instances[i].prob;
      }
      tables[b][static_cast<std::size_t>(byte)] = p;
    }
  }
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double p = 1.0;
    for (std::size_t b = 0; b < tables.size(); ++b)
      p *= tables[b][(mask >> (b * 8)) & 0xff];
    total += p;
  }
  return total;
}

double world_mass_of(const std::vector<Explanation>& K, const Program& program, const Goal& goal,
                     const OracleOptions& opts) {
  OracleUniverse u = build_universe(program, goal, opts.max_instances);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < u.instances.size(); ++i) index[u.instances[i].instance_key] = i;
  const std::size_t n = u.instances.size();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    bool compatible = false;
    for (const auto& e : K) {
      bool ok = true;
      for (const auto& c : e.choices) {
        auto it = index.find(c.instance_key);
        if (it == index.end()) {
          ok = false;  // non-ground instance: not a world-level constraint
          break;
        }
        bool chosen = (mask & (std::uint64_t{1} << it->second)) != 0;
        if (chosen != (c.k == 1)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        compatible = true;
        break;
      }
    }
    if (compatible) total += mask_prob(u, mask);
  }
  return total;
}

double ground_expanded_probability(const std::vector<SuccessLeaf>& leaves, const Program& program,
                                   const Goal& goal, const OracleUniverse& universe) {
  std::map<int, double> pic_probs = program.pic_probs();

  // Global ground-variable table, seeded with the universe's instances.
  std::vector<double> var_probs;
  std::map<std::string, int> index;
  for (const auto& gi : universe.instances) {
    index.emplace(gi.instance_key, static_cast<int>(var_probs.size()));
    var_probs.push_back(gi.prob);
  }

  DnfFormula f;
  Substitution empty;
  for (const auto& leaf : leaves) {
    // Existential grounding must cover the choice variables and the store
    // variables: under the closed domain a leaf only contributes where its
    // disequalities are satisfiable.
    std::vector<VarId> vars;
    std::set<VarId> seen;
    auto add_vars = [&](const TermPtr& t) {
      std::vector<VarId> vs;
      collect_vars(t, vs);
      for (VarId v : vs)
        if (seen.insert(v).second) vars.push_back(v);
    };
    for (const auto& c : leaf.expl)
      for (const auto& t : c.rng) add_vars(t);
    for (const auto& [l, r] : leaf.store.pairs()) {
      add_vars(l);
      add_vars(r);
    }

    for_each_assignment(vars, universe.constants, [&](const std::map<VarId, TermPtr>& m) {
      for (const auto& [l, r] : leaf.store.pairs()) {
        if (equal_terms(subst_vars(l, m), subst_vars(r, m))) return;
      }
      std::vector<int> cube;
      for (const auto& c : leaf.expl) {
        std::vector<TermPtr> rng;
        rng.reserve(c.rng.size());
        for (const auto& t : c.rng) rng.push_back(subst_vars(t, m));
        std::string key = "ic" + std::to_string(c.ic_id) + "{" +
                          canonical_subst_key(c.dom, rng, empty) + "}";
        auto [it, inserted] = index.try_emplace(key, static_cast<int>(var_probs.size()));
        if (inserted) var_probs.push_back(pic_probs.at(c.ic_id));
        int lit = it->second + 1;
        cube.push_back(c.k == 1 ? lit : -lit);
      }
      std::sort(cube.begin(), cube.end(), [](int a, int b) { return std::abs(a) < std::abs(b); });
      cube.erase(std::unique(cube.begin(), cube.end()), cube.end());
      for (std::size_t i = 1; i < cube.size(); ++i)
        if (std::abs(cube[i]) == std::abs(cube[i - 1])) return;  // contradictory grounding
      f.cubes.push_back(std::move(cube));
    });
  }
  if (f.cubes.empty()) return 0.0;
  f.num_vars = static_cast<int>(var_probs.size());
  BddManager manager;
  return manager.prob(manager.compile(f), var_probs);
}

}  // namespace alpp
