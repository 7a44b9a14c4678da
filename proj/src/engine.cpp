#include "alpp/engine.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <map>
#include <unordered_map>

namespace alpp {

namespace {

Atom resolve_atom(const Atom& a, const Substitution& s) {
  Atom out = a;
  for (auto& t : out.args) t = s.resolve(t);
  return out;
}

bool atoms_identical(const Atom& a, const Atom& b) {
  if (a.pred != b.pred || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal_terms(a.args[i], b.args[i])) return false;
  return true;
}

bool term_has_universal(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Var:
      return t->quant() == Quant::Universal;
    case Term::Kind::Int:
      return false;
    case Term::Kind::App:
      for (const auto& a : t->args())
        if (term_has_universal(a)) return true;
      return false;
  }
  return false;
}

void ensure_no_universal(const Atom& a) {
  for (const auto& t : a.args)
    if (term_has_universal(t))
      throw EngineError(
          "universal variable escapes into the resolvent (unsupported program fragment): " +
          atom_to_string(a));
}

TermPtr args_tuple(const std::vector<TermPtr>& args) {
  return Term::app("$t", args);
}

std::string canonical_term(const TermPtr& t, std::map<VarId, int>& ids) {
  switch (t->kind()) {
    case Term::Kind::Var: {
      auto [it, inserted] = ids.try_emplace(t->var_id(), static_cast<int>(ids.size()));
      return "_" + std::to_string(it->second);
    }
    case Term::Kind::Int:
      return std::to_string(t->int_value());
    case Term::Kind::App: {
      std::string s = t->name();
      if (!t->args().empty()) {
        s += '(';
        for (std::size_t i = 0; i < t->args().size(); ++i) {
          if (i) s += ',';
          s += canonical_term(t->args()[i], ids);
        }
        s += ')';
      }
      return s;
    }
  }
  return {};
}

}  // namespace

std::string canonical_subst_key(const std::vector<std::string>& dom,
                                const std::vector<TermPtr>& rng, const Substitution& ctx) {
  std::map<VarId, int> ids;
  std::string s;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (i) s += ',';
    s += dom[i];
    s += '/';
    s += canonical_term(ctx.resolve(rng[i]), ids);
  }
  return s;
}

std::string canonical_choice_key(const Choice& c, const Substitution& ctx) {
  return "ic" + std::to_string(c.ic_id) + "{" + canonical_subst_key(c.dom, c.rng, ctx) + "}";
}

bool choices_consistent(const std::vector<Choice>& expl, const Substitution& ctx) {
  std::map<std::string, int> seen;
  for (const auto& c : expl) {
    auto [it, inserted] = seen.try_emplace(canonical_choice_key(c, ctx), c.k);
    if (!inserted && it->second != c.k) return false;
  }
  return true;
}

ICInst propagate(const Atom& delta_atom, const ICInst& ic, const Substitution& ctx, VarGen& gen) {
  // Resolve against the current bindings, then refresh the universals so the
  // copy's variables are private to it.
  std::unordered_map<VarId, TermPtr> fresh;
  std::function<TermPtr(const TermPtr&)> freshen = [&](const TermPtr& raw) -> TermPtr {
    TermPtr t = ctx.resolve(raw);
    std::function<TermPtr(const TermPtr&)> walk = [&](const TermPtr& u) -> TermPtr {
      switch (u->kind()) {
        case Term::Kind::Var: {
          if (u->quant() != Quant::Universal) return u;
          auto it = fresh.find(u->var_id());
          if (it != fresh.end()) return it->second;
          TermPtr nv = Term::var(gen.fresh(), u->name(), Quant::Universal);
          fresh.emplace(u->var_id(), nv);
          return nv;
        }
        case Term::Kind::Int:
          return u;
        case Term::Kind::App: {
          if (u->args().empty()) return u;
          std::vector<TermPtr> args;
          args.reserve(u->args().size());
          for (const auto& a : u->args()) args.push_back(walk(a));
          return Term::app(u->name(), std::move(args));
        }
      }
      return u;
    };
    return walk(t);
  };

  ICInst out;
  out.prob = ic.prob;
  out.pic_id = ic.pic_id;
  out.dec_dom = ic.dec_dom;
  out.dec_rng.reserve(ic.dec_rng.size());
  for (const auto& t : ic.dec_rng) out.dec_rng.push_back(freshen(t));

  const Atom& matched = ic.body.front();
  for (std::size_t i = 0; i < matched.args.size(); ++i)
    out.body.push_back(make_eq(freshen(matched.args[i]), ctx.resolve(delta_atom.args[i])));
  for (std::size_t i = 1; i < ic.body.size(); ++i) {
    Atom a = ic.body[i];
    for (auto& t : a.args) t = freshen(t);
    out.body.push_back(std::move(a));
  }
  out.head.reserve(ic.head.size());
  for (const auto& disj : ic.head) {
    std::vector<Atom> d;
    d.reserve(disj.size());
    for (const auto& a : disj) {
      Atom copy = a;
      for (auto& t : copy.args) t = freshen(t);
      d.push_back(std::move(copy));
    }
    out.head.push_back(std::move(d));
  }
  out.prop_watermark = 0;
  return out;
}

Engine::Engine(const Program& program, const Goal& goal, EngineOptions opts)
    : program_(program), goal_(goal), opts_(std::move(opts)),
      gen_(std::max(program.max_var_id, goal.max_var_id) + 1) {
  resolve_kinds(goal_.literals, program_);
}

DerivationNode Engine::initial_node() {
  DerivationNode node;
  node.resolvent = goal_.literals;
  node.psics.reserve(program_.ics.size());
  for (const auto& ic : program_.ics) {
    IntegrityConstraint renamed = rename_apart(ic, gen_);
    ICInst inst;
    inst.prob = renamed.prob;
    inst.pic_id = renamed.id;
    inst.dec_dom = renamed.orig_body_vars;
    inst.dec_rng = renamed.theta;
    inst.body = renamed.body;
    inst.head = renamed.head;
    node.psics.push_back(std::move(inst));
  }
  return node;
}

// Deterministic sweep: resolvent builtins, abducible moves to delta,
// leading true/false in constraint bodies, crisp single-disjunct discharge,
// and the duplicate-instance drop of the probabilistic equivalence rule.
bool Engine::normalize(DerivationNode& node) {
  bool changed = true;
  while (changed) {
    changed = false;

    // Leftmost selection: builtins are rewritten and abducibles abduced only
    // at the front, so an abducible is selected with its left context
    // already resolved.
    while (!node.resolvent.empty()) {
      Atom a = resolve_atom(node.resolvent.front(), node.subst);
      if (a.kind == AtomKind::Defined) {
        node.resolvent.front() = std::move(a);
        break;
      }
      node.resolvent.erase(node.resolvent.begin());
      changed = true;
      if (a.kind == AtomKind::True) continue;
      if (a.kind == AtomKind::False) return false;
      if (a.kind == AtomKind::Eq) {
        EqOutcome out = solve_eq(a.args[0], a.args[1], node.store, node.subst);
        if (out.failed()) return false;
        if (out.tag == EqOutcome::Tag::Bound) {
          node.subst.merge(out.theta);
          if (!node.store.recheck(node.subst)) return false;
        }
        continue;
      }
      if (a.kind == AtomKind::Neq) {
        NeqOutcome out = solve_neq(a.args[0], a.args[1], std::move(node.store), node.subst);
        node.store = std::move(out.store);
        if (out.tag == NeqTag::Violated) return false;
        continue;
      }
      // abducible
      ensure_no_universal(a);
      bool present = false;
      for (const auto& d : node.delta)
        if (atoms_identical(resolve_atom(d, node.subst), a)) {
          present = true;
          break;
        }
      if (!present) node.delta.push_back(a);
    }

    for (std::size_t i = 0; i < node.psics.size();) {
      ICInst& ic = node.psics[i];
      bool removed = false;
      while (!ic.body.empty()) {
        Atom front = resolve_atom(ic.body.front(), node.subst);
        if (front.kind == AtomKind::True) {
          ic.body.erase(ic.body.begin());
          ic.prop_watermark = 0;
          changed = true;
          continue;
        }
        if (front.kind == AtomKind::False) {
          removed = true;  // body unsatisfiable, implication vacuous
          break;
        }
        if (front.kind == AtomKind::Neq)
          throw EngineError("disequality in a constraint body is not supported");
        ic.body.front() = std::move(front);
        break;
      }
      if (removed) {
        node.psics.erase(node.psics.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        continue;
      }
      if (ic.body.empty()) {
        if (!ic.prob) {
          if (ic.head.size() == 1) {
            for (const auto& a : ic.head[0]) {
              Atom r = resolve_atom(a, node.subst);
              ensure_no_universal(r);
              node.resolvent.push_back(std::move(r));
            }
            node.psics.erase(node.psics.begin() + static_cast<std::ptrdiff_t>(i));
            changed = true;
            continue;
          }
          ++i;  // disjunctive head: branching, handled in step
          continue;
        }
        // Duplicate-instance case of the probabilistic equivalence rule:
        // already chosen with exactly this substitution, either way.
        std::string key = canonical_subst_key(ic.dec_dom, ic.dec_rng, node.subst);
        bool dup = false;
        for (const auto& c : node.expl)
          if (c.ic_id == ic.pic_id && canonical_subst_key(c.dom, c.rng, node.subst) == key) {
            dup = true;
            break;
          }
        if (dup) {
          node.psics.erase(node.psics.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          continue;
        }
        ++i;
        continue;
      }
      // Bookkeeping: skip delta atoms that can never match the leading
      // abducible (predicate identity is fixed under substitution).
      Atom& front = ic.body.front();
      if (front.kind == AtomKind::Abducible) {
        while (ic.prop_watermark < node.delta.size() &&
               !(node.delta[ic.prop_watermark].key() == front.key()))
          ++ic.prop_watermark;
      }
      ++i;
    }
  }
  // A branch whose bindings collapse two choices of one instance onto
  // different k values is contradictory.
  if (!choices_consistent(node.expl, node.subst)) return false;
  return true;
}

std::vector<DerivationNode> Engine::case_analysis(const DerivationNode& node, std::size_t ic_idx) {
  const Atom eq = node.psics[ic_idx].body.front();
  std::vector<DerivationNode> children;

  // Branch 1: impose the equality, keep the remaining implication.
  {
    DerivationNode child = node;
    child.depth++;
    ICInst& ic = child.psics[ic_idx];
    ic.body.erase(ic.body.begin());
    ic.prop_watermark = 0;
    EqOutcome out = solve_eq(eq.args[0], eq.args[1], child.store, child.subst);
    if (!out.failed()) {
      if (out.tag == EqOutcome::Tag::Bound) {
        child.subst.merge(out.theta);
        if (child.store.recheck(child.subst) && choices_consistent(child.expl, child.subst))
          children.push_back(std::move(child));
      } else {
        children.push_back(std::move(child));
      }
    }
  }

  // Branch 2: impose the disequality, drop the implication.
  {
    DerivationNode child = node;
    child.depth++;
    child.psics.erase(child.psics.begin() + static_cast<std::ptrdiff_t>(ic_idx));
    if (child.store.add(eq.args[0], eq.args[1], child.subst)) children.push_back(std::move(child));
  }
  return children;
}

void Engine::unfold_ic(DerivationNode& node, std::size_t ic_idx) {
  ICInst ic = std::move(node.psics[ic_idx]);
  node.psics.erase(node.psics.begin() + static_cast<std::ptrdiff_t>(ic_idx));
  const Atom& front = ic.body.front();
  std::vector<Atom> rest(ic.body.begin() + 1, ic.body.end());

  std::size_t insert_at = ic_idx;
  for (const Clause* c : program_.clauses_for(front.key())) {
    Clause rc = rename_apart(*c, gen_, Quant::Universal);
    ICInst copy;
    copy.prob = ic.prob;
    copy.pic_id = ic.pic_id;
    copy.dec_dom = ic.dec_dom;
    copy.dec_rng = ic.dec_rng;
    for (std::size_t k = 0; k < front.args.size(); ++k)
      copy.body.push_back(make_eq(front.args[k], rc.head.args[k]));
    for (auto& a : rc.body) copy.body.push_back(std::move(a));
    for (const auto& a : rest) copy.body.push_back(a);
    copy.head = ic.head;
    node.psics.insert(node.psics.begin() + static_cast<std::ptrdiff_t>(insert_at++),
                      std::move(copy));
  }
}

std::vector<DerivationNode> Engine::prob_equivalence(const DerivationNode& node,
                                                     std::size_t ic_idx) {
  ICInst ic = node.psics[ic_idx];
  std::vector<TermPtr> rng;
  rng.reserve(ic.dec_rng.size());
  for (const auto& t : ic.dec_rng) rng.push_back(node.subst.resolve(t));

  DerivationNode base = node;
  base.psics.erase(base.psics.begin() + static_cast<std::ptrdiff_t>(ic_idx));

  std::vector<DerivationNode> children;
  for (const auto& disj : ic.head) {
    DerivationNode child = base;
    child.depth++;
    child.expl.push_back({ic.pic_id, ic.dec_dom, rng, 1});
    for (const auto& a : disj) {
      Atom r = resolve_atom(a, child.subst);
      ensure_no_universal(r);
      child.resolvent.push_back(std::move(r));
    }
    children.push_back(std::move(child));
  }
  DerivationNode child = std::move(base);
  child.depth++;
  child.expl.push_back({ic.pic_id, ic.dec_dom, rng, 0});
  children.push_back(std::move(child));
  return children;
}

std::vector<DerivationNode> Engine::unfold_resolvent(const DerivationNode& node) {
  const Atom goal = node.resolvent.front();
  std::vector<Atom> rest(node.resolvent.begin() + 1, node.resolvent.end());
  std::vector<DerivationNode> children;
  for (const Clause* c : program_.clauses_for(goal.key())) {
    DerivationNode child = node;
    child.depth++;
    Clause rc = rename_apart(*c, gen_, Quant::Existential);
    std::vector<Atom> r;
    for (std::size_t k = 0; k < goal.args.size(); ++k)
      r.push_back(make_eq(goal.args[k], rc.head.args[k]));
    for (auto& a : rc.body) r.push_back(std::move(a));
    for (const auto& a : rest) r.push_back(a);
    child.resolvent = std::move(r);
    children.push_back(std::move(child));
  }
  return children;
}

std::vector<DerivationNode> Engine::factoring(const DerivationNode& node, std::size_t i,
                                              std::size_t j) {
  TermPtr ta = args_tuple(node.delta[i].args);
  TermPtr tb = args_tuple(node.delta[j].args);
  std::vector<DerivationNode> children;

  auto advance = [&](DerivationNode& child) {
    child.factor_i = i + 1;
    child.factor_j = j;
    if (child.factor_i >= child.factor_j) {
      child.factor_i = 0;
      child.factor_j = j + 1;
    }
  };

  {
    DerivationNode child = node;
    child.depth++;
    advance(child);
    EqOutcome out = solve_eq(ta, tb, child.store, child.subst);
    if (!out.failed()) {
      if (out.tag == EqOutcome::Tag::Bound) {
        child.subst.merge(out.theta);
        if (child.store.recheck(child.subst) && choices_consistent(child.expl, child.subst))
          children.push_back(std::move(child));
      } else {
        children.push_back(std::move(child));
      }
    }
  }
  {
    DerivationNode child = node;
    child.depth++;
    advance(child);
    if (child.store.add(ta, tb, child.subst)) children.push_back(std::move(child));
  }
  return children;
}

Engine::Step Engine::step(DerivationNode node) {
  if (!normalize(node)) return {Step::Kind::Fail, {}};

  // crisp disjunctive-head discharge
  for (std::size_t i = 0; i < node.psics.size(); ++i) {
    const ICInst& ic = node.psics[i];
    if (!ic.prob && ic.body.empty()) {
      std::vector<DerivationNode> children;
      for (const auto& disj : ic.head) {
        DerivationNode child = node;
        child.depth++;
        child.psics.erase(child.psics.begin() + static_cast<std::ptrdiff_t>(i));
        for (const auto& a : disj) {
          Atom r = resolve_atom(a, child.subst);
          ensure_no_universal(r);
          child.resolvent.push_back(std::move(r));
        }
        children.push_back(std::move(child));
      }
      return finish(node, std::move(children));
    }
  }
  // case analysis
  for (std::size_t i = 0; i < node.psics.size(); ++i)
    if (!node.psics[i].body.empty() && node.psics[i].body.front().kind == AtomKind::Eq)
      return finish(node, case_analysis(node, i));
  // unfolding inside constraint bodies
  for (std::size_t i = 0; i < node.psics.size(); ++i)
    if (!node.psics[i].body.empty() && node.psics[i].body.front().kind == AtomKind::Defined) {
      DerivationNode child = node;
      child.depth++;
      unfold_ic(child, i);
      std::vector<DerivationNode> children;
      children.push_back(std::move(child));
      return finish(node, std::move(children));
    }
  // propagation
  for (std::size_t i = 0; i < node.psics.size(); ++i) {
    const ICInst& ic = node.psics[i];
    if (ic.body.empty() || ic.body.front().kind != AtomKind::Abducible) continue;
    if (ic.prop_watermark >= node.delta.size()) continue;
    // normalize() left the watermark on a matching delta atom
    DerivationNode child = node;
    child.depth++;
    const Atom delta_atom = resolve_atom(child.delta[ic.prop_watermark], child.subst);
    ICInst copy = propagate(delta_atom, child.psics[i], child.subst, gen_);
    child.psics[i].prop_watermark++;
    child.psics.push_back(std::move(copy));
    std::vector<DerivationNode> children;
    children.push_back(std::move(child));
    return finish(node, std::move(children));
  }
  // probabilistic logical equivalence
  for (std::size_t i = 0; i < node.psics.size(); ++i)
    if (node.psics[i].prob && node.psics[i].body.empty())
      return finish(node, prob_equivalence(node, i));
  // goal unfolding
  if (!node.resolvent.empty()) return finish(node, unfold_resolvent(node));
  // factoring
  if (opts_.factoring) {
    std::size_t i = node.factor_i, j = node.factor_j;
    while (j < node.delta.size()) {
      if (node.delta[i].key() == node.delta[j].key()) {
        TermPtr ta = args_tuple(resolve_atom(node.delta[i], node.subst).args);
        TermPtr tb = args_tuple(resolve_atom(node.delta[j], node.subst).args);
        EqOutcome out = solve_eq(ta, tb, node.store, node.subst);
        if (out.tag == EqOutcome::Tag::Bound) {
          // a genuine merge-or-separate alternative
          node.factor_i = i;
          node.factor_j = j;
          return finish(node, factoring(node, i, j));
        }
        // identical atoms or impossible merge: nothing to decide
      }
      if (++i >= j) {
        i = 0;
        ++j;
      }
    }
    node.factor_i = i;
    node.factor_j = j;
  }

  Step st{Step::Kind::Leaf, {}};
  st.leaf = make_leaf(node);
  if (opts_.observer) opts_.observer(node, {});
  return st;
}

Engine::Step Engine::finish(const DerivationNode& parent, std::vector<DerivationNode> children) {
  if (opts_.observer) opts_.observer(parent, children);
  return {Step::Kind::Children, std::move(children)};
}

SuccessLeaf Engine::make_leaf(const DerivationNode& node) const {
  SuccessLeaf leaf;
  for (const auto& raw : node.delta) {
    Atom a = resolve_atom(raw, node.subst);
    bool present = false;
    for (const auto& d : leaf.delta)
      if (atoms_identical(d, a)) {
        present = true;
        break;
      }
    if (!present) leaf.delta.push_back(std::move(a));
  }
  for (const auto& v : goal_.free_vars) {
    TermPtr r = node.subst.resolve(v);
    if (!equal_terms(r, v)) leaf.theta.bind(v->var_id(), r);
  }
  leaf.expl.reserve(node.expl.size());
  for (const auto& c : node.expl) {
    Choice rc = c;
    for (auto& t : rc.rng) t = node.subst.resolve(t);
    leaf.expl.push_back(std::move(rc));
  }
  leaf.store = node.store;
  leaf.store.recheck(node.subst);
  return leaf;
}

DeriveResult Engine::run() {
  DeriveResult result;
  std::vector<DerivationNode> stack;
  stack.push_back(initial_node());
  long long expanded = 0;
  while (!stack.empty()) {
    DerivationNode node = std::move(stack.back());
    stack.pop_back();
    if (node.depth > opts_.limits.max_depth) {
      result.status = DeriveStatus::DepthLimit;
      break;
    }
    if (++expanded > opts_.limits.max_nodes) {
      result.status = DeriveStatus::NodeLimit;
      break;
    }
    Step st = step(std::move(node));
    if (st.kind == Step::Kind::Leaf) {
      result.leaves.push_back(std::move(*st.leaf));
      if (static_cast<long long>(result.leaves.size()) > opts_.limits.max_leaves) {
        result.status = DeriveStatus::LeafLimit;
        break;
      }
    } else if (st.kind == Step::Kind::Children) {
      for (auto it = st.children.rbegin(); it != st.children.rend(); ++it)
        stack.push_back(std::move(*it));
    }
  }
  result.nodes_expanded = expanded;
  return result;
}

DeriveResult derive(const Program& program, const Goal& goal, const EngineOptions& opts) {
  if (opts.threads <= 1 || opts.observer) {
    Engine engine(program, goal, opts);
    return engine.run();
  }

  // Branch-parallel search: widen the frontier in left-to-right order, then
  // explore each subtree independently and splice results back in order.
  Engine root(program, goal, opts);
  struct Entry {
    bool is_leaf = false;
    SuccessLeaf leaf;
    DerivationNode node;
  };
  std::vector<Entry> frontier;
  {
    Entry e;
    e.node = root.initial_node();
    frontier.push_back(std::move(e));
  }
  const std::size_t want = static_cast<std::size_t>(opts.threads) * 8;
  long long expanded = 0;
  DeriveResult result;
  for (;;) {
    std::size_t open = 0, pick = frontier.size();
    int best_depth = -1;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (frontier[i].is_leaf) continue;
      ++open;
      if (best_depth < 0 || frontier[i].node.depth < best_depth) {
        best_depth = frontier[i].node.depth;
        pick = i;
      }
    }
    if (open == 0 || open >= want || pick == frontier.size()) break;
    DerivationNode node = std::move(frontier[pick].node);
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));
    if (++expanded > opts.limits.max_nodes) {
      result.status = DeriveStatus::NodeLimit;
      result.nodes_expanded = expanded;
      return result;
    }
    Engine::Step st = root.step(std::move(node));
    if (st.kind == Engine::Step::Kind::Leaf) {
      Entry e;
      e.is_leaf = true;
      e.leaf = std::move(*st.leaf);
      frontier.insert(frontier.begin() + static_cast<std::ptrdiff_t>(pick), std::move(e));
    } else if (st.kind == Engine::Step::Kind::Children) {
      std::size_t at = pick;
      for (auto& child : st.children) {
        Entry e;
        e.node = std::move(child);
        frontier.insert(frontier.begin() + static_cast<std::ptrdiff_t>(at++), std::move(e));
      }
    }
  }

  std::atomic<long long> node_budget{opts.limits.max_nodes - expanded};
  std::atomic<bool> node_limit_hit{false};
  std::vector<std::future<DeriveResult>> futures(frontier.size());
  VarId base = root.var_gen().peek();
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    if (frontier[i].is_leaf) continue;
    DerivationNode sub = frontier[i].node;
    VarId start = base + static_cast<VarId>(i + 1) * (VarId{1} << 40);
    futures[i] = std::async(std::launch::async, [&program, &goal, &opts, sub, start, &node_budget,
                                                 &node_limit_hit]() {
      EngineOptions worker_opts = opts;
      worker_opts.threads = 1;
      Engine engine(program, goal, worker_opts);
      engine.var_gen().reserve_above(start);
      DeriveResult r;
      std::vector<DerivationNode> stack{sub};
      while (!stack.empty()) {
        if (node_limit_hit.load(std::memory_order_relaxed)) {
          r.status = DeriveStatus::NodeLimit;
          break;
        }
        DerivationNode node = std::move(stack.back());
        stack.pop_back();
        if (node.depth > worker_opts.limits.max_depth) {
          r.status = DeriveStatus::DepthLimit;
          break;
        }
        if (node_budget.fetch_sub(1, std::memory_order_relaxed) <= 0) {
          node_limit_hit.store(true, std::memory_order_relaxed);
          r.status = DeriveStatus::NodeLimit;
          break;
        }
        ++r.nodes_expanded;
        Engine::Step st = engine.step(std::move(node));
        if (st.kind == Engine::Step::Kind::Leaf) {
          r.leaves.push_back(std::move(*st.leaf));
          if (static_cast<long long>(r.leaves.size()) > worker_opts.limits.max_leaves) {
            r.status = DeriveStatus::LeafLimit;
            break;
          }
        } else if (st.kind == Engine::Step::Kind::Children) {
          for (auto it = st.children.rbegin(); it != st.children.rend(); ++it)
            stack.push_back(std::move(*it));
        }
      }
      return r;
    });
  }

  result.nodes_expanded = expanded;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    if (frontier[i].is_leaf) {
      result.leaves.push_back(std::move(frontier[i].leaf));
      continue;
    }
    DeriveResult r = futures[i].get();
    result.nodes_expanded += r.nodes_expanded;
    for (auto& leaf : r.leaves) result.leaves.push_back(std::move(leaf));
    if (r.status != DeriveStatus::Complete && result.status == DeriveStatus::Complete)
      result.status = r.status;
  }
  if (result.status == DeriveStatus::Complete &&
      static_cast<long long>(result.leaves.size()) > opts.limits.max_leaves)
    result.status = DeriveStatus::LeafLimit;
  return result;
}

}  // namespace alpp
