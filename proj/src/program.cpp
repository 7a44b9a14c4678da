#include "alpp/program.hpp"

#include <sstream>
#include <unordered_map>

namespace alpp {

Atom make_true() { return {"true", {}, AtomKind::True}; }
Atom make_false() { return {"false", {}, AtomKind::False}; }
Atom make_eq(TermPtr lhs, TermPtr rhs) {
  return {"=", {std::move(lhs), std::move(rhs)}, AtomKind::Eq};
}

std::vector<const Clause*> Program::clauses_for(const PredKey& key) const {
  std::vector<const Clause*> out;
  for (const auto& c : kb)
    if (c.head.key() == key) out.push_back(&c);
  return out;
}

const IntegrityConstraint* Program::pic_by_id(int id) const {
  for (const auto& ic : ics)
    if (ic.prob && ic.id == id) return &ic;
  return nullptr;
}

std::map<int, double> Program::pic_probs() const {
  std::map<int, double> out;
  for (const auto& ic : ics)
    if (ic.prob) out[ic.id] = *ic.prob;
  return out;
}

namespace {

using RenameMap = std::unordered_map<VarId, TermPtr>;

TermPtr rename_term(const TermPtr& t, RenameMap& map, VarGen& gen, Quant quant) {
  switch (t->kind()) {
    case Term::Kind::Var: {
      auto it = map.find(t->var_id());
      if (it != map.end()) return it->second;
      TermPtr fresh = Term::var(gen.fresh(), t->name(), quant);
      map.emplace(t->var_id(), fresh);
      return fresh;
    }
    case Term::Kind::Int:
      return t;
    case Term::Kind::App: {
      if (t->args().empty()) return t;
      std::vector<TermPtr> args;
      args.reserve(t->args().size());
      for (const auto& a : t->args()) args.push_back(rename_term(a, map, gen, quant));
      return Term::app(t->name(), std::move(args));
    }
  }
  return t;
}

Atom rename_atom(const Atom& a, RenameMap& map, VarGen& gen, Quant quant) {
  Atom out = a;
  for (auto& arg : out.args) arg = rename_term(arg, map, gen, quant);
  return out;
}

}  // namespace

Clause rename_apart(const Clause& c, VarGen& gen, Quant quant) {
  RenameMap map;
  Clause out;
  out.head = rename_atom(c.head, map, gen, quant);
  out.body.reserve(c.body.size());
  for (const auto& a : c.body) out.body.push_back(rename_atom(a, map, gen, quant));
  return out;
}

IntegrityConstraint rename_apart(const IntegrityConstraint& ic, VarGen& gen) {
  RenameMap map;
  IntegrityConstraint out = ic;
  for (auto& a : out.body) a = rename_atom(a, map, gen, Quant::Universal);
  for (auto& disj : out.head)
    for (auto& a : disj) a = rename_atom(a, map, gen, Quant::Universal);
  for (auto& t : out.theta) t = rename_term(t, map, gen, Quant::Universal);
  return out;
}

std::string atom_to_string(const Atom& a) {
  if (a.kind == AtomKind::Eq || a.kind == AtomKind::Neq) {
    return term_to_string(a.args[0]) + (a.kind == AtomKind::Eq ? " = " : " \\= ") +
           term_to_string(a.args[1]);
  }
  std::string s = a.pred;
  if (!a.args.empty()) {
    s += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) s += ',';
      s += term_to_string(a.args[i]);
    }
    s += ')';
  }
  return s;
}

namespace {

std::string atoms_to_string(const std::vector<Atom>& atoms) {
  std::string s;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += ", ";
    s += atom_to_string(atoms[i]);
  }
  return s;
}

std::string prob_to_string(double p) {
  std::ostringstream os;
  os << p;
  return os.str();
}

}  // namespace

std::string clause_to_string(const Clause& c) {
  std::string s = atom_to_string(c.head);
  if (!c.body.empty()) s += " :- " + atoms_to_string(c.body);
  return s + ".";
}

std::string ic_to_string(const IntegrityConstraint& ic) {
  std::string s;
  if (ic.prob) s += prob_to_string(*ic.prob) + " :: ";
  s += ic.body.empty() ? "true" : atoms_to_string(ic.body);
  s += " -> ";
  for (std::size_t i = 0; i < ic.head.size(); ++i) {
    if (i) s += " ; ";
    s += atoms_to_string(ic.head[i]);
  }
  return s + ".";
}

std::string program_to_string(const Program& p) {
  std::string s;
  for (const auto& key : p.abducibles)
    s += "abducible " + key.name + "/" + std::to_string(key.arity) + ".\n";
  for (const auto& c : p.kb) s += clause_to_string(c) + "\n";
  for (const auto& ic : p.ics) s += ic_to_string(ic) + "\n";
  return s;
}

std::string goal_to_string(const Goal& g) {
  std::string s;
  for (std::size_t i = 0; i < g.literals.size(); ++i) {
    if (i) s += ", ";
    s += atom_to_string(g.literals[i]);
  }
  return s;
}

void resolve_kinds(std::vector<Atom>& atoms, const Program& p) {
  for (auto& a : atoms) {
    if (a.is_builtin()) continue;
    a.kind = p.abducibles.count(a.key()) ? AtomKind::Abducible : AtomKind::Defined;
  }
}

}  // namespace alpp
