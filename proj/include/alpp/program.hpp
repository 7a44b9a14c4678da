#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "alpp/term.hpp"
#include "alpp/unify.hpp"

namespace alpp {

// Predicate identity is name plus arity: p/2 and p/3 are unrelated.
struct PredKey {
  std::string name;
  std::size_t arity;
  bool operator<(const PredKey& o) const {
    return name < o.name || (name == o.name && arity < o.arity);
  }
  bool operator==(const PredKey& o) const { return name == o.name && arity == o.arity; }
};

enum class AtomKind { Defined, Abducible, True, False, Eq, Neq };

struct Atom {
  std::string pred;
  std::vector<TermPtr> args;
  AtomKind kind = AtomKind::Defined;

  PredKey key() const { return {pred, args.size()}; }
  bool is_builtin() const { return kind != AtomKind::Defined && kind != AtomKind::Abducible; }
};

Atom make_true();
Atom make_false();
Atom make_eq(TermPtr lhs, TermPtr rhs);

struct Clause {
  Atom head;
  std::vector<Atom> body;
};

// Body -> Head implication. A present prob marks it probabilistic. The
// decoration (orig_body_vars / theta) tracks, per instance, how the pristine
// body variables have been bound so far; it is what an atomic choice records
// when the body is discharged.
struct IntegrityConstraint {
  int id = 0;  // 1-based source position among probabilistic constraints, 0 for crisp
  std::optional<double> prob;
  std::vector<Atom> body;
  std::vector<std::vector<Atom>> head;  // disjuncts, each a conjunction
  std::vector<std::string> orig_body_vars;
  std::vector<TermPtr> theta;  // current image of orig_body_vars
};

struct Program {
  std::vector<Clause> kb;
  std::vector<IntegrityConstraint> ics;
  std::set<PredKey> abducibles;
  VarId max_var_id = 0;

  std::vector<const Clause*> clauses_for(const PredKey& key) const;
  const IntegrityConstraint* pic_by_id(int id) const;
  std::map<int, double> pic_probs() const;
};

struct Goal {
  std::vector<Atom> literals;
  std::vector<TermPtr> free_vars;  // named goal variables, in first-occurrence order
  VarId max_var_id = 0;
};

// Fresh-variable copies. Clause/constraint structure is preserved; the
// constraint's decoration follows the renaming so it keeps pointing at the
// copy's variables.
Clause rename_apart(const Clause& c, VarGen& gen, Quant quant);
IntegrityConstraint rename_apart(const IntegrityConstraint& ic, VarGen& gen);

std::string atom_to_string(const Atom& a);
std::string clause_to_string(const Clause& c);
std::string ic_to_string(const IntegrityConstraint& ic);
std::string program_to_string(const Program& p);
std::string goal_to_string(const Goal& g);

// Assigns atom kinds from the program's abducible set (goal atoms are parsed
// before the kinds are known).
void resolve_kinds(std::vector<Atom>& atoms, const Program& p);

}  // namespace alpp
