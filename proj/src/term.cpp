#include "alpp/term.hpp"

#include <sstream>

namespace alpp {

TermPtr Term::var(VarId id, std::string name, Quant q) {
  auto t = std::make_shared<Term>();
  t->kind_ = Kind::Var;
  t->var_id_ = id;
  t->quant_ = q;
  t->name_ = std::move(name);
  return t;
}

TermPtr Term::app(std::string functor, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind_ = Kind::App;
  t->name_ = std::move(functor);
  t->args_ = std::move(args);
  return t;
}

TermPtr Term::integer(std::int64_t value) {
  auto t = std::make_shared<Term>();
  t->kind_ = Kind::Int;
  t->int_value_ = value;
  return t;
}

bool equal_terms(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Term::Kind::Var:
      return a->var_id() == b->var_id();
    case Term::Kind::Int:
      return a->int_value() == b->int_value();
    case Term::Kind::App: {
      if (a->name() != b->name() || a->args().size() != b->args().size()) return false;
      for (std::size_t i = 0; i < a->args().size(); ++i)
        if (!equal_terms(a->args()[i], b->args()[i])) return false;
      return true;
    }
  }
  return false;
}

bool occurs(VarId id, const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Var:
      return t->var_id() == id;
    case Term::Kind::Int:
      return false;
    case Term::Kind::App:
      for (const auto& a : t->args())
        if (occurs(id, a)) return true;
      return false;
  }
  return false;
}

void collect_vars(const TermPtr& t, std::vector<VarId>& out) {
  switch (t->kind()) {
    case Term::Kind::Var:
      out.push_back(t->var_id());
      return;
    case Term::Kind::Int:
      return;
    case Term::Kind::App:
      for (const auto& a : t->args()) collect_vars(a, out);
      return;
  }
}

std::string term_to_string(const TermPtr& t) {
  std::ostringstream os;
  switch (t->kind()) {
    case Term::Kind::Var:
      os << t->name();
      break;
    case Term::Kind::Int:
      os << t->int_value();
      break;
    case Term::Kind::App:
      os << t->name();
      if (!t->args().empty()) {
        os << '(';
        for (std::size_t i = 0; i < t->args().size(); ++i) {
          if (i) os << ',';
          os << term_to_string(t->args()[i]);
        }
        os << ')';
      }
      break;
  }
  return os.str();
}

}  // namespace alpp
