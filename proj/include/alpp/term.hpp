#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace alpp {

// Quantifier tag carried by every variable. Clause and integrity-constraint
// variables are universal; goal variables and variables introduced on the
// abductive side are existential.
enum class Quant { Existential, Universal };

using VarId = std::int64_t;

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable first-order term: variable, compound (constants are zero-arity
// compounds), or integer.
class Term {
 public:
  enum class Kind { Var, App, Int };

  static TermPtr var(VarId id, std::string name, Quant q);
  static TermPtr app(std::string functor, std::vector<TermPtr> args);
  static TermPtr constant(std::string name) { return app(std::move(name), {}); }
  static TermPtr integer(std::int64_t value);

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::Var; }
  bool is_app() const { return kind_ == Kind::App; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_constant() const { return kind_ == Kind::App && args_.empty(); }

  VarId var_id() const { return var_id_; }
  Quant quant() const { return quant_; }
  const std::string& name() const { return name_; }  // var display name or functor
  const std::vector<TermPtr>& args() const { return args_; }
  std::int64_t int_value() const { return int_value_; }

 private:
  Kind kind_;
  VarId var_id_ = 0;
  Quant quant_ = Quant::Existential;
  std::string name_;
  std::vector<TermPtr> args_;
  std::int64_t int_value_ = 0;
};

// Structural equality (variable identity by id, not name).
bool equal_terms(const TermPtr& a, const TermPtr& b);

// True iff the variable with the given id occurs anywhere in t.
bool occurs(VarId id, const TermPtr& t);

void collect_vars(const TermPtr& t, std::vector<VarId>& out);

std::string term_to_string(const TermPtr& t);

// Monotone source of fresh variable ids. One generator spans a load+query
// session so renaming apart never reuses an id.
class VarGen {
 public:
  explicit VarGen(VarId start = 1) : next_(start) {}
  VarId fresh() { return next_++; }
  VarId peek() const { return next_; }
  void reserve_above(VarId id) {
    if (id >= next_) next_ = id + 1;
  }

 private:
  VarId next_;
};

}  // namespace alpp
