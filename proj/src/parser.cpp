#include "alpp/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>

namespace alpp {
namespace {

enum class Tok {
  Ident,
  Var,
  Int,
  Float,
  LParen,
  RParen,
  Comma,
  Semicolon,
  Dot,
  ClauseNeck,  // :-
  Arrow,       // ->
  ProbSep,     // ::
  Slash,
  Equals,
  NotEquals,  // \= (recognized only to report a clear error)
  Negation,   // \+ (same)
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t int_value = 0;
  double float_value = 0.0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(t);
    if (std::islower(static_cast<unsigned char>(c))) return lex_name(t, Tok::Ident);
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') return lex_name(t, Tok::Var);
    switch (c) {
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case ';': advance(); t.kind = Tok::Semicolon; return t;
      case '/': advance(); t.kind = Tok::Slash; return t;
      case '=': advance(); t.kind = Tok::Equals; return t;
      case '.': advance(); t.kind = Tok::Dot; return t;
      case ':':
        advance();
        if (peek() == '-') { advance(); t.kind = Tok::ClauseNeck; return t; }
        if (peek() == ':') { advance(); t.kind = Tok::ProbSep; return t; }
        throw ParseError(t.line, t.col, "expected ':-' or '::'");
      case '-':
        advance();
        if (peek() == '>') { advance(); t.kind = Tok::Arrow; return t; }
        throw ParseError(t.line, t.col, "expected '->'");
      case '\\':
        advance();
        if (peek() == '=') { advance(); t.kind = Tok::NotEquals; return t; }
        if (peek() == '+') { advance(); t.kind = Tok::Negation; return t; }
        throw ParseError(t.line, t.col, "unexpected '\\'");
      default:
        throw ParseError(t.line, t.col, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void advance() {
    if (pos_ < text_.size()) {
      if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
      ++pos_;
    }
  }

  void skip_space() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
      if (pos_ < text_.size() && text_[pos_] == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      return;
    }
  }

  Token lex_number(Token t) {
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek()))) { digits += peek(); advance(); }
    // A dot is part of the number only when a digit follows; otherwise it
    // terminates the statement.
    if (peek() == '.' && pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      digits += '.';
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) { digits += peek(); advance(); }
      t.kind = Tok::Float;
      t.float_value = std::strtod(digits.c_str(), nullptr);
    } else {
      t.kind = Tok::Int;
      t.int_value = std::strtoll(digits.c_str(), nullptr, 10);
    }
    t.text = digits;
    return t;
  }

  Token lex_name(Token t, Tok kind) {
    std::string name;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
      name += peek();
      advance();
    }
    t.kind = kind;
    t.text = name;
    return t;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool reserved_name(const std::string& s) { return s == "true" || s == "false"; }

class Parser {
 public:
  explicit Parser(const std::string& text, VarId first_var_id = 1)
      : lexer_(text), gen_(first_var_id) {
    shift();
  }

  Program parse_program() {
    Program prog;
    std::vector<std::pair<IntegrityConstraint, Token>> ics;
    while (cur_.kind != Tok::End) {
      // "abducible" is a statement-level keyword.
      if (cur_.kind == Tok::Ident && cur_.text == "abducible") {
        parse_abducible_decl(prog);
        continue;
      }
      parse_clause_or_ic(prog, ics);
    }
    int next_pic_id = 1;
    for (auto& [ic, tok] : ics) {
      if (ic.prob) ic.id = next_pic_id++;
      prog.ics.push_back(std::move(ic));
    }
    validate(prog, ics);
    prog.max_var_id = gen_.peek();
    return prog;
  }

  Goal parse_goal_text() {
    Goal g;
    if (cur_.kind == Tok::End) throw ParseError(cur_.line, cur_.col, "empty goal");
    quant_ = Quant::Existential;
    g.literals = parse_atomlist();
    if (cur_.kind == Tok::Dot) shift();
    if (cur_.kind != Tok::End) throw ParseError(cur_.line, cur_.col, "trailing input after goal");
    for (const auto& [name, term] : scope_order_)
      g.free_vars.push_back(term);
    g.max_var_id = gen_.peek();
    return g;
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) throw ParseError(cur_.line, cur_.col, std::string("expected ") + what);
    shift();
  }

  void parse_abducible_decl(Program& prog) {
    shift();  // abducible
    if (cur_.kind != Tok::Ident)
      throw ParseError(cur_.line, cur_.col, "expected predicate name in abducible declaration");
    std::string name = cur_.text;
    if (reserved_name(name))
      throw ParseError(cur_.line, cur_.col, "'" + name + "' is reserved and cannot be abducible");
    shift();
    expect(Tok::Slash, "'/'");
    if (cur_.kind != Tok::Int)
      throw ParseError(cur_.line, cur_.col, "expected arity in abducible declaration");
    std::size_t arity = static_cast<std::size_t>(cur_.int_value);
    shift();
    expect(Tok::Dot, "'.'");
    prog.abducibles.insert({name, arity});  // duplicate declarations are idempotent
  }

  void parse_clause_or_ic(Program& prog,
                          std::vector<std::pair<IntegrityConstraint, Token>>& ics) {
    begin_statement();
    Token start = cur_;
    std::optional<double> prob;
    if ((cur_.kind == Tok::Float || cur_.kind == Tok::Int)) {
      double v = cur_.kind == Tok::Float ? cur_.float_value : static_cast<double>(cur_.int_value);
      Token probTok = cur_;
      shift();
      if (cur_.kind != Tok::ProbSep)
        throw ParseError(cur_.line, cur_.col, "expected '::' after probability annotation");
      shift();
      if (v < 0.0 || v > 1.0)
        throw ParseError(probTok.line, probTok.col, "probability outside [0,1]");
      prob = v;
    }

    std::vector<Atom> first = parse_atomlist();

    if (cur_.kind == Tok::Arrow) {
      shift();
      IntegrityConstraint ic;
      ic.prob = prob;
      ic.body = std::move(first);
      ic.head.push_back(parse_conj());
      while (cur_.kind == Tok::Semicolon) {
        shift();
        ic.head.push_back(parse_conj());
      }
      expect(Tok::Dot, "'.'");
      finish_ic(ic, start);
      ics.emplace_back(std::move(ic), start);
      return;
    }

    if (prob)
      throw ParseError(start.line, start.col,
                       "probability annotations are only allowed on integrity constraints");
    Clause c;
    if (first.size() != 1)
      throw ParseError(start.line, start.col, "clause head must be a single atom");
    c.head = first[0];
    if (c.head.is_builtin() || reserved_name(c.head.pred))
      throw ParseError(start.line, start.col, "reserved atom cannot be a clause head");
    if (cur_.kind == Tok::ClauseNeck) {
      shift();
      c.body = parse_atomlist();
    }
    expect(Tok::Dot, "'.'");
    prog.kb.push_back(std::move(c));
  }

  void finish_ic(IntegrityConstraint& ic, const Token& start) {
    // Drop leading 'true' body atoms so "true -> H" starts with an empty body.
    std::vector<Atom> body;
    for (auto& a : ic.body)
      if (a.kind != AtomKind::True) body.push_back(std::move(a));
    ic.body = std::move(body);

    // Decoration: pristine body variables mapped to themselves.
    std::vector<VarId> seen;
    for (const auto& a : ic.body)
      for (const auto& t : a.args) collect_vars(t, seen);
    std::map<VarId, bool> body_vars;
    for (VarId v : seen) body_vars[v] = true;
    for (const auto& [name, term] : scope_order_) {
      if (body_vars.count(term->var_id())) {
        ic.orig_body_vars.push_back(name);
        ic.theta.push_back(term);
      }
    }
    // Every head variable must occur in the body; heads with free variables
    // have no executable reading here.
    for (const auto& disj : ic.head)
      for (const auto& a : disj)
        for (const auto& t : a.args) {
          std::vector<VarId> hv;
          collect_vars(t, hv);
          for (VarId v : hv)
            if (!body_vars.count(v))
              throw ParseError(start.line, start.col,
                               "constraint head variable does not occur in the body");
        }
  }

  std::vector<Atom> parse_conj() {
    return parse_atomlist();
  }

  std::vector<Atom> parse_atomlist() {
    std::vector<Atom> atoms;
    atoms.push_back(parse_atom());
    while (cur_.kind == Tok::Comma) {
      shift();
      atoms.push_back(parse_atom());
    }
    return atoms;
  }

  Atom parse_atom() {
    if (cur_.kind == Tok::Negation)
      throw ParseError(cur_.line, cur_.col, "negated literals are not supported");
    Token start = cur_;
    TermPtr t = parse_term();
    if (cur_.kind == Tok::Equals) {
      shift();
      TermPtr rhs = parse_term();
      return make_eq(t, rhs);
    }
    if (cur_.kind == Tok::NotEquals)
      throw ParseError(cur_.line, cur_.col, "disequality atoms are not supported in programs");
    if (!t->is_app())
      throw ParseError(start.line, start.col, "expected an atom");
    Atom a;
    a.pred = t->name();
    a.args = t->args();
    if (a.pred == "true" && a.args.empty())
      a.kind = AtomKind::True;
    else if (a.pred == "false" && a.args.empty())
      a.kind = AtomKind::False;
    else
      a.kind = AtomKind::Defined;  // refined against the abducible set later
    return a;
  }

  TermPtr parse_term() {
    if (cur_.kind == Tok::Var) {
      std::string name = cur_.text;
      shift();
      return term_for_var(name);
    }
    if (cur_.kind == Tok::Int) {
      auto t = Term::integer(cur_.int_value);
      shift();
      return t;
    }
    if (cur_.kind == Tok::Ident) {
      std::string functor = cur_.text;
      shift();
      std::vector<TermPtr> args;
      if (cur_.kind == Tok::LParen) {
        shift();
        args.push_back(parse_term());
        while (cur_.kind == Tok::Comma) {
          shift();
          args.push_back(parse_term());
        }
        expect(Tok::RParen, "')'");
      }
      return Term::app(std::move(functor), std::move(args));
    }
    throw ParseError(cur_.line, cur_.col, "expected a term");
  }

  TermPtr term_for_var(const std::string& name) {
    if (name == "_") return Term::var(gen_.fresh(), "_", quant_);
    for (const auto& [n, t] : scope_order_)
      if (n == name) return t;
    TermPtr t = Term::var(gen_.fresh(), name, quant_);
    scope_order_.emplace_back(name, t);
    return t;
  }

  void begin_statement() {
    scope_order_.clear();
    quant_ = Quant::Universal;
  }

  void validate(Program& prog, const std::vector<std::pair<IntegrityConstraint, Token>>&) {
    for (const auto& c : prog.kb) {
      if (prog.abducibles.count(c.head.key()))
        throw ParseError(1, 1, "abducible predicate '" + c.head.pred + "/" +
                                   std::to_string(c.head.args.size()) +
                                   "' cannot be a clause head");
    }
    for (auto& c : prog.kb) resolve_kinds(c.body, prog);
    for (auto& ic : prog.ics) {
      resolve_kinds(ic.body, prog);
      for (auto& disj : ic.head) resolve_kinds(disj, prog);
    }
  }

  Lexer lexer_;
  Token cur_;
  VarGen gen_{1};
  Quant quant_ = Quant::Universal;
  std::vector<std::pair<std::string, TermPtr>> scope_order_;  // per-statement variable scope
};

}  // namespace

Program parse_program(const std::string& text) {
  Parser p(text);
  return p.parse_program();
}

Goal parse_goal(const std::string& text) {
  Parser p(text);
  return p.parse_goal_text();
}

Goal parse_goal(const std::string& text, const Program& program) {
  // Goal variable ids start above the program's so one session never
  // reuses an id.
  Parser p(text, program.max_var_id + 1);
  Goal g = p.parse_goal_text();
  resolve_kinds(g.literals, program);
  return g;
}

}  // namespace alpp
