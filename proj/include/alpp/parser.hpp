#pragma once

#include <stdexcept>
#include <string>

#include "alpp/program.hpp"

namespace alpp {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(col) +
                           ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Program text grammar (one statement per '.'-terminated item, '%' comments):
//
//   decl     := "abducible" IDENT "/" INT "."
//   clause   := atom ( ":-" atomlist )? "."
//   ic       := ( FLOAT "::" )? atomlist "->" headdisj "."
//   headdisj := conj ( ";" conj )*
//   conj     := atomlist                  (true / false are atoms)
//   atom     := IDENT ( "(" termlist ")" )? | term "=" term | "true" | "false"
//   term     := VARIABLE | INTEGER | IDENT ( "(" termlist ")" )?
//
// Lowercase identifiers are constants/functors, uppercase or '_' start a
// variable, '_' alone is a fresh anonymous variable. Clause and constraint
// variables are universally quantified; every constraint head variable must
// also occur in its body. Negated literals are rejected.
Program parse_program(const std::string& text);

// Comma-separated atom list; variables are existential and recorded as the
// goal's free variables.
Goal parse_goal(const std::string& text);
Goal parse_goal(const std::string& text, const Program& program);

}  // namespace alpp
