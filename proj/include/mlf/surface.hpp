// surface.hpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mlf/syntax.hpp"

namespace mlf {

struct SourceSpan {
  std::string file = "<input>";
  int line0 = 1, col0 = 1; // start, 1-based
  int line1 = 1, col1 = 1; // end, inclusive
  std::string str() const;
};

struct ParseError : std::runtime_error {
  ParseError(SourceSpan s, const std::string& msg)
      : std::runtime_error(s.str() + ": " + msg), span(std::move(s)) {}
  SourceSpan span;
};

// ---------------------------------------------------------------------------
// Concrete grammar:
//   term  ::= "\" ident ":" kind "." term | atom+
//   atom  ::= ident | "(" term ")"            (call sugar: f(a,b) = (f a) b)
//   kind  ::= "Type" | "El" "(" term ")" | "(" ident ":" kind ")" kind
//           | kind term | "(" kind ")" kind   (sugar: fresh unused binder)
//   arity ::= "0" | "(" arity "," arity ")"
// A bare term in kind position is read as El(term), so the §5 blocks can be
// transcribed as printed (e.g. "(A:Type)(B:(A)Type)Type"). Comments run from
// "--" to end of line ("-->" is the rewrite arrow, not a comment).
//
// Identifiers in `consts` parse as constants, anything else as variables.

TermPtr parse_term(std::string_view text, const std::set<std::string>& consts = {},
                   std::string_view file = "<input>");
KindPtr parse_kind(std::string_view text, const std::set<std::string>& consts = {},
                   std::string_view file = "<input>");
Arity parse_arity(std::string_view text, std::string_view file = "<input>");

// Term if the input parses as a term, else kind (the two grammars are disjoint).
Expr parse_expr(std::string_view text, const std::set<std::string>& consts = {},
                std::string_view file = "<input>");

// Entries "x : arity", separated by commas, semicolons or newlines; a leading
// "assume" per entry is accepted.
ArityContext parse_arity_context(std::string_view text, std::string_view file = "<input>");

// Entries "assume x : kind ;" (the leading keyword optional).
std::vector<std::pair<std::string, KindPtr>> parse_kind_context(
    std::string_view text, const std::set<std::string>& consts = {},
    std::string_view file = "<input>");

// ---------------------------------------------------------------------------
// Signature files:
//   const <name> : arity <arity> [ kind <kind> ] ;
//   rule [<x>:<arity>, ...] <lhs> --> <rhs> : <arity> ;
//   finite <name> = <c1> | ... | <cn> ;

struct SigConstDecl {
  std::string name;
  Arity arity;
  KindPtr kind; // null when omitted
  SourceSpan span;
};

struct SigRuleDecl {
  std::vector<std::pair<std::string, Arity>> ctx;
  TermPtr lhs;
  TermPtr rhs;
  Arity result;
  SourceSpan span;
};

struct SigFiniteDecl {
  std::string type_name;
  std::vector<std::string> ctors;
  SourceSpan span;
};

struct SigFile {
  std::vector<std::variant<SigConstDecl, SigRuleDecl, SigFiniteDecl>> decls;
};

// base_consts: constants already in scope (merged signatures).
SigFile parse_signature_file(std::string_view text, const std::set<std::string>& base_consts = {},
                             std::string_view file = "<input>");

// ---------------------------------------------------------------------------
// Printing. parse(print(e)) is alpha-equal to e; binder hints are kept where
// possible and freshened with primes on collision.

std::string print(const TermPtr& t);
std::string print(const KindPtr& k);
std::string print(const Expr& e);
std::string print(const Arity& a);

} // namespace mlf
