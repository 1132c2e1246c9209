// surface.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#include "mlf/surface.hpp"

#include <cassert>
#include <sstream>

namespace mlf {

std::string SourceSpan::str() const {
  std::ostringstream os;
  os << file << ":" << line0 << ":" << col0;
  return os.str();
}

// ---------------------------------------------------------------------------
// Lexer.

namespace {

enum class Tok {
  Ident, KwType, KwEl, Backslash, Colon, Dot, LParen, RParen, Comma, Semi,
  Bar, EqSign, Arrow, LBracket, RBracket, Zero, Eof
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '\''; }

std::vector<Token> lex(std::string_view text, std::string_view file) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto span_here = [&](int len) {
    SourceSpan s;
    s.file = std::string(file);
    s.line0 = s.line1 = line;
    s.col0 = col;
    s.col1 = col + len - 1;
    return s;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') { ++line; col = 1; ++i; continue; }
    if (c == ' ' || c == '\t' || c == '\r') { ++col; ++i; continue; }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      if (i + 2 < text.size() && text[i + 2] == '>') {
        out.push_back({Tok::Arrow, "-->", span_here(3)});
        i += 3; col += 3;
        continue;
      }
      while (i < text.size() && text[i] != '\n') { ++i; ++col; }
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      Tok k = Tok::Ident;
      if (word == "Type") k = Tok::KwType;
      else if (word == "El") k = Tok::KwEl;
      out.push_back({k, word, span_here(int(j - i))});
      col += int(j - i);
      i = j;
      continue;
    }
    if (c == '0' && (i + 1 >= text.size() || !ident_char(text[i + 1]))) {
      out.push_back({Tok::Zero, "0", span_here(1)});
      ++i; ++col;
      continue;
    }
    Tok k;
    switch (c) {
      case '\\': k = Tok::Backslash; break;
      case ':': k = Tok::Colon; break;
      case '.': k = Tok::Dot; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case ';': k = Tok::Semi; break;
      case '|': k = Tok::Bar; break;
      case '=': k = Tok::EqSign; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      default:
        throw ParseError(span_here(1), std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, std::string(1, c), span_here(1)});
    ++i; ++col;
  }
  SourceSpan eof;
  eof.file = std::string(file);
  eof.line0 = eof.line1 = line;
  eof.col0 = eof.col1 = col;
  out.push_back({Tok::Eof, "", eof});
  return out;
}

// ---------------------------------------------------------------------------
// Parser. Recursive descent with explicit backtracking where the grammar
// needs it (parenthesized kind vs parenthesized term).

class Parser {
public:
  Parser(std::string_view text, std::set<std::string> consts, std::string_view file)
      : toks_(lex(text, file)), consts_(std::move(consts)) {}

  TermPtr term_all() {
    TermPtr t = term();
    expect(Tok::Eof, "end of input");
    return t;
  }
  KindPtr kind_all() {
    KindPtr k = kind();
    expect(Tok::Eof, "end of input");
    return k;
  }
  Arity arity_all() {
    Arity a = arity();
    expect(Tok::Eof, "end of input");
    return a;
  }

  ArityContext arity_context();
  std::vector<std::pair<std::string, KindPtr>> kind_context();
  SigFile signature_file();

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> consts_;
  std::vector<std::string> binders_; // innermost last

  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + std::size_t(ahead);
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& expect(Tok k, const char* what) {
    if (!at(k)) throw ParseError(peek().span, std::string("expected ") + what + ", found '" + peek().text + "'");
    return advance();
  }

  struct Mark { std::size_t pos, depth; };
  Mark mark() const { return {pos_, binders_.size()}; }
  void rewind(Mark m) {
    pos_ = m.pos;
    binders_.resize(m.depth);
  }

  TermPtr resolve(const Token& id) {
    for (std::size_t i = binders_.size(); i-- > 0;)
      if (binders_[i] == id.text) return mk_bound(int(binders_.size() - 1 - i));
    if (consts_.count(id.text)) return mk_const(id.text);
    return mk_free(id.text);
  }

  bool term_atom_start() const {
    return at(Tok::Ident) || at(Tok::LParen);
  }

  // term ::= "\" x ":" kind "." term | atom+     (call sugar in argument lists)
  TermPtr term() {
    if (at(Tok::Backslash)) {
      advance();
      Token x = expect(Tok::Ident, "binder name");
      expect(Tok::Colon, "':'");
      KindPtr ann = kind();
      expect(Tok::Dot, "'.'");
      binders_.push_back(x.text);
      TermPtr body = term();
      binders_.pop_back();
      return mk_lam(x.text, ann, body);
    }
    TermPtr t = term_atom();
    while (true) {
      if (at(Tok::Ident)) {
        t = mk_app(t, resolve(advance()));
      } else if (at(Tok::LParen)) {
        advance();
        t = mk_app(t, term());
        while (at(Tok::Comma)) {
          advance();
          t = mk_app(t, term());
        }
        expect(Tok::RParen, "')'");
      } else {
        break;
      }
    }
    return t;
  }

  TermPtr term_atom() {
    if (at(Tok::Ident)) return resolve(advance());
    if (at(Tok::LParen)) {
      advance();
      TermPtr t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (at(Tok::KwType) || at(Tok::KwEl))
      throw ParseError(peek().span, "found a kind where a term is expected");
    throw ParseError(peek().span, "expected a term, found '" + peek().text + "'");
  }

  // The body of El(...) must be a term; saying so precisely matters for
  // inputs like El(Type), which denote nothing in the grammar.
  TermPtr el_body() {
    Mark m = mark();
    try {
      return term();
    } catch (const ParseError& term_err) {
      rewind(m);
      try {
        (void)kind();
      } catch (const ParseError&) {
        rewind(m);
        throw term_err;
      }
      rewind(m);
      throw ParseError(peek().span,
                       "ill-formed: 'El' applies to a term, but this is a kind "
                       "(the result is neither a term nor a kind)");
    }
  }

  bool kind_proper_start() const {
    if (at(Tok::KwType) || at(Tok::KwEl)) return true;
    return at(Tok::LParen) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon;
  }

  // kind ::= Type | El(term) | (x:K1)K2 | (K1)K2 | kind term-atom*
  // A bare term phrase in kind position is read as El(term).
  KindPtr kind() {
    KindPtr k = kind_head();
    if (!k) {
      // coercion: the whole remaining phrase is a term
      TermPtr t = term();
      return mk_el(t);
    }
    return kapp_suffix(k);
  }

  // Returns null when the input starts with a term phrase (coercion case).
  KindPtr kind_head() {
    if (at(Tok::KwType)) {
      advance();
      return mk_type();
    }
    if (at(Tok::KwEl)) {
      advance();
      expect(Tok::LParen, "'(' after El");
      TermPtr t = el_body();
      expect(Tok::RParen, "')'");
      return mk_el(t);
    }
    if (at(Tok::LParen)) {
      if (peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) {
        advance();
        Token x = advance();
        advance(); // ':'
        KindPtr dom = kind();
        expect(Tok::RParen, "')'");
        binders_.push_back(x.text);
        KindPtr cod = kind();
        binders_.pop_back();
        return mk_pi(x.text, dom, cod);
      }
      // '(' K ')' ... or '(' t ')' K   (sugar with a coerced domain)
      Mark m = mark();
      try {
        advance();
        KindPtr inner = kind();
        expect(Tok::RParen, "')'");
        return after_grouped_kind(inner);
      } catch (const ParseError&) {
        rewind(m);
      }
      // '(' term ')' then a codomain: the paper's (A)K with A a term
      Mark m2 = mark();
      try {
        advance();
        TermPtr t = term();
        expect(Tok::RParen, "')'");
        if (at(Tok::Eof) || at(Tok::RParen) || at(Tok::Semi) || at(Tok::Dot)) {
          // grouped coerced kind, nothing follows
          return mk_el(t);
        }
        binders_.push_back("");
        KindPtr cod = kind();
        binders_.pop_back();
        return mk_pi("_", mk_el(t), cod);
      } catch (const ParseError&) {
        rewind(m2);
        return nullptr;
      }
    }
    return nullptr;
  }

  // After "(K)": Type/El/a binder/another parenthesized kind starts the
  // codomain of a non-dependent product; an identifier or a parenthesized
  // term is a kind-application argument.
  KindPtr after_grouped_kind(KindPtr k) {
    if (at(Tok::KwType) || at(Tok::KwEl) ||
        (at(Tok::LParen) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon)) {
      binders_.push_back("");
      KindPtr cod = kind();
      binders_.pop_back();
      return mk_pi("_", k, cod);
    }
    if (at(Tok::LParen)) {
      // parenthesized term -> application; parenthesized kind -> codomain
      Mark m = mark();
      try {
        advance();
        TermPtr arg = term();
        expect(Tok::RParen, "')'");
        return kapp_suffix(mk_kapp(k, arg));
      } catch (const ParseError&) {
        rewind(m);
      }
      binders_.push_back("");
      KindPtr cod = kind();
      binders_.pop_back();
      return mk_pi("_", k, cod);
    }
    return kapp_suffix(k);
  }

  KindPtr kapp_suffix(KindPtr k) {
    while (term_atom_start()) {
      if (at(Tok::LParen)) {
        advance();
        k = mk_kapp(k, term());
        while (at(Tok::Comma)) {
          advance();
          k = mk_kapp(k, term());
        }
        expect(Tok::RParen, "')'");
      } else {
        k = mk_kapp(k, resolve(advance()));
      }
    }
    return k;
  }

  Arity arity() {
    if (at(Tok::Zero)) {
      advance();
      return Arity::zero();
    }
    if (at(Tok::LParen)) {
      advance();
      Arity l = arity();
      expect(Tok::Comma, "','");
      Arity r = arity();
      expect(Tok::RParen, "')'");
      return Arity::pair(l, r);
    }
    throw ParseError(peek().span, "expected an arity ('0' or '(a1,a2)')");
  }
};

ArityContext Parser::arity_context() {
  ArityContext ctx;
  while (!at(Tok::Eof)) {
    if (at(Tok::Semi) || at(Tok::Comma)) { advance(); continue; }
    Token name = expect(Tok::Ident, "variable name");
    if (name.text == "assume" && at(Tok::Ident)) name = advance();
    expect(Tok::Colon, "':'");
    ctx.entries.emplace_back(name.text, arity());
  }
  if (!ctx.valid())
    throw ParseError(toks_.back().span, "duplicate variable in context");
  return ctx;
}

std::vector<std::pair<std::string, KindPtr>> Parser::kind_context() {
  std::vector<std::pair<std::string, KindPtr>> out;
  while (!at(Tok::Eof)) {
    if (at(Tok::Semi)) { advance(); continue; }
    Token name = expect(Tok::Ident, "variable name");
    if (name.text == "assume" && at(Tok::Ident)) name = advance();
    expect(Tok::Colon, "':'");
    out.emplace_back(name.text, kind());
    if (!at(Tok::Eof)) expect(Tok::Semi, "';'");
  }
  return out;
}

SigFile Parser::signature_file() {
  SigFile file;
  while (!at(Tok::Eof)) {
    if (at(Tok::Semi)) { advance(); continue; }
    Token kw = expect(Tok::Ident, "'const', 'rule' or 'finite'");
    if (kw.text == "const") {
      SigConstDecl d;
      d.span = kw.span;
      d.name = expect(Tok::Ident, "constant name").text;
      expect(Tok::Colon, "':'");
      Token a = expect(Tok::Ident, "'arity'");
      if (a.text != "arity") throw ParseError(a.span, "expected 'arity'");
      d.arity = arity();
      if (at(Tok::Ident) && peek().text == "kind") {
        advance();
        d.kind = kind();
      }
      expect(Tok::Semi, "';'");
      consts_.insert(d.name);
      file.decls.push_back(std::move(d));
    } else if (kw.text == "rule") {
      SigRuleDecl d;
      d.span = kw.span;
      expect(Tok::LBracket, "'['");
      while (!at(Tok::RBracket)) {
        Token x = expect(Tok::Ident, "pattern variable");
        expect(Tok::Colon, "':'");
        d.ctx.emplace_back(x.text, arity());
        if (at(Tok::Comma)) advance();
      }
      advance(); // ']'
      d.lhs = term();
      expect(Tok::Arrow, "'-->'");
      d.rhs = term();
      expect(Tok::Colon, "':'");
      d.result = arity();
      expect(Tok::Semi, "';'");
      file.decls.push_back(std::move(d));
    } else if (kw.text == "finite") {
      SigFiniteDecl d;
      d.span = kw.span;
      d.type_name = expect(Tok::Ident, "type name").text;
      expect(Tok::EqSign, "'='");
      d.ctors.push_back(expect(Tok::Ident, "constructor name").text);
      while (at(Tok::Bar)) {
        advance();
        d.ctors.push_back(expect(Tok::Ident, "constructor name").text);
      }
      expect(Tok::Semi, "';'");
      consts_.insert(d.type_name);
      for (auto& c : d.ctors) consts_.insert(c);
      consts_.insert("E_" + d.type_name);
      file.decls.push_back(std::move(d));
    } else {
      throw ParseError(kw.span, "expected 'const', 'rule' or 'finite'");
    }
  }
  return file;
}

} // namespace

// ---------------------------------------------------------------------------

TermPtr parse_term(std::string_view text, const std::set<std::string>& consts, std::string_view file) {
  return Parser(text, consts, file).term_all();
}

KindPtr parse_kind(std::string_view text, const std::set<std::string>& consts, std::string_view file) {
  return Parser(text, consts, file).kind_all();
}

Arity parse_arity(std::string_view text, std::string_view file) {
  return Parser(text, {}, file).arity_all();
}

Expr parse_expr(std::string_view text, const std::set<std::string>& consts, std::string_view file) {
  try {
    return Expr(parse_term(text, consts, file));
  } catch (const ParseError& term_err) {
    try {
      return Expr(parse_kind(text, consts, file));
    } catch (const ParseError& kind_err) {
      // forward whichever got further; ties go to the kind error, which is
      // the more specific one for inputs like El(Type)
      if (term_err.span.line0 > kind_err.span.line0 ||
          (term_err.span.line0 == kind_err.span.line0 && term_err.span.col0 > kind_err.span.col0))
        throw term_err;
      throw kind_err;
    }
  }
}

ArityContext parse_arity_context(std::string_view text, std::string_view file) {
  return Parser(text, {}, file).arity_context();
}

std::vector<std::pair<std::string, KindPtr>> parse_kind_context(
    std::string_view text, const std::set<std::string>& consts, std::string_view file) {
  return Parser(text, consts, file).kind_context();
}

SigFile parse_signature_file(std::string_view text, const std::set<std::string>& base_consts,
                             std::string_view file) {
  return Parser(text, base_consts, file).signature_file();
}

// ---------------------------------------------------------------------------
// Printer.

namespace {

struct PrintEnv {
  std::vector<std::string> binders; // chosen names, innermost last
  std::set<std::string> avoid;
};

std::string fresh_name(const std::string& hint, const std::set<std::string>& avoid, bool used) {
  std::string base = hint.empty() || hint == "_" ? (used ? std::string("x") : std::string("_")) : hint;
  if (!used && base == "_") return base;
  std::string cand = base;
  while (avoid.count(cand)) cand += '\'';
  return cand;
}

enum TPrec { TermTop = 0, AppFun = 1, AppArg = 2 };

void print_term(const TermPtr& t, PrintEnv& env, TPrec prec, std::string& out);
void print_kind(const KindPtr& k, PrintEnv& env, std::string& out);

void print_term(const TermPtr& t, PrintEnv& env, TPrec prec, std::string& out) {
  if (auto* b = std::get_if<Term::Bound>(&t->node)) {
    std::size_t i = std::size_t(b->index);
    if (i < env.binders.size())
      out += env.binders[env.binders.size() - 1 - i];
    else
      out += "#" + std::to_string(b->index); // dangling index (diagnostics only)
    return;
  }
  if (auto* f = std::get_if<Term::Free>(&t->node)) { out += f->name; return; }
  if (auto* c = std::get_if<Term::Const>(&t->node)) { out += c->name; return; }
  if (auto* l = std::get_if<Term::Lam>(&t->node)) {
    bool parens = prec != TermTop;
    if (parens) out += '(';
    std::string x = fresh_name(l->hint, env.avoid, uses_bound(l->body, 0));
    out += '\\';
    out += x;
    out += ':';
    print_kind(l->ann, env, out);
    out += '.';
    env.binders.push_back(x);
    bool added = env.avoid.insert(x).second;
    print_term(l->body, env, TermTop, out);
    if (added) env.avoid.erase(x);
    env.binders.pop_back();
    if (parens) out += ')';
    return;
  }
  auto& a = std::get<Term::App>(t->node);
  bool parens = prec == AppArg;
  if (parens) out += '(';
  print_term(a.fun, env, AppFun, out);
  out += ' ';
  print_term(a.arg, env, AppArg, out);
  if (parens) out += ')';
}

void print_kind(const KindPtr& k, PrintEnv& env, std::string& out) {
  if (std::holds_alternative<Kind::Type>(k->node)) { out += "Type"; return; }
  if (auto* e = std::get_if<Kind::El>(&k->node)) {
    out += "El(";
    print_term(e->body, env, TermTop, out);
    out += ')';
    return;
  }
  if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
    std::string x = fresh_name(p->hint, env.avoid, uses_bound(p->cod, 0));
    out += '(';
    out += x;
    out += ':';
    print_kind(p->dom, env, out);
    out += ')';
    env.binders.push_back(x);
    bool added = env.avoid.insert(x).second;
    print_kind(p->cod, env, out);
    if (added) env.avoid.erase(x);
    env.binders.pop_back();
    return;
  }
  auto& a = std::get<Kind::KApp>(k->node);
  bool fun_parens = std::holds_alternative<Kind::Pi>(a.fun->node);
  if (fun_parens) out += '(';
  print_kind(a.fun, env, out);
  if (fun_parens) out += ')';
  out += ' ';
  print_term(a.arg, env, AppArg, out);
}

} // namespace

std::string print(const TermPtr& t) { return print(Expr(t)); }
std::string print(const KindPtr& k) { return print(Expr(k)); }

std::string print(const Expr& e) {
  PrintEnv env;
  env.avoid = free_vars(e);
  std::string out;
  if (e.is_term()) print_term(e.term(), env, TermTop, out);
  else print_kind(e.kind(), env, out);
  return out;
}

std::string print(const Arity& a) { return a.str(); }

} // namespace mlf
