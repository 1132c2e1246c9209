// typecheck.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#include "mlf/typecheck.hpp"

#include "mlf/surface.hpp"

namespace mlf {

namespace {

using TE = TypeError;

std::optional<Position> find_kapp(const KindPtr& k, const Position& pos) {
  if (std::holds_alternative<Kind::KApp>(k->node)) return pos;
  if (auto* e = std::get_if<Kind::El>(&k->node)) {
    // terms may contain kinds only in lambda annotations
    std::vector<std::pair<TermPtr, Position>> stack{{e->body, pos.child(0)}};
    while (!stack.empty()) {
      auto [t, p] = stack.back();
      stack.pop_back();
      if (auto* l = std::get_if<Term::Lam>(&t->node)) {
        if (auto found = find_kapp(l->ann, p.child(0))) return found;
        stack.emplace_back(l->body, p.child(1));
      } else if (auto* a = std::get_if<Term::App>(&t->node)) {
        stack.emplace_back(a->fun, p.child(0));
        stack.emplace_back(a->arg, p.child(1));
      }
    }
    return std::nullopt;
  }
  if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
    if (auto found = find_kapp(p->dom, pos.child(0))) return found;
    return find_kapp(p->cod, pos.child(1));
  }
  return std::nullopt;
}

std::string fresh_against(const std::string& hint, const std::set<std::string>& avoid) {
  std::string base = hint.empty() || hint == "_" ? "x" : hint;
  while (avoid.count(base)) base += '\'';
  return base;
}

std::set<std::string> names_of(const TypeContext& gamma, const Expr& extra) {
  std::set<std::string> out;
  for (auto& [n, k] : gamma.entries()) {
    (void)k;
    out.insert(n);
  }
  for (auto& n : free_vars(extra)) out.insert(n);
  return out;
}

constexpr std::size_t kConvFuel = 100000;

} // namespace

KindPtr normalize_kind(const MlfEnv& env, const KindPtr& k) {
  auto r = normalize_unchecked(Expr(k), env.conv, Strategy::LeftmostOutermost, kConvFuel);
  if (!r) return k; // fuel exhaustion: SN rules this out on well-formed input
  return r->final().kind();
}

TermPtr normalize_term(const MlfEnv& env, const TermPtr& t) {
  auto r = normalize_unchecked(Expr(t), env.conv, Strategy::LeftmostOutermost, kConvFuel);
  if (!r) return t;
  return r->final().term();
}

bool conv_kind(const MlfEnv& env, const KindPtr& k1, const KindPtr& k2) {
  if (alpha_eq(k1, k2)) return true;
  return alpha_eq(normalize_kind(env, k1), normalize_kind(env, k2));
}

bool conv_term(const MlfEnv& env, const TermPtr& t1, const TermPtr& t2) {
  if (alpha_eq(t1, t2)) return true;
  return alpha_eq(normalize_term(env, t1), normalize_term(env, t2));
}

// ---------------------------------------------------------------------------

const KindPtr* TypeContext::lookup(const std::string& name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

TypeContext TypeContext::extended(const std::string& name, const KindPtr& normal_kind) const {
  TypeContext out = *this;
  out.entries_.emplace_back(name, normal_kind);
  return out;
}

Result<TypeContext, TypeError> TypeContext::make(
    const std::vector<std::pair<std::string, KindPtr>>& entries, const MlfEnv& env) {
  TypeContext gamma;
  for (auto& [name, k] : entries) {
    if (gamma.binds(name))
      return TE{TE::Kind::InvalidContext, Position{}, "variable '" + name + "' bound twice"};
    auto ok = check_kind(env, gamma, k);
    if (!ok) return ok.error();
    gamma.entries_.emplace_back(name, normalize_kind(env, k));
  }
  return gamma;
}

// ---------------------------------------------------------------------------

namespace {

struct Checker {
  const MlfEnv& env;

  Result<std::monostate, TypeError> kind_wf(const TypeContext& gamma, const KindPtr& k,
                                            const Position& pos) {
    if (std::holds_alternative<Kind::Type>(k->node)) return std::monostate{};
    if (auto* e = std::get_if<Kind::El>(&k->node)) {
      auto r = infer(gamma, e->body, pos.child(0));
      if (!r) return r.error();
      if (!std::holds_alternative<Kind::Type>(r->kind->node))
        return TE{TE::Kind::IllFormedKind, pos,
                  "El applies to a term of kind Type, found " + print(r->kind)};
      return std::monostate{};
    }
    if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
      auto dom = kind_wf(gamma, p->dom, pos.child(0));
      if (!dom) return dom.error();
      std::string x = fresh_against(p->hint, names_of(gamma, Expr(p->cod)));
      auto cod = kind_wf(gamma.extended(x, normalize_kind(env, p->dom)),
                         open_kind(p->cod, mk_free(x)), pos.child(1));
      if (!cod) return cod.error();
      return std::monostate{};
    }
    return TE{TE::Kind::NotMlfGrammar, pos, "kind application KN is not in the MLF grammar"};
  }

  Result<TypingResult, TypeError> infer(const TypeContext& gamma, const TermPtr& t,
                                        const Position& pos) {
    if (std::holds_alternative<Term::Bound>(t->node))
      return TE{TE::Kind::UnboundVariable, pos, "dangling bound variable"};
    if (auto* f = std::get_if<Term::Free>(&t->node)) {
      if (const KindPtr* k = gamma.lookup(f->name)) return TypingResult{t, *k};
      return TE{TE::Kind::UnboundVariable, pos, "unbound variable '" + f->name + "'"};
    }
    if (auto* c = std::get_if<Term::Const>(&t->node)) {
      const ConstDecl* d = env.sig ? env.sig->find_const(c->name) : nullptr;
      if (!d || !d->kind)
        return TE{TE::Kind::ConstWithoutKind, pos,
                  "constant '" + c->name + "' has no declared MLF kind"};
      return TypingResult{t, normalize_kind(env, d->kind)};
    }
    if (auto* l = std::get_if<Term::Lam>(&t->node)) {
      auto wf = kind_wf(gamma, l->ann, pos.child(0));
      if (!wf) return wf.error();
      KindPtr dom = normalize_kind(env, l->ann);
      std::string x = fresh_against(l->hint, names_of(gamma, Expr(l->body)));
      auto body = infer(gamma.extended(x, dom), open_term(l->body, mk_free(x)), pos.child(1));
      if (!body) return body.error();
      return TypingResult{t, mk_pi(l->hint, dom, close_kind(body->kind, x))};
    }
    auto& app = std::get<Term::App>(t->node);
    auto fun = infer(gamma, app.fun, pos.child(0));
    if (!fun) return fun.error();
    auto* p = std::get_if<Kind::Pi>(&fun->kind->node);
    if (!p)
      return TE{TE::Kind::NotAProduct, pos.child(0),
                "applied term has kind " + print(fun->kind) + ", not a product"};
    auto arg = infer(gamma, app.arg, pos.child(1));
    if (!arg) return arg.error();
    if (!conv_kind(env, arg->kind, p->dom))
      return TE{TE::Kind::DomainMismatch, pos.child(1),
                "argument has kind " + print(arg->kind) + ", expected " + print(p->dom)};
    return TypingResult{t, normalize_kind(env, open_kind(p->cod, app.arg))};
  }
};

} // namespace

Result<std::monostate, TypeError> check_kind(const MlfEnv& env, const TypeContext& gamma,
                                             const KindPtr& k) {
  if (auto at = find_kapp(k, Position{}))
    return TE{TE::Kind::NotMlfGrammar, *at, "kind application KN is not in the MLF grammar"};
  Checker ch{env};
  return ch.kind_wf(gamma, k, Position{});
}

Result<TypingResult, TypeError> infer_type(const MlfEnv& env, const TypeContext& gamma,
                                           const TermPtr& m) {
  Checker ch{env};
  return ch.infer(gamma, m, Position{});
}

// ---------------------------------------------------------------------------

Result<ArityJudgement, BridgeError> theorem2_bridge(const MlfEnv& env, const TypeContext& gamma,
                                                    const TermPtr& m) {
  auto typing = infer_type(env, gamma, m);
  if (!typing)
    return BridgeError{false, "not well-typed: " + typing.error().reason};

  auto expected = arity_translate(typing->kind);
  if (!expected) return BridgeError{true, "inferred kind is not MLF: " + expected.error().reason};

  auto actx = arity_translate_ctx(gamma.entries());
  if (!actx) return BridgeError{true, "context kind is not MLF: " + actx.error().reason};

  const ConstArityMap* consts = env.sig ? &env.sig->const_arities() : nullptr;
  auto actual = infer_arity(*actx, Expr(m), consts);
  if (!actual)
    return BridgeError{true, "well-typed term has no arity: " + actual.error().reason};
  if (!(*actual == *expected))
    return BridgeError{true, "arity " + actual->str() + " differs from translated kind arity " +
                                 expected->str() + " for " + print(m)};
  return ArityJudgement{*actx, Expr(m), *actual};
}

Result<std::monostate, TypeError> check_signature_kinds(const MlfEnv& env) {
  if (!env.sig) return std::monostate{};
  TypeContext empty;
  for (auto& c : env.sig->consts()) {
    if (!c.kind) continue;
    auto ok = check_kind(env, empty, c.kind);
    if (!ok) {
      TypeError e = ok.error();
      e.reason = "constant '" + c.name + "': " + e.reason;
      return e;
    }
  }
  return std::monostate{};
}

} // namespace mlf
