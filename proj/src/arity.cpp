// arity.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#include "mlf/arity.hpp"

#include <algorithm>

namespace mlf {

bool ctx_valid(const ArityContext& ctx) { return ctx.valid(); }

namespace {

std::string fresh_for(const std::string& hint, const std::set<std::string>& avoid) {
  std::string base = hint.empty() || hint == "_" ? "x" : hint;
  while (avoid.count(base)) base += '\'';
  return base;
}

std::set<std::string> avoid_set(const ArityContext& A, std::initializer_list<Expr> exprs) {
  std::set<std::string> out;
  for (auto& [n, a] : A.entries) {
    (void)a;
    out.insert(n);
  }
  for (auto& e : exprs)
    for (auto& n : free_vars(e)) out.insert(n);
  return out;
}

struct Inferrer {
  const ConstArityMap* consts;

  Result<Arity, ArityError> term(const ArityContext& A, const TermPtr& t, const Position& pos) {
    if (auto* b = std::get_if<Term::Bound>(&t->node)) {
      (void)b;
      return ArityError{ArityError::Kind::UnboundVariable, pos, "dangling bound variable"};
    }
    if (auto* f = std::get_if<Term::Free>(&t->node)) {
      if (const Arity* a = A.lookup(f->name)) return *a;
      return ArityError{ArityError::Kind::UnboundVariable, pos, "unbound variable '" + f->name + "'"};
    }
    if (auto* c = std::get_if<Term::Const>(&t->node)) {
      if (consts) {
        auto it = consts->find(c->name);
        if (it != consts->end()) return it->second;
      }
      return ArityError{ArityError::Kind::UndeclaredConstant, pos,
                        "constant '" + c->name + "' has no declared arity"};
    }
    if (auto* l = std::get_if<Term::Lam>(&t->node)) {
      auto a1 = kind(A, l->ann, pos.child(0));
      if (!a1) return a1.error();
      std::string x = fresh_for(l->hint, avoid_set(A, {Expr(l->body)}));
      auto a2 = term(A.extended(x, *a1), open_term(l->body, mk_free(x)), pos.child(1));
      if (!a2) return a2.error();
      return Arity::pair(*a1, *a2);
    }
    auto& app = std::get<Term::App>(t->node);
    auto af = term(A, app.fun, pos.child(0));
    if (!af) return af.error();
    if (af->is_zero())
      return ArityError{ArityError::Kind::NotApplicable, pos.child(0),
                        "arity Zero cannot be applied"};
    auto an = term(A, app.arg, pos.child(1));
    if (!an) return an.error();
    if (!(af->left() == *an))
      return ArityError{ArityError::Kind::ArgumentMismatch, pos.child(1),
                        "argument has arity " + an->str() + ", expected " + af->left().str()};
    return af->right();
  }

  Result<Arity, ArityError> kind(const ArityContext& A, const KindPtr& k, const Position& pos) {
    if (std::holds_alternative<Kind::Type>(k->node)) return Arity::zero();
    if (auto* e = std::get_if<Kind::El>(&k->node)) {
      auto am = term(A, e->body, pos.child(0));
      if (!am) return am.error();
      if (!am->is_zero())
        return ArityError{ArityError::Kind::ElArgumentNotZero, pos.child(0),
                          "El applies to arity Zero, found " + am->str()};
      return Arity::zero();
    }
    if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
      auto a1 = kind(A, p->dom, pos.child(0));
      if (!a1) return a1.error();
      std::string x = fresh_for(p->hint, avoid_set(A, {Expr(p->cod)}));
      auto a2 = kind(A.extended(x, *a1), open_kind(p->cod, mk_free(x)), pos.child(1));
      if (!a2) return a2.error();
      return Arity::pair(*a1, *a2);
    }
    auto& app = std::get<Kind::KApp>(k->node);
    auto af = kind(A, app.fun, pos.child(0));
    if (!af) return af.error();
    if (af->is_zero())
      return ArityError{ArityError::Kind::NotApplicable, pos.child(0),
                        "arity Zero cannot be applied"};
    auto an = term(A, app.arg, pos.child(1));
    if (!an) return an.error();
    if (!(af->left() == *an))
      return ArityError{ArityError::Kind::ArgumentMismatch, pos.child(1),
                        "argument has arity " + an->str() + ", expected " + af->left().str()};
    return af->right();
  }
};

} // namespace

Result<Arity, ArityError> infer_arity(const ArityContext& ctx, const Expr& subject,
                                      const ConstArityMap* consts) {
  if (!ctx.valid())
    return ArityError{ArityError::Kind::InvalidContext, Position{}, "duplicate variable in context"};
  Inferrer inf{consts};
  if (subject.is_term()) return inf.term(ctx, subject.term(), Position{});
  return inf.kind(ctx, subject.kind(), Position{});
}

// ---------------------------------------------------------------------------
// Derivation enumeration.

namespace {

std::optional<Derivation> derive_validity(const ArityContext& A, int depth) {
  if (depth < 1) return std::nullopt;
  Derivation d;
  d.context = A;
  d.is_validity = true;
  if (A.entries.empty()) {
    d.rule = "empty-ctx";
    return d;
  }
  ArityContext prefix;
  prefix.entries.assign(A.entries.begin(), A.entries.end() - 1);
  const std::string& x = A.entries.back().first;
  if (prefix.binds(x)) return std::nullopt; // x in FV(A)
  auto premise = derive_validity(prefix, depth - 1);
  if (!premise) return std::nullopt;
  d.rule = "ctx-extend";
  d.premises.push_back(std::move(*premise));
  return d;
}

struct Enumerator {
  const ConstArityMap* consts;

  std::vector<Derivation> enumerate(const ArityContext& A, const Expr& e, int depth) {
    std::vector<Derivation> out;
    if (depth <= 0) return out;
    if (e.is_term()) enum_term(A, e.term(), depth, out);
    else enum_kind(A, e.kind(), depth, out);
    return out;
  }

  void conclude(std::vector<Derivation>& out, const char* rule, const ArityContext& A,
                const Expr& subject, const Arity& a, std::vector<Derivation> premises) {
    Derivation d;
    d.rule = rule;
    d.context = A;
    d.subject = subject;
    d.arity = a;
    d.premises = std::move(premises);
    out.push_back(std::move(d));
  }

  void enum_term(const ArityContext& A, const TermPtr& t, int depth, std::vector<Derivation>& out) {
    if (auto* f = std::get_if<Term::Free>(&t->node)) {
      if (const Arity* a = A.lookup(f->name))
        if (auto v = derive_validity(A, depth - 1))
          conclude(out, "var", A, Expr(t), *a, {std::move(*v)});
      return;
    }
    if (auto* c = std::get_if<Term::Const>(&t->node)) {
      if (consts) {
        auto it = consts->find(c->name);
        if (it != consts->end())
          if (auto v = derive_validity(A, depth - 1))
            conclude(out, "const", A, Expr(t), it->second, {std::move(*v)});
      }
      return;
    }
    if (auto* l = std::get_if<Term::Lam>(&t->node)) {
      std::string x = fresh_for(l->hint, avoid_set(A, {Expr(l->body)}));
      TermPtr body = open_term(l->body, mk_free(x));
      for (auto& d1 : enumerate(A, Expr(l->ann), depth - 1))
        for (auto& d2 : enumerate(A.extended(x, d1.arity), Expr(body), depth - 1))
          conclude(out, "lam", A, Expr(t), Arity::pair(d1.arity, d2.arity), {d1, d2});
      return;
    }
    if (auto* app = std::get_if<Term::App>(&t->node)) {
      for (auto& d1 : enumerate(A, Expr(app->fun), depth - 1)) {
        if (!d1.arity.is_pair()) continue;
        for (auto& d2 : enumerate(A, Expr(app->arg), depth - 1)) {
          if (!(d2.arity == d1.arity.left())) continue;
          conclude(out, "app", A, Expr(t), d1.arity.right(), {d1, d2});
        }
      }
      return;
    }
    // bound variables have no judgement of their own
  }

  void enum_kind(const ArityContext& A, const KindPtr& k, int depth, std::vector<Derivation>& out) {
    if (std::holds_alternative<Kind::Type>(k->node)) {
      if (auto v = derive_validity(A, depth - 1))
        conclude(out, "type", A, Expr(k), Arity::zero(), {std::move(*v)});
      return;
    }
    if (auto* e = std::get_if<Kind::El>(&k->node)) {
      for (auto& d : enumerate(A, Expr(e->body), depth - 1)) {
        if (!d.arity.is_zero()) continue;
        conclude(out, "el", A, Expr(k), Arity::zero(), {d});
      }
      return;
    }
    if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
      std::string x = fresh_for(p->hint, avoid_set(A, {Expr(p->cod)}));
      KindPtr cod = open_kind(p->cod, mk_free(x));
      for (auto& d1 : enumerate(A, Expr(p->dom), depth - 1))
        for (auto& d2 : enumerate(A.extended(x, d1.arity), Expr(cod), depth - 1))
          conclude(out, "pi", A, Expr(k), Arity::pair(d1.arity, d2.arity), {d1, d2});
      return;
    }
    auto& app = std::get<Kind::KApp>(k->node);
    for (auto& d1 : enumerate(A, Expr(app.fun), depth - 1)) {
      if (!d1.arity.is_pair()) continue;
      for (auto& d2 : enumerate(A, Expr(app.arg), depth - 1)) {
        if (!(d2.arity == d1.arity.left())) continue;
        conclude(out, "kapp", A, Expr(k), d1.arity.right(), {d1, d2});
      }
    }
  }
};

} // namespace

std::vector<Derivation> enumerate_derivations(const ArityContext& ctx, const Expr& subject,
                                              int depth_bound, const ConstArityMap* consts) {
  if (!ctx.valid()) return {};
  Enumerator en{consts};
  return en.enumerate(ctx, subject, depth_bound);
}

std::vector<Arity> derivable_arities(const std::vector<Derivation>& ds) {
  std::vector<Arity> out;
  for (auto& d : ds) {
    bool seen = false;
    for (auto& a : out)
      if (a == d.arity) { seen = true; break; }
    if (!seen) out.push_back(d.arity);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kind -> arity translation.

namespace {

Result<Arity, TranslateError> translate(const KindPtr& k, const Position& pos) {
  if (std::holds_alternative<Kind::Type>(k->node)) return Arity::zero();
  if (std::holds_alternative<Kind::El>(k->node)) return Arity::zero();
  if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
    auto l = translate(p->dom, pos.child(0));
    if (!l) return l.error();
    auto r = translate(p->cod, pos.child(1));
    if (!r) return r.error();
    return Arity::pair(*l, *r);
  }
  return TranslateError{pos, "kind application KN is not in the MLF grammar"};
}

} // namespace

Result<Arity, TranslateError> arity_translate(const KindPtr& kind) {
  return translate(kind, Position{});
}

Result<ArityContext, TranslateError> arity_translate_ctx(
    const std::vector<std::pair<std::string, KindPtr>>& gamma) {
  ArityContext out;
  for (auto& [name, k] : gamma) {
    auto a = arity_translate(k);
    if (!a) return a.error();
    out.entries.emplace_back(name, *a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Free-variable arity reconstruction by first-order unification.

namespace {

struct MA;
using MAPtr = std::shared_ptr<const MA>;

struct MA {
  int var = -1;  // >= 0: metavariable id
  MAPtr l, r;    // both set: pair; otherwise (var < 0): Zero
  static MAPtr zero() {
    static MAPtr z = std::make_shared<const MA>();
    return z;
  }
  static MAPtr pair(MAPtr a, MAPtr b) {
    auto m = std::make_shared<MA>();
    m->l = std::move(a);
    m->r = std::move(b);
    return m;
  }
  static MAPtr meta(int id) {
    auto m = std::make_shared<MA>();
    m->var = id;
    return m;
  }
  bool is_var() const { return var >= 0; }
  bool is_pair() const { return l != nullptr; }
  bool is_zero() const { return !is_var() && !is_pair(); }
};

struct Unifier {
  std::vector<MAPtr> sol; // indexed by metavariable id

  MAPtr fresh() {
    sol.push_back(nullptr);
    return MA::meta(int(sol.size()) - 1);
  }

  MAPtr walk(MAPtr m) {
    while (m->is_var() && sol[std::size_t(m->var)]) m = sol[std::size_t(m->var)];
    return m;
  }

  bool occurs(int id, const MAPtr& m0) {
    MAPtr m = walk(m0);
    if (m->is_var()) return m->var == id;
    if (m->is_pair()) return occurs(id, m->l) || occurs(id, m->r);
    return false;
  }

  bool unify(const MAPtr& a0, const MAPtr& b0) {
    MAPtr a = walk(a0), b = walk(b0);
    if (a->is_var() && b->is_var() && a->var == b->var) return true;
    if (a->is_var()) {
      if (occurs(a->var, b)) return false;
      sol[std::size_t(a->var)] = b;
      return true;
    }
    if (b->is_var()) return unify(b, a);
    if (a->is_zero() && b->is_zero()) return true;
    if (a->is_pair() && b->is_pair()) return unify(a->l, b->l) && unify(a->r, b->r);
    return false;
  }

  Arity resolve(const MAPtr& m0) {
    MAPtr m = walk(m0);
    if (m->is_pair()) return Arity::pair(resolve(m->l), resolve(m->r));
    return Arity::zero(); // Zero, or an unconstrained metavariable
  }

  static MAPtr lift(const Arity& a) {
    if (a.is_zero()) return MA::zero();
    return MA::pair(lift(a.left()), lift(a.right()));
  }
};

struct Reconstructor {
  const ConstArityMap* consts;
  const ArityContext* given;
  Unifier uni;
  std::vector<std::pair<std::string, MAPtr>> frees; // first-occurrence order
  std::vector<MAPtr> bound;                         // innermost last

  MAPtr free_arity(const std::string& name) {
    for (auto& [n, m] : frees)
      if (n == name) return m;
    MAPtr m = uni.fresh();
    frees.emplace_back(name, m);
    return m;
  }

  Result<MAPtr, ArityError> term(const TermPtr& t, const Position& pos) {
    if (auto* b = std::get_if<Term::Bound>(&t->node)) {
      std::size_t i = std::size_t(b->index);
      if (i >= bound.size())
        return ArityError{ArityError::Kind::UnboundVariable, pos, "dangling bound variable"};
      return bound[bound.size() - 1 - i];
    }
    if (auto* f = std::get_if<Term::Free>(&t->node)) {
      if (const Arity* a = given->lookup(f->name)) return Unifier::lift(*a);
      return free_arity(f->name);
    }
    if (auto* c = std::get_if<Term::Const>(&t->node)) {
      if (consts) {
        auto it = consts->find(c->name);
        if (it != consts->end()) return Unifier::lift(it->second);
      }
      return ArityError{ArityError::Kind::UndeclaredConstant, pos,
                        "constant '" + c->name + "' has no declared arity"};
    }
    if (auto* l = std::get_if<Term::Lam>(&t->node)) {
      auto a1 = kind(l->ann, pos.child(0));
      if (!a1) return a1.error();
      bound.push_back(*a1);
      auto a2 = term(l->body, pos.child(1));
      bound.pop_back();
      if (!a2) return a2.error();
      return MA::pair(*a1, *a2);
    }
    auto& app = std::get<Term::App>(t->node);
    auto af = term(app.fun, pos.child(0));
    if (!af) return af.error();
    auto an = term(app.arg, pos.child(1));
    if (!an) return an.error();
    MAPtr res = uni.fresh();
    if (!uni.unify(*af, MA::pair(*an, res)))
      return ArityError{ArityError::Kind::ArgumentMismatch, pos,
                        "no arity assignment makes this application correct"};
    return res;
  }

  Result<MAPtr, ArityError> kind(const KindPtr& k, const Position& pos) {
    if (std::holds_alternative<Kind::Type>(k->node)) return MA::zero();
    if (auto* e = std::get_if<Kind::El>(&k->node)) {
      auto am = term(e->body, pos.child(0));
      if (!am) return am.error();
      if (!uni.unify(*am, MA::zero()))
        return ArityError{ArityError::Kind::ElArgumentNotZero, pos.child(0),
                          "El applies to arity Zero"};
      return MA::zero();
    }
    if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
      auto a1 = kind(p->dom, pos.child(0));
      if (!a1) return a1.error();
      bound.push_back(*a1);
      auto a2 = kind(p->cod, pos.child(1));
      bound.pop_back();
      if (!a2) return a2.error();
      return MA::pair(*a1, *a2);
    }
    auto& app = std::get<Kind::KApp>(k->node);
    auto af = kind(app.fun, pos.child(0));
    if (!af) return af.error();
    auto an = term(app.arg, pos.child(1));
    if (!an) return an.error();
    MAPtr res = uni.fresh();
    if (!uni.unify(*af, MA::pair(*an, res)))
      return ArityError{ArityError::Kind::ArgumentMismatch, pos,
                        "no arity assignment makes this application correct"};
    return res;
  }
};

} // namespace

Result<ArityContext, ArityError> reconstruct_context(const Expr& subject, const ArityContext& given,
                                                     const ConstArityMap* consts) {
  if (!given.valid())
    return ArityError{ArityError::Kind::InvalidContext, Position{}, "duplicate variable in context"};
  Reconstructor rec;
  rec.consts = consts;
  rec.given = &given;
  auto r = subject.is_term() ? rec.term(subject.term(), Position{})
                             : rec.kind(subject.kind(), Position{});
  if (!r) return r.error();
  ArityContext out = given;
  for (auto& [name, m] : rec.frees) out.entries.emplace_back(name, rec.uni.resolve(m));
  return out;
}

} // namespace mlf
