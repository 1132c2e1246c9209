// syntax.hpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace mlf {

// ---------------------------------------------------------------------------
// Arities: finite binary trees over Zero. There is no reduction on arities;
// structural equality is the only equality.

class Arity {
public:
  Arity() = default; // Zero
  static Arity zero() { return Arity(); }
  static Arity pair(const Arity& l, const Arity& r) {
    Arity a;
    a.node_ = std::make_shared<const std::pair<Arity, Arity>>(l, r);
    return a;
  }

  bool is_zero() const { return node_ == nullptr; }
  bool is_pair() const { return node_ != nullptr; }
  const Arity& left() const { return node_->first; }
  const Arity& right() const { return node_->second; }

  bool operator==(const Arity& o) const;
  bool operator!=(const Arity& o) const { return !(*this == o); }
  bool operator<(const Arity& o) const; // lexicographic, for ordered containers

  int depth() const;
  std::string str() const; // "0" or "(l,r)"

private:
  std::shared_ptr<const std::pair<Arity, Arity>> node_;
};

// ---------------------------------------------------------------------------
// Terms and kinds, mutually recursive. Bound variables are de Bruijn indices
// counting enclosing Lam/Pi binders; free variables and constants carry names.
// Binders keep the surface name as a printing hint; alpha_eq ignores it.

struct Term;
struct Kind;
using TermPtr = std::shared_ptr<const Term>;
using KindPtr = std::shared_ptr<const Kind>;

struct Term {
  struct Bound { int index; };
  struct Free  { std::string name; };
  struct Const { std::string name; };
  struct Lam   { std::string hint; KindPtr ann; TermPtr body; };
  struct App   { TermPtr fun; TermPtr arg; };

  std::variant<Bound, Free, Const, Lam, App> node;
};

struct Kind {
  struct Type {};
  struct El   { TermPtr body; };
  struct Pi   { std::string hint; KindPtr dom; KindPtr cod; };
  struct KApp { KindPtr fun; TermPtr arg; };

  std::variant<Type, El, Pi, KApp> node;
};

TermPtr mk_bound(int index);
TermPtr mk_free(std::string name);
TermPtr mk_const(std::string name);
TermPtr mk_lam(std::string hint, KindPtr ann, TermPtr body);
TermPtr mk_app(TermPtr fun, TermPtr arg);

KindPtr mk_type();
KindPtr mk_el(TermPtr body);
KindPtr mk_pi(std::string hint, KindPtr dom, KindPtr cod);
KindPtr mk_kapp(KindPtr fun, TermPtr arg);

// Ordered variable -> arity assignment (the context A of arity judgements).
struct ArityContext {
  std::vector<std::pair<std::string, Arity>> entries;

  bool valid() const; // names pairwise distinct
  const Arity* lookup(const std::string& name) const;
  ArityContext extended(const std::string& name, const Arity& a) const;
  bool binds(const std::string& name) const { return lookup(name) != nullptr; }
};

// A term-or-kind. Most judgements and traversals are defined on both classes.
class Expr {
public:
  Expr() : v_(TermPtr{}) {}
  Expr(TermPtr t) : v_(std::move(t)) {}
  Expr(KindPtr k) : v_(std::move(k)) {}

  bool is_term() const { return v_.index() == 0; }
  bool is_kind() const { return v_.index() == 1; }
  const TermPtr& term() const { return std::get<0>(v_); }
  const KindPtr& kind() const { return std::get<1>(v_); }
  bool null() const { return is_term() ? !term() : !kind(); }

private:
  std::variant<TermPtr, KindPtr> v_;
};

// ---------------------------------------------------------------------------
// Syntactic operations.

std::set<std::string> free_vars(const Expr& e);
bool contains_free(const Expr& e, const std::string& name);

// Capture-avoiding substitution of a term for a named free variable.
// Descends into kind annotations; preserves the syntactic class of the subject.
TermPtr subst(const TermPtr& subject, const std::string& var, const TermPtr& replacement);
KindPtr subst(const KindPtr& subject, const std::string& var, const TermPtr& replacement);
Expr subst(const Expr& subject, const std::string& var, const TermPtr& replacement);

// Simultaneous substitution of all mapped free variables (one pass).
Expr subst_parallel(const Expr& subject, const std::map<std::string, TermPtr>& map);

// Equality up to consistent bound-variable renaming (structural on indices).
bool alpha_eq(const Expr& a, const Expr& b);
bool alpha_eq(const TermPtr& a, const TermPtr& b);
bool alpha_eq(const KindPtr& a, const KindPtr& b);

std::size_t node_count(const Expr& e);

// Canonical hint-free serialization; equal strings iff alpha-equal.
std::string alpha_key(const Expr& e);

// ---------------------------------------------------------------------------
// de Bruijn plumbing for the reduction engine and generators.

TermPtr shift_term(const TermPtr& t, int by, int cutoff = 0);
KindPtr shift_kind(const KindPtr& k, int by, int cutoff = 0);

// body with Bound(0) replaced by arg (indices adjusted): the beta contractum.
TermPtr open_term(const TermPtr& body, const TermPtr& arg);
KindPtr open_kind(const KindPtr& body, const TermPtr& arg);

// Inverse of opening with a free variable: Free(name) becomes Bound(depth).
TermPtr close_term(const TermPtr& t, const std::string& name);
KindPtr close_kind(const KindPtr& k, const std::string& name);

bool uses_bound(const TermPtr& t, int index);
bool uses_bound(const KindPtr& k, int index);

// ---------------------------------------------------------------------------
// Positions: paths of child indices from the root of a term or kind.
// Children: Lam/Pi 0 = annotation/domain, 1 = body/codomain;
//           App/KApp 0 = function, 1 = argument; El 0 = body.

struct Position {
  std::vector<int> path;

  Position() = default;
  Position(std::initializer_list<int> p) : path(p) {}

  bool is_root() const { return path.empty(); }
  Position child(int i) const {
    Position p = *this;
    p.path.push_back(i);
    return p;
  }
  std::string str() const; // "root" or "0.1.1"
  bool operator==(const Position& o) const { return path == o.path; }
  bool operator<(const Position& o) const { return path < o.path; }
};

// nullopt on invalid position.
std::optional<Expr> subterm_at(const Expr& subject, const Position& pos);
// nullopt on invalid position or when the replacement's class does not fit the slot.
std::optional<Expr> replace_at(const Expr& subject, const Position& pos, const Expr& replacement);

} // namespace mlf
