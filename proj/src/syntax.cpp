// syntax.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#include "mlf/syntax.hpp"

#include <sstream>

namespace mlf {

bool Arity::operator==(const Arity& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  return node_->first == o.node_->first && node_->second == o.node_->second;
}

bool Arity::operator<(const Arity& o) const {
  if (is_zero()) return o.is_pair();
  if (o.is_zero()) return false;
  if (left() < o.left()) return true;
  if (o.left() < left()) return false;
  return right() < o.right();
}

int Arity::depth() const {
  if (is_zero()) return 0;
  return 1 + std::max(left().depth(), right().depth());
}

std::string Arity::str() const {
  if (is_zero()) return "0";
  return "(" + left().str() + "," + right().str() + ")";
}

bool ArityContext::valid() const {
  std::set<std::string> seen;
  for (auto& [name, a] : entries) {
    (void)a;
    if (!seen.insert(name).second) return false;
  }
  return true;
}

const Arity* ArityContext::lookup(const std::string& name) const {
  for (auto it = entries.rbegin(); it != entries.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

ArityContext ArityContext::extended(const std::string& name, const Arity& a) const {
  ArityContext out = *this;
  out.entries.emplace_back(name, a);
  return out;
}

TermPtr mk_bound(int index) { return std::make_shared<const Term>(Term{Term::Bound{index}}); }
TermPtr mk_free(std::string name) { return std::make_shared<const Term>(Term{Term::Free{std::move(name)}}); }
TermPtr mk_const(std::string name) { return std::make_shared<const Term>(Term{Term::Const{std::move(name)}}); }
TermPtr mk_lam(std::string hint, KindPtr ann, TermPtr body) {
  return std::make_shared<const Term>(Term{Term::Lam{std::move(hint), std::move(ann), std::move(body)}});
}
TermPtr mk_app(TermPtr fun, TermPtr arg) {
  return std::make_shared<const Term>(Term{Term::App{std::move(fun), std::move(arg)}});
}

KindPtr mk_type() {
  static const KindPtr t = std::make_shared<const Kind>(Kind{Kind::Type{}});
  return t;
}
KindPtr mk_el(TermPtr body) { return std::make_shared<const Kind>(Kind{Kind::El{std::move(body)}}); }
KindPtr mk_pi(std::string hint, KindPtr dom, KindPtr cod) {
  return std::make_shared<const Kind>(Kind{Kind::Pi{std::move(hint), std::move(dom), std::move(cod)}});
}
KindPtr mk_kapp(KindPtr fun, TermPtr arg) {
  return std::make_shared<const Kind>(Kind{Kind::KApp{std::move(fun), std::move(arg)}});
}

// ---------------------------------------------------------------------------

namespace {

void collect_free(const TermPtr& t, std::set<std::string>& out);
void collect_free(const KindPtr& k, std::set<std::string>& out);

void collect_free(const TermPtr& t, std::set<std::string>& out) {
  if (auto* f = std::get_if<Term::Free>(&t->node)) {
    out.insert(f->name);
  } else if (auto* l = std::get_if<Term::Lam>(&t->node)) {
    collect_free(l->ann, out);
    collect_free(l->body, out);
  } else if (auto* a = std::get_if<Term::App>(&t->node)) {
    collect_free(a->fun, out);
    collect_free(a->arg, out);
  }
}

void collect_free(const KindPtr& k, std::set<std::string>& out) {
  if (auto* e = std::get_if<Kind::El>(&k->node)) {
    collect_free(e->body, out);
  } else if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
    collect_free(p->dom, out);
    collect_free(p->cod, out);
  } else if (auto* a = std::get_if<Kind::KApp>(&k->node)) {
    collect_free(a->fun, out);
    collect_free(a->arg, out);
  }
}

} // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  if (e.is_term()) collect_free(e.term(), out);
  else collect_free(e.kind(), out);
  return out;
}

bool contains_free(const Expr& e, const std::string& name) {
  return free_vars(e).count(name) > 0;
}

// ---------------------------------------------------------------------------
// Substitution machinery. All traversals share the pattern: replace some leaf
// form, adjusting by the number of binders crossed.

namespace {

// Substitute shift(replacement, depth) for Free(var) at binder depth `depth`.
TermPtr subst_term(const TermPtr& t, const std::string& var, const TermPtr& rep, int depth);
KindPtr subst_kind(const KindPtr& k, const std::string& var, const TermPtr& rep, int depth);

TermPtr subst_term(const TermPtr& t, const std::string& var, const TermPtr& rep, int depth) {
  if (auto* f = std::get_if<Term::Free>(&t->node)) {
    if (f->name == var) return depth == 0 ? rep : shift_term(rep, depth, 0);
    return t;
  }
  if (std::holds_alternative<Term::Bound>(t->node) || std::holds_alternative<Term::Const>(t->node))
    return t;
  if (auto* l = std::get_if<Term::Lam>(&t->node)) {
    KindPtr ann = subst_kind(l->ann, var, rep, depth);
    TermPtr body = subst_term(l->body, var, rep, depth + 1);
    if (ann == l->ann && body == l->body) return t;
    return mk_lam(l->hint, ann, body);
  }
  auto& a = std::get<Term::App>(t->node);
  TermPtr fun = subst_term(a.fun, var, rep, depth);
  TermPtr arg = subst_term(a.arg, var, rep, depth);
  if (fun == a.fun && arg == a.arg) return t;
  return mk_app(fun, arg);
}

KindPtr subst_kind(const KindPtr& k, const std::string& var, const TermPtr& rep, int depth) {
  if (std::holds_alternative<Kind::Type>(k->node)) return k;
  if (auto* e = std::get_if<Kind::El>(&k->node)) {
    TermPtr body = subst_term(e->body, var, rep, depth);
    if (body == e->body) return k;
    return mk_el(body);
  }
  if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
    KindPtr dom = subst_kind(p->dom, var, rep, depth);
    KindPtr cod = subst_kind(p->cod, var, rep, depth + 1);
    if (dom == p->dom && cod == p->cod) return k;
    return mk_pi(p->hint, dom, cod);
  }
  auto& a = std::get<Kind::KApp>(k->node);
  KindPtr fun = subst_kind(a.fun, var, rep, depth);
  TermPtr arg = subst_term(a.arg, var, rep, depth);
  if (fun == a.fun && arg == a.arg) return k;
  return mk_kapp(fun, arg);
}

using ParMap = std::map<std::string, TermPtr>;

TermPtr par_term(const TermPtr& t, const ParMap& m, int depth);
KindPtr par_kind(const KindPtr& k, const ParMap& m, int depth);

TermPtr par_term(const TermPtr& t, const ParMap& m, int depth) {
  if (auto* f = std::get_if<Term::Free>(&t->node)) {
    auto it = m.find(f->name);
    if (it == m.end()) return t;
    return depth == 0 ? it->second : shift_term(it->second, depth, 0);
  }
  if (std::holds_alternative<Term::Bound>(t->node) || std::holds_alternative<Term::Const>(t->node))
    return t;
  if (auto* l = std::get_if<Term::Lam>(&t->node))
    return mk_lam(l->hint, par_kind(l->ann, m, depth), par_term(l->body, m, depth + 1));
  auto& a = std::get<Term::App>(t->node);
  return mk_app(par_term(a.fun, m, depth), par_term(a.arg, m, depth));
}

KindPtr par_kind(const KindPtr& k, const ParMap& m, int depth) {
  if (std::holds_alternative<Kind::Type>(k->node)) return k;
  if (auto* e = std::get_if<Kind::El>(&k->node)) return mk_el(par_term(e->body, m, depth));
  if (auto* p = std::get_if<Kind::Pi>(&k->node))
    return mk_pi(p->hint, par_kind(p->dom, m, depth), par_kind(p->cod, m, depth + 1));
  auto& a = std::get<Kind::KApp>(k->node);
  return mk_kapp(par_kind(a.fun, m, depth), par_term(a.arg, m, depth));
}

} // namespace

TermPtr subst(const TermPtr& subject, const std::string& var, const TermPtr& replacement) {
  return subst_term(subject, var, replacement, 0);
}
KindPtr subst(const KindPtr& subject, const std::string& var, const TermPtr& replacement) {
  return subst_kind(subject, var, replacement, 0);
}
Expr subst(const Expr& subject, const std::string& var, const TermPtr& replacement) {
  if (subject.is_term()) return subst(subject.term(), var, replacement);
  return subst(subject.kind(), var, replacement);
}

Expr subst_parallel(const Expr& subject, const std::map<std::string, TermPtr>& map) {
  if (subject.is_term()) return par_term(subject.term(), map, 0);
  return par_kind(subject.kind(), map, 0);
}

// ---------------------------------------------------------------------------

namespace {

bool eq_term(const TermPtr& a, const TermPtr& b);
bool eq_kind(const KindPtr& a, const KindPtr& b);

bool eq_term(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* x = std::get_if<Term::Bound>(&a->node))
    return x->index == std::get<Term::Bound>(b->node).index;
  if (auto* x = std::get_if<Term::Free>(&a->node))
    return x->name == std::get<Term::Free>(b->node).name;
  if (auto* x = std::get_if<Term::Const>(&a->node))
    return x->name == std::get<Term::Const>(b->node).name;
  if (auto* x = std::get_if<Term::Lam>(&a->node)) {
    auto& y = std::get<Term::Lam>(b->node);
    return eq_kind(x->ann, y.ann) && eq_term(x->body, y.body);
  }
  auto& x = std::get<Term::App>(a->node);
  auto& y = std::get<Term::App>(b->node);
  return eq_term(x.fun, y.fun) && eq_term(x.arg, y.arg);
}

bool eq_kind(const KindPtr& a, const KindPtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  if (std::holds_alternative<Kind::Type>(a->node)) return true;
  if (auto* x = std::get_if<Kind::El>(&a->node))
    return eq_term(x->body, std::get<Kind::El>(b->node).body);
  if (auto* x = std::get_if<Kind::Pi>(&a->node)) {
    auto& y = std::get<Kind::Pi>(b->node);
    return eq_kind(x->dom, y.dom) && eq_kind(x->cod, y.cod);
  }
  auto& x = std::get<Kind::KApp>(a->node);
  auto& y = std::get<Kind::KApp>(b->node);
  return eq_kind(x.fun, y.fun) && eq_term(x.arg, y.arg);
}

} // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) { return eq_term(a, b); }
bool alpha_eq(const KindPtr& a, const KindPtr& b) { return eq_kind(a, b); }
bool alpha_eq(const Expr& a, const Expr& b) {
  if (a.is_term() != b.is_term()) return false;
  return a.is_term() ? eq_term(a.term(), b.term()) : eq_kind(a.kind(), b.kind());
}

namespace {

std::size_t count_term(const TermPtr& t);
std::size_t count_kind(const KindPtr& k);

std::size_t count_term(const TermPtr& t) {
  if (auto* l = std::get_if<Term::Lam>(&t->node)) return 1 + count_kind(l->ann) + count_term(l->body);
  if (auto* a = std::get_if<Term::App>(&t->node)) return 1 + count_term(a->fun) + count_term(a->arg);
  return 1;
}

std::size_t count_kind(const KindPtr& k) {
  if (auto* e = std::get_if<Kind::El>(&k->node)) return 1 + count_term(e->body);
  if (auto* p = std::get_if<Kind::Pi>(&k->node)) return 1 + count_kind(p->dom) + count_kind(p->cod);
  if (auto* a = std::get_if<Kind::KApp>(&k->node)) return 1 + count_kind(a->fun) + count_term(a->arg);
  return 1;
}

void key_term(const TermPtr& t, std::string& out);
void key_kind(const KindPtr& k, std::string& out);

void key_term(const TermPtr& t, std::string& out) {
  if (auto* b = std::get_if<Term::Bound>(&t->node)) {
    out += 'b';
    out += std::to_string(b->index);
  } else if (auto* f = std::get_if<Term::Free>(&t->node)) {
    out += 'v';
    out += f->name;
    out += ';';
  } else if (auto* c = std::get_if<Term::Const>(&t->node)) {
    out += 'c';
    out += c->name;
    out += ';';
  } else if (auto* l = std::get_if<Term::Lam>(&t->node)) {
    out += 'L';
    key_kind(l->ann, out);
    key_term(l->body, out);
  } else {
    auto& a = std::get<Term::App>(t->node);
    out += 'A';
    key_term(a.fun, out);
    key_term(a.arg, out);
  }
}

void key_kind(const KindPtr& k, std::string& out) {
  if (std::holds_alternative<Kind::Type>(k->node)) {
    out += 'T';
  } else if (auto* e = std::get_if<Kind::El>(&k->node)) {
    out += 'E';
    key_term(e->body, out);
  } else if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
    out += 'P';
    key_kind(p->dom, out);
    key_kind(p->cod, out);
  } else {
    auto& a = std::get<Kind::KApp>(k->node);
    out += 'K';
    key_kind(a.fun, out);
    key_term(a.arg, out);
  }
}

} // namespace

std::size_t node_count(const Expr& e) {
  return e.is_term() ? count_term(e.term()) : count_kind(e.kind());
}

std::string alpha_key(const Expr& e) {
  std::string out;
  out.reserve(64);
  out += e.is_term() ? 't' : 'k';
  if (e.is_term()) key_term(e.term(), out);
  else key_kind(e.kind(), out);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

TermPtr shift_t(const TermPtr& t, int by, int cutoff);
KindPtr shift_k(const KindPtr& k, int by, int cutoff);

TermPtr shift_t(const TermPtr& t, int by, int cutoff) {
  if (auto* b = std::get_if<Term::Bound>(&t->node)) {
    if (b->index < cutoff) return t;
    return mk_bound(b->index + by);
  }
  if (std::holds_alternative<Term::Free>(t->node) || std::holds_alternative<Term::Const>(t->node))
    return t;
  if (auto* l = std::get_if<Term::Lam>(&t->node)) {
    KindPtr ann = shift_k(l->ann, by, cutoff);
    TermPtr body = shift_t(l->body, by, cutoff + 1);
    if (ann == l->ann && body == l->body) return t;
    return mk_lam(l->hint, ann, body);
  }
  auto& a = std::get<Term::App>(t->node);
  TermPtr fun = shift_t(a.fun, by, cutoff);
  TermPtr arg = shift_t(a.arg, by, cutoff);
  if (fun == a.fun && arg == a.arg) return t;
  return mk_app(fun, arg);
}

KindPtr shift_k(const KindPtr& k, int by, int cutoff) {
  if (std::holds_alternative<Kind::Type>(k->node)) return k;
  if (auto* e = std::get_if<Kind::El>(&k->node)) {
    TermPtr body = shift_t(e->body, by, cutoff);
    if (body == e->body) return k;
    return mk_el(body);
  }
  if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
    KindPtr dom = shift_k(p->dom, by, cutoff);
    KindPtr cod = shift_k(p->cod, by, cutoff + 1);
    if (dom == p->dom && cod == p->cod) return k;
    return mk_pi(p->hint, dom, cod);
  }
  auto& a = std::get<Kind::KApp>(k->node);
  KindPtr fun = shift_k(a.fun, by, cutoff);
  TermPtr arg = shift_t(a.arg, by, cutoff);
  if (fun == a.fun && arg == a.arg) return k;
  return mk_kapp(fun, arg);
}

// body[index := shift(arg, depth)], decrementing indices above.
TermPtr open_t(const TermPtr& t, const TermPtr& arg, int depth);
KindPtr open_k(const KindPtr& k, const TermPtr& arg, int depth);

TermPtr open_t(const TermPtr& t, const TermPtr& arg, int depth) {
  if (auto* b = std::get_if<Term::Bound>(&t->node)) {
    if (b->index == depth) return depth == 0 ? arg : shift_t(arg, depth, 0);
    if (b->index > depth) return mk_bound(b->index - 1);
    return t;
  }
  if (std::holds_alternative<Term::Free>(t->node) || std::holds_alternative<Term::Const>(t->node))
    return t;
  if (auto* l = std::get_if<Term::Lam>(&t->node))
    return mk_lam(l->hint, open_k(l->ann, arg, depth), open_t(l->body, arg, depth + 1));
  auto& a = std::get<Term::App>(t->node);
  return mk_app(open_t(a.fun, arg, depth), open_t(a.arg, arg, depth));
}

KindPtr open_k(const KindPtr& k, const TermPtr& arg, int depth) {
  if (std::holds_alternative<Kind::Type>(k->node)) return k;
  if (auto* e = std::get_if<Kind::El>(&k->node)) return mk_el(open_t(e->body, arg, depth));
  if (auto* p = std::get_if<Kind::Pi>(&k->node))
    return mk_pi(p->hint, open_k(p->dom, arg, depth), open_k(p->cod, arg, depth + 1));
  auto& a = std::get<Kind::KApp>(k->node);
  return mk_kapp(open_k(a.fun, arg, depth), open_t(a.arg, arg, depth));
}

TermPtr close_t(const TermPtr& t, const std::string& name, int depth);
KindPtr close_k(const KindPtr& k, const std::string& name, int depth);

TermPtr close_t(const TermPtr& t, const std::string& name, int depth) {
  if (auto* f = std::get_if<Term::Free>(&t->node))
    return f->name == name ? mk_bound(depth) : t;
  if (std::holds_alternative<Term::Bound>(t->node) || std::holds_alternative<Term::Const>(t->node))
    return t;
  if (auto* l = std::get_if<Term::Lam>(&t->node))
    return mk_lam(l->hint, close_k(l->ann, name, depth), close_t(l->body, name, depth + 1));
  auto& a = std::get<Term::App>(t->node);
  return mk_app(close_t(a.fun, name, depth), close_t(a.arg, name, depth));
}

KindPtr close_k(const KindPtr& k, const std::string& name, int depth) {
  if (std::holds_alternative<Kind::Type>(k->node)) return k;
  if (auto* e = std::get_if<Kind::El>(&k->node)) return mk_el(close_t(e->body, name, depth));
  if (auto* p = std::get_if<Kind::Pi>(&k->node))
    return mk_pi(p->hint, close_k(p->dom, name, depth), close_k(p->cod, name, depth + 1));
  auto& a = std::get<Kind::KApp>(k->node);
  return mk_kapp(close_k(a.fun, name, depth), close_t(a.arg, name, depth));
}

bool uses_t(const TermPtr& t, int index) {
  if (auto* b = std::get_if<Term::Bound>(&t->node)) return b->index == index;
  if (auto* l = std::get_if<Term::Lam>(&t->node))
    return uses_bound(l->ann, index) || uses_t(l->body, index + 1);
  if (auto* a = std::get_if<Term::App>(&t->node))
    return uses_t(a->fun, index) || uses_t(a->arg, index);
  return false;
}

} // namespace

TermPtr shift_term(const TermPtr& t, int by, int cutoff) { return shift_t(t, by, cutoff); }
KindPtr shift_kind(const KindPtr& k, int by, int cutoff) { return shift_k(k, by, cutoff); }

TermPtr open_term(const TermPtr& body, const TermPtr& arg) { return open_t(body, arg, 0); }
KindPtr open_kind(const KindPtr& body, const TermPtr& arg) { return open_k(body, arg, 0); }

TermPtr close_term(const TermPtr& t, const std::string& name) { return close_t(t, name, 0); }
KindPtr close_kind(const KindPtr& k, const std::string& name) { return close_k(k, name, 0); }

bool uses_bound(const TermPtr& t, int index) { return uses_t(t, index); }
bool uses_bound(const KindPtr& k, int index) {
  if (std::holds_alternative<Kind::Type>(k->node)) return false;
  if (auto* e = std::get_if<Kind::El>(&k->node)) return uses_t(e->body, index);
  if (auto* p = std::get_if<Kind::Pi>(&k->node))
    return uses_bound(p->dom, index) || uses_bound(p->cod, index + 1);
  auto& a = std::get<Kind::KApp>(k->node);
  return uses_bound(a.fun, index) || uses_t(a.arg, index);
}

// ---------------------------------------------------------------------------

std::string Position::str() const {
  if (path.empty()) return "root";
  std::ostringstream os;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) os << '.';
    os << path[i];
  }
  return os.str();
}

namespace {

std::optional<Expr> child_of(const Expr& e, int i) {
  if (e.is_term()) {
    const TermPtr& t = e.term();
    if (auto* l = std::get_if<Term::Lam>(&t->node)) {
      if (i == 0) return Expr(l->ann);
      if (i == 1) return Expr(l->body);
    } else if (auto* a = std::get_if<Term::App>(&t->node)) {
      if (i == 0) return Expr(a->fun);
      if (i == 1) return Expr(a->arg);
    }
    return std::nullopt;
  }
  const KindPtr& k = e.kind();
  if (auto* el = std::get_if<Kind::El>(&k->node)) {
    if (i == 0) return Expr(el->body);
  } else if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
    if (i == 0) return Expr(p->dom);
    if (i == 1) return Expr(p->cod);
  } else if (auto* a = std::get_if<Kind::KApp>(&k->node)) {
    if (i == 0) return Expr(a->fun);
    if (i == 1) return Expr(a->arg);
  }
  return std::nullopt;
}

std::optional<Expr> rebuild(const Expr& e, int i, const Expr& sub) {
  if (e.is_term()) {
    const TermPtr& t = e.term();
    if (auto* l = std::get_if<Term::Lam>(&t->node)) {
      if (i == 0 && sub.is_kind()) return Expr(mk_lam(l->hint, sub.kind(), l->body));
      if (i == 1 && sub.is_term()) return Expr(mk_lam(l->hint, l->ann, sub.term()));
    } else if (auto* a = std::get_if<Term::App>(&t->node)) {
      if (i == 0 && sub.is_term()) return Expr(mk_app(sub.term(), a->arg));
      if (i == 1 && sub.is_term()) return Expr(mk_app(a->fun, sub.term()));
    }
    return std::nullopt;
  }
  const KindPtr& k = e.kind();
  if (auto* el = std::get_if<Kind::El>(&k->node)) {
    (void)el;
    if (i == 0 && sub.is_term()) return Expr(mk_el(sub.term()));
  } else if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
    if (i == 0 && sub.is_kind()) return Expr(mk_pi(p->hint, sub.kind(), p->cod));
    if (i == 1 && sub.is_kind()) return Expr(mk_pi(p->hint, p->dom, sub.kind()));
  } else if (auto* a = std::get_if<Kind::KApp>(&k->node)) {
    if (i == 0 && sub.is_kind()) return Expr(mk_kapp(sub.kind(), a->arg));
    if (i == 1 && sub.is_term()) return Expr(mk_kapp(a->fun, sub.term()));
  }
  return std::nullopt;
}

} // namespace

std::optional<Expr> subterm_at(const Expr& subject, const Position& pos) {
  Expr cur = subject;
  for (int i : pos.path) {
    auto next = child_of(cur, i);
    if (!next) return std::nullopt;
    cur = *next;
  }
  return cur;
}

std::optional<Expr> replace_at(const Expr& subject, const Position& pos, const Expr& replacement) {
  if (pos.is_root()) {
    if (subject.is_term() != replacement.is_term()) return std::nullopt;
    return replacement;
  }
  auto sub = child_of(subject, pos.path.front());
  if (!sub) return std::nullopt;
  Position rest;
  rest.path.assign(pos.path.begin() + 1, pos.path.end());
  auto replaced = replace_at(*sub, rest, replacement);
  if (!replaced) return std::nullopt;
  return rebuild(subject, pos.path.front(), *replaced);
}

} // namespace mlf
