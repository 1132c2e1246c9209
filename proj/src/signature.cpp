// signature.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#include "mlf/signature.hpp"

#include <sstream>

namespace mlf {

namespace {

using SE = SignatureError;

// Spine decomposition: f a b c -> (f, [a,b,c]).
void spine(const TermPtr& t, TermPtr& head, std::vector<TermPtr>& args) {
  if (auto* a = std::get_if<Term::App>(&t->node)) {
    spine(a->fun, head, args);
    args.push_back(a->arg);
  } else {
    head = t;
  }
}

const std::string* const_name(const TermPtr& t) {
  if (auto* c = std::get_if<Term::Const>(&t->node)) return &c->name;
  return nullptr;
}

bool is_pattern_var(const TermPtr& t) { return std::holds_alternative<Term::Free>(t->node); }

// depth 1: variable, constant, or constructor application whose arguments
// are variables/constants (depth 2).
std::optional<std::string> check_pattern(const TermPtr& p) {
  if (is_pattern_var(p) || const_name(p)) return std::nullopt;
  if (std::holds_alternative<Term::App>(p->node)) {
    TermPtr head;
    std::vector<TermPtr> args;
    spine(p, head, args);
    if (!const_name(head)) return "nested pattern must be constructor-headed";
    for (auto& a : args)
      if (!is_pattern_var(a) && !const_name(a))
        return "patterns deeper than 2 are not supported";
    return std::nullopt;
  }
  return "binders are not allowed in patterns";
}

void count_free_occurrences(const TermPtr& t, std::map<std::string, int>& counts) {
  if (auto* f = std::get_if<Term::Free>(&t->node)) {
    counts[f->name]++;
  } else if (auto* l = std::get_if<Term::Lam>(&t->node)) {
    for (auto& n : free_vars(Expr(l->ann))) counts[n]++;
    for (auto& n : free_vars(Expr(l->body))) counts[n]++;
  } else if (auto* a = std::get_if<Term::App>(&t->node)) {
    count_free_occurrences(a->fun, counts);
    count_free_occurrences(a->arg, counts);
  }
}

} // namespace

const ConstDecl* Signature::find_const(const std::string& name) const {
  for (auto& c : consts_)
    if (c.name == name) return &c;
  return nullptr;
}

const RewriteRule* Signature::find_rule(const std::string& name) const {
  for (auto& r : rules_)
    if (r.name == name) return &r;
  return nullptr;
}

std::set<std::string> Signature::const_names() const {
  std::set<std::string> out;
  for (auto& c : consts_) out.insert(c.name);
  return out;
}

Result<Signature, SignatureError> Signature::make(std::vector<ConstDecl> consts,
                                                  std::vector<RewriteRule> rules) {
  Signature sig;
  for (auto& c : consts) {
    if (sig.arities_.count(c.name))
      return SE{SE::Kind::DuplicateConstant, "constant '" + c.name + "' declared twice"};
    if (c.kind) {
      auto a = arity_translate(c.kind);
      if (!a)
        return SE{SE::Kind::KindArityMismatch,
                  "constant '" + c.name + "': declared kind is not MLF (" + a.error().reason + ")"};
      if (!(*a == c.arity))
        return SE{SE::Kind::KindArityMismatch, "constant '" + c.name + "': kind translates to " +
                                                   a->str() + ", declared arity is " + c.arity.str()};
    }
    sig.arities_[c.name] = c.arity;
    sig.consts_.push_back(std::move(c));
  }
  for (auto& r : rules) {
    auto v = validate_rule(sig, std::move(r));
    if (!v) return v.error();
    for (auto& existing : sig.rules_)
      if (existing.name == v->name)
        return SE{SE::Kind::DuplicateConstant, "rule '" + v->name + "' declared twice"};
    sig.rules_.push_back(std::move(*v));
  }
  return sig;
}

Signature Signature::unchecked(std::vector<ConstDecl> consts, std::vector<RewriteRule> rules) {
  Signature sig;
  for (auto& c : consts) {
    sig.arities_[c.name] = c.arity;
    sig.consts_.push_back(std::move(c));
  }
  sig.rules_ = std::move(rules);
  return sig;
}

Result<Signature, SignatureError> Signature::merged(const Signature& other) const {
  Signature out = *this;
  for (auto& c : other.consts_) {
    if (const ConstDecl* mine = out.find_const(c.name)) {
      bool same = mine->arity == c.arity &&
                  ((mine->kind == nullptr) == (c.kind == nullptr)) &&
                  (!c.kind || alpha_eq(mine->kind, c.kind));
      if (!same)
        return SE{SE::Kind::ConflictingDecl, "constant '" + c.name + "' declared differently"};
      continue;
    }
    out.arities_[c.name] = c.arity;
    out.consts_.push_back(c);
  }
  for (auto& r : other.rules_) {
    if (const RewriteRule* mine = out.find_rule(r.name)) {
      if (!alpha_eq(mine->lhs, r.lhs) || !alpha_eq(mine->rhs, r.rhs))
        return SE{SE::Kind::ConflictingDecl, "rule '" + r.name + "' declared differently"};
      continue;
    }
    out.rules_.push_back(r);
  }
  return out;
}

Result<RewriteRule, SignatureError> validate_rule(const Signature& sig, RewriteRule rule) {
  if (!rule.pattern_ctx.valid())
    return SE{SE::Kind::BadPattern, "rule '" + rule.name + "': duplicate pattern variable"};

  // shape: constant head, spine of shallow patterns
  TermPtr head;
  std::vector<TermPtr> args;
  spine(rule.lhs, head, args);
  const std::string* head_name = const_name(head);
  if (!head_name)
    return SE{SE::Kind::BadPattern, "rule '" + rule.name + "': lhs is not headed by a constant"};
  for (auto& a : args)
    if (auto bad = check_pattern(a))
      return SE{SE::Kind::BadPattern, "rule '" + rule.name + "': " + *bad};

  // every constant declared
  for (auto& side : {rule.lhs, rule.rhs}) {
    std::vector<TermPtr> stack{side};
    while (!stack.empty()) {
      TermPtr t = stack.back();
      stack.pop_back();
      if (auto* c = std::get_if<Term::Const>(&t->node)) {
        if (!sig.find_const(c->name))
          return SE{SE::Kind::UndeclaredConstant,
                    "rule '" + rule.name + "': constant '" + c->name + "' is not declared"};
      } else if (auto* l = std::get_if<Term::Lam>(&t->node)) {
        stack.push_back(l->body);
      } else if (auto* a = std::get_if<Term::App>(&t->node)) {
        stack.push_back(a->fun);
        stack.push_back(a->arg);
      }
    }
  }

  // pattern variables: all free vars of both sides must be declared in the
  // pattern context; a variable repeated in the lhs must not occur in the rhs
  // (the repeat positions are wildcards, so its binding would be ambiguous).
  std::map<std::string, int> lhs_occ;
  count_free_occurrences(rule.lhs, lhs_occ);
  auto rhs_free = free_vars(Expr(rule.rhs));
  for (auto& n : free_vars(Expr(rule.lhs)))
    if (!rule.pattern_ctx.binds(n))
      return SE{SE::Kind::BadPattern,
                "rule '" + rule.name + "': pattern variable '" + n + "' not in the rule context"};
  for (auto& n : rhs_free)
    if (!rule.pattern_ctx.binds(n))
      return SE{SE::Kind::BadPattern,
                "rule '" + rule.name + "': rhs variable '" + n + "' not in the rule context"};
  for (auto& [n, count] : lhs_occ)
    if (count > 1 && rhs_free.count(n))
      return SE{SE::Kind::NonLinearPattern,
                "rule '" + rule.name + "': variable '" + n +
                    "' occurs " + std::to_string(count) + " times in the lhs and in the rhs"};

  // both sides have the declared result arity under the pattern context
  const ConstArityMap& consts = sig.const_arities();
  auto al = infer_arity(rule.pattern_ctx, Expr(rule.lhs), &consts);
  if (!al)
    return SE{SE::Kind::ArityMismatch,
              "rule '" + rule.name + "': lhs has no arity (" + al.error().reason + ")"};
  auto ar = infer_arity(rule.pattern_ctx, Expr(rule.rhs), &consts);
  if (!ar)
    return SE{SE::Kind::ArityMismatch,
              "rule '" + rule.name + "': rhs has no arity (" + ar.error().reason + ")"};
  if (!(*al == rule.result) || !(*ar == rule.result))
    return SE{SE::Kind::ArityMismatch, "rule '" + rule.name + "': lhs " + al->str() + ", rhs " +
                                           ar->str() + ", declared " + rule.result.str()};
  return rule;
}

std::optional<std::map<std::string, TermPtr>> match_rule(const RewriteRule& rule,
                                                         const TermPtr& subject) {
  std::map<std::string, TermPtr> bind;
  std::vector<std::pair<TermPtr, TermPtr>> work{{rule.lhs, subject}};
  while (!work.empty()) {
    auto [pat, sub] = work.back();
    work.pop_back();
    if (auto* f = std::get_if<Term::Free>(&pat->node)) {
      // leftmost occurrence binds; repeats are wildcards.
      // (the worklist is LIFO, so push order below keeps left-to-right)
      bind.emplace(f->name, sub);
      continue;
    }
    if (auto* c = std::get_if<Term::Const>(&pat->node)) {
      auto* sc = std::get_if<Term::Const>(&sub->node);
      if (!sc || sc->name != c->name) return std::nullopt;
      continue;
    }
    if (auto* a = std::get_if<Term::App>(&pat->node)) {
      auto* sa = std::get_if<Term::App>(&sub->node);
      if (!sa) return std::nullopt;
      work.emplace_back(a->arg, sa->arg);
      work.emplace_back(a->fun, sa->fun);
      continue;
    }
    return std::nullopt; // validated patterns have no other node forms
  }
  return bind;
}

// ---------------------------------------------------------------------------
// Builders.

Result<Signature, SignatureError> finite_type(const std::string& name,
                                              const std::vector<std::string>& ctors) {
  if (ctors.empty())
    return SE{SE::Kind::DuplicateConstructor, "finite type needs at least one constructor"};
  {
    std::set<std::string> seen;
    for (auto& c : ctors)
      if (!seen.insert(c).second)
        return SE{SE::Kind::DuplicateConstructor,
                  "finite type '" + name + "': duplicate constructor '" + c + "'"};
  }
  const std::string elim = "E_" + name;
  const std::size_t n = ctors.size();

  // arity: ((0,0), (0, (0, ... (0, (0,0)) ...))) with one 0 per constructor
  Arity zz = Arity::pair(Arity::zero(), Arity::zero());
  Arity acc = zz;
  for (std::size_t i = 0; i < n; ++i) acc = Arity::pair(Arity::zero(), acc);
  Arity elim_arity = Arity::pair(zz, acc);

  std::set<std::string> known{name};
  for (auto& c : ctors) known.insert(c);

  // kind: (P:(T)Type)(p1:P(c1))...(pn:P(cn))(z:T)P(z)
  std::ostringstream ek;
  ek << "(P:(" << name << ")Type)";
  for (std::size_t i = 0; i < n; ++i) ek << "(p" << i + 1 << ":P(" << ctors[i] << "))";
  ek << "(z:" << name << ")P(z)";

  std::vector<ConstDecl> consts;
  consts.push_back({name, Arity::zero(), mk_type()});
  for (auto& c : ctors) consts.push_back({c, Arity::zero(), parse_kind(name, known)});
  consts.push_back({elim, elim_arity, parse_kind(ek.str(), known)});

  known.insert(elim);
  std::vector<RewriteRule> rules;
  for (std::size_t i = 0; i < n; ++i) {
    std::ostringstream lhs, rhs, ctx;
    lhs << elim << "(P";
    ctx << "P:(0,0)";
    for (std::size_t j = 0; j < n; ++j) {
      lhs << ",p" << j + 1;
      ctx << ", p" << j + 1 << ":0";
    }
    lhs << "," << ctors[i] << ")";
    rhs << "p" << i + 1;
    RewriteRule r;
    r.name = elim + "_" + ctors[i];
    r.pattern_ctx = parse_arity_context(ctx.str());
    r.lhs = parse_term(lhs.str(), known);
    r.rhs = parse_term(rhs.str(), known);
    r.result = Arity::zero();
    rules.push_back(std::move(r));
  }
  return Signature::make(std::move(consts), std::move(rules));
}

namespace {

// The §5.1 block, transcribed. (A)Type is the paper's non-dependent product
// sugar; bare terms in kind position are El-coerced by the parser.
const char* kSigmaSrc = R"(
const Sigma : arity (0,((0,0),0))
      kind (A:Type)(B:(A)Type)Type ;
const pair  : arity (0,((0,0),(0,(0,0))))
      kind (A:Type)(B:(A)Type)(a:A)(b:B(a))Sigma(A,B) ;
const pi1   : arity (0,((0,0),(0,0)))
      kind (A:Type)(B:(A)Type)(z:Sigma(A,B))A ;
const pi2   : arity (0,((0,0),(0,0)))
      kind (A:Type)(B:(A)Type)(z:Sigma(A,B))B(pi1(A,B,z)) ;
rule [A:0, B:(0,0), a:0, b:0] pi1(A,B,pair(A,B,a,b)) --> a : 0 ;
rule [A:0, B:(0,0), a:0, b:0] pi2(A,B,pair(A,B,a,b)) --> b : 0 ;
)";

// §5.3.
const char* kUniverseSrc = R"(
const U    : arity 0 kind Type ;
const Bool : arity 0 kind Type ;
const bool : arity 0 kind U ;
const uo   : arity (0,0) kind (U)Type ;
rule [] uo(bool) --> Bool : 0 ;
)";

Signature must(Result<Signature, SignatureError> r, const char* what) {
  if (!r) throw std::logic_error(std::string("builtin signature '") + what + "' failed to validate: " +
                                 r.error().message);
  return *r;
}

} // namespace

Result<Signature, SignatureError> load_signature(const SigFile& file, const Signature& base) {
  Signature sig = base;
  for (auto& decl : file.decls) {
    if (auto* c = std::get_if<SigConstDecl>(&decl)) {
      auto next = Signature::make({ConstDecl{c->name, c->arity, c->kind}}, {});
      if (!next) return next.error();
      auto merged = sig.merged(*next);
      if (!merged) return merged.error();
      sig = std::move(*merged);
    } else if (auto* r = std::get_if<SigRuleDecl>(&decl)) {
      RewriteRule rule;
      TermPtr head;
      std::vector<TermPtr> args;
      spine(r->lhs, head, args);
      std::string base_name = const_name(head) ? *const_name(head) : "rule";
      rule.name = base_name;
      for (int i = 2; sig.find_rule(rule.name); ++i)
        rule.name = base_name + "#" + std::to_string(i);
      rule.pattern_ctx.entries = r->ctx;
      rule.lhs = r->lhs;
      rule.rhs = r->rhs;
      rule.result = r->result;
      auto v = validate_rule(sig, std::move(rule));
      if (!v) return v.error();
      Signature with_rule = Signature::unchecked({}, {std::move(*v)});
      auto merged = sig.merged(with_rule);
      if (!merged) return merged.error();
      sig = std::move(*merged);
    } else if (auto* f = std::get_if<SigFiniteDecl>(&decl)) {
      auto ft = finite_type(f->type_name, f->ctors);
      if (!ft) return ft.error();
      auto merged = sig.merged(*ft);
      if (!merged) return merged.error();
      sig = std::move(*merged);
    }
  }
  return sig;
}

const Signature& builtin_sigma() {
  static const Signature sig =
      must(load_signature(parse_signature_file(kSigmaSrc, {}, "<builtin:sigma>"), Signature{}),
           "sigma");
  return sig;
}

const Signature& builtin_bool() {
  static const Signature sig = [] {
    Signature s = must(finite_type("Bool", {"true", "false"}), "bool");
    // the paper tags these rules b1 and b2
    std::vector<RewriteRule> rules = s.rules();
    rules[0].name = "b1";
    rules[1].name = "b2";
    return Signature::unchecked(s.consts(), std::move(rules));
  }();
  return sig;
}

const Signature& builtin_universe() {
  static const Signature sig = [] {
    Signature s =
        must(load_signature(parse_signature_file(kUniverseSrc, {}, "<builtin:universe>"), Signature{}),
             "universe");
    std::vector<RewriteRule> rules = s.rules();
    rules[0].name = "u"; // paper tag
    return Signature::unchecked(s.consts(), std::move(rules));
  }();
  return sig;
}

Result<Signature, SignatureError> builtin_signature(const std::string& name) {
  if (name == "sigma") return builtin_sigma();
  if (name == "bool") return builtin_bool();
  if (name == "universe") return builtin_universe();
  return SE{SE::Kind::UnknownBuiltin, "unknown builtin signature '" + name + "'"};
}

} // namespace mlf
