// proplab.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#include "mlf/proplab.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "mlf/surface.hpp"
#include "nlohmann/json.hpp"

namespace mlf {

using json = nlohmann::ordered_json;

Expr apply_valuation(const Valuation& rho, const Expr& subject) {
  return subst_parallel(subject, rho.map);
}

// ---------------------------------------------------------------------------
// Generation.

namespace {

KindPtr kind_for_arity(const Arity& a) {
  if (a.is_zero()) return mk_type();
  return mk_pi("k", kind_for_arity(a.left()), kind_for_arity(a.right()));
}

struct TermGen {
  Rng rng;
  const Signature* sig = nullptr;
  bool kinds_enabled = false;
  bool redex_bias = true;
  int name_counter = 0;

  explicit TermGen(std::uint64_t seed) : rng(seed) {}

  std::string fresh() { return "v" + std::to_string(++name_counter); }

  std::vector<std::pair<TermPtr, Arity>> leaves(const ArityContext& A, const Arity& a) {
    std::vector<std::pair<TermPtr, Arity>> out;
    for (auto& [n, ar] : A.entries)
      if (ar == a) out.emplace_back(mk_free(n), ar);
    if (sig)
      for (auto& c : sig->consts())
        if (c.arity == a) out.emplace_back(mk_const(c.name), c.arity);
    return out;
  }

  TermPtr synth(const ArityContext& A, const Arity& a) {
    auto ls = leaves(A, a);
    if (!ls.empty()) return ls.front().first;
    if (a.is_pair()) {
      std::string x = fresh();
      TermPtr body = synth(A.extended(x, a.left()), a.right());
      if (!body) return nullptr;
      return mk_lam(x, kind_for_arity(a.left()), close_term(body, x));
    }
    return nullptr;
  }

  Arity small_arity() {
    switch (rng.below(6)) {
      case 0: case 1: case 2: return Arity::zero();
      case 3: case 4: return Arity::pair(Arity::zero(), Arity::zero());
      default: return Arity::pair(Arity::zero(), Arity::pair(Arity::zero(), Arity::zero()));
    }
  }

  TermPtr term(const ArityContext& A, const Arity& a, int size) {
    if (size < 1) size = 1;
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::uint64_t roll = rng.below(100);
      if (size == 1 || roll < 28) {
        auto ls = leaves(A, a);
        if (ls.empty()) continue;
        return ls[rng.below(ls.size())].first;
      }
      if (a.is_pair() && size >= 3 && roll < 55) {
        int ksize = 1 + int(rng.below(std::uint64_t(std::min(size - 2, 5))));
        KindPtr K = kind(A, a.left(), ksize);
        if (!K) continue;
        int kc = int(node_count(Expr(K)));
        if (kc + 2 > size) {
          K = kind_for_arity(a.left());
          kc = int(node_count(Expr(K)));
          if (kc + 2 > size) continue;
        }
        std::string x = fresh();
        TermPtr body = term(A.extended(x, a.left()), a.right(), size - 1 - kc);
        if (!body) continue;
        return mk_lam(x, K, close_term(body, x));
      }
      if (size >= 3 && roll < 78) {
        Arity b = small_arity();
        int argsize = 1 + int(rng.below(std::uint64_t(std::max(1, size - 2))));
        TermPtr arg = term(A, b, argsize);
        if (!arg) continue;
        int asize = int(node_count(Expr(arg)));
        TermPtr fun = term(A, Arity::pair(b, a), size - 1 - asize);
        if (!fun) continue;
        return mk_app(fun, arg);
      }
      if (redex_bias && size >= 4) {
        if (a.is_pair() && rng.coin(40)) {
          // eta-expansion of an inner term of the same arity
          TermPtr inner = term(A, a, size - 3);
          if (!inner) continue;
          return mk_lam(fresh(), kind_for_arity(a.left()),
                        mk_app(shift_term(inner, 1, 0), mk_bound(0)));
        }
        if (sig && a.is_zero() && rng.coin(35)) {
          if (TermPtr inst = rule_instance(A)) return inst;
        }
        // beta redex: (\x:K.body) arg
        Arity b = small_arity();
        TermPtr arg = term(A, b, 1 + int(rng.below(3)));
        if (!arg) continue;
        std::string x = fresh();
        KindPtr K = kind_for_arity(b);
        int used = int(node_count(Expr(arg)) + node_count(Expr(K))) + 2;
        TermPtr body = term(A.extended(x, b), a, std::max(1, size - used));
        if (!body) continue;
        return mk_app(mk_lam(x, K, close_term(body, x)), arg);
      }
    }
    return synth(A, a);
  }

  // instance of a random Zero-result rule, pattern variables filled in
  TermPtr rule_instance(const ArityContext& A) {
    if (!sig || sig->rules().empty()) return nullptr;
    const RewriteRule& r = sig->rules()[rng.below(sig->rules().size())];
    if (!r.result.is_zero()) return nullptr;
    std::map<std::string, TermPtr> bind;
    for (auto& [v, ar] : r.pattern_ctx.entries) {
      TermPtr t = term(A, ar, 1 + int(rng.below(2)));
      if (!t) t = synth(A, ar);
      if (!t) return nullptr;
      bind[v] = t;
    }
    return subst_parallel(Expr(r.lhs), bind).term();
  }

  KindPtr kind(const ArityContext& A, const Arity& a, int size) {
    if (size < 1) size = 1;
    for (int attempt = 0; attempt < 6; ++attempt) {
      std::uint64_t roll = rng.below(100);
      if (a.is_zero()) {
        if (size >= 2 && roll < 45) {
          TermPtr t = term(A, Arity::zero(), size - 1);
          if (t) return mk_el(t);
          continue;
        }
        return mk_type();
      }
      // pair arity: dependent product, occasionally a kind application
      if (kinds_enabled && size >= 5 && roll < 12) {
        Arity b = Arity::zero();
        TermPtr arg = term(A, b, 1 + int(rng.below(2)));
        if (!arg) continue;
        int asize = int(node_count(Expr(arg)));
        KindPtr fun = kind(A, Arity::pair(b, a), size - 1 - asize);
        if (!fun) continue;
        return mk_kapp(fun, arg);
      }
      if (size >= 3) {
        int dsize = 1 + int(rng.below(std::uint64_t(std::min(size - 2, 4))));
        KindPtr dom = kind(A, a.left(), dsize);
        if (!dom) continue;
        int dc = int(node_count(Expr(dom)));
        if (dc + 2 > size) continue;
        std::string x = fresh();
        KindPtr cod = kind(A.extended(x, a.left()), a.right(), size - 1 - dc);
        if (!cod) continue;
        return mk_pi(x, dom, close_kind(cod, x));
      }
    }
    return kind_for_arity(a);
  }
};

} // namespace

std::optional<GenResult> gen_term(const GenConfig& cfg) {
  if (!cfg.ctx.valid()) return std::nullopt;
  TermGen gen(cfg.seed);
  gen.sig = cfg.sig;
  gen.kinds_enabled = cfg.kinds_enabled;
  gen.redex_bias = cfg.redex_bias;

  Expr subject;
  if (cfg.kinds_enabled && gen.rng.coin(30)) {
    KindPtr k = gen.kind(cfg.ctx, cfg.target, int(cfg.size));
    if (!k) return std::nullopt;
    subject = Expr(k);
  } else {
    TermPtr t = gen.term(cfg.ctx, cfg.target, int(cfg.size));
    if (!t) {
      if (cfg.kinds_enabled && cfg.target.is_zero()) subject = Expr(mk_type());
      else return std::nullopt;
    } else {
      subject = Expr(t);
    }
  }
  const ConstArityMap* consts = cfg.sig ? &cfg.sig->const_arities() : nullptr;
  auto check = infer_arity(cfg.ctx, subject, consts);
  if (!check || !(*check == cfg.target)) return std::nullopt; // generator bug guard
  return GenResult{subject, cfg.target};
}

// ---------------------------------------------------------------------------
// Position annotation and redex expansion helpers.

namespace {

struct PosInfo {
  Position pos;
  Arity arity;
  bool is_term;
};

struct Annotator {
  const ArityContext& A;
  const ConstArityMap* consts;
  std::vector<Arity> stack;
  std::vector<PosInfo> out;

  std::optional<Arity> term(const TermPtr& t, const Position& pos) {
    std::optional<Arity> a;
    if (auto* b = std::get_if<Term::Bound>(&t->node)) {
      std::size_t i = std::size_t(b->index);
      if (i < stack.size()) a = stack[stack.size() - 1 - i];
    } else if (auto* f = std::get_if<Term::Free>(&t->node)) {
      if (const Arity* x = A.lookup(f->name)) a = *x;
    } else if (auto* c = std::get_if<Term::Const>(&t->node)) {
      if (consts) {
        auto it = consts->find(c->name);
        if (it != consts->end()) a = it->second;
      }
    } else if (auto* l = std::get_if<Term::Lam>(&t->node)) {
      auto ak = kind(l->ann, pos.child(0));
      if (!ak) return std::nullopt;
      stack.push_back(*ak);
      auto ab = term(l->body, pos.child(1));
      stack.pop_back();
      if (!ab) return std::nullopt;
      a = Arity::pair(*ak, *ab);
    } else {
      auto& app = std::get<Term::App>(t->node);
      auto af = term(app.fun, pos.child(0));
      if (!af || !af->is_pair()) return std::nullopt;
      auto an = term(app.arg, pos.child(1));
      if (!an || !(*an == af->left())) return std::nullopt;
      a = af->right();
    }
    if (a) out.push_back({pos, *a, true});
    return a;
  }

  std::optional<Arity> kind(const KindPtr& k, const Position& pos) {
    std::optional<Arity> a;
    if (std::holds_alternative<Kind::Type>(k->node)) {
      a = Arity::zero();
    } else if (auto* e = std::get_if<Kind::El>(&k->node)) {
      auto am = term(e->body, pos.child(0));
      if (!am || !am->is_zero()) return std::nullopt;
      a = Arity::zero();
    } else if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
      auto ad = kind(p->dom, pos.child(0));
      if (!ad) return std::nullopt;
      stack.push_back(*ad);
      auto ac = kind(p->cod, pos.child(1));
      stack.pop_back();
      if (!ac) return std::nullopt;
      a = Arity::pair(*ad, *ac);
    } else {
      auto& app = std::get<Kind::KApp>(k->node);
      auto af = kind(app.fun, pos.child(0));
      if (!af || !af->is_pair()) return std::nullopt;
      auto an = term(app.arg, pos.child(1));
      if (!an || !(*an == af->left())) return std::nullopt;
      a = af->right();
    }
    if (a) out.push_back({pos, *a, false});
    return a;
  }
};

std::vector<PosInfo> annotate(const ArityContext& A, const Expr& e, const ConstArityMap* consts) {
  Annotator an{A, consts, {}, {}};
  bool ok = e.is_term() ? an.term(e.term(), Position{}).has_value()
                        : an.kind(e.kind(), Position{}).has_value();
  if (!ok) return {};
  return an.out;
}

// Wraps the subterm at pos in an eta redex of the same arity.
std::optional<Expr> eta_expand_at(const Expr& e, const Position& pos, const Arity& a) {
  if (!a.is_pair()) return std::nullopt;
  auto sub = subterm_at(e, pos);
  if (!sub || !sub->is_term()) return std::nullopt;
  TermPtr wrapped = mk_lam("e", kind_for_arity(a.left()),
                           mk_app(shift_term(sub->term(), 1, 0), mk_bound(0)));
  return replace_at(e, pos, Expr(wrapped));
}

// Wraps the Zero-arity subterm at pos in a rule redex that contracts back to
// it (the rule's rhs must be a single pattern variable).
std::optional<Expr> rule_expand_at(const Expr& e, const Position& pos, const RewriteRule& rule,
                                   TermGen& gen, const ArityContext& A) {
  auto sub = subterm_at(e, pos);
  if (!sub || !sub->is_term()) return std::nullopt;
  auto* rv = std::get_if<Term::Free>(&rule.rhs->node);
  if (!rv) return std::nullopt;
  std::map<std::string, TermPtr> bind;
  for (auto& [v, ar] : rule.pattern_ctx.entries) {
    if (v == rv->name) continue;
    TermPtr t = gen.term(A, ar, 1 + int(gen.rng.below(2)));
    if (!t) return std::nullopt;
    bind[v] = t;
  }
  bind[rv->name] = sub->term();
  TermPtr inst = subst_parallel(Expr(rule.lhs), bind).term();
  return replace_at(e, pos, Expr(inst));
}

// ---------------------------------------------------------------------------
// Step searches.

RuleSet only_eta() {
  RuleSet rs;
  rs.beta = rs.beta2 = false;
  rs.eta = true;
  return rs;
}
RuleSet only_beta() {
  RuleSet rs;
  rs.beta = true;
  rs.beta2 = rs.eta = false;
  return rs;
}
RuleSet only_rule(const Signature& sig, const std::string& name) {
  RuleSet rs;
  rs.beta = rs.beta2 = rs.eta = false;
  rs.sig = &sig;
  rs.all_sig = false;
  rs.sig_rules = {name};
  return rs;
}

bool one_step_to(const Expr& from, const Expr& to, const RuleSet& rs) {
  for (auto& [pos, tag] : redexes(from, rs)) {
    auto next = step(from, pos, tag, rs);
    if (next && alpha_eq(*next, to)) return true;
  }
  return false;
}

// 0-or-more steps under rs; cap on visited nodes.
bool reaches(const Expr& from, const Expr& to, const RuleSet& rs, std::size_t cap,
             bool* bound_hit = nullptr) {
  std::string goal = alpha_key(to);
  std::unordered_set<std::string> seen;
  std::deque<Expr> queue{from};
  seen.insert(alpha_key(from));
  while (!queue.empty()) {
    Expr cur = queue.front();
    queue.pop_front();
    if (alpha_key(cur) == goal) return true;
    if (seen.size() > cap) {
      if (bound_hit) *bound_hit = true;
      return false;
    }
    for (auto& [pos, tag] : redexes(cur, rs)) {
      auto next = step(cur, pos, tag, rs);
      if (next && seen.insert(alpha_key(*next)).second) queue.push_back(*next);
    }
  }
  return false;
}

std::string show_inputs(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::ostringstream os;
  bool first = true;
  for (auto& [k, v] : kv) {
    if (!first) os << ", ";
    os << k << " = " << v;
    first = false;
  }
  return os.str();
}

} // namespace

// ---------------------------------------------------------------------------
// Lemma checkers.

LemmaVerdict check_subst_eta(const TermPtr& m1, const TermPtr& m2, const TermPtr& n,
                             const std::string& x) {
  LemmaVerdict v{"subst_eta", 0, false, std::nullopt};
  if (!one_step_to(Expr(m1), Expr(m2), only_eta())) return v;
  v.cases_run = 1;
  TermPtr s1 = subst(m1, x, n), s2 = subst(m2, x, n);
  if (!one_step_to(Expr(s1), Expr(s2), only_eta()))
    v.counterexample = show_inputs({{"M1", print(m1)}, {"M2", print(m2)}, {"N", print(n)},
                                    {"x", x}, {"[N/x]M1", print(s1)}, {"[N/x]M2", print(s2)}}) +
                       " -- no single eta step";
  return v;
}

LemmaVerdict check_subst_eta_multi(const TermPtr& m, const TermPtr& n1, const TermPtr& n2,
                                   const std::string& x) {
  LemmaVerdict v{"subst_eta_multi", 0, false, std::nullopt};
  if (!one_step_to(Expr(n1), Expr(n2), only_eta())) return v;
  v.cases_run = 1;
  TermPtr s1 = subst(m, x, n1), s2 = subst(m, x, n2);
  bool bound = false;
  if (!reaches(Expr(s1), Expr(s2), only_eta(), 20000, &bound)) {
    if (bound) v.bound_exceeded = true;
    else
      v.counterexample = show_inputs({{"M", print(m)}, {"N1", print(n1)}, {"N2", print(n2)},
                                      {"x", x}}) +
                         " -- [N1/x]M does not eta-reduce to [N2/x]M";
  }
  return v;
}

LemmaVerdict check_subst_sig(const Signature& sig, const std::string& rule, const TermPtr& m1,
                             const TermPtr& m2, const TermPtr& n, const std::string& x) {
  LemmaVerdict v{"subst_" + rule, 0, false, std::nullopt};
  RuleSet rs = only_rule(sig, rule);
  if (!one_step_to(Expr(m1), Expr(m2), rs)) return v;
  v.cases_run = 1;
  TermPtr s1 = subst(m1, x, n), s2 = subst(m2, x, n);
  if (!one_step_to(Expr(s1), Expr(s2), rs))
    v.counterexample = show_inputs({{"M1", print(m1)}, {"M2", print(m2)}, {"N", print(n)},
                                    {"x", x}}) +
                       " -- no single " + rule + " step after substitution";
  return v;
}

LemmaVerdict check_subst_sig_multi(const Signature& sig, const std::string& rule, const TermPtr& m,
                                   const TermPtr& n1, const TermPtr& n2, const std::string& x) {
  LemmaVerdict v{"subst_" + rule + "_multi", 0, false, std::nullopt};
  RuleSet rs = only_rule(sig, rule);
  if (!one_step_to(Expr(n1), Expr(n2), rs)) return v;
  v.cases_run = 1;
  TermPtr s1 = subst(m, x, n1), s2 = subst(m, x, n2);
  bool bound = false;
  if (!reaches(Expr(s1), Expr(s2), rs, 20000, &bound)) {
    if (bound) v.bound_exceeded = true;
    else
      v.counterexample =
          show_inputs({{"M", print(m)}, {"N1", print(n1)}, {"N2", print(n2)}, {"x", x}}) +
          " -- [N1/x]M does not " + rule + "-reduce to [N2/x]M";
  }
  return v;
}

LemmaVerdict check_fv_beta(const TermPtr& m1, const TermPtr& m2, const std::string& x) {
  LemmaVerdict v{"fv_beta", 0, false, std::nullopt};
  if (!one_step_to(Expr(m1), Expr(m2), only_beta())) return v;
  if (contains_free(Expr(m1), x)) return v; // premise x not in FV(M1)
  v.cases_run = 1;
  if (contains_free(Expr(m2), x))
    v.counterexample = show_inputs({{"M1", print(m1)}, {"M2", print(m2)}, {"x", x}}) +
                       " -- x appeared in FV(M2)";
  return v;
}

namespace {

// The case lemmas catalogue where a step producing a lambda can sit: at the
// root (eta only), inside the body, or inside the annotation. Every step from
// M1 to the target must classify into exactly one catalogued shape, and the
// shape's structural description must hold of M1.
LemmaVerdict case_analysis(const char* lemma, const RuleSet& rs, const TermPtr& m1,
                           const TermPtr& target, bool root_shape_allowed) {
  LemmaVerdict v{lemma, 0, false, std::nullopt};
  auto* tl = std::get_if<Term::Lam>(&target->node);
  if (!tl) return v;

  std::vector<Position> hits;
  for (auto& [pos, tag] : redexes(Expr(m1), rs)) {
    auto next = step(Expr(m1), pos, tag, rs);
    if (next && alpha_eq(*next, Expr(target))) hits.push_back(pos);
  }
  if (hits.empty()) return v;
  v.cases_run = 1;

  auto fail = [&](const std::string& why) {
    v.counterexample =
        show_inputs({{"M1", print(m1)}, {"target", print(target)}}) + " -- " + why;
  };

  auto* l = std::get_if<Term::Lam>(&m1->node);
  for (const Position& pos : hits) {
    if (pos.is_root()) {
      if (!root_shape_allowed)
        return fail("step at the root produced a lambda, excluded by the arity argument"), v;
      // M1 = \y:K1.(F y), y not free in F, F == target
      bool ok = false;
      if (l) {
        if (auto* app = std::get_if<Term::App>(&l->body->node))
          if (auto* b = std::get_if<Term::Bound>(&app->arg->node))
            ok = b->index == 0 && !uses_bound(app->fun, 0) &&
                 alpha_eq(shift_term(app->fun, -1, 0), target);
      }
      if (!ok) return fail("root step does not have the \\y:K1.(F y) shape"), v;
    } else if (pos.path.front() == 1) {
      // M1 = \x:K2.N with N one-step-reducing to the target's body
      bool ok = l && alpha_eq(l->ann, tl->ann) &&
                one_step_to(Expr(l->body), Expr(tl->body), rs);
      if (!ok) return fail("body step does not have the \\x:K2.N shape"), v;
    } else if (pos.path.front() == 0) {
      // M1 = \x:K1.M2 with K1 one-step-reducing to the target's annotation
      bool ok = l && alpha_eq(l->body, tl->body) && one_step_to(Expr(l->ann), Expr(tl->ann), rs);
      if (!ok) return fail("annotation step does not have the \\x:K1.M2 shape"), v;
    } else {
      return fail("step outside the catalogued positions"), v;
    }
  }
  return v;
}

} // namespace

LemmaVerdict check_eta_case(const TermPtr& m1, const TermPtr& target) {
  return case_analysis("eta_case", only_eta(), m1, target, /*allow_root_shape=*/true);
}

LemmaVerdict check_pi1_case(const Signature& sig, const std::string& rule, const TermPtr& m1,
                            const TermPtr& target) {
  // correct arity rules the root shape out: the rule's result arity is Zero,
  // a lambda's never is
  return case_analysis("pi1_case", only_rule(sig, rule), m1, target, /*allow_root_shape=*/false);
}

LemmaVerdict check_commutation(const Signature* sig, const RuleTag& tag1, const TermPtr& m1,
                               const TermPtr& m2, const TermPtr& m3) {
  std::string name = tag1.kind == RuleTag::Kind::Eta ? "commute_eta_beta"
                                                     : "commute_" + tag1.rule + "_beta";
  LemmaVerdict v{name, 0, false, std::nullopt};

  RuleSet first = tag1.kind == RuleTag::Kind::Eta ? only_eta() : only_rule(*sig, tag1.rule);
  RuleSet beta = only_beta();
  if (!one_step_to(Expr(m1), Expr(m2), first)) return v;
  if (!one_step_to(Expr(m2), Expr(m3), beta)) return v;
  v.cases_run = 1;

  if (tag1.kind == RuleTag::Kind::Eta) {
    // witness: M1 -->>beta+ M2' -->>eta M3
    std::size_t depth_bound = 2 * node_count(Expr(m1)) + 2;
    std::unordered_set<std::string> seen{alpha_key(Expr(m1))};
    std::deque<std::pair<Expr, std::size_t>> queue{{Expr(m1), 0}};
    bool frontier_cut = false;
    while (!queue.empty()) {
      auto [cur, d] = queue.front();
      queue.pop_front();
      if (d >= 1 && reaches(cur, Expr(m3), only_eta(), 20000)) return v; // witness found
      if (d >= depth_bound || seen.size() > 50000) {
        frontier_cut = true;
        continue;
      }
      for (auto& [pos, tag] : redexes(cur, beta)) {
        auto next = step(cur, pos, tag, beta);
        if (next && seen.insert(alpha_key(*next)).second) queue.emplace_back(*next, d + 1);
      }
    }
    if (frontier_cut) v.bound_exceeded = true;
    else
      v.counterexample = show_inputs({{"M1", print(m1)}, {"M2", print(m2)}, {"M3", print(m3)}}) +
                         " -- no beta+ then eta* witness";
    return v;
  }

  // signature rule: exactly one beta step from M1, then rule steps to M3
  bool bound = false;
  for (auto& [pos, tag] : redexes(Expr(m1), beta)) {
    auto m2p = step(Expr(m1), pos, tag, beta);
    if (!m2p) continue;
    if (reaches(*m2p, Expr(m3), first, 20000, &bound)) return v;
  }
  if (bound) v.bound_exceeded = true;
  else
    v.counterexample = show_inputs({{"M1", print(m1)}, {"M2", print(m2)}, {"M3", print(m3)}}) +
                       " -- no single-beta then " + tag1.rule + "* witness";
  return v;
}

// ---------------------------------------------------------------------------

InterpVerdict bounded_interp_member(const ArityContext& ctx, const Signature* sig, const Expr& m,
                                    const Arity& a, std::size_t budget, std::uint64_t seed) {
  RuleSet rs = RuleSet::full(sig);
  if (a.is_zero()) {
    SnReport rep = sn_explore_serial(m, rs, kDefaultSnFuel);
    if (rep.verified_sn()) return {true, ""};
    return {false, "divergence found for " + print(m) +
                       (rep.cycle_found ? " (reduction cycle)" : " (fuel exhausted)")};
  }
  if (!m.is_term()) return {false, "kind at pair arity"};
  TermGen gen(seed);
  gen.sig = sig;

  // The interpretation of the left component contains every strongly
  // normalising term of the right shape, not only correct-arity ones; the
  // self-application combinator is itself normal, so it qualifies for Zero
  // and is the sample that catches divergent applications.
  std::vector<TermPtr> samples;
  samples.push_back(mk_lam("x", kind_for_arity(a.left()), mk_app(mk_bound(0), mk_bound(0))));
  for (std::size_t i = 0; i < std::max<std::size_t>(budget, 1); ++i) {
    TermPtr n = gen.term(ctx, a.left(), 1 + int(gen.rng.below(5)));
    if (n) samples.push_back(n);
  }
  for (const TermPtr& n : samples) {
    InterpVerdict in_left = bounded_interp_member(ctx, sig, Expr(n), a.left(),
                                                  std::max<std::size_t>(budget / 2, 1), gen.rng.next());
    if (!in_left.member) continue; // not a witness for the left component
    InterpVerdict sub = bounded_interp_member(ctx, sig, Expr(mk_app(m.term(), n)), a.right(),
                                              std::max<std::size_t>(budget / 2, 1), gen.rng.next());
    if (!sub.member) return sub;
  }
  return {true, ""};
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration.

namespace {

struct Exhaustive {
  const ArityContext& ctx;
  const ConstArityMap* consts;
  std::size_t max_size;

  std::map<std::string, std::vector<std::pair<TermPtr, Arity>>> tmemo;
  std::map<std::string, std::vector<std::pair<KindPtr, Arity>>> kmemo;

  static std::string key(const std::vector<Arity>& stack, std::size_t size) {
    std::string k = std::to_string(size);
    for (auto& a : stack) {
      k += '|';
      k += a.str();
    }
    return k;
  }

  const std::vector<std::pair<TermPtr, Arity>>& terms(const std::vector<Arity>& stack,
                                                      std::size_t size) {
    std::string k = key(stack, size);
    auto it = tmemo.find(k);
    if (it != tmemo.end()) return it->second;
    std::vector<std::pair<TermPtr, Arity>> out;
    if (size == 1) {
      for (std::size_t j = 0; j < stack.size(); ++j)
        out.emplace_back(mk_bound(int(j)), stack[stack.size() - 1 - j]);
      for (auto& [n, a] : ctx.entries) out.emplace_back(mk_free(n), a);
      if (consts)
        for (auto& [n, a] : *consts) out.emplace_back(mk_const(n), a);
    } else {
      for (std::size_t i = 1; i + 1 < size; ++i) {
        // applications: fun of size i, arg of size size-1-i
        for (auto& [f, af] : terms(stack, i)) {
          if (!af.is_pair()) continue;
          for (auto& [g, ag] : terms(stack, size - 1 - i)) {
            if (!(ag == af.left())) continue;
            out.emplace_back(mk_app(f, g), af.right());
          }
        }
      }
      for (std::size_t i = 1; i + 1 < size; ++i) {
        // lambdas: annotation of size i, body of size size-1-i
        for (auto& [K, ak] : kinds(stack, i)) {
          std::vector<Arity> inner = stack;
          inner.push_back(ak);
          for (auto& [b, ab] : terms(inner, size - 1 - i))
            out.emplace_back(mk_lam("x", K, b), Arity::pair(ak, ab));
        }
      }
    }
    return tmemo[k] = std::move(out);
  }

  const std::vector<std::pair<KindPtr, Arity>>& kinds(const std::vector<Arity>& stack,
                                                      std::size_t size) {
    std::string k = key(stack, size);
    auto it = kmemo.find(k);
    if (it != kmemo.end()) return it->second;
    std::vector<std::pair<KindPtr, Arity>> out;
    if (size == 1) {
      out.emplace_back(mk_type(), Arity::zero());
    } else {
      for (auto& [t, a] : terms(stack, size - 1))
        if (a.is_zero()) out.emplace_back(mk_el(t), Arity::zero());
      for (std::size_t i = 1; i + 1 < size; ++i) {
        for (auto& [d, ad] : kinds(stack, i)) {
          std::vector<Arity> inner = stack;
          inner.push_back(ad);
          for (auto& [c, ac] : kinds(inner, size - 1 - i))
            out.emplace_back(mk_pi("x", d, c), Arity::pair(ad, ac));
        }
        for (auto& [f, af] : kinds(stack, i)) {
          if (!af.is_pair()) continue;
          for (auto& [g, ag] : terms(stack, size - 1 - i)) {
            if (!(ag == af.left())) continue;
            out.emplace_back(mk_kapp(f, g), af.right());
          }
        }
      }
    }
    return kmemo[k] = std::move(out);
  }
};

} // namespace

std::vector<EnumItem> enumerate_correct(const ArityContext& ctx, const Signature* sig,
                                        std::size_t max_size, bool include_kinds) {
  const ConstArityMap* consts = sig ? &sig->const_arities() : nullptr;
  Exhaustive ex{ctx, consts, max_size, {}, {}};
  std::vector<EnumItem> out;
  std::vector<Arity> empty;
  for (std::size_t s = 1; s <= max_size; ++s) {
    for (auto& [t, a] : ex.terms(empty, s)) out.push_back({Expr(t), a});
    if (include_kinds)
      for (auto& [k, a] : ex.kinds(empty, s)) out.push_back({Expr(k), a});
  }
  return out;
}

SweepReport exhaustive_sweep(const SweepConfig& cfg) {
  const ConstArityMap* consts = cfg.sig ? &cfg.sig->const_arities() : nullptr;
  std::vector<EnumItem> items = enumerate_correct(cfg.ctx, cfg.sig, cfg.max_size, cfg.include_kinds);
  RuleSet rs = RuleSet::full(cfg.sig);

  struct ItemOut {
    bool sn_ok = true;
    bool sr_ok = true;
    bool uniq_ok = true;
    std::size_t longest = 0;
    std::vector<std::string> nfs; // only when > 1
    std::string detail;
  };
  std::vector<ItemOut> outs(items.size());

#pragma omp parallel for num_threads(cfg.workers) schedule(dynamic, 64) if (cfg.workers > 1)
  for (long li = 0; li < long(items.size()); ++li) {
    std::size_t i = std::size_t(li);
    const EnumItem& item = items[i];
    ItemOut& o = outs[i];
    SnReport rep = sn_explore_serial(item.subject, rs, cfg.fuel);
    o.sn_ok = rep.verified_sn();
    o.longest = rep.longest_path;
    if (rep.normal_forms.size() > 1) o.nfs = rep.normal_forms;
    if (!o.sn_ok) o.detail = "sn: " + print(item.subject);

    for (auto& [pos, tag] : redexes(item.subject, rs)) {
      auto next = step(item.subject, pos, tag, rs);
      if (!next) continue;
      auto a2 = infer_arity(cfg.ctx, *next, consts);
      if (!a2 || !(*a2 == item.arity)) {
        o.sr_ok = false;
        o.detail = "subject reduction: " + print(item.subject) + " --" + tag.str() + "--> " +
                   print(*next);
        break;
      }
    }

    if (cfg.check_uniqueness) {
      auto ds = enumerate_derivations(cfg.ctx, item.subject, 64, consts);
      auto as = derivable_arities(ds);
      if (as.size() != 1 || !(as.front() == item.arity)) {
        o.uniq_ok = false;
        o.detail = "uniqueness: " + print(item.subject) + " has " + std::to_string(as.size()) +
                   " derivable arities";
      }
    }
  }

  SweepReport rep;
  rep.items = items.size();
  for (std::size_t i = 0; i < items.size(); ++i) {
    ItemOut& o = outs[i];
    if (!o.sn_ok) rep.sn_failures++;
    if (!o.sr_ok) rep.sr_failures++;
    if (!o.uniq_ok) rep.uniqueness_failures++;
    if (o.longest > rep.longest_path) {
      rep.longest_path = o.longest;
      rep.longest_path_subject = print(items[i].subject);
    }
    if (!o.nfs.empty()) rep.nf_pairs.push_back({print(items[i].subject), o.nfs});
    if (!o.detail.empty() && rep.failure_details.size() < 50)
      rep.failure_details.push_back(o.detail);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Well-typed corpus.

TypeContext bridge_base_context(const MlfEnv& env) {
  std::set<std::string> consts = env.sig ? env.sig->const_names() : std::set<std::string>{};
  auto entries = parse_kind_context("A : Type ; B : (A)Type ; a : A ; b : B(a) ;", consts);
  auto gamma = TypeContext::make(entries, env);
  if (!gamma) throw std::logic_error("bridge context failed to validate: " + gamma.error().reason);
  return *gamma;
}

std::vector<TermPtr> welltyped_corpus(const MlfEnv& env, const TypeContext& gamma,
                                      std::size_t count, std::uint64_t seed) {
  std::vector<TypingResult> pool;
  std::vector<TermPtr> corpus;
  std::unordered_set<std::string> seen;

  auto add = [&](const TermPtr& t) -> bool {
    auto r = infer_type(env, gamma, t);
    if (!r) return false;
    if (!seen.insert(alpha_key(Expr(t))).second) return false;
    pool.push_back(*r);
    corpus.push_back(t);
    return true;
  };

  for (auto& [n, k] : gamma.entries()) {
    (void)k;
    add(mk_free(n));
  }
  std::set<std::string> consts;
  if (env.sig) {
    consts = env.sig->const_names();
    for (auto& c : env.sig->consts())
      if (c.kind) add(mk_const(c.name));
  }

  // canonical §5 applications seed the pool
  for (const char* src : {"Sigma(A,B)", "pair(A,B,a,b)", "pi1(A,B,pair(A,B,a,b))",
                          "pi2(A,B,pair(A,B,a,b))", "uo(bool)", "\\z:Bool.U",
                          "E_Bool(\\z:Bool.U, bool, bool, true)",
                          "E_Bool(\\z:Bool.U, bool, bool, false)"}) {
    try {
      add(parse_term(src, consts));
    } catch (const ParseError&) {
      // constant not in this signature; skip
    }
  }

  Rng rng(seed);
  int name_counter = 0;
  std::size_t iterations = 0;
  while (corpus.size() < count && iterations < count * 60 + 1000) {
    ++iterations;
    if (pool.empty()) break;
    if (rng.coin(70)) {
      // application: f with a product kind, argument with a matching kind
      const TypingResult& f = pool[rng.below(pool.size())];
      auto* p = std::get_if<Kind::Pi>(&f.kind->node);
      if (!p) continue;
      std::size_t offset = rng.below(pool.size());
      for (std::size_t probe = 0; probe < std::min<std::size_t>(pool.size(), 80); ++probe) {
        const TypingResult& arg = pool[(offset + probe) % pool.size()];
        if (!alpha_eq(arg.kind, p->dom)) continue;
        add(mk_app(f.subject, arg.subject));
        break;
      }
    } else {
      // lambda over Type or El(t) for some t : Type in the pool
      KindPtr dom = mk_type();
      if (rng.coin(75)) {
        std::size_t offset = rng.below(pool.size());
        for (std::size_t probe = 0; probe < std::min<std::size_t>(pool.size(), 40); ++probe) {
          const TypingResult& t = pool[(offset + probe) % pool.size()];
          if (std::holds_alternative<Kind::Type>(t.kind->node)) {
            dom = mk_el(t.subject);
            break;
          }
        }
      }
      std::string x = "x" + std::to_string(++name_counter);
      TermPtr body = rng.coin(40) ? mk_free(x) : pool[rng.below(pool.size())].subject;
      add(mk_lam(x, dom, close_term(body, x)));
    }
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Suite.

namespace {

struct SuiteSetup {
  Signature sig;
  ArityContext gctx;
  MlfEnv env;
  TypeContext bridge_gamma;
  std::vector<TermPtr> corpus;
};

Arity random_target(Rng& rng) {
  switch (rng.below(5)) {
    case 0: case 1: return Arity::zero();
    case 2: case 3: return Arity::pair(Arity::zero(), Arity::zero());
    default: return Arity::pair(Arity::pair(Arity::zero(), Arity::zero()), Arity::zero());
  }
}

TermGen make_gen(const SuiteSetup& st, Rng& rng, bool kinds = false) {
  TermGen gen(rng.next());
  gen.sig = &st.sig;
  gen.kinds_enabled = kinds;
  return gen;
}

std::vector<PosInfo> positions_where(const SuiteSetup& st, const Expr& e,
                                     bool want_term, bool want_pair) {
  std::vector<PosInfo> all = annotate(st.gctx, e, &st.sig.const_arities());
  std::vector<PosInfo> out;
  for (auto& p : all)
    if (p.is_term == want_term && p.arity.is_pair() == want_pair) out.push_back(p);
  return out;
}

// M1 --eta--> M2 by expanding a pair-arity spot of a generated term.
struct EtaPair {
  TermPtr m1, m2;
};
std::optional<EtaPair> make_eta_pair(const SuiteSetup& st, Rng& rng) {
  TermGen gen = make_gen(st, rng);
  Arity target = Arity::pair(Arity::zero(), random_target(rng));
  TermPtr base = gen.term(st.gctx, target, 4 + int(rng.below(7)));
  if (!base) return std::nullopt;
  auto spots = positions_where(st, Expr(base), true, true);
  if (spots.empty()) return std::nullopt;
  auto& spot = spots[rng.below(spots.size())];
  auto m1 = eta_expand_at(Expr(base), spot.pos, spot.arity);
  if (!m1) return std::nullopt;
  return EtaPair{m1->term(), base};
}

// M1 --rule--> M2 by wrapping a Zero-arity spot in a rule redex.
std::optional<EtaPair> make_rule_pair(const SuiteSetup& st, Rng& rng, const std::string& rule) {
  const RewriteRule* r = st.sig.find_rule(rule);
  if (!r) return std::nullopt;
  TermGen gen = make_gen(st, rng);
  TermPtr base = gen.term(st.gctx, random_target(rng), 3 + int(rng.below(7)));
  if (!base) return std::nullopt;
  auto spots = positions_where(st, Expr(base), true, false);
  if (spots.empty()) return std::nullopt;
  auto& spot = spots[rng.below(spots.size())];
  auto m1 = rule_expand_at(Expr(base), spot.pos, *r, gen, st.gctx);
  if (!m1) return std::nullopt;
  return EtaPair{m1->term(), base};
}

std::string pick_subst_var(const SuiteSetup& st, Rng& rng) {
  if (rng.coin(50)) return "w";
  return st.gctx.entries[rng.below(st.gctx.entries.size())].first;
}

LemmaVerdict drive_subst_eta(const SuiteSetup& st, Rng& rng) {
  auto pair = make_eta_pair(st, rng);
  if (!pair) return {"subst_eta", 0, false, std::nullopt};
  TermGen gen = make_gen(st, rng);
  TermPtr n = gen.term(st.gctx, random_target(rng), 1 + int(rng.below(5)));
  if (!n) return {"subst_eta", 0, false, std::nullopt};
  std::string x = pick_subst_var(st, rng);
  LemmaVerdict a = check_subst_eta(pair->m1, pair->m2, n, x);
  if (!a.passed() || a.cases_run == 0) return a;

  // second clause of the lemma
  auto inner = make_eta_pair(st, rng);
  TermPtr m = gen.term(st.gctx, random_target(rng), 2 + int(rng.below(7)));
  if (inner && m) {
    LemmaVerdict b = check_subst_eta_multi(m, inner->m1, inner->m2, x);
    if (!b.passed()) {
      b.lemma = a.lemma;
      return b;
    }
    a.cases_run += b.cases_run;
  }
  return a;
}

LemmaVerdict drive_subst_rule(const SuiteSetup& st, Rng& rng, const std::string& rule) {
  auto pair = make_rule_pair(st, rng, rule);
  std::string name = "subst_" + rule;
  if (!pair) return {name, 0, false, std::nullopt};
  TermGen gen = make_gen(st, rng);
  TermPtr n = gen.term(st.gctx, random_target(rng), 1 + int(rng.below(5)));
  if (!n) return {name, 0, false, std::nullopt};
  std::string x = pick_subst_var(st, rng);
  LemmaVerdict a = check_subst_sig(st.sig, rule, pair->m1, pair->m2, n, x);
  if (!a.passed() || a.cases_run == 0) return a;
  auto inner = make_rule_pair(st, rng, rule);
  TermPtr m = gen.term(st.gctx, random_target(rng), 2 + int(rng.below(7)));
  if (inner && m) {
    LemmaVerdict b = check_subst_sig_multi(st.sig, rule, m, inner->m1, inner->m2, x);
    if (!b.passed()) {
      b.lemma = a.lemma;
      return b;
    }
    a.cases_run += b.cases_run;
  }
  return a;
}

// term with a guaranteed beta redex: wrap a spot in (\x:K.body) v
std::optional<TermPtr> make_beta_host(const SuiteSetup& st, Rng& rng, TermGen& gen) {
  TermPtr base = gen.term(st.gctx, random_target(rng), 3 + int(rng.below(8)));
  if (!base) return std::nullopt;
  auto spots = positions_where(st, Expr(base), true, rng.coin(50));
  if (spots.empty()) spots = positions_where(st, Expr(base), true, !rng.coin(50));
  if (spots.empty()) return std::nullopt;
  auto& spot = spots[rng.below(spots.size())];
  auto sub = subterm_at(Expr(base), spot.pos);
  if (!sub || !sub->is_term()) return std::nullopt;
  TermPtr s = sub->term();

  // abstract a context variable out of S when one occurs, else a plain wrap
  std::vector<std::string> inside;
  for (auto& n : free_vars(Expr(s)))
    if (st.gctx.binds(n)) inside.push_back(n);
  TermPtr lam, arg;
  if (!inside.empty() && rng.coin(70)) {
    const std::string& v = inside[rng.below(inside.size())];
    const Arity b = *st.gctx.lookup(v);
    lam = mk_lam("x", kind_for_arity(b), close_term(shift_term(s, 1, 0), v));
    arg = mk_free(v);
  } else {
    Arity b = Arity::zero();
    TermGen g2 = make_gen(st, rng);
    arg = g2.term(st.gctx, b, 1 + int(rng.below(3)));
    if (!arg) return std::nullopt;
    lam = mk_lam("x", kind_for_arity(b), shift_term(s, 1, 0));
  }
  auto replaced = replace_at(Expr(base), spot.pos, Expr(mk_app(lam, arg)));
  if (!replaced) return std::nullopt;
  return replaced->term();
}

LemmaVerdict drive_fv_beta(const SuiteSetup& st, Rng& rng) {
  TermGen gen = make_gen(st, rng);
  auto m1 = make_beta_host(st, rng, gen);
  if (!m1) return {"fv_beta", 0, false, std::nullopt};
  RuleSet beta = only_beta();
  auto rx = redexes(Expr(*m1), beta);
  if (rx.empty()) return {"fv_beta", 0, false, std::nullopt};
  auto& [pos, tag] = rx[rng.below(rx.size())];
  auto m2 = step(Expr(*m1), pos, tag, beta);
  if (!m2) return {"fv_beta", 0, false, std::nullopt};

  std::string x = "q0";
  if (rng.coin(50)) {
    for (auto& [n, a] : st.gctx.entries) {
      (void)a;
      if (!contains_free(Expr(*m1), n)) {
        x = n;
        break;
      }
    }
  }
  return check_fv_beta(*m1, m2->term(), x);
}

TermPtr make_target_lam(const SuiteSetup& st, Rng& rng, TermGen& gen) {
  Arity a1 = rng.coin(70) ? Arity::zero() : Arity::pair(Arity::zero(), Arity::zero());
  Arity a2 = rng.coin(70) ? Arity::zero() : Arity::pair(Arity::zero(), Arity::zero());
  KindPtr K = rng.coin(50) ? gen.kind(st.gctx, a1, 2 + int(rng.below(3))) : kind_for_arity(a1);
  if (!K) K = kind_for_arity(a1);
  std::string x = gen.fresh();
  TermPtr body = gen.term(st.gctx.extended(x, a1), a2, 2 + int(rng.below(5)));
  if (!body) return nullptr;
  return mk_lam(x, K, close_term(body, x));
}

LemmaVerdict drive_eta_case(const SuiteSetup& st, Rng& rng) {
  TermGen gen = make_gen(st, rng);
  TermPtr target = make_target_lam(st, rng, gen);
  if (!target) return {"eta_case", 0, false, std::nullopt};
  std::uint64_t shape = rng.below(3);
  TermPtr m1;
  if (shape != 0) {
    bool in_body = shape == 1;
    auto spots = positions_where(st, Expr(target), true, true);
    std::vector<PosInfo> filtered;
    for (auto& p : spots)
      if (!p.pos.path.empty() && p.pos.path.front() == (in_body ? 1 : 0)) filtered.push_back(p);
    if (!filtered.empty()) {
      auto& spot = filtered[rng.below(filtered.size())];
      if (auto e = eta_expand_at(Expr(target), spot.pos, spot.arity)) m1 = e->term();
    }
  }
  if (!m1) {
    // root shape: \y:K1.(target y)
    KindPtr k1 = kind_for_arity(rng.coin(50) ? Arity::zero()
                                             : Arity::pair(Arity::zero(), Arity::zero()));
    m1 = mk_lam("y", k1, mk_app(shift_term(target, 1, 0), mk_bound(0)));
  }
  return check_eta_case(m1, target);
}

LemmaVerdict drive_pi1_case(const SuiteSetup& st, Rng& rng) {
  const RewriteRule* rule = st.sig.find_rule("pi1");
  if (!rule) return {"pi1_case", 0, false, std::nullopt};
  TermGen gen = make_gen(st, rng);
  TermPtr target = make_target_lam(st, rng, gen);
  if (!target) return {"pi1_case", 0, false, std::nullopt};
  bool in_body = rng.coin(60);
  auto spots = positions_where(st, Expr(target), true, false);
  std::vector<PosInfo> filtered;
  for (auto& p : spots)
    if (!p.pos.path.empty() && p.pos.path.front() == (in_body ? 1 : 0)) filtered.push_back(p);
  if (filtered.empty())
    for (auto& p : spots)
      if (!p.pos.path.empty()) filtered.push_back(p);
  if (filtered.empty()) return {"pi1_case", 0, false, std::nullopt};
  auto& spot = filtered[rng.below(filtered.size())];
  auto m1 = rule_expand_at(Expr(target), spot.pos, *rule, gen, st.gctx);
  if (!m1) return {"pi1_case", 0, false, std::nullopt};
  return check_pi1_case(st.sig, "pi1", m1->term(), target);
}

LemmaVerdict drive_commute(const SuiteSetup& st, Rng& rng, const RuleTag& tag1) {
  std::string name = tag1.kind == RuleTag::Kind::Eta ? "commute_eta_beta"
                                                     : "commute_" + tag1.rule + "_beta";
  TermGen gen = make_gen(st, rng);
  auto host = make_beta_host(st, rng, gen);
  if (!host) return {name, 0, false, std::nullopt};

  TermPtr m1;
  if (tag1.kind == RuleTag::Kind::Eta) {
    auto spots = positions_where(st, Expr(*host), true, true);
    if (spots.empty()) return {name, 0, false, std::nullopt};
    auto& spot = spots[rng.below(spots.size())];
    auto e = eta_expand_at(Expr(*host), spot.pos, spot.arity);
    if (!e) return {name, 0, false, std::nullopt};
    m1 = e->term();
  } else if (tag1.rule == "u") {
    // uo(bool) -> Bool has no pattern variables: plant the redex directly
    auto spots = positions_where(st, Expr(*host), true, false);
    if (spots.empty()) return {name, 0, false, std::nullopt};
    auto& spot = spots[rng.below(spots.size())];
    auto planted =
        replace_at(Expr(*host), spot.pos, Expr(mk_app(mk_const("uo"), mk_const("bool"))));
    if (!planted) return {name, 0, false, std::nullopt};
    m1 = planted->term();
  } else {
    const RewriteRule* rule = st.sig.find_rule(tag1.rule);
    if (!rule) return {name, 0, false, std::nullopt};
    auto spots = positions_where(st, Expr(*host), true, false);
    if (spots.empty()) return {name, 0, false, std::nullopt};
    auto& spot = spots[rng.below(spots.size())];
    auto e = rule_expand_at(Expr(*host), spot.pos, *rule, gen, st.gctx);
    if (!e) return {name, 0, false, std::nullopt};
    m1 = e->term();
  }

  RuleSet first = tag1.kind == RuleTag::Kind::Eta ? only_eta() : only_rule(st.sig, tag1.rule);
  auto rx1 = redexes(Expr(m1), first);
  if (rx1.empty()) return {name, 0, false, std::nullopt};
  auto& pick1 = rx1[rng.below(rx1.size())];
  auto s1 = step(Expr(m1), pick1.first, pick1.second, first);
  if (!s1) return {name, 0, false, std::nullopt};
  TermPtr m2 = s1->term();

  auto rx2 = redexes(Expr(m2), only_beta());
  if (rx2.empty()) return {name, 0, false, std::nullopt};
  auto& [bpos, btag] = rx2[rng.below(rx2.size())];
  auto s2 = step(Expr(m2), bpos, btag, only_beta());
  if (!s2) return {name, 0, false, std::nullopt};
  return check_commutation(&st.sig, tag1, m1, m2, s2->term());
}

LemmaVerdict drive_subject_reduction(const SuiteSetup& st, Rng& rng) {
  TermGen gen = make_gen(st, rng, /*kinds=*/true);
  Arity target = random_target(rng);
  Expr subject;
  if (rng.coin(25)) {
    KindPtr k = gen.kind(st.gctx, target, 3 + int(rng.below(8)));
    if (!k) return {"subject_reduction", 0, false, std::nullopt};
    subject = Expr(k);
  } else {
    TermPtr t = gen.term(st.gctx, target, 3 + int(rng.below(9)));
    if (!t) return {"subject_reduction", 0, false, std::nullopt};
    subject = Expr(t);
  }
  const ConstArityMap* consts = &st.sig.const_arities();
  auto a = infer_arity(st.gctx, subject, consts);
  if (!a) return {"subject_reduction", 0, false, std::nullopt};

  LemmaVerdict v{"subject_reduction", 1, false, std::nullopt};
  RuleSet rs = RuleSet::full(&st.sig);
  for (auto& [pos, tag] : redexes(subject, rs)) {
    auto next = step(subject, pos, tag, rs);
    if (!next) continue;
    auto a2 = infer_arity(st.gctx, *next, consts);
    if (!a2 || !(*a2 == *a)) {
      v.counterexample = show_inputs({{"M", print(subject)}, {"step", tag.str()},
                                      {"at", pos.str()}, {"M'", print(*next)}}) +
                         " -- arity not preserved";
      break;
    }
  }
  return v;
}

LemmaVerdict drive_uniqueness(const SuiteSetup& st, Rng& rng) {
  TermGen gen = make_gen(st, rng);
  TermPtr t = gen.term(st.gctx, random_target(rng), 2 + int(rng.below(5)));
  if (!t) return {"arity_uniqueness", 0, false, std::nullopt};
  const ConstArityMap* consts = &st.sig.const_arities();
  auto a = infer_arity(st.gctx, Expr(t), consts);
  if (!a) return {"arity_uniqueness", 0, false, std::nullopt};

  LemmaVerdict v{"arity_uniqueness", 1, false, std::nullopt};
  auto ds = enumerate_derivations(st.gctx, Expr(t), 64, consts);
  auto as = derivable_arities(ds);
  if (as.size() != 1 || !(as.front() == *a)) {
    v.counterexample = show_inputs({{"M", print(t)}}) + " -- oracle found " +
                       std::to_string(as.size()) + " distinct arities (inference: " + a->str() + ")";
    return v;
  }
  // Lemma 1, second half: self-application is never derivable
  if (infer_arity(st.gctx, Expr(mk_app(t, t)), consts))
    v.counterexample = show_inputs({{"M", print(t)}}) + " -- M M unexpectedly has an arity";
  return v;
}

LemmaVerdict drive_bridge(const SuiteSetup& st, Rng& rng) {
  if (st.corpus.empty()) return {"theorem2_bridge", 0, false, std::nullopt};
  const TermPtr& t = st.corpus[rng.below(st.corpus.size())];
  LemmaVerdict v{"theorem2_bridge", 1, false, std::nullopt};
  auto r = theorem2_bridge(st.env, st.bridge_gamma, t);
  if (!r && r.error().violation)
    v.counterexample = show_inputs({{"M", print(t)}}) + " -- " + r.error().reason;
  return v;
}

LemmaVerdict drive_sn_generated(const SuiteSetup& st, Rng& rng) {
  TermGen gen = make_gen(st, rng, /*kinds=*/true);
  TermPtr t = gen.term(st.gctx, random_target(rng), 3 + int(rng.below(9)));
  if (!t) return {"sn_generated", 0, false, std::nullopt};
  LemmaVerdict v{"sn_generated", 1, false, std::nullopt};
  SnReport rep = sn_explore_serial(Expr(t), RuleSet::full(&st.sig), 50000);
  if (!rep.verified_sn())
    v.counterexample = show_inputs({{"M", print(t)}}) +
                       (rep.cycle_found ? " -- reduction cycle" : " -- fuel exhausted");
  return v;
}

LemmaVerdict drive_normalize_welltyped(const SuiteSetup& st, Rng& rng) {
  if (st.corpus.empty()) return {"normalize_welltyped", 0, false, std::nullopt};
  const TermPtr& t = st.corpus[rng.below(st.corpus.size())];
  LemmaVerdict v{"normalize_welltyped", 1, false, std::nullopt};
  auto r = normalize_unchecked(Expr(t), RuleSet::full(&st.sig));
  if (!r)
    v.counterexample = show_inputs({{"M", print(t)}}) + " -- fuel exhausted";
  else if (r->steps.size() > kDefaultNormalizeFuel / 10)
    v.counterexample = show_inputs({{"M", print(t)}}) + " -- " + std::to_string(r->steps.size()) +
                       " steps, uncomfortably close to the fuel bound";
  return v;
}

LemmaVerdict drive_valuation(const SuiteSetup& st, Rng& rng) {
  TermGen gen = make_gen(st, rng);
  TermPtr t = gen.term(st.gctx, random_target(rng), 3 + int(rng.below(8)));
  if (!t) return {"valuation", 0, false, std::nullopt};
  LemmaVerdict v{"valuation", 1, false, std::nullopt};

  // identity valuation is the identity up to alpha
  Valuation id;
  for (auto& n : free_vars(Expr(t))) id.map[n] = mk_free(n);
  if (!alpha_eq(apply_valuation(id, Expr(t)), Expr(t))) {
    v.counterexample = show_inputs({{"M", print(t)}}) + " -- identity valuation changed the term";
    return v;
  }

  // simultaneity: compare against sequential substitution through fresh temporaries
  Valuation rho;
  std::vector<std::string> fv;
  for (auto& n : free_vars(Expr(t))) fv.push_back(n);
  for (auto& n : fv) {
    TermPtr img = gen.term(st.gctx, st.gctx.lookup(n) ? *st.gctx.lookup(n) : Arity::zero(),
                           1 + int(rng.below(3)));
    if (img) rho.map[n] = img;
  }
  Expr direct = apply_valuation(rho, Expr(t));
  Expr staged = Expr(t);
  int i = 0;
  std::vector<std::pair<std::string, TermPtr>> temps;
  for (auto& [n, img] : rho.map) {
    std::string tmp = "@tmp" + std::to_string(i++);
    staged = subst(staged, n, mk_free(tmp));
    temps.emplace_back(tmp, img);
  }
  for (auto& [tmp, img] : temps) staged = subst(staged, tmp, img);
  if (!alpha_eq(direct, staged))
    v.counterexample = show_inputs({{"M", print(t)}}) +
                       " -- parallel and staged substitution disagree";
  return v;
}

LemmaVerdict drive_interp(const SuiteSetup& st, Rng& rng) {
  TermGen gen = make_gen(st, rng);
  Arity target = random_target(rng);
  TermPtr t = gen.term(st.gctx, target, 2 + int(rng.below(6)));
  if (!t) return {"interp_member", 0, false, std::nullopt};
  LemmaVerdict v{"interp_member", 1, false, std::nullopt};
  auto iv = bounded_interp_member(st.gctx, &st.sig, Expr(t), target, 4, rng.next());
  if (!iv.member)
    v.counterexample = show_inputs({{"M", print(t)}, {"arity", target.str()}}) + " -- " + iv.detail;
  return v;
}

} // namespace

std::size_t SuiteReport::total_failures() const {
  std::size_t n = 0;
  for (auto& l : lemmas) n += l.failures.size();
  n += sweep_sn_failures + sweep_sr_failures + sweep_uniqueness_failures;
  return n;
}

std::size_t SuiteReport::total_bound_exceeded() const {
  std::size_t n = 0;
  for (auto& l : lemmas) n += l.bound_exceeded;
  return n;
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();

  SuiteSetup st{Signature{}, {}, {}, {}, {}};
  {
    auto s1 = builtin_sigma().merged(builtin_bool());
    if (!s1) throw std::logic_error("builtin merge failed: " + s1.error().message);
    auto s2 = s1->merged(builtin_universe());
    if (!s2) throw std::logic_error("builtin merge failed: " + s2.error().message);
    st.sig = std::move(*s2);
  }
  st.gctx = parse_arity_context("f:(0,0), g:(0,(0,0)), h:((0,0),0), b:0, c:0, d:0");
  st.env = MlfEnv::make(&st.sig);
  st.bridge_gamma = bridge_base_context(st.env);
  st.corpus = welltyped_corpus(st.env, st.bridge_gamma, cfg.bridge_corpus, cfg.seed);

  using Driver = LemmaVerdict (*)(const SuiteSetup&, Rng&);
  struct Entry {
    const char* name;
    Driver fn;
  };
  static LemmaVerdict (*commute_eta)(const SuiteSetup&, Rng&) = [](const SuiteSetup& s, Rng& r) {
    return drive_commute(s, r, RuleTag::eta());
  };
  const std::vector<Entry> drivers = {
      {"subst_eta", drive_subst_eta},
      {"subst_pi1", [](const SuiteSetup& s, Rng& r) { return drive_subst_rule(s, r, "pi1"); }},
      {"fv_beta", drive_fv_beta},
      {"eta_case", drive_eta_case},
      {"pi1_case", drive_pi1_case},
      {"commute_eta_beta", commute_eta},
      {"commute_pi1_beta",
       [](const SuiteSetup& s, Rng& r) { return drive_commute(s, r, RuleTag::sig("pi1")); }},
      {"commute_pi2_beta",
       [](const SuiteSetup& s, Rng& r) { return drive_commute(s, r, RuleTag::sig("pi2")); }},
      {"commute_b1_beta",
       [](const SuiteSetup& s, Rng& r) { return drive_commute(s, r, RuleTag::sig("b1")); }},
      {"commute_b2_beta",
       [](const SuiteSetup& s, Rng& r) { return drive_commute(s, r, RuleTag::sig("b2")); }},
      {"commute_u_beta",
       [](const SuiteSetup& s, Rng& r) { return drive_commute(s, r, RuleTag::sig("u")); }},
      {"subject_reduction", drive_subject_reduction},
      {"arity_uniqueness", drive_uniqueness},
      {"theorem2_bridge", drive_bridge},
      {"sn_generated", drive_sn_generated},
      {"normalize_welltyped", drive_normalize_welltyped},
      {"valuation", drive_valuation},
      {"interp_member", drive_interp},
  };

  SuiteReport rep;
  rep.seed = cfg.seed;
  rep.cases = cfg.cases;

  for (std::size_t li = 0; li < drivers.size(); ++li) {
    std::vector<LemmaVerdict> verdicts(cfg.cases);
#pragma omp parallel for num_threads(cfg.workers) schedule(dynamic, 8) if (cfg.workers > 1)
    for (long ci = 0; ci < long(cfg.cases); ++ci) {
      Rng rng(mix_seed(cfg.seed, li, std::uint64_t(ci)));
      // retry generation a few times so nearly every case runs
      LemmaVerdict v = drivers[li].fn(st, rng);
      for (int retry = 0; v.cases_run == 0 && retry < 4; ++retry) v = drivers[li].fn(st, rng);
      verdicts[std::size_t(ci)] = std::move(v);
    }
    LemmaReport lr;
    lr.lemma = drivers[li].name;
    for (std::size_t ci = 0; ci < verdicts.size(); ++ci) {
      auto& v = verdicts[ci];
      if (v.cases_run == 0) {
        lr.skipped++;
        continue;
      }
      lr.cases_run += v.cases_run;
      if (v.bound_exceeded) lr.bound_exceeded++;
      if (v.counterexample)
        lr.failures.push_back("case " + std::to_string(ci) + ": " + *v.counterexample);
    }
    rep.lemmas.push_back(std::move(lr));
  }

  if (cfg.sweep_size > 0) {
    SweepConfig sw;
    sw.ctx = parse_arity_context("f:(0,0), b:0, c:0");
    sw.sig = &st.sig;
    sw.max_size = cfg.sweep_size;
    sw.workers = cfg.workers;
    SweepReport swr = exhaustive_sweep(sw);
    rep.sweep_ran = true;
    rep.sweep_items = swr.items;
    rep.sweep_sn_failures = swr.sn_failures;
    rep.sweep_sr_failures = swr.sr_failures;
    rep.sweep_uniqueness_failures = swr.uniqueness_failures;
    rep.sweep_nf_pairs = swr.nf_pairs.size();
    rep.sweep_longest_path = swr.longest_path;
  }

  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string suite_json(const SuiteReport& rep) {
  json j;
  j["seed"] = rep.seed;
  j["cases"] = rep.cases;
  j["lemmas"] = json::array();
  for (auto& l : rep.lemmas) {
    j["lemmas"].push_back({{"lemma", l.lemma},
                           {"cases", l.cases_run},
                           {"skipped", l.skipped},
                           {"boundExceeded", l.bound_exceeded},
                           {"failures", l.failures}});
  }
  if (rep.sweep_ran) {
    j["sweep"] = {{"items", rep.sweep_items},
                  {"snFailures", rep.sweep_sn_failures},
                  {"subjectReductionFailures", rep.sweep_sr_failures},
                  {"uniquenessFailures", rep.sweep_uniqueness_failures},
                  {"nfPairs", rep.sweep_nf_pairs},
                  {"longestPath", rep.sweep_longest_path}};
  }
  j["failures"] = rep.total_failures();
  j["boundExceeded"] = rep.total_bound_exceeded();
  return j.dump();
}

std::string suite_text(const SuiteReport& rep) {
  std::ostringstream os;
  os << "property suite: seed " << rep.seed << ", " << rep.cases << " cases per lemma\n";
  for (auto& l : rep.lemmas) {
    os << "  " << l.lemma << ": " << l.cases_run << " cases";
    if (l.skipped) os << ", " << l.skipped << " skipped";
    if (l.bound_exceeded) os << ", " << l.bound_exceeded << " bound-exceeded";
    os << ", " << l.failures.size() << " failures\n";
    for (auto& f : l.failures) os << "    FAIL " << f << "\n";
  }
  if (rep.sweep_ran) {
    os << "  sweep: " << rep.sweep_items << " items, " << rep.sweep_sn_failures
       << " sn failures, " << rep.sweep_sr_failures << " subject-reduction failures, "
       << rep.sweep_uniqueness_failures << " uniqueness failures, " << rep.sweep_nf_pairs
       << " nf-pair findings, longest path " << rep.sweep_longest_path << "\n";
  }
  os << "total failures: " << rep.total_failures() << ", bound exceeded: "
     << rep.total_bound_exceeded() << "\n";
  os << "elapsed: " << rep.elapsed_seconds << "s\n";
  return os.str();
}

} // namespace mlf
