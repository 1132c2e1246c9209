// test_proplab.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#include "doctest.h"

#include "mlf/proplab.hpp"
#include "mlf/surface.hpp"

using namespace mlf;

TEST_CASE("the identity valuation is the identity") {
  Expr m = Expr(parse_term("f (x y)"));
  Valuation id;
  for (auto& n : free_vars(m)) id.map[n] = mk_free(n);
  CHECK(alpha_eq(apply_valuation(id, m), m));
}

TEST_CASE("valuations substitute simultaneously") {
  Valuation swap;
  swap.map["x"] = mk_free("y");
  swap.map["y"] = mk_free("x");
  CHECK(alpha_eq(apply_valuation(swap, Expr(parse_term("x y"))), Expr(parse_term("y x"))));
}

TEST_CASE("valuations leave bound occurrences alone") {
  Valuation rho;
  rho.map["x"] = mk_free("a");
  CHECK(alpha_eq(apply_valuation(rho, Expr(parse_term("\\x:Type.x"))),
                 Expr(parse_term("\\x:Type.x"))));
}

TEST_CASE("generation is certified and deterministic per seed") {
  GenConfig cfg;
  cfg.ctx = parse_arity_context("f:(0,0), b:0");
  cfg.size = 3;
  cfg.seed = 11;
  auto g1 = gen_term(cfg);
  auto g2 = gen_term(cfg);
  REQUIRE(g1);
  REQUIRE(g2);
  CHECK(alpha_eq(g1->subject, g2->subject));
  CHECK(infer_arity(cfg.ctx, g1->subject).ok());
}

TEST_CASE("generation reports unsatisfiable targets") {
  GenConfig cfg;
  cfg.size = 1;
  cfg.target = Arity::zero();
  CHECK_FALSE(gen_term(cfg).has_value()); // empty context, no Zero term of size 1

  cfg.kinds_enabled = true;
  auto g = gen_term(cfg);
  REQUIRE(g); // Type fits
  CHECK(g->subject.is_kind());

  // a pair-arity target in the empty context is unsatisfiable at size 1;
  // the generator may still fall back to a minimal lambda of size >= 3
  GenConfig lam;
  lam.size = 1;
  lam.target = Arity::pair(Arity::zero(), Arity::zero());
  auto out = gen_term(lam);
  if (out) {
    CHECK(node_count(out->subject) >= 3);
    CHECK(std::holds_alternative<Term::Lam>(out->subject.term()->node));
  }
}

TEST_CASE("substitution lemma for eta on the spec instance") {
  // M1 = \y:Type.f y --eta--> f; substituting g for f preserves the step
  TermPtr m1 = parse_term("\\y:Type.f y");
  TermPtr m2 = parse_term("f");
  LemmaVerdict v = check_subst_eta(m1, m2, parse_term("g"), "f");
  CHECK(v.cases_run == 1);
  CHECK(v.passed());

  // x not free in M1: substitution is the identity, step preserved
  v = check_subst_eta(m1, m2, parse_term("g"), "zz");
  CHECK(v.passed());
}

TEST_CASE("second substitution clause reduces in many steps") {
  // N1 = \y:Type.g y --eta--> g = N2, M = h x x grows two copies
  TermPtr m = parse_term("h x x");
  LemmaVerdict v = check_subst_eta_multi(m, parse_term("\\y:Type.g y"), parse_term("g"), "x");
  CHECK(v.cases_run == 1);
  CHECK(v.passed());
}

TEST_CASE("fv preservation under beta on the spec instance") {
  LemmaVerdict v = check_fv_beta(parse_term("(\\y:Type.y) z"), parse_term("z"), "x");
  CHECK(v.cases_run == 1);
  CHECK(v.passed());
  // premise violated: skipped
  v = check_fv_beta(parse_term("(\\y:Type.w) z"), parse_term("w"), "z");
  CHECK(v.cases_run == 0);
}

TEST_CASE("eta case analysis classifies the three shapes") {
  // shape 1: M1 = \y:K1.(\x:K2.M2) y
  TermPtr target = parse_term("\\x:El(b).f x x'");
  TermPtr m1 = mk_lam("y", mk_type(), mk_app(shift_term(target, 1, 0), mk_bound(0)));
  CHECK(check_eta_case(m1, target).passed());

  // shape 2: step inside the body
  TermPtr m1b = parse_term("\\x:El(b).(\\q:Type.f q) x'");
  TermPtr targetb = parse_term("\\x:El(b).f x'");
  LemmaVerdict v = check_eta_case(m1b, targetb);
  CHECK(v.cases_run == 1);
  CHECK(v.passed());

  // shape 3: step inside the annotation
  TermPtr m1c = parse_term("\\x:El(g (\\q:Type.f q)).c");
  TermPtr targetc = parse_term("\\x:El(g f).c");
  v = check_eta_case(m1c, targetc);
  CHECK(v.cases_run == 1);
  CHECK(v.passed());
}

TEST_CASE("a term reaching the target by root and body steps stays catalogued") {
  // both the root eta step and the body eta step reach the target; each
  // classifies into its own shape
  TermPtr m1 = parse_term("\\y:Type.(\\v:Type.f v) y");
  TermPtr target = parse_term("\\v:Type.f v");
  LemmaVerdict v = check_eta_case(m1, target);
  CHECK(v.cases_run == 1);
  CHECK(v.passed());
}

TEST_CASE("pi1 case analysis forbids the root shape") {
  const Signature& sig = builtin_sigma();
  auto consts = sig.const_names();
  // body shape
  TermPtr m1 = parse_term("\\x:Type.pi1 b f (pair b f c c)", consts);
  TermPtr target = parse_term("\\x:Type.c", consts);
  LemmaVerdict v = check_pi1_case(sig, "pi1", m1, target);
  CHECK(v.cases_run == 1);
  CHECK(v.passed());

  // a root pi1 step producing a lambda would violate the arity argument;
  // such an M1 has no correct arity, and the checker reports it
  TermPtr lam = parse_term("\\x:Type.c");
  TermPtr root = parse_term("pi1 b f (pair b f (\\x:Type.c) c)", consts);
  v = check_pi1_case(sig, "pi1", root, lam);
  CHECK(v.cases_run == 1);
  CHECK_FALSE(v.passed());
}

TEST_CASE("commutation for eta-beta on the spec instance") {
  // M1 = (\x:Type.(\y:Type.y) x) a --eta--> (\y:Type.y) a --beta--> a
  TermPtr m1 = parse_term("(\\x:Type.(\\y:Type.y) x) a");
  TermPtr m2 = parse_term("(\\y:Type.y) a");
  TermPtr m3 = parse_term("a");
  LemmaVerdict v = check_commutation(nullptr, RuleTag::eta(), m1, m2, m3);
  CHECK(v.cases_run == 1);
  CHECK(v.passed());
}

TEST_CASE("commutation for pi1-beta via a single beta step") {
  const Signature& sig = builtin_sigma();
  auto consts = sig.const_names();
  // M1 = f (pi1 b g (pair b g ((\z:Type.z) c) d)) with the beta inside the
  // matched component
  TermPtr m1 = parse_term("f (pi1 b g (pair b g ((\\z:Type.z) c) d))", consts);
  TermPtr m2 = parse_term("f ((\\z:Type.z) c)", consts);
  TermPtr m3 = parse_term("f c", consts);
  LemmaVerdict v = check_commutation(&sig, RuleTag::sig("pi1"), m1, m2, m3);
  CHECK(v.cases_run == 1);
  CHECK(v.passed());
}

TEST_CASE("a mutant projection rule breaks subject reduction for arities") {
  // pi1 returning its (0,0)-arity pattern variable is arity-breaking; the
  // validator rejects it, so inject it unchecked and watch the sweep notice
  const Signature& good = builtin_sigma();
  RewriteRule mutant = *good.find_rule("pi1");
  mutant.rhs = parse_term("B");
  CHECK_FALSE(validate_rule(good, mutant).ok());

  Signature bad = Signature::unchecked(good.consts(), {mutant});
  RuleSet rs = RuleSet::full(&bad);
  ArityContext ctx = parse_arity_context("f:(0,0), b:0, c:0");
  Expr subject = Expr(parse_term("pi1 b f (pair b f c c)", bad.const_names()));
  auto before = infer_arity(ctx, subject, &bad.const_arities());
  REQUIRE(before.ok());
  auto rx = redexes(subject, rs);
  REQUIRE_FALSE(rx.empty());
  auto stepped = step(subject, rx[0].first, rx[0].second, rs);
  REQUIRE(stepped.ok());
  auto after = infer_arity(ctx, *stepped, &bad.const_arities());
  REQUIRE(after.ok());
  CHECK_FALSE(*after == *before); // the counterexample the suite would report
}

TEST_CASE("interpretation membership: variables and correct-arity terms") {
  ArityContext ctx = parse_arity_context("x:0, f:(0,0), z:0");
  const Signature& sig = builtin_sigma();
  CHECK(bounded_interp_member(ctx, &sig, Expr(parse_term("x")), Arity::zero(), 4, 1).member);
  CHECK(bounded_interp_member(ctx, &sig, Expr(parse_term("\\x:El(z).x")),
                              Arity::pair(Arity::zero(), Arity::zero()), 8, 2)
            .member);
}

TEST_CASE("interpretation membership: omega is refused at any pair arity") {
  ArityContext ctx = parse_arity_context("z:0");
  TermPtr omega = parse_term("\\x:El(z).x x");
  // omega is normal, so it inhabits the Zero interpretation
  CHECK(bounded_interp_member(ctx, nullptr, Expr(omega), Arity::zero(), 4, 3).member);
  // but applying it to itself diverges, so every pair arity refuses it
  auto v = bounded_interp_member(ctx, nullptr, Expr(omega),
                                 Arity::pair(Arity::zero(), Arity::zero()), 4, 4);
  CHECK_FALSE(v.member);
  CHECK(v.detail.find("divergence") != std::string::npos);
}

TEST_CASE("enumeration counts the smallest layers exactly") {
  ArityContext ctx = parse_arity_context("f:(0,0), b:0, c:0");
  auto one = enumerate_correct(ctx, nullptr, 1, true);
  CHECK(one.size() == 4); // f, b, c, Type
  auto two = enumerate_correct(ctx, nullptr, 2, true);
  CHECK(two.size() == 6); // + El(b), El(c); applications start at size 3
  for (auto& item : two) {
    auto a = infer_arity(ctx, item.subject);
    REQUIRE(a.ok());
    CHECK(*a == item.arity);
  }
}

TEST_CASE("enumerated items are pairwise alpha-distinct") {
  ArityContext ctx = parse_arity_context("f:(0,0), b:0, c:0");
  auto items = enumerate_correct(ctx, &builtin_sigma(), 5, true);
  std::set<std::string> keys;
  for (auto& item : items) CHECK(keys.insert(alpha_key(item.subject)).second);
}

TEST_CASE("the small sweep is clean") {
  SweepConfig cfg;
  cfg.ctx = parse_arity_context("f:(0,0), b:0, c:0");
  cfg.sig = &builtin_sigma();
  cfg.max_size = 5;
  SweepReport rep = exhaustive_sweep(cfg);
  CHECK(rep.items > 100);
  CHECK(rep.sn_failures == 0);
  CHECK(rep.sr_failures == 0);
  CHECK(rep.uniqueness_failures == 0);
  CHECK(rep.nf_pairs.empty());
}

TEST_CASE("the suite runs clean at a small scale and is seed-deterministic") {
  SuiteConfig cfg;
  cfg.seed = 42;
  cfg.cases = 25;
  cfg.sweep_size = 4;
  cfg.bridge_corpus = 60;
  SuiteReport r1 = run_suite(cfg);
  CHECK(r1.total_failures() == 0);
  CHECK(r1.total_bound_exceeded() == 0);
  SuiteReport r2 = run_suite(cfg);
  CHECK(suite_json(r1) == suite_json(r2));
}
