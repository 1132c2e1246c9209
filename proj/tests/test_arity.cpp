// test_arity.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#include "doctest.h"

#include "mlf/proplab.hpp"
#include "mlf/signature.hpp"
#include "mlf/surface.hpp"

using namespace mlf;

namespace {

Arity infer_ok(const std::string& ctx, const std::string& subject,
               const Signature* sig = nullptr) {
  std::set<std::string> names = sig ? sig->const_names() : std::set<std::string>{};
  auto r = infer_arity(parse_arity_context(ctx), parse_expr(subject, names),
                       sig ? &sig->const_arities() : nullptr);
  REQUIRE_MESSAGE(r.ok(), subject, ": ", (r.ok() ? "" : r.error().reason));
  return *r;
}

ArityError infer_err(const std::string& ctx, const std::string& subject) {
  auto r = infer_arity(parse_arity_context(ctx), parse_expr(subject));
  REQUIRE_FALSE(r.ok());
  return r.error();
}

} // namespace

TEST_CASE("context validity") {
  CHECK(ctx_valid(parse_arity_context("")));
  CHECK(ctx_valid(parse_arity_context("x:0, y:(0,0)")));
  ArityContext dup{{{"x", Arity::zero()}, {"x", Arity::zero()}}};
  CHECK_FALSE(ctx_valid(dup));
  CHECK_FALSE(infer_arity(dup, Expr(parse_term("x"))).ok());
}

TEST_CASE("the first remark example has arity Zero") {
  CHECK(infer_ok("A:0,B:0,C:0,f:(0,0),b:0", "f b").is_zero());
}

TEST_CASE("Type has arity Zero in any valid context") {
  CHECK(infer_ok("", "Type").is_zero());
}

TEST_CASE("the dependent remark example has arity Zero") {
  CHECK(infer_ok("A:0,B:(0,0),f:(0,(0,0)),x1:0,x2:0,b:0", "f x1 b").is_zero());
  CHECK(infer_ok("A:0,B:(0,0),f:(0,(0,0)),x1:0,x2:0,b:0", "f(x1,b)").is_zero());
}

TEST_CASE("self application never has an arity") {
  ArityError e = infer_err("z:0", "\\x:El(z).x x");
  CHECK(e.kind == ArityError::Kind::NotApplicable);
  CHECK_FALSE(infer_arity(parse_arity_context("z:0"),
                          Expr(parse_term("(\\x:El(z).x x) (\\x:El(z).x x)")))
                  .ok());
}

TEST_CASE("error positions point at the offender") {
  ArityError e = infer_err("", "x");
  CHECK(e.kind == ArityError::Kind::UnboundVariable);
  CHECK(e.pos.is_root());

  e = infer_err("b:0, f:(0,0)", "El(f)");
  CHECK(e.kind == ArityError::Kind::ElArgumentNotZero);
  CHECK(e.pos == Position{0});

  e = infer_err("b:0, f:(0,0)", "f q"); // unbound argument
  CHECK(e.kind == ArityError::Kind::UnboundVariable);
  CHECK(e.pos == Position{1});
}

TEST_CASE("argument arity mismatch") {
  ArityError e = infer_err("f:(0,0), g:(0,0)", "f g");
  CHECK(e.kind == ArityError::Kind::ArgumentMismatch);
}

TEST_CASE("lambdas and products pair up annotation and body arities") {
  CHECK(infer_ok("a:0", "\\x:El(a).x") == Arity::pair(Arity::zero(), Arity::zero()));
  CHECK(infer_ok("", "(x:Type)Type") == Arity::pair(Arity::zero(), Arity::zero()));
  CHECK(infer_ok("", "(x:(y:Type)Type)Type") ==
        Arity::pair(Arity::pair(Arity::zero(), Arity::zero()), Arity::zero()));
  // kind application consumes the left component
  CHECK(infer_ok("b:0", "((x:Type)Type) b").is_zero());
}

TEST_CASE("constants take their arity from the signature") {
  const Signature& sig = builtin_sigma();
  CHECK(infer_ok("A:0, b:0", "Sigma A", &sig) ==
        Arity::pair(Arity::pair(Arity::zero(), Arity::zero()), Arity::zero()));
  auto r = infer_arity(parse_arity_context(""), Expr(parse_term("nosuch", {"nosuch"})));
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().kind == ArityError::Kind::UndeclaredConstant);
}

TEST_CASE("derivation enumeration finds exactly one derivation for Type") {
  auto ds = enumerate_derivations(parse_arity_context(""), Expr(parse_kind("Type")), 5);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].rule == "type");
  CHECK(ds[0].arity.is_zero());
  REQUIRE(ds[0].premises.size() == 1);
  CHECK(ds[0].premises[0].rule == "empty-ctx");
}

TEST_CASE("derivation enumeration refutes self application") {
  auto ds = enumerate_derivations(parse_arity_context("x:0"), Expr(parse_term("x x")), 10);
  CHECK(ds.empty());
}

TEST_CASE("derivation enumeration agrees with inference on f b") {
  auto ds = enumerate_derivations(parse_arity_context("f:(0,0), b:0"), Expr(parse_term("f b")), 10);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].arity.is_zero());
  CHECK(derivable_arities(ds).size() == 1);
}

TEST_CASE("uniqueness holds on a generated corpus") {
  const Signature& sig = builtin_sigma();
  ArityContext ctx = parse_arity_context("f:(0,0), b:0, c:0");
  int ran = 0;
  for (std::uint64_t seed = 0; seed < 250; ++seed) {
    GenConfig cfg;
    cfg.ctx = ctx;
    cfg.seed = seed;
    cfg.size = 1 + seed % 7;
    cfg.sig = &sig;
    cfg.kinds_enabled = true;
    cfg.target = seed % 3 ? Arity::zero() : Arity::pair(Arity::zero(), Arity::zero());
    auto g = gen_term(cfg);
    if (!g) continue;
    auto ds = enumerate_derivations(ctx, g->subject, 64, &sig.const_arities());
    auto as = derivable_arities(ds);
    REQUIRE_MESSAGE(as.size() == 1, print(g->subject));
    CHECK(as.front() == g->arity);
    ++ran;
  }
  CHECK(ran > 150);
}

TEST_CASE("weakening: fresh bindings never change an inferred arity") {
  ArityContext ctx = parse_arity_context("f:(0,0), b:0");
  ArityContext wider = parse_arity_context("f:(0,0), b:0, extra1:(0,(0,0)), extra2:0");
  for (const char* src : {"f b", "\\x:El(b).f x", "(x:El(f b))Type", "f (f b)"}) {
    Expr e = parse_expr(src);
    auto a1 = infer_arity(ctx, e);
    auto a2 = infer_arity(wider, e);
    REQUIRE(a1.ok());
    REQUIRE(a2.ok());
    CHECK(*a1 == *a2);
  }
}

TEST_CASE("kinds translate to arities structurally") {
  CHECK(arity_translate(parse_kind("Type"))->is_zero());
  CHECK(arity_translate(parse_kind("El(M)"))->is_zero());
  std::set<std::string> sc{"Sigma"};
  CHECK(arity_translate(parse_kind("(A:Type)(B:(A)Type)Type", sc))->str() == "(0,((0,0),0))");
  auto bad = arity_translate(parse_kind("((x:Type)Type) y"));
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error().reason.find("MLF") != std::string::npos);
}

TEST_CASE("free-variable arities are reconstructible by unification") {
  const Signature& sig = builtin_sigma();
  Expr e = Expr(parse_term("pi1 A B (pair A B a b)", sig.const_names()));
  auto ctx = reconstruct_context(e, ArityContext{}, &sig.const_arities());
  REQUIRE(ctx.ok());
  CHECK(*ctx->lookup("A") == Arity::zero());
  CHECK(*ctx->lookup("B") == Arity::pair(Arity::zero(), Arity::zero()));
  // the reconstructed context satisfies strict inference
  auto a = infer_arity(*ctx, e, &sig.const_arities());
  REQUIRE(a.ok());
  CHECK(a->is_zero());

  // no context makes self application correct
  CHECK_FALSE(reconstruct_context(Expr(parse_term("x x")), ArityContext{}).ok());
}
