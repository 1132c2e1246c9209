// test_typecheck.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#include "doctest.h"

#include "mlf/proplab.hpp"
#include "mlf/surface.hpp"
#include "mlf/typecheck.hpp"

using namespace mlf;

namespace {

TypeContext ctx_of(const MlfEnv& env, const std::string& src) {
  std::set<std::string> consts = env.sig ? env.sig->const_names() : std::set<std::string>{};
  auto gamma = TypeContext::make(parse_kind_context(src, consts), env);
  REQUIRE_MESSAGE(gamma.ok(), (gamma.ok() ? "" : gamma.error().reason));
  return *gamma;
}

} // namespace

TEST_CASE("kind formation") {
  MlfEnv env = MlfEnv::make(nullptr);
  TypeContext empty;
  CHECK(check_kind(env, empty, parse_kind("Type")).ok());

  TypeContext gamma = ctx_of(env, "A : Type ;");
  CHECK(check_kind(env, gamma, parse_kind("(x:El(A))Type")).ok());

  auto bad = check_kind(env, empty, parse_kind("((x:Type)Type) y"));
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error().kind == TypeError::Kind::NotMlfGrammar);

  auto ill = check_kind(env, empty, parse_kind("El(\\x:Type.x)"));
  REQUIRE_FALSE(ill.ok());
  CHECK(ill.error().kind == TypeError::Kind::IllFormedKind);
}

TEST_CASE("lambda typing gives the product kind") {
  MlfEnv env = MlfEnv::make(nullptr);
  TypeContext gamma = ctx_of(env, "A : Type ;");
  auto r = infer_type(env, gamma, parse_term("\\x:El(A).x"));
  REQUIRE(r.ok());
  CHECK(alpha_eq(r->kind, parse_kind("(x:El(A))El(A)")));
}

TEST_CASE("the remark's f b is not well-typed") {
  MlfEnv env = MlfEnv::make(nullptr);
  TypeContext gamma =
      ctx_of(env, "A:Type; B:Type; C:Type; f:(x:El(A))El(C); b:El(B);");
  auto r = infer_type(env, gamma, parse_term("f b"));
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().kind == TypeError::Kind::DomainMismatch);
  CHECK(r.error().pos == Position{1});
}

TEST_CASE("pair application types through the Sigma kind") {
  const Signature& sig = builtin_sigma();
  MlfEnv env = MlfEnv::make(&sig);
  TypeContext gamma = ctx_of(env, "A : Type ; B : (A)Type ; a : A ; b : B(a) ;");
  auto consts = sig.const_names();
  auto r = infer_type(env, gamma, parse_term("pair A B a b", consts));
  REQUIRE_MESSAGE(r.ok(), (r.ok() ? "" : r.error().reason));
  CHECK(alpha_eq(r->kind, parse_kind("El(Sigma A B)", consts)));

  auto p1 = infer_type(env, gamma, parse_term("pi1(A,B,pair(A,B,a,b))", consts));
  REQUIRE(p1.ok());
  CHECK(alpha_eq(p1->kind, parse_kind("El(A)", consts)));
}

TEST_CASE("conversion is decided by normalize and compare") {
  const Signature& sig = builtin_sigma();
  MlfEnv env = MlfEnv::make(&sig);
  auto consts = sig.const_names();
  CHECK(conv_kind(env, parse_kind("El((\\x:Type.x) A)"), parse_kind("El(A)")));
  CHECK(conv_kind(env, parse_kind("El(pi1 A B (pair A B a b))", consts),
                  parse_kind("El(a)", consts)));
  CHECK_FALSE(conv_kind(env, parse_kind("El(A)"), parse_kind("El(B)")));

  // without the computation rules the projection does not convert
  MlfEnv inert = MlfEnv::make(&sig, /*rules_active=*/false);
  inert.conv.sig = &sig;
  inert.conv.all_sig = false;
  CHECK_FALSE(conv_kind(inert, parse_kind("El(pi1 A B (pair A B a b))", consts),
                        parse_kind("El(a)", consts)));
}

TEST_CASE("conversion is an equivalence on sampled kinds") {
  const Signature& sig = builtin_sigma();
  MlfEnv env = MlfEnv::make(&sig);
  auto consts = sig.const_names();
  std::vector<KindPtr> ks = {
      parse_kind("El(A)"),
      parse_kind("El((\\x:Type.x) A)"),
      parse_kind("El(pi1 A B (pair A B A b))", consts),
      parse_kind("(x:Type)Type"),
      parse_kind("(x:Type)El((\\y:El(A).y) b)"),
      parse_kind("Type"),
  };
  for (auto& k : ks) CHECK(conv_kind(env, k, k));
  for (auto& k1 : ks)
    for (auto& k2 : ks) CHECK(conv_kind(env, k1, k2) == conv_kind(env, k2, k1));
  for (auto& k1 : ks)
    for (auto& k2 : ks)
      for (auto& k3 : ks)
        if (conv_kind(env, k1, k2) && conv_kind(env, k2, k3)) CHECK(conv_kind(env, k1, k3));
}

TEST_CASE("the 5.4 remark: f(y) needs the pi1 rule to type-check") {
  const Signature& sig = builtin_sigma();
  auto consts = sig.const_names();
  const char* gamma_src =
      "A : Type ; B : (A)Type ; C : Type ; a : A ; b : B(a) ;"
      "f : (x:B(a))C ; y : B(pi1(A,B,pair(A,B,a,b))) ;";

  MlfEnv with = MlfEnv::make(&sig);
  TypeContext g1 = ctx_of(with, gamma_src);
  auto accepted = infer_type(with, g1, parse_term("f y"));
  CHECK(accepted.ok());

  MlfEnv without = MlfEnv::make(&sig);
  without.conv.all_sig = false; // constants known, computation rules inert
  TypeContext g2 = ctx_of(without, gamma_src);
  auto rejected = infer_type(without, g2, parse_term("f y"));
  REQUIRE_FALSE(rejected.ok());
  CHECK(rejected.error().kind == TypeError::Kind::DomainMismatch);
}

TEST_CASE("well-typed terms have the translated arity") {
  const Signature& sig = builtin_sigma();
  MlfEnv env = MlfEnv::make(&sig);
  TypeContext gamma = ctx_of(env, "A : Type ;");
  auto j = theorem2_bridge(env, gamma, parse_term("\\x:El(A).x"));
  REQUIRE_MESSAGE(j.ok(), (j.ok() ? "" : j.error().reason));
  CHECK(j->arity == Arity::pair(Arity::zero(), Arity::zero()));

  // the Sigma constant's declared kind translates to its declared arity
  auto tr = arity_translate(sig.find_const("Sigma")->kind);
  REQUIRE(tr.ok());
  CHECK(*tr == sig.find_const("Sigma")->arity);
}

TEST_CASE("bridge over a small corpus raises no violations") {
  auto merged = builtin_sigma().merged(builtin_bool());
  auto sig = merged->merged(builtin_universe());
  REQUIRE(sig.ok());
  MlfEnv env = MlfEnv::make(&*sig);
  TypeContext gamma = bridge_base_context(env);
  auto corpus = welltyped_corpus(env, gamma, 120, 7);
  CHECK(corpus.size() >= 120);
  for (auto& t : corpus) {
    auto j = theorem2_bridge(env, gamma, t);
    bool no_violation = j.ok() || !j.error().violation;
    REQUIRE_MESSAGE(no_violation, print(t));
  }
}

TEST_CASE("builtin signature kinds are well-formed MLF") {
  for (const Signature* sig : {&builtin_sigma(), &builtin_bool(), &builtin_universe()}) {
    MlfEnv env = MlfEnv::make(sig);
    auto ok = check_signature_kinds(env);
    CHECK_MESSAGE(ok.ok(), (ok.ok() ? "" : ok.error().reason));
  }
}

TEST_CASE("type contexts validate their entries") {
  MlfEnv env = MlfEnv::make(nullptr);
  auto dup = TypeContext::make(parse_kind_context("A : Type ; A : Type ;"), env);
  REQUIRE_FALSE(dup.ok());
  CHECK(dup.error().kind == TypeError::Kind::InvalidContext);

  auto fwd = TypeContext::make(parse_kind_context("x : El(A) ;"), env);
  REQUIRE_FALSE(fwd.ok()); // A unbound in its prefix
}
