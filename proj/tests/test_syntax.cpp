// test_syntax.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#include "doctest.h"

#include "mlf/proplab.hpp"
#include "mlf/surface.hpp"

using namespace mlf;

namespace {

Expr T(const std::string& s) { return Expr(parse_term(s)); }
Expr K(const std::string& s) { return Expr(parse_kind(s)); }

} // namespace

TEST_CASE("substitution hits free variables") {
  CHECK(alpha_eq(subst(T("x"), "x", mk_free("y")), T("y")));
}

TEST_CASE("substitution respects shadowing binders") {
  CHECK(alpha_eq(subst(T("\\x:Type.x"), "x", mk_free("y")), T("\\x:Type.x")));
}

TEST_CASE("substitution descends into kind annotations") {
  CHECK(alpha_eq(subst(K("El(f x)"), "x", mk_free("y")), K("El(f y)")));
  CHECK(alpha_eq(subst(T("\\z:El(f x).z"), "x", mk_free("y")), T("\\z:El(f y).z")));
}

TEST_CASE("substitution is capture avoiding") {
  // [y/x](\y:Type.x) must not capture the substituted y
  TermPtr t = parse_term("\\y:Type.x");
  TermPtr s = subst(t, "x", mk_free("y"));
  CHECK(free_vars(Expr(s)) == std::set<std::string>{"y"});
  CHECK(alpha_eq(s, parse_term("\\q:Type.y")));
}

TEST_CASE("free variables") {
  CHECK(free_vars(T("\\x:El(a).x")) == std::set<std::string>{"a"});
  CHECK(free_vars(T("x y")) == std::set<std::string>{"x", "y"});
  CHECK(free_vars(K("Type")).empty());
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_eq(T("\\x:Type.x"), T("\\y:Type.y")));
  CHECK_FALSE(alpha_eq(T("\\x:El(a).x"), T("\\x:El(b).x")));
  CHECK_FALSE(alpha_eq(T("x"), T("y")));
}

TEST_CASE("positions address subterms and annotations") {
  Expr fa = T("f a");
  auto sub = subterm_at(fa, Position{1});
  REQUIRE(sub);
  CHECK(alpha_eq(*sub, T("a")));

  auto rep = replace_at(fa, Position{1}, T("b"));
  REQUIRE(rep);
  CHECK(alpha_eq(*rep, T("f b")));

  auto ann = subterm_at(T("\\x:El(a).x"), Position{0});
  REQUIRE(ann);
  CHECK(ann->is_kind());
  CHECK(alpha_eq(*ann, K("El(a)")));

  CHECK_FALSE(subterm_at(fa, Position{2}));
  CHECK_FALSE(subterm_at(fa, Position{0, 0}));
  // class mismatch: a term cannot fill an annotation slot
  CHECK_FALSE(replace_at(T("\\x:Type.x"), Position{0}, T("a")));
}

TEST_CASE("replace_at of the extracted subterm is the identity") {
  for (const char* src : {"f a", "\\x:El(a).f x", "(\\x:Type.x) (f y)", "\\x:(y:Type)El(b).x c"}) {
    Expr e = T(src);
    std::vector<Position> todo{Position{}};
    while (!todo.empty()) {
      Position p = todo.back();
      todo.pop_back();
      auto sub = subterm_at(e, p);
      if (!sub) continue;
      auto back = replace_at(e, p, *sub);
      REQUIRE(back);
      CHECK(alpha_eq(*back, e));
      todo.push_back(p.child(0));
      todo.push_back(p.child(1));
    }
  }
}

TEST_CASE("open and close are mutually inverse") {
  TermPtr body = parse_term("\\y:Type.f (x y)");
  TermPtr closed = close_term(body, "x");
  CHECK_FALSE(contains_free(Expr(closed), "x"));
  CHECK(alpha_eq(open_term(closed, mk_free("x")), body));
}

TEST_CASE("substitution composition law on generated terms") {
  ArityContext ctx = parse_arity_context("f:(0,0), x:0, y:0, b:0");
  int ran = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GenConfig cfg;
    cfg.ctx = ctx;
    cfg.seed = seed;
    cfg.size = 2 + seed % 8;
    cfg.target = seed % 2 ? Arity::zero() : Arity::pair(Arity::zero(), Arity::zero());
    auto g = gen_term(cfg);
    if (!g || !g->subject.is_term()) continue;
    TermPtr m = g->subject.term();
    TermPtr n = parse_term("f b");
    TermPtr np = parse_term("b"); // x not free in N'
    // [N'/y][N/x]M == [[N'/y]N/x][N'/y]M   (x != y, x not in FV(N'))
    TermPtr lhs = subst(subst(m, "x", n), "y", np);
    TermPtr rhs = subst(subst(m, "y", np), "x", subst(n, "y", np));
    CHECK(alpha_eq(lhs, rhs));
    ++ran;
  }
  CHECK(ran > 150);
}

TEST_CASE("substitution preserves the syntactic class") {
  CHECK(subst(K("El(x)"), "x", mk_free("y")).is_kind());
  CHECK(subst(T("x"), "x", mk_free("y")).is_term());
}

TEST_CASE("alpha_eq is an equivalence on a generated corpus") {
  ArityContext ctx = parse_arity_context("f:(0,0), b:0, c:0");
  std::vector<Expr> corpus;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GenConfig cfg;
    cfg.ctx = ctx;
    cfg.seed = seed;
    cfg.size = 1 + seed % 9;
    cfg.kinds_enabled = true;
    auto g = gen_term(cfg);
    if (g) corpus.push_back(g->subject);
  }
  REQUIRE(corpus.size() > 20);
  for (auto& a : corpus) CHECK(alpha_eq(a, a));
  for (auto& a : corpus)
    for (auto& b : corpus) CHECK(alpha_eq(a, b) == alpha_eq(b, a));
  for (auto& a : corpus)
    for (auto& b : corpus)
      for (auto& c : corpus)
        if (alpha_eq(a, b) && alpha_eq(b, c)) CHECK(alpha_eq(a, c));
}

TEST_CASE("node_count matches the grammar") {
  CHECK(node_count(T("x")) == 1);
  CHECK(node_count(T("f a")) == 3);
  CHECK(node_count(T("\\x:Type.x")) == 3);
  CHECK(node_count(K("El(f a)")) == 4);
  CHECK(node_count(T("\\x:Type.(\\y:El(b).b) x")) == 8);
}
