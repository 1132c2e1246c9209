// test_parallel.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.
//
// The OpenMP kernels must reproduce the serial reference bit for bit.

#include "doctest.h"

#include "mlf/proplab.hpp"
#include "mlf/surface.hpp"

using namespace mlf;

TEST_CASE("frontier-parallel exploration matches the serial reference") {
  const Signature& sig = builtin_sigma();
  RuleSet rs = RuleSet::full(&sig);
  auto consts = sig.const_names();
  std::vector<std::string> subjects = {
      "(\\x:Type.x) y",
      "\\x:El(a).f x",
      "(\\x:El(z).x x) (\\x:El(z).x x)",
      "pi1 A B (pair A B ((\\z:Type.z) c) b)",
      "(\\x:Type.f x x') ((\\y:Type.y) (pi2 A B (pair A B a b)))",
      "\\x:Type.(\\y:El(b).b) x",
  };
  for (auto& src : subjects) {
    Expr e = parse_expr(src, consts);
    SnReport serial = sn_explore_serial(e, rs, 5000);
    for (int workers : {2, 3, 8}) {
      SnReport parallel = sn_explore(e, rs, 5000, workers);
      CHECK_MESSAGE(sn_reports_equal(serial, parallel), src, " with ", workers, " workers");
    }
  }
}

TEST_CASE("parallel exploration respects the fuel cutoff deterministically") {
  Expr grower = Expr(parse_term("(\\x:El(z).f (x x)) (\\x:El(z).x (f x))"));
  for (std::size_t fuel : {std::size_t(1), std::size_t(7), std::size_t(40)}) {
    SnReport serial = sn_explore_serial(grower, RuleSet::beta_eta(), fuel);
    SnReport parallel = sn_explore(grower, RuleSet::beta_eta(), fuel, 4);
    CHECK(sn_reports_equal(serial, parallel));
  }
}

TEST_CASE("the exhaustive sweep is worker-count independent") {
  SweepConfig cfg;
  cfg.ctx = parse_arity_context("f:(0,0), b:0, c:0");
  cfg.sig = &builtin_sigma();
  cfg.max_size = 6;
  cfg.workers = 1;
  SweepReport serial = exhaustive_sweep(cfg);
  cfg.workers = 4;
  SweepReport parallel = exhaustive_sweep(cfg);
  CHECK(serial.items == parallel.items);
  CHECK(serial.sn_failures == parallel.sn_failures);
  CHECK(serial.sr_failures == parallel.sr_failures);
  CHECK(serial.uniqueness_failures == parallel.uniqueness_failures);
  CHECK(serial.longest_path == parallel.longest_path);
  CHECK(serial.longest_path_subject == parallel.longest_path_subject);
  REQUIRE(serial.nf_pairs.size() == parallel.nf_pairs.size());
  for (std::size_t i = 0; i < serial.nf_pairs.size(); ++i) {
    CHECK(serial.nf_pairs[i].subject == parallel.nf_pairs[i].subject);
    CHECK(serial.nf_pairs[i].normal_forms == parallel.nf_pairs[i].normal_forms);
  }
}

TEST_CASE("the suite report is byte-identical across worker counts") {
  SuiteConfig cfg;
  cfg.seed = 9;
  cfg.cases = 40;
  cfg.sweep_size = 4;
  cfg.bridge_corpus = 60;
  cfg.workers = 1;
  std::string one = suite_json(run_suite(cfg));
  cfg.workers = 2;
  std::string two = suite_json(run_suite(cfg));
  cfg.workers = 5;
  std::string five = suite_json(run_suite(cfg));
  CHECK(one == two);
  CHECK(two == five);
}
