// bench_main.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.
//
// Compares the serial reference against the OpenMP kernels on the exhaustive
// sweep and on single large reduction graphs, checking that both produce the
// same reports.

#include <chrono>
#include <iostream>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "mlf/proplab.hpp"

using namespace mlf;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlf-bench: serial reference vs OpenMP kernels"};
  std::size_t sweep_size = 7;
  int workers = 0; // 0: all hardware threads
  app.add_option("--sweep-size", sweep_size, "sweep size bound");
  app.add_option("-j,--workers", workers, "parallel worker count (0 = hardware)");
  CLI11_PARSE(app, argc, argv);

#if defined(_OPENMP)
  if (workers <= 0) workers = omp_get_max_threads();
#else
  if (workers <= 0) workers = 1;
#endif

  auto merged = builtin_sigma().merged(builtin_bool());
  auto sig = merged->merged(builtin_universe());
  if (!sig) {
    std::cerr << "builtin signatures failed to merge\n";
    return 1;
  }

  SweepConfig cfg;
  cfg.ctx = parse_arity_context("f:(0,0), b:0, c:0");
  cfg.sig = &*sig;
  cfg.max_size = sweep_size;
  cfg.check_uniqueness = false;

  std::cout << "enumerating correct-arity terms up to size " << sweep_size << "...\n";
  auto t0 = std::chrono::steady_clock::now();
  auto items = enumerate_correct(cfg.ctx, cfg.sig, cfg.max_size, true);
  std::cout << "  " << items.size() << " items in " << seconds_since(t0) << "s\n";

  cfg.workers = 1;
  t0 = std::chrono::steady_clock::now();
  SweepReport serial = exhaustive_sweep(cfg);
  double serial_s = seconds_since(t0);
  std::cout << "sweep, serial reference: " << serial_s << "s (" << serial.items
            << " graphs, longest path " << serial.longest_path << ")\n";

  cfg.workers = workers;
  t0 = std::chrono::steady_clock::now();
  SweepReport parallel = exhaustive_sweep(cfg);
  double parallel_s = seconds_since(t0);
  std::cout << "sweep, OpenMP x" << workers << ":      " << parallel_s << "s\n";

  bool same = serial.items == parallel.items && serial.sn_failures == parallel.sn_failures &&
              serial.longest_path == parallel.longest_path &&
              serial.nf_pairs.size() == parallel.nf_pairs.size();
  std::cout << "reports identical: " << (same ? "yes" : "NO") << ", speedup "
            << (parallel_s > 0 ? serial_s / parallel_s : 0.0) << "x\n";

  // one big graph, frontier-parallel exploration
  RuleSet rs = RuleSet::full(cfg.sig);
  Expr big = Expr(parse_term(
      "\\x:(k:Type)Type.\\y:Type.pi1 (f b) f (pair (f c) f (pi2 b f (pair c f b (f (f b)))) "
      "((\\z:Type.f z) (pi1 b f (pair b f (f c) b))))",
      sig->const_names()));
  t0 = std::chrono::steady_clock::now();
  SnReport r1 = sn_explore_serial(big, rs, kDefaultSnFuel);
  double g_serial = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  SnReport r2 = sn_explore(big, rs, kDefaultSnFuel, workers);
  double g_par = seconds_since(t0);
  std::cout << "graph exploration (" << r1.nodes_discovered << " nodes): serial " << g_serial
            << "s, OpenMP x" << workers << " " << g_par << "s, identical "
            << (sn_reports_equal(r1, r2) ? "yes" : "NO") << "\n";

  return same && sn_reports_equal(r1, r2) ? 0 : 1;
}
