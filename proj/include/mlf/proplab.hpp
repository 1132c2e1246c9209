// proplab.hpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>

#include "mlf/typecheck.hpp"

namespace mlf {

// splitmix64: portable, deterministic across platforms and worker counts.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
  bool coin(unsigned percent) { return below(100) < percent; }
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  Rng r(a);
  r.state ^= 0x632be59bd9b4e019ull * (b + 1);
  r.next();
  r.state ^= 0x9e3779b97f4a7c15ull * (c + 1);
  r.next();
  return r.state;
}

// ---------------------------------------------------------------------------
// Valuations: total maps V -> terms (identity off the explicit entries);
// application is simultaneous substitution.

struct Valuation {
  std::map<std::string, TermPtr> map;
};

Expr apply_valuation(const Valuation& rho, const Expr& subject);

// ---------------------------------------------------------------------------
// Arity-directed generation with a replayable certificate.

struct GenConfig {
  std::size_t size = 8;
  std::uint64_t seed = 0;
  ArityContext ctx;
  Arity target;
  const Signature* sig = nullptr;
  bool kinds_enabled = false; // may produce kind subjects (incl. KApp)
  bool redex_bias = true;     // sprinkle beta/eta/rule redexes
};

struct GenResult {
  Expr subject;
  Arity arity;
};

// nullopt when unsatisfiable (e.g. empty context, target Zero, size 1).
// post: infer_arity(cfg.ctx, subject) == arity.
std::optional<GenResult> gen_term(const GenConfig& cfg);

// ---------------------------------------------------------------------------
// Executable lemma checkers. Each takes concrete inputs satisfying the
// lemma's premise and verifies its conclusion; cases_run == 0 means the
// premise did not hold and the case was skipped.

struct LemmaVerdict {
  std::string lemma;
  std::size_t cases_run = 0;
  bool bound_exceeded = false;
  std::optional<std::string> counterexample;
  bool passed() const { return !counterexample && !bound_exceeded; }
};

// If M1 ->eta M2 then [N/x]M1 ->eta [N/x]M2 (exactly one step).
LemmaVerdict check_subst_eta(const TermPtr& m1, const TermPtr& m2, const TermPtr& n,
                             const std::string& x);
// If N1 ->eta N2 then [N1/x]M -->>eta [N2/x]M (zero or more steps).
LemmaVerdict check_subst_eta_multi(const TermPtr& m, const TermPtr& n1, const TermPtr& n2,
                                   const std::string& x);
// The same two statements for a signature rule (pi1 in the paper).
LemmaVerdict check_subst_sig(const Signature& sig, const std::string& rule, const TermPtr& m1,
                             const TermPtr& m2, const TermPtr& n, const std::string& x);
LemmaVerdict check_subst_sig_multi(const Signature& sig, const std::string& rule, const TermPtr& m,
                                   const TermPtr& n1, const TermPtr& n2, const std::string& x);

// If M1 ->beta M2 and x not in FV(M1) then x not in FV(M2).
LemmaVerdict check_fv_beta(const TermPtr& m1, const TermPtr& m2, const std::string& x);

// If M1 ->eta \x:K2.M2, exactly one of the three shapes applies.
LemmaVerdict check_eta_case(const TermPtr& m1, const TermPtr& target);
// If M1 ->rule \x:K2.M2 (M1 of correct arity), exactly one of two shapes.
LemmaVerdict check_pi1_case(const Signature& sig, const std::string& rule, const TermPtr& m1,
                            const TermPtr& target);

// Commutation: M1 ->tag1 M2 ->beta M3. For eta the witness satisfies
// M1 -->>beta+ M2' -->>eta M3; for a signature rule, M1 ->beta M2' (one step)
// then M2' -->>rule M3.
LemmaVerdict check_commutation(const Signature* sig, const RuleTag& tag1, const TermPtr& m1,
                               const TermPtr& m2, const TermPtr& m3);

// Necessary-condition sampling of the arity-interpretation membership.
struct InterpVerdict {
  bool member;
  std::string detail;
};
InterpVerdict bounded_interp_member(const ArityContext& ctx, const Signature* sig, const Expr& m,
                                    const Arity& a, std::size_t budget, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Exhaustive small-scope enumeration and sweep.

struct EnumItem {
  Expr subject;
  Arity arity;
};

// Every correct-arity term (and kind) with node count <= max_size over
// ctx + the signature's constants; de Bruijn-canonical, deterministic order.
std::vector<EnumItem> enumerate_correct(const ArityContext& ctx, const Signature* sig,
                                        std::size_t max_size, bool include_kinds = true);

struct SweepFinding {
  std::string subject;
  std::vector<std::string> normal_forms;
};

struct SweepConfig {
  ArityContext ctx;
  const Signature* sig = nullptr;
  std::size_t max_size = 8;
  std::size_t fuel = kDefaultSnFuel;
  int workers = 1;
  bool include_kinds = true;
  bool check_uniqueness = true;
};

struct SweepReport {
  std::size_t items = 0;
  std::size_t sn_failures = 0;         // fuel exhausted or cycles: never expected
  std::size_t sr_failures = 0;         // one-step arity subject reduction
  std::size_t uniqueness_failures = 0; // derivation-enumeration oracle disagreement
  std::size_t longest_path = 0;
  std::string longest_path_subject;
  std::vector<SweepFinding> nf_pairs;  // multiple alpha-distinct normal forms (diagnostic)
  std::vector<std::string> failure_details;
};

SweepReport exhaustive_sweep(const SweepConfig& cfg);

// ---------------------------------------------------------------------------
// Well-typed corpus for the Theorem-2 bridge.

TypeContext bridge_base_context(const MlfEnv& env);
std::vector<TermPtr> welltyped_corpus(const MlfEnv& env, const TypeContext& gamma,
                                      std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// The suite: every checker above plus subject reduction, uniqueness, bridge
// and SN sweeps. Deterministic per seed and worker count.

struct SuiteConfig {
  std::uint64_t seed = 42;
  std::size_t cases = 1000;
  int workers = 1;
  std::size_t sweep_size = 6; // 0 disables the exhaustive sweep
  std::size_t bridge_corpus = 500;
};

struct LemmaReport {
  std::string lemma;
  std::size_t cases_run = 0;
  std::size_t skipped = 0;
  std::size_t bound_exceeded = 0;
  std::vector<std::string> failures;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::vector<LemmaReport> lemmas;
  bool sweep_ran = false;
  std::size_t sweep_items = 0, sweep_sn_failures = 0, sweep_sr_failures = 0,
              sweep_uniqueness_failures = 0, sweep_nf_pairs = 0, sweep_longest_path = 0;
  double elapsed_seconds = 0; // human output only; never serialized

  std::size_t total_failures() const;
  std::size_t total_bound_exceeded() const;
};

SuiteReport run_suite(const SuiteConfig& cfg);

std::string suite_json(const SuiteReport& rep);
std::string suite_text(const SuiteReport& rep);

} // namespace mlf
