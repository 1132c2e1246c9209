// reduce.hpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include "mlf/signature.hpp"

namespace mlf {

struct RuleTag {
  enum class Kind { Beta, Beta2, Eta, Sig };
  Kind kind;
  std::string rule; // signature rule name, for Kind::Sig

  static RuleTag beta() { return {Kind::Beta, {}}; }
  static RuleTag beta2() { return {Kind::Beta2, {}}; }
  static RuleTag eta() { return {Kind::Eta, {}}; }
  static RuleTag sig(std::string name) { return {Kind::Sig, std::move(name)}; }

  std::string str() const;
  bool operator==(const RuleTag& o) const { return kind == o.kind && rule == o.rule; }
};

// Which reductions are enabled. The signature pointer must outlive the set.
struct RuleSet {
  bool beta = true;
  bool beta2 = true;
  bool eta = true;
  bool all_sig = true;            // every rule of `sig`
  std::set<std::string> sig_rules; // consulted when !all_sig
  const Signature* sig = nullptr;

  bool sig_enabled(const std::string& name) const {
    return sig && (all_sig || sig_rules.count(name));
  }
  static RuleSet full(const Signature* s) {
    RuleSet rs;
    rs.sig = s;
    return rs;
  }
  static RuleSet beta_eta() {
    RuleSet rs;
    rs.beta2 = false;
    return rs;
  }
};

// All enabled redex occurrences in preorder (leftmost-outermost first).
// At an application node beta is listed before signature rules; eta redexes
// sit at lambda nodes, so the orders never collide at one position.
std::vector<std::pair<Position, RuleTag>> redexes(const Expr& subject, const RuleSet& rs);

struct StepError {
  Position pos;
  std::string reason;
};

// One-step reduction of the redex (pos, tag); fails with NotARedex otherwise.
Result<Expr, StepError> step(const Expr& subject, const Position& pos, const RuleTag& tag,
                             const RuleSet& rs);

struct ReductionTrace {
  Expr start;
  struct Step {
    Position pos;
    RuleTag tag;
    Expr result;
  };
  std::vector<Step> steps;
  const Expr& final() const { return steps.empty() ? start : steps.back().result; }
};

enum class Strategy { LeftmostOutermost, LeftmostInnermost };

struct EngineError {
  enum class Kind { NoArity, FuelExhausted };
  Kind kind;
  std::string reason;
  ReductionTrace partial; // for FuelExhausted
};

inline constexpr std::size_t kDefaultNormalizeFuel = 10000;
inline constexpr std::size_t kDefaultSnFuel = 100000;

// Checks the subject has a correct arity under ctx first (the SN theorem then
// guarantees termination; running out of fuel signals an engine bug).
Result<ReductionTrace, EngineError> normalize(const ArityContext& ctx, const Expr& subject,
                                              const RuleSet& rs,
                                              Strategy strategy = Strategy::LeftmostOutermost,
                                              std::size_t fuel = kDefaultNormalizeFuel);

// Same loop without the arity precondition; used by conversion checking on
// already well-typed inputs and by diagnostics on deliberately bad ones.
Result<ReductionTrace, EngineError> normalize_unchecked(const Expr& subject, const RuleSet& rs,
                                                        Strategy strategy = Strategy::LeftmostOutermost,
                                                        std::size_t fuel = kDefaultNormalizeFuel);

// ---------------------------------------------------------------------------
// Exhaustive exploration of the alpha-quotiented reduction graph.

struct SnReport {
  std::size_t nodes_explored = 0;   // expanded nodes
  std::size_t nodes_discovered = 0; // distinct terms seen
  std::size_t longest_path = 0;     // edges from the start; exact iff verified
  std::size_t max_depth = 0;        // BFS depth reached
  std::vector<std::string> normal_forms; // printed, sorted, alpha-distinct
  bool fuel_exhausted = false;      // frontier still growing at the fuel bound
  bool cycle_found = false;         // reduction cycle: not normalising
  // Strong normalisation is verified iff neither flag is set: the graph is
  // then finite and every maximal path ends in a normal form.
  bool verified_sn() const { return !fuel_exhausted && !cycle_found; }
};

// Breadth-first, level-synchronous; expansion of a level runs on `workers`
// OpenMP threads, merges are serial, so the report is identical for any
// worker count. fuel bounds the number of expanded nodes.
SnReport sn_explore(const Expr& subject, const RuleSet& rs, std::size_t fuel = kDefaultSnFuel,
                    int workers = 1);

// Plain single-threaded reference of the same algorithm, kept for testing
// and benchmarking against the parallel path.
SnReport sn_explore_serial(const Expr& subject, const RuleSet& rs,
                           std::size_t fuel = kDefaultSnFuel);

bool sn_reports_equal(const SnReport& a, const SnReport& b);

// ---------------------------------------------------------------------------
// Trace serialization: "step <n>: <rule> at <position> => <printed term>".

std::string trace_text(const ReductionTrace& trace);
std::string trace_json(const ReductionTrace& trace);
std::string sn_json(const SnReport& report);

} // namespace mlf
