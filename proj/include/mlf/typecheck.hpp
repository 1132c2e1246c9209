// typecheck.hpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include "mlf/reduce.hpp"

namespace mlf {

struct TypeError {
  enum class Kind {
    InvalidContext,
    NotMlfGrammar,   // the extended-system KN form in a kind
    IllFormedKind,
    UnboundVariable,
    ConstWithoutKind,
    NotAProduct,
    DomainMismatch,
  };
  Kind kind;
  Position pos;
  std::string reason;
};

// The ambient MLF setup: a signature for constants and the conversion rules
// (beta, eta and the active computation rules; never beta2, since MLF kinds
// have no kind application).
struct MlfEnv {
  const Signature* sig = nullptr;
  RuleSet conv;

  static MlfEnv make(const Signature* sig, bool rules_active = true) {
    MlfEnv env;
    env.sig = sig;
    env.conv = RuleSet::full(sig);
    env.conv.beta2 = false;
    if (!rules_active) env.conv.sig = nullptr;
    return env;
  }
};

// Ordered variable -> kind assignment, validated on construction: distinct
// names, each kind well-formed in its prefix, no KApp anywhere. Kinds are
// stored beta-eta-normalized (w.r.t. the active rules).
class TypeContext {
public:
  static Result<TypeContext, TypeError> make(
      const std::vector<std::pair<std::string, KindPtr>>& entries, const MlfEnv& env);

  const std::vector<std::pair<std::string, KindPtr>>& entries() const { return entries_; }
  const KindPtr* lookup(const std::string& name) const;
  bool binds(const std::string& name) const { return lookup(name) != nullptr; }

  // Internal extension with an already-normalized kind (no re-validation).
  TypeContext extended(const std::string& name, const KindPtr& normal_kind) const;

private:
  std::vector<std::pair<std::string, KindPtr>> entries_;
};

struct TypingResult {
  TermPtr subject;
  KindPtr kind; // beta-eta-normal representative
};

// Gamma |- K kind. Rejects KApp syntactically.
Result<std::monostate, TypeError> check_kind(const MlfEnv& env, const TypeContext& gamma,
                                             const KindPtr& k);

// Gamma |- M : K with normalization-based conversion at applications.
Result<TypingResult, TypeError> infer_type(const MlfEnv& env, const TypeContext& gamma,
                                           const TermPtr& m);

// Declarative kind/term equality, decided by normalize-and-compare.
bool conv_kind(const MlfEnv& env, const KindPtr& k1, const KindPtr& k2);
bool conv_term(const MlfEnv& env, const TermPtr& t1, const TermPtr& t2);

KindPtr normalize_kind(const MlfEnv& env, const KindPtr& k);
TermPtr normalize_term(const MlfEnv& env, const TermPtr& t);

// ---------------------------------------------------------------------------
// Theorem-2 bridge: a well-typed term has the arity its kind translates to.

struct ArityJudgement {
  ArityContext context;
  Expr subject;
  Arity arity;
};

struct BridgeError {
  bool violation = false; // true: both pipelines ran and disagreed (a bug)
  std::string reason;
};

Result<ArityJudgement, BridgeError> theorem2_bridge(const MlfEnv& env, const TypeContext& gamma,
                                                    const TermPtr& m);

// Checks that every constant kind in the signature is well-formed MLF;
// used when loading signatures for type checking.
Result<std::monostate, TypeError> check_signature_kinds(const MlfEnv& env);

} // namespace mlf
