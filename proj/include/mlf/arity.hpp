// arity.hpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include "mlf/result.hpp"
#include "mlf/syntax.hpp"

namespace mlf {

// Constants extend the variable rule: they are looked up here instead of in
// the context. Populated from the active signature.
using ConstArityMap = std::map<std::string, Arity>;

struct ArityError {
  enum class Kind {
    InvalidContext,
    UnboundVariable,
    UndeclaredConstant,
    NotApplicable,     // function position has arity Zero
    ArgumentMismatch,  // argument arity differs from the expected left component
    ElArgumentNotZero,
  };
  Kind kind;
  Position pos;
  std::string reason;
};

bool ctx_valid(const ArityContext& ctx);

// Syntax-directed inference of the unique arity, one rule per node.
// Fails iff no arity judgement is derivable.
Result<Arity, ArityError> infer_arity(const ArityContext& ctx, const Expr& subject,
                                      const ConstArityMap* consts = nullptr);

// ---------------------------------------------------------------------------
// Exhaustive enumeration of arity derivations: the independent oracle for the
// uniqueness claim. Tries every rule whose conclusion form fits, including
// the context-validity rules appearing as premises.

struct Derivation {
  std::string rule; // "empty-ctx", "ctx-extend", "type", "el", "pi", "kapp", "var", "const", "lam", "app"
  ArityContext context;
  bool is_validity = false; // conclusion "context valid" (subject/arity unused)
  Expr subject;
  Arity arity;
  std::vector<Derivation> premises;
};

std::vector<Derivation> enumerate_derivations(const ArityContext& ctx, const Expr& subject,
                                              int depth_bound,
                                              const ConstArityMap* consts = nullptr);

// Distinct conclusion arities among the given derivations.
std::vector<Arity> derivable_arities(const std::vector<Derivation>& ds);

// ---------------------------------------------------------------------------
// Translation from kinds to arities (rejects the extended-system KN form).

struct TranslateError {
  Position pos;
  std::string reason;
};

Result<Arity, TranslateError> arity_translate(const KindPtr& kind);
Result<ArityContext, TranslateError> arity_translate_ctx(
    const std::vector<std::pair<std::string, KindPtr>>& gamma);

// ---------------------------------------------------------------------------
// Free-variable arity reconstruction: assigns arities to unbound variables by
// first-order unification over arity trees, so open terms like
// "pi1 A B (pair A B a b)" can be checked without an explicit context.
// Variables left unconstrained default to Zero. This is a front-end
// convenience; Fig. 1 inference itself stays strict.
Result<ArityContext, ArityError> reconstruct_context(const Expr& subject,
                                                     const ArityContext& given,
                                                     const ConstArityMap* consts = nullptr);

} // namespace mlf
