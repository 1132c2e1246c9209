// signature.hpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include "mlf/arity.hpp"
#include "mlf/surface.hpp"

namespace mlf {

struct ConstDecl {
  std::string name;
  Arity arity;
  KindPtr kind; // optional MLF kind; when present, arity_translate(kind) == arity
};

// Constructor-headed computation rule. Pattern variables appear as free
// variables of lhs/rhs and are declared in pattern_ctx. Matching is
// left-linear: the first occurrence of a pattern variable binds, repeated
// occurrences (as in pi1(A,B,pair(A,B,a,b))) match anything.
struct RewriteRule {
  std::string name;
  ArityContext pattern_ctx;
  TermPtr lhs;
  TermPtr rhs;
  Arity result;
};

struct SignatureError {
  enum class Kind {
    ArityMismatch,
    NonLinearPattern,
    UndeclaredConstant,
    DuplicateConstant,
    DuplicateConstructor,
    BadPattern,
    KindArityMismatch,
    ConflictingDecl,
    UnknownBuiltin,
  };
  Kind kind;
  std::string message;
};

class Signature {
public:
  Signature() = default;

  static Result<Signature, SignatureError> make(std::vector<ConstDecl> consts,
                                                std::vector<RewriteRule> rules);
  // Skips rule validation; for injecting deliberately broken rules in tests.
  static Signature unchecked(std::vector<ConstDecl> consts, std::vector<RewriteRule> rules);

  const std::vector<ConstDecl>& consts() const { return consts_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }
  const ConstDecl* find_const(const std::string& name) const;
  const RewriteRule* find_rule(const std::string& name) const;

  const ConstArityMap& const_arities() const { return arities_; }
  std::set<std::string> const_names() const;

  // Identical re-declarations collapse; conflicting ones are an error.
  Result<Signature, SignatureError> merged(const Signature& other) const;

private:
  std::vector<ConstDecl> consts_;
  std::vector<RewriteRule> rules_;
  ConstArityMap arities_;
};

// Checks the rule against the signature's constants: constant-headed lhs,
// patterns of depth <= 2, both sides inferring to result under pattern_ctx.
// A pattern variable repeated in the lhs may not also occur in the rhs
// (its binding would be ambiguous): NonLinearPattern.
Result<RewriteRule, SignatureError> validate_rule(const Signature& sig, RewriteRule rule);

// T : Zero, c1..cn : Zero, eliminator E_T and one rule per constructor.
Result<Signature, SignatureError> finite_type(const std::string& name,
                                              const std::vector<std::string>& ctors);

// The paper's signatures: dependent pairs, booleans, the universe operator.
const Signature& builtin_sigma();
const Signature& builtin_bool();
const Signature& builtin_universe();

// "sigma", "bool", "universe", or a path to a signature file.
Result<Signature, SignatureError> builtin_signature(const std::string& name);

Result<Signature, SignatureError> load_signature(const SigFile& file, const Signature& base);

// First-order match of a rule's lhs against a term; on success returns the
// pattern-variable bindings of first occurrences.
std::optional<std::map<std::string, TermPtr>> match_rule(const RewriteRule& rule, const TermPtr& subject);

} // namespace mlf
