// mlf_main.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.
//
// Commands: arity, check, normalize, trace, sn, props, translate.
// Exit codes: 0 success, 1 judgement failure, 2 parse/input error,
// 3 fuel or search-bound exhaustion.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"

#include "mlf/proplab.hpp"

using json = nlohmann::ordered_json;
using namespace mlf;

namespace {

constexpr int kOk = 0, kJudgement = 1, kParse = 2, kExhausted = 3;

// Positional inputs name either a file or an inline expression.
std::string read_input(const std::string& arg) {
  std::ifstream f(arg);
  if (!f) return arg;
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

struct Options {
  std::vector<std::string> sigs;
  std::string rules;
  std::string ctx;
  std::size_t fuel = 0;
  int workers = 1;
  bool json_out = false;
};

int fail_parse(const std::string& msg, bool json_out) {
  if (json_out)
    std::cout << json{{"error", {{"kind", "parse"}, {"message", msg}}}}.dump() << "\n";
  else
    std::cerr << "parse error: " << msg << "\n";
  return kParse;
}

Signature load_signatures(const std::vector<std::string>& specs) {
  Signature sig;
  for (auto& spec : specs) {
    // builtins answer to "sigma" and "sig:sigma"; anything else is a file
    std::string s = spec.rfind("sig:", 0) == 0 ? spec.substr(4) : spec;
    if (auto builtin = builtin_signature(s)) {
      auto merged = sig.merged(*builtin);
      if (!merged) throw std::runtime_error(merged.error().message);
      sig = std::move(*merged);
      continue;
    }
    if (spec.rfind("sig:", 0) == 0)
      throw std::runtime_error("unknown builtin signature '" + spec + "'");
    std::ifstream f(s);
    if (!f) throw std::runtime_error("no builtin or file named '" + s + "'");
    std::ostringstream os;
    os << f.rdbuf();
    SigFile file = parse_signature_file(os.str(), sig.const_names(), s);
    auto loaded = load_signature(file, sig);
    if (!loaded) throw std::runtime_error(loaded.error().message);
    sig = std::move(*loaded);
  }
  return sig;
}

RuleSet parse_ruleset(const std::string& spec, const Signature* sig, bool beta2_default) {
  RuleSet rs;
  rs.sig = sig;
  if (spec.empty()) {
    rs.beta2 = beta2_default;
    return rs;
  }
  rs.beta = rs.beta2 = rs.eta = false;
  rs.all_sig = false;
  rs.sig = sig;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "beta") rs.beta = true;
    else if (tok == "beta2") rs.beta2 = true;
    else if (tok == "eta") rs.eta = true;
    else if (tok == "sig:*" || tok == "sig") rs.all_sig = true;
    else if (tok.rfind("sig:", 0) == 0) rs.sig_rules.insert(tok.substr(4));
    else throw std::runtime_error("unknown rule '" + tok + "' (beta, beta2, eta, sig:<name>, sig:*)");
  }
  return rs;
}

json arity_error_json(const ArityError& e) {
  return {{"kind", "NoArity"}, {"position", e.pos.str()}, {"reason", e.reason}};
}

int cmd_arity(const std::string& ctx_arg, const std::string& term_arg, const Options& opt) {
  Signature sig = load_signatures(opt.sigs);
  ArityContext ctx;
  if (!ctx_arg.empty()) ctx = parse_arity_context(read_input(ctx_arg), ctx_arg);
  Expr subject = parse_expr(read_input(term_arg), sig.const_names(), term_arg);
  auto a = infer_arity(ctx, subject, &sig.const_arities());
  if (!a) {
    if (opt.json_out) std::cout << json{{"error", arity_error_json(a.error())}}.dump() << "\n";
    else std::cerr << "NoArity at " << a.error().pos.str() << ": " << a.error().reason << "\n";
    return kJudgement;
  }
  if (opt.json_out) std::cout << json{{"arity", a->str()}}.dump() << "\n";
  else std::cout << a->str() << "\n";
  return kOk;
}

int cmd_translate(const std::string& kind_arg, const Options& opt) {
  Signature sig = load_signatures(opt.sigs);
  KindPtr k = parse_kind(read_input(kind_arg), sig.const_names(), kind_arg);
  auto a = arity_translate(k);
  if (!a) {
    if (opt.json_out)
      std::cout << json{{"error",
                         {{"kind", "NotMlfGrammar"},
                          {"position", a.error().pos.str()},
                          {"reason", a.error().reason}}}}.dump()
                << "\n";
    else std::cerr << "not MLF at " << a.error().pos.str() << ": " << a.error().reason << "\n";
    return kJudgement;
  }
  if (opt.json_out) std::cout << json{{"arity", a->str()}}.dump() << "\n";
  else std::cout << a->str() << "\n";
  return kOk;
}

int cmd_check(const std::string& gamma_arg, const std::string& term_arg, const Options& opt) {
  Signature sig = load_signatures(opt.sigs);
  MlfEnv env = MlfEnv::make(&sig);
  env.conv = parse_ruleset(opt.rules, &sig, /*beta2_default=*/false);
  env.conv.beta2 = false; // MLF conversion never uses beta2

  if (auto ok = check_signature_kinds(env); !ok)
    return fail_parse("signature kind: " + ok.error().reason, opt.json_out);

  auto entries = parse_kind_context(read_input(gamma_arg), sig.const_names(), gamma_arg);
  auto gamma = TypeContext::make(entries, env);
  if (!gamma) {
    if (opt.json_out)
      std::cout << json{{"error", {{"kind", "TypeError"}, {"reason", gamma.error().reason}}}}.dump()
                << "\n";
    else std::cerr << "invalid context: " << gamma.error().reason << "\n";
    return kJudgement;
  }
  TermPtr term = parse_term(read_input(term_arg), sig.const_names(), term_arg);
  auto r = infer_type(env, *gamma, term);
  if (!r) {
    if (opt.json_out)
      std::cout << json{{"error",
                         {{"kind", "TypeError"},
                          {"position", r.error().pos.str()},
                          {"reason", r.error().reason}}}}.dump()
                << "\n";
    else
      std::cerr << "TypeError at " << r.error().pos.str() << ": " << r.error().reason << "\n";
    return kJudgement;
  }
  if (opt.json_out) std::cout << json{{"kind", print(r->kind)}}.dump() << "\n";
  else std::cout << print(r->kind) << "\n";
  return kOk;
}

// Context for reduction commands: --ctx when given, otherwise arities of free
// variables are reconstructed by unification.
Result<ArityContext, ArityError> ambient_context(const Expr& subject, const Options& opt,
                                                 const Signature& sig) {
  ArityContext given;
  if (!opt.ctx.empty()) given = parse_arity_context(read_input(opt.ctx), opt.ctx);
  if (!opt.ctx.empty()) return given;
  return reconstruct_context(subject, given, &sig.const_arities());
}

int cmd_normalize(const std::string& term_arg, const Options& opt, bool trace_out,
                  const std::string& strategy) {
  Signature sig = load_signatures(opt.sigs);
  RuleSet rs = parse_ruleset(opt.rules, &sig, /*beta2_default=*/true);
  Expr subject = parse_expr(read_input(term_arg), sig.const_names(), term_arg);

  auto ctx = ambient_context(subject, opt, sig);
  if (!ctx) {
    if (opt.json_out) std::cout << json{{"error", arity_error_json(ctx.error())}}.dump() << "\n";
    else std::cerr << "NoArity at " << ctx.error().pos.str() << ": " << ctx.error().reason << "\n";
    return kJudgement;
  }

  Strategy strat = strategy == "innermost" ? Strategy::LeftmostInnermost
                                           : Strategy::LeftmostOutermost;
  std::size_t fuel = opt.fuel ? opt.fuel : kDefaultNormalizeFuel;
  auto r = normalize(*ctx, subject, rs, strat, fuel);
  if (!r) {
    if (r.error().kind == EngineError::Kind::NoArity) {
      if (opt.json_out)
        std::cout << json{{"error", {{"kind", "NoArity"}, {"reason", r.error().reason}}}}.dump()
                  << "\n";
      else std::cerr << "NoArity: " << r.error().reason << "\n";
      return kJudgement;
    }
    if (opt.json_out)
      std::cout << json{{"error", {{"kind", "FuelExhausted"}, {"reason", r.error().reason}}}}.dump()
                << "\n";
    else std::cerr << "fuel exhausted: " << r.error().reason << "\n";
    return kExhausted;
  }
  if (opt.json_out) {
    std::cout << trace_json(*r) << "\n";
  } else if (trace_out) {
    std::cout << trace_text(*r);
  } else {
    std::cout << print(r->final()) << "\n";
  }
  return kOk;
}

int cmd_sn(const std::string& term_arg, const Options& opt) {
  Signature sig = load_signatures(opt.sigs);
  RuleSet rs = parse_ruleset(opt.rules, &sig, /*beta2_default=*/true);
  Expr subject = parse_expr(read_input(term_arg), sig.const_names(), term_arg);
  std::size_t fuel = opt.fuel ? opt.fuel : kDefaultSnFuel;
  SnReport rep = sn_explore(subject, rs, fuel, opt.workers);
  if (opt.json_out) {
    std::cout << sn_json(rep) << "\n";
  } else {
    std::cout << "nodes explored: " << rep.nodes_explored << " (discovered "
              << rep.nodes_discovered << ")\n"
              << "longest path:   " << rep.longest_path << "\n"
              << "normal forms:   " << rep.normal_forms.size() << "\n";
    for (auto& nf : rep.normal_forms) std::cout << "  " << nf << "\n";
    if (rep.cycle_found) std::cout << "reduction cycle found: not normalising\n";
    if (rep.fuel_exhausted && !rep.cycle_found)
      std::cout << "fuel exhausted: frontier still growing\n";
    if (rep.verified_sn()) std::cout << "strongly normalising (exhaustive)\n";
  }
  return rep.verified_sn() ? kOk : kExhausted;
}

int cmd_props(std::uint64_t seed, std::size_t cases, std::size_t sweep_size,
              std::size_t bridge_corpus, const Options& opt) {
  SuiteConfig cfg;
  cfg.seed = seed;
  cfg.cases = cases;
  cfg.workers = opt.workers;
  cfg.sweep_size = sweep_size;
  cfg.bridge_corpus = bridge_corpus;
  SuiteReport rep = run_suite(cfg);
  if (opt.json_out) std::cout << suite_json(rep) << "\n";
  else std::cout << suite_text(rep);
  if (rep.total_failures() > 0) return kJudgement;
  if (rep.total_bound_exceeded() > 0) return kExhausted;
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlf: arities, reduction and MLF type checking"};
  app.require_subcommand(1);

  Options opt;
  std::string ctx_arg, gamma_arg, term_arg, kind_arg, strategy = "outermost";
  std::uint64_t seed = 42;
  std::size_t cases = 1000, sweep_size = 6, bridge_corpus = 500;

  auto add_common = [&](CLI::App* cmd, bool with_rules = true) {
    cmd->add_option("--sig", opt.sigs, "signatures: sigma, bool, universe, or a file path");
    if (with_rules)
      cmd->add_option("--rules", opt.rules, "comma list of beta, beta2, eta, sig:<name>, sig:*");
    cmd->add_flag("--json", opt.json_out, "machine-readable output");
  };

  CLI::App* arity = app.add_subcommand("arity", "infer the arity of a term or kind");
  arity->add_option("ctx", ctx_arg, "context: entries 'x : arity' (file or inline)");
  arity->add_option("term", term_arg, "term or kind (file or inline)")->required();
  add_common(arity, false);

  CLI::App* check = app.add_subcommand("check", "MLF type checking");
  check->add_option("ctx", gamma_arg, "context: 'assume x : kind ;' entries (file or inline)");
  check->add_option("term", term_arg, "term (file or inline)")->required();
  add_common(check);

  CLI::App* normalize = app.add_subcommand("normalize", "reduce to normal form");
  normalize->add_option("term", term_arg, "term or kind (file or inline)")->required();
  normalize->add_option("--ctx", opt.ctx, "arity context (file or inline)");
  normalize->add_option("--fuel", opt.fuel, "step limit");
  normalize->add_option("--strategy", strategy, "outermost (default) or innermost");
  add_common(normalize);

  CLI::App* trace = app.add_subcommand("trace", "reduce and print every step");
  trace->add_option("term", term_arg, "term or kind (file or inline)")->required();
  trace->add_option("--ctx", opt.ctx, "arity context (file or inline)");
  trace->add_option("--fuel", opt.fuel, "step limit");
  trace->add_option("--strategy", strategy, "outermost (default) or innermost");
  add_common(trace);

  CLI::App* sn = app.add_subcommand("sn", "explore the whole reduction graph");
  sn->add_option("term", term_arg, "term or kind (file or inline)")->required();
  sn->add_option("--fuel", opt.fuel, "node expansion limit");
  sn->add_option("-j,--workers", opt.workers, "worker threads for frontier expansion");
  add_common(sn);

  CLI::App* props = app.add_subcommand("props", "run the property suite");
  props->add_option("--seed", seed, "RNG seed");
  props->add_option("--cases", cases, "cases per lemma");
  props->add_option("--sweep-size", sweep_size, "exhaustive sweep size bound (0 disables)");
  props->add_option("--bridge-corpus", bridge_corpus, "well-typed corpus size");
  props->add_option("-j,--workers", opt.workers, "worker threads");
  props->add_flag("--json", opt.json_out, "machine-readable output");

  CLI::App* translate = app.add_subcommand("translate", "translate a kind to its arity");
  translate->add_option("kind", kind_arg, "kind (file or inline)")->required();
  add_common(translate, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(arity)) return cmd_arity(ctx_arg, term_arg, opt);
    if (app.got_subcommand(check)) return cmd_check(gamma_arg, term_arg, opt);
    if (app.got_subcommand(normalize)) return cmd_normalize(term_arg, opt, false, strategy);
    if (app.got_subcommand(trace)) return cmd_normalize(term_arg, opt, true, strategy);
    if (app.got_subcommand(sn)) return cmd_sn(term_arg, opt);
    if (app.got_subcommand(props)) return cmd_props(seed, cases, sweep_size, bridge_corpus, opt);
    if (app.got_subcommand(translate)) return cmd_translate(kind_arg, opt);
  } catch (const ParseError& e) {
    return fail_parse(e.what(), opt.json_out);
  } catch (const std::exception& e) {
    return fail_parse(e.what(), opt.json_out);
  }
  return kParse;
}
