// reduce.cpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#include "mlf/reduce.hpp"

#include <algorithm>
#include <unordered_map>

#include "mlf/surface.hpp"
#include "nlohmann/json.hpp"

namespace mlf {

using json = nlohmann::ordered_json;

std::string RuleTag::str() const {
  switch (kind) {
    case Kind::Beta: return "beta";
    case Kind::Beta2: return "beta2";
    case Kind::Eta: return "eta";
    case Kind::Sig: return "sig:" + rule;
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

// eta redex body shape: App(F, Bound(0)) with Bound(0) not free in F
const TermPtr* eta_fun(const Term::Lam& lam) {
  if (auto* app = std::get_if<Term::App>(&lam.body->node)) {
    if (auto* b = std::get_if<Term::Bound>(&app->arg->node)) {
      if (b->index == 0 && !uses_bound(app->fun, 0)) return &app->fun;
    }
  }
  return nullptr;
}

const std::string* spine_head_const(const TermPtr& t) {
  const Term* cur = t.get();
  while (auto* a = std::get_if<Term::App>(&cur->node)) cur = a->fun.get();
  if (auto* c = std::get_if<Term::Const>(&cur->node)) return &c->name;
  return nullptr;
}

struct Scanner {
  const RuleSet& rs;
  std::vector<std::pair<Position, RuleTag>> out;

  void term(const TermPtr& t, const Position& pos) {
    if (auto* l = std::get_if<Term::Lam>(&t->node)) {
      if (rs.eta && eta_fun(*l)) out.emplace_back(pos, RuleTag::eta());
      kind(l->ann, pos.child(0));
      term(l->body, pos.child(1));
      return;
    }
    if (auto* a = std::get_if<Term::App>(&t->node)) {
      if (rs.beta && std::holds_alternative<Term::Lam>(a->fun->node))
        out.emplace_back(pos, RuleTag::beta());
      if (rs.sig) {
        if (const std::string* head = spine_head_const(t)) {
          for (auto& rule : rs.sig->rules()) {
            if (!rs.sig_enabled(rule.name)) continue;
            if (const std::string* rh = spine_head_const(rule.lhs); !rh || *rh != *head) continue;
            if (match_rule(rule, t)) out.emplace_back(pos, RuleTag::sig(rule.name));
          }
        }
      }
      term(a->fun, pos.child(0));
      term(a->arg, pos.child(1));
      return;
    }
  }

  void kind(const KindPtr& k, const Position& pos) {
    if (auto* e = std::get_if<Kind::El>(&k->node)) {
      term(e->body, pos.child(0));
      return;
    }
    if (auto* p = std::get_if<Kind::Pi>(&k->node)) {
      kind(p->dom, pos.child(0));
      kind(p->cod, pos.child(1));
      return;
    }
    if (auto* a = std::get_if<Kind::KApp>(&k->node)) {
      if (rs.beta2 && std::holds_alternative<Kind::Pi>(a->fun->node))
        out.emplace_back(pos, RuleTag::beta2());
      kind(a->fun, pos.child(0));
      term(a->arg, pos.child(1));
      return;
    }
  }
};

std::optional<Expr> contract(const Expr& node, const RuleTag& tag, const RuleSet& rs) {
  switch (tag.kind) {
    case RuleTag::Kind::Beta: {
      if (!node.is_term()) return std::nullopt;
      auto* a = std::get_if<Term::App>(&node.term()->node);
      if (!a) return std::nullopt;
      auto* l = std::get_if<Term::Lam>(&a->fun->node);
      if (!l) return std::nullopt;
      return Expr(open_term(l->body, a->arg));
    }
    case RuleTag::Kind::Beta2: {
      if (!node.is_kind()) return std::nullopt;
      auto* a = std::get_if<Kind::KApp>(&node.kind()->node);
      if (!a) return std::nullopt;
      auto* p = std::get_if<Kind::Pi>(&a->fun->node);
      if (!p) return std::nullopt;
      return Expr(open_kind(p->cod, a->arg));
    }
    case RuleTag::Kind::Eta: {
      if (!node.is_term()) return std::nullopt;
      auto* l = std::get_if<Term::Lam>(&node.term()->node);
      if (!l) return std::nullopt;
      const TermPtr* f = eta_fun(*l);
      if (!f) return std::nullopt;
      return Expr(shift_term(*f, -1, 0));
    }
    case RuleTag::Kind::Sig: {
      if (!node.is_term() || !rs.sig || !rs.sig_enabled(tag.rule)) return std::nullopt;
      const RewriteRule* rule = rs.sig->find_rule(tag.rule);
      if (!rule) return std::nullopt;
      auto bind = match_rule(*rule, node.term());
      if (!bind) return std::nullopt;
      return subst_parallel(Expr(rule->rhs), *bind);
    }
  }
  return std::nullopt;
}

} // namespace

std::vector<std::pair<Position, RuleTag>> redexes(const Expr& subject, const RuleSet& rs) {
  Scanner sc{rs, {}};
  if (subject.is_term()) sc.term(subject.term(), Position{});
  else sc.kind(subject.kind(), Position{});
  return sc.out;
}

Result<Expr, StepError> step(const Expr& subject, const Position& pos, const RuleTag& tag,
                             const RuleSet& rs) {
  auto node = subterm_at(subject, pos);
  if (!node) return StepError{pos, "invalid position"};
  auto contractum = contract(*node, tag, rs);
  if (!contractum) return StepError{pos, "not a " + tag.str() + " redex"};
  auto out = replace_at(subject, pos, *contractum);
  if (!out) return StepError{pos, "replacement failed"};
  return *out;
}

// ---------------------------------------------------------------------------

namespace {

// Leftmost-innermost: first redex (in preorder) with no redex strictly below.
std::size_t pick_redex(const std::vector<std::pair<Position, RuleTag>>& rx, Strategy strategy) {
  if (strategy == Strategy::LeftmostOutermost) return 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const auto& p = rx[i].first.path;
    bool has_inner = false;
    for (std::size_t j = 0; j < rx.size() && !has_inner; ++j) {
      if (j == i) continue;
      const auto& q = rx[j].first.path;
      if (q.size() > p.size() && std::equal(p.begin(), p.end(), q.begin())) has_inner = true;
    }
    if (!has_inner) return i;
  }
  return 0;
}

Result<ReductionTrace, EngineError> run_normalize(const Expr& subject, const RuleSet& rs,
                                                  Strategy strategy, std::size_t fuel) {
  ReductionTrace trace;
  trace.start = subject;
  Expr cur = subject;
  for (std::size_t n = 0; ; ++n) {
    auto rx = redexes(cur, rs);
    if (rx.empty()) return trace;
    if (n >= fuel)
      return EngineError{EngineError::Kind::FuelExhausted,
                         "no normal form within " + std::to_string(fuel) + " steps",
                         std::move(trace)};
    auto& [pos, tag] = rx[pick_redex(rx, strategy)];
    auto next = step(cur, pos, tag, rs);
    if (!next)
      return EngineError{EngineError::Kind::FuelExhausted, "internal: enumerated redex failed to step",
                         std::move(trace)};
    cur = *next;
    trace.steps.push_back({pos, tag, cur});
  }
}

} // namespace

Result<ReductionTrace, EngineError> normalize(const ArityContext& ctx, const Expr& subject,
                                              const RuleSet& rs, Strategy strategy,
                                              std::size_t fuel) {
  const ConstArityMap* consts = rs.sig ? &rs.sig->const_arities() : nullptr;
  if (auto a = infer_arity(ctx, subject, consts); !a)
    return EngineError{EngineError::Kind::NoArity,
                       "no correct arity at " + a.error().pos.str() + ": " + a.error().reason,
                       {}};
  return run_normalize(subject, rs, strategy, fuel);
}

Result<ReductionTrace, EngineError> normalize_unchecked(const Expr& subject, const RuleSet& rs,
                                                        Strategy strategy, std::size_t fuel) {
  return run_normalize(subject, rs, strategy, fuel);
}

// ---------------------------------------------------------------------------
// Reduction-graph exploration.

namespace {

struct GraphNode {
  Expr expr;
  std::vector<std::size_t> succs;
  bool expanded = false;
};

struct Graph {
  std::vector<GraphNode> nodes;
  std::unordered_map<std::string, std::size_t> index;

  std::size_t add(const Expr& e, const std::string& key) {
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    nodes.push_back({e, {}, false});
    index.emplace(key, nodes.size() - 1);
    return nodes.size() - 1;
  }
};

std::vector<Expr> successors(const Expr& e, const RuleSet& rs) {
  std::vector<Expr> out;
  for (auto& [pos, tag] : redexes(e, rs)) {
    auto next = step(e, pos, tag, rs);
    if (next) out.push_back(*next);
  }
  return out;
}

SnReport finish_report(Graph& g, std::size_t expanded, std::size_t depth, bool exhausted) {
  SnReport rep;
  rep.nodes_explored = expanded;
  rep.nodes_discovered = g.nodes.size();
  rep.max_depth = depth;
  rep.fuel_exhausted = exhausted;

  for (auto& n : g.nodes)
    if (n.expanded && n.succs.empty()) rep.normal_forms.push_back(print(n.expr));
  std::sort(rep.normal_forms.begin(), rep.normal_forms.end());
  rep.normal_forms.erase(std::unique(rep.normal_forms.begin(), rep.normal_forms.end()),
                         rep.normal_forms.end());

  if (!exhausted) {
    // Kahn's algorithm: a leftover node means a reduction cycle.
    std::vector<std::size_t> indeg(g.nodes.size(), 0);
    for (auto& n : g.nodes)
      for (std::size_t s : n.succs) indeg[s]++;
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      if (indeg[i] == 0) queue.push_back(i);
    std::vector<std::size_t> topo;
    while (!queue.empty()) {
      std::size_t v = queue.back();
      queue.pop_back();
      topo.push_back(v);
      for (std::size_t s : g.nodes[v].succs)
        if (--indeg[s] == 0) queue.push_back(s);
    }
    if (topo.size() != g.nodes.size()) {
      rep.cycle_found = true;
      rep.fuel_exhausted = true;
      rep.longest_path = depth;
    } else {
      std::vector<std::size_t> dist(g.nodes.size(), 0);
      for (std::size_t v : topo)
        for (std::size_t s : g.nodes[v].succs)
          dist[s] = std::max(dist[s], dist[v] + 1);
      rep.longest_path = *std::max_element(dist.begin(), dist.end());
    }
  } else {
    rep.longest_path = depth;
  }
  return rep;
}

template <class ExpandLevel>
SnReport explore_impl(const Expr& subject, std::size_t fuel, ExpandLevel&& expand_level) {
  Graph g;
  g.add(subject, alpha_key(subject));
  std::vector<std::size_t> level{0};
  std::size_t expanded = 0, depth = 0;
  bool exhausted = false;

  while (!level.empty()) {
    std::size_t budget = fuel > expanded ? fuel - expanded : 0;
    if (budget == 0) {
      exhausted = true;
      break;
    }
    std::size_t take = std::min<std::size_t>(level.size(), budget);
    if (take < level.size()) exhausted = true;

    std::vector<std::vector<Expr>> succ(take);
    expand_level(g, level, take, succ);

    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < take; ++i) {
      std::vector<std::size_t> ids;
      for (auto& s : succ[i]) {
        std::string key = alpha_key(s);
        bool fresh = g.index.find(key) == g.index.end();
        std::size_t id = g.add(s, key); // may reallocate g.nodes
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
        if (fresh) next.push_back(id);
      }
      GraphNode& node = g.nodes[level[i]];
      node.expanded = true;
      node.succs = std::move(ids);
    }
    expanded += take;
    if (exhausted) break;
    if (!next.empty()) ++depth;
    level = std::move(next);
  }
  return finish_report(g, expanded, depth, exhausted);
}

} // namespace

SnReport sn_explore_serial(const Expr& subject, const RuleSet& rs, std::size_t fuel) {
  return explore_impl(subject, fuel,
                      [&](Graph& g, const std::vector<std::size_t>& level, std::size_t take,
                          std::vector<std::vector<Expr>>& succ) {
                        for (std::size_t i = 0; i < take; ++i)
                          succ[i] = successors(g.nodes[level[i]].expr, rs);
                      });
}

SnReport sn_explore(const Expr& subject, const RuleSet& rs, std::size_t fuel, int workers) {
  if (workers <= 1) return sn_explore_serial(subject, rs, fuel);
  return explore_impl(subject, fuel,
                      [&](Graph& g, const std::vector<std::size_t>& level, std::size_t take,
                          std::vector<std::vector<Expr>>& succ) {
#pragma omp parallel for num_threads(workers) schedule(dynamic, 16)
                        for (long i = 0; i < long(take); ++i)
                          succ[std::size_t(i)] = successors(g.nodes[level[std::size_t(i)]].expr, rs);
                      });
}

bool sn_reports_equal(const SnReport& a, const SnReport& b) {
  return a.nodes_explored == b.nodes_explored && a.nodes_discovered == b.nodes_discovered &&
         a.longest_path == b.longest_path && a.max_depth == b.max_depth &&
         a.normal_forms == b.normal_forms && a.fuel_exhausted == b.fuel_exhausted &&
         a.cycle_found == b.cycle_found;
}

// ---------------------------------------------------------------------------

std::string trace_text(const ReductionTrace& trace) {
  std::string out = "start: " + print(trace.start) + "\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    auto& s = trace.steps[i];
    out += "step " + std::to_string(i + 1) + ": " + s.tag.str() + " at " + s.pos.str() + " => " +
           print(s.result) + "\n";
  }
  return out;
}

std::string trace_json(const ReductionTrace& trace) {
  json j;
  j["start"] = print(trace.start);
  j["steps"] = json::array();
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    auto& s = trace.steps[i];
    j["steps"].push_back({{"n", i + 1},
                          {"rule", s.tag.str()},
                          {"at", s.pos.str()},
                          {"result", print(s.result)}});
  }
  j["normalForm"] = print(trace.final());
  j["stats"] = {{"steps", trace.steps.size()}};
  return j.dump();
}

std::string sn_json(const SnReport& rep) {
  json j;
  j["nodes"] = rep.nodes_explored;
  j["discovered"] = rep.nodes_discovered;
  j["longestPath"] = rep.longest_path;
  j["maxDepth"] = rep.max_depth;
  j["normalForms"] = rep.normal_forms;
  j["fuelExhausted"] = rep.fuel_exhausted;
  j["cycleFound"] = rep.cycle_found;
  return j.dump();
}

} // namespace mlf
