#pragma once

// Compiles a K-SAT formula into a flow-admission instance whose optimum is
// m + 1 accepted flows when the formula is satisfiable and m otherwise.
//
// Per clause i with literals 1..c the gadget is
//
//            +-- P(i,1) - L(i,1) - Q(i,1) --+
//   E(i) ----+   ...        |clique|  ...   +---- X(i) ---- E(i+1)
//            +-- P(i,c) - L(i,c) - Q(i,c) --+
//            +------------ B(i) ------------+
//                           |
//                          A(i)
//
// A conflict node K joins every positive/negative occurrence pair of a
// variable. Preload flow i is the single hop A(i) -> B(i); the main flow
// runs from E(1) to a terminal T hanging off X(m).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tdma/capacity_model.hpp"
#include "tdma/cnf.hpp"
#include "tdma/error.hpp"
#include "tdma/instance.hpp"

namespace tdma {

enum class Role { Entry, Exit, PreLit, Lit, PostLit, Bypass, PreloadSrc, Conflict, Terminal };

// Clause, position and pair indices are 1-based, matching the canonical ids.
struct GadgetNode {
  Role role = Role::Terminal;
  std::size_t clause = 0;
  std::size_t position = 0;
  std::size_t pair = 0;

  friend bool operator==(const GadgetNode&, const GadgetNode&) = default;
};

inline std::string canonical_id(const GadgetNode& n) {
  const std::string i = std::to_string(n.clause);
  const std::string ij = i + "." + std::to_string(n.position);
  switch (n.role) {
    case Role::Entry: return "E" + i;
    case Role::Exit: return "X" + i;
    case Role::PreLit: return "P" + ij;
    case Role::Lit: return "L" + ij;
    case Role::PostLit: return "Q" + ij;
    case Role::Bypass: return "B" + i;
    case Role::PreloadSrc: return "A" + i;
    case Role::Conflict: return "K" + std::to_string(n.pair);
    case Role::Terminal: return "T";
  }
  return {};
}

inline std::optional<GadgetNode> parse_canonical_id(const std::string& id) {
  if (id == "T") return GadgetNode{Role::Terminal};
  if (id.size() < 2) return std::nullopt;
  auto number = [](const std::string& s) -> std::optional<std::size_t> {
    if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), ::isdigit)) return std::nullopt;
    const auto v = static_cast<std::size_t>(std::stoul(s));
    if (v == 0) return std::nullopt;
    return v;
  };
  const char tag = id[0];
  const std::string rest = id.substr(1);
  if (tag == 'P' || tag == 'L' || tag == 'Q') {
    const auto dot = rest.find('.');
    if (dot == std::string::npos) return std::nullopt;
    auto i = number(rest.substr(0, dot));
    auto j = number(rest.substr(dot + 1));
    if (!i || !j) return std::nullopt;
    const Role role = tag == 'P' ? Role::PreLit : tag == 'L' ? Role::Lit : Role::PostLit;
    return GadgetNode{role, *i, *j, 0};
  }
  auto i = number(rest);
  if (!i) return std::nullopt;
  switch (tag) {
    case 'E': return GadgetNode{Role::Entry, *i};
    case 'X': return GadgetNode{Role::Exit, *i};
    case 'B': return GadgetNode{Role::Bypass, *i};
    case 'A': return GadgetNode{Role::PreloadSrc, *i};
    case 'K': return GadgetNode{Role::Conflict, 0, 0, *i};
    default: return std::nullopt;
  }
}

// Node names used in the original construction: n_k^i inside clause i, with
// k = 1 (entry), 4 (exit), 4+3j-2 / 4+3j-1 / 4+3j (pre / literal / post of
// position j) and 4+3(c+1)-2 (bypass); conflict nodes are n_p. The preload
// sources are the A_i of the flow list. The terminal has no counterpart.
inline std::optional<std::string> paper_index(const GadgetNode& n, std::size_t clause_width) {
  auto name = [&](std::size_t k) {
    return "n_" + std::to_string(k) + "^" + std::to_string(n.clause);
  };
  switch (n.role) {
    case Role::Entry: return name(1);
    case Role::Exit: return name(4);
    case Role::PreLit: return name(4 + 3 * n.position - 2);
    case Role::Lit: return name(4 + 3 * n.position - 1);
    case Role::PostLit: return name(4 + 3 * n.position);
    case Role::Bypass: return name(4 + 3 * (clause_width + 1) - 2);
    case Role::PreloadSrc: return "A_" + std::to_string(n.clause);
    case Role::Conflict: return "n_" + std::to_string(n.pair);
    case Role::Terminal: return std::nullopt;
  }
  return std::nullopt;
}

inline std::string subset_of(Role role) {
  switch (role) {
    case Role::Entry:
    case Role::Exit: return "V1";
    case Role::Lit: return "V2";
    case Role::PreLit:
    case Role::PostLit: return "V3";
    case Role::Bypass: return "V4";
    case Role::Conflict: return "V5";
    default: return "aux";
  }
}

struct CapacityPreset {
  Load entry_exit = 3;  // V1
  Load pre_post = 3;    // V3
  Load lit = 5;         // V2
  Load bypass = 3;      // V4
  Load conflict = 1;    // V5
  Load preload = 1;
  Load terminal = 2;

  Load for_role(Role role) const {
    switch (role) {
      case Role::Entry:
      case Role::Exit: return entry_exit;
      case Role::PreLit:
      case Role::PostLit: return pre_post;
      case Role::Lit: return lit;
      case Role::Bypass: return bypass;
      case Role::Conflict: return conflict;
      case Role::PreloadSrc: return preload;
      case Role::Terminal: return terminal;
    }
    return 0;
  }
};

struct LiteralRef {
  std::size_t clause = 0;  // 0-based
  std::size_t position = 0;
  friend bool operator==(const LiteralRef&, const LiteralRef&) = default;
};

struct ConflictPair {
  NodeId node = 0;
  int var = 0;
  LiteralRef positive;
  LiteralRef negative;
};

// Node ids of a compiled instance, addressed by 0-based clause / position.
struct GadgetLayout {
  std::vector<NodeId> entry, exit, bypass, preload;
  std::vector<std::vector<NodeId>> prelit, lit, postlit;
  std::vector<ConflictPair> conflicts;
  NodeId terminal = 0;
  std::vector<std::size_t> preload_flows;  // demand index per clause
  std::size_t main_flow = 0;

  std::size_t clause_count() const noexcept { return entry.size(); }
  std::size_t width(std::size_t i) const { return lit.at(i).size(); }

  // Node that follows X(i) on the main route.
  NodeId after_exit(std::size_t i) const {
    return i + 1 < clause_count() ? entry[i + 1] : terminal;
  }

  std::vector<const ConflictPair*> conflicts_touching(std::size_t clause) const {
    std::vector<const ConflictPair*> out;
    for (const auto& k : conflicts) {
      if (k.positive.clause == clause || k.negative.clause == clause) out.push_back(&k);
    }
    return out;
  }
};

struct SubsetSizes {
  std::size_t v1 = 0, v2 = 0, v3 = 0, v4 = 0, v5 = 0, preload = 0, terminal = 0;
  std::size_t total() const noexcept { return v1 + v2 + v3 + v4 + v5 + preload + terminal; }
  friend bool operator==(const SubsetSizes&, const SubsetSizes&) = default;
};

inline SubsetSizes subset_sizes(const NcInstance& inst) {
  SubsetSizes s;
  for (NodeId v = 0; v < inst.network.size(); ++v) {
    const auto role = parse_canonical_id(inst.network.name(v));
    const std::string& subset = inst.node_info.at(v).subset;
    if (subset == "V1") ++s.v1;
    else if (subset == "V2") ++s.v2;
    else if (subset == "V3") ++s.v3;
    else if (subset == "V4") ++s.v4;
    else if (subset == "V5") ++s.v5;
    else if (role && role->role == Role::PreloadSrc) ++s.preload;
    else if (role && role->role == Role::Terminal) ++s.terminal;
  }
  return s;
}

// ---------------------------------------------------------------- compile

inline NcInstance compile(const Formula& f, const CapacityPreset& caps = {}) {
  validate(f);
  if (f.clauses.empty()) throw InputError("empty formula: no clause gadget to build");

  NcInstance inst;
  inst.formula = f;
  Network& net = inst.network;
  const std::size_t m = f.clauses.size();

  auto add = [&](const GadgetNode& n, std::size_t width) {
    const NodeId id = net.add_node(canonical_id(n), caps.for_role(n.role));
    inst.node_info.push_back({paper_index(n, width), subset_of(n.role)});
    return id;
  };

  std::vector<NodeId> entry(m), exit(m), bypass(m), preload(m);
  std::vector<std::vector<NodeId>> lit(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t c = f.clauses[i].width();
    const std::size_t ci = i + 1;
    entry[i] = add({Role::Entry, ci}, c);
    exit[i] = add({Role::Exit, ci}, c);
    std::vector<NodeId> pre(c), post(c);
    lit[i].resize(c);
    for (std::size_t j = 0; j < c; ++j) {
      pre[j] = add({Role::PreLit, ci, j + 1}, c);
      lit[i][j] = add({Role::Lit, ci, j + 1}, c);
      post[j] = add({Role::PostLit, ci, j + 1}, c);
    }
    bypass[i] = add({Role::Bypass, ci}, c);
    preload[i] = add({Role::PreloadSrc, ci}, c);

    for (std::size_t j = 0; j < c; ++j) {
      net.add_edge(entry[i], pre[j]);
      net.add_edge(pre[j], lit[i][j]);
      net.add_edge(lit[i][j], post[j]);
      net.add_edge(post[j], exit[i]);
      for (std::size_t j2 = 0; j2 < j; ++j2) net.add_edge(lit[i][j2], lit[i][j]);
    }
    net.add_edge(entry[i], bypass[i]);
    net.add_edge(bypass[i], exit[i]);
    net.add_edge(preload[i], bypass[i]);
    if (i > 0) net.add_edge(exit[i - 1], entry[i]);
  }

  // One conflict node per (positive, negative) occurrence pair of a
  // variable, variables ascending, occurrences in formula order.
  std::size_t pair = 0;
  for (int v = 1; v <= f.var_count; ++v) {
    std::vector<LiteralRef> pos, neg;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& lits = f.clauses[i].literals;
      for (std::size_t j = 0; j < lits.size(); ++j) {
        if (lits[j].var != v) continue;
        (lits[j].negated ? neg : pos).push_back({i, j});
      }
    }
    for (const auto& p : pos) {
      for (const auto& n : neg) {
        const NodeId k = add({Role::Conflict, 0, 0, ++pair}, 0);
        net.add_edge(k, lit[p.clause][p.position]);
        net.add_edge(k, lit[n.clause][n.position]);
      }
    }
  }

  const NodeId terminal = add({Role::Terminal}, 0);
  net.add_edge(exit[m - 1], terminal);

  for (std::size_t i = 0; i < m; ++i) {
    inst.flows.push_back({preload[i], bypass[i], CopyCount::finite(1), "preload-" + std::to_string(i + 1)});
  }
  inst.flows.push_back({entry[0], terminal, CopyCount::unbounded(), "main"});
  return inst;
}

// Recovers the gadget structure of a compiled (or reloaded) instance from
// its canonical node ids. Throws when the instance is not a gadget.
inline GadgetLayout layout_of(const NcInstance& inst) {
  if (!inst.formula) throw InputError("instance carries no formula");
  const Formula& f = *inst.formula;
  const Network& net = inst.network;
  const std::size_t m = f.clauses.size();
  GadgetLayout g;
  g.entry.resize(m);
  g.exit.resize(m);
  g.bypass.resize(m);
  g.preload.resize(m);
  g.prelit.resize(m);
  g.lit.resize(m);
  g.postlit.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t c = f.clauses[i].width();
    const std::size_t ci = i + 1;
    g.entry[i] = net.at(canonical_id({Role::Entry, ci}));
    g.exit[i] = net.at(canonical_id({Role::Exit, ci}));
    g.bypass[i] = net.at(canonical_id({Role::Bypass, ci}));
    g.preload[i] = net.at(canonical_id({Role::PreloadSrc, ci}));
    for (std::size_t j = 0; j < c; ++j) {
      g.prelit[i].push_back(net.at(canonical_id({Role::PreLit, ci, j + 1})));
      g.lit[i].push_back(net.at(canonical_id({Role::Lit, ci, j + 1})));
      g.postlit[i].push_back(net.at(canonical_id({Role::PostLit, ci, j + 1})));
    }
  }
  g.terminal = net.at("T");

  std::map<NodeId, LiteralRef> lit_ref;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < g.lit[i].size(); ++j) lit_ref[g.lit[i][j]] = {i, j};
  }
  for (NodeId v = 0; v < net.size(); ++v) {
    const auto node = parse_canonical_id(net.name(v));
    if (!node || node->role != Role::Conflict) continue;
    std::vector<LiteralRef> ends;
    for (NodeId w : net.neighbors(v)) {
      if (auto it = lit_ref.find(w); it != lit_ref.end()) ends.push_back(it->second);
    }
    if (ends.size() != 2) throw InputError("conflict node " + net.name(v) + " does not join two literals");
    const Literal& a = f.clauses[ends[0].clause].literals[ends[0].position];
    const Literal& b = f.clauses[ends[1].clause].literals[ends[1].position];
    if (a.var != b.var || a.negated == b.negated) {
      throw InputError("conflict node " + net.name(v) + " joins non-complementary literals");
    }
    ConflictPair k{v, a.var, ends[0], ends[1]};
    if (a.negated) std::swap(k.positive, k.negative);
    g.conflicts.push_back(k);
  }

  bool have_main = false;
  g.preload_flows.assign(m, inst.flows.size());
  for (std::size_t d = 0; d < inst.flows.size(); ++d) {
    const auto& flow = inst.flows[d];
    if (flow.source == g.entry[0] && flow.destination == g.terminal) {
      g.main_flow = d;
      have_main = true;
      continue;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (flow.source == g.preload[i] && flow.destination == g.bypass[i]) g.preload_flows[i] = d;
    }
  }
  if (!have_main) throw InputError("instance has no main flow E1 -> T");
  for (std::size_t i = 0; i < m; ++i) {
    if (g.preload_flows[i] == inst.flows.size()) {
      throw InputError("missing preload flow for clause " + std::to_string(i + 1));
    }
  }
  return g;
}

// ------------------------------------------------ assignments <-> paths

// E(i), P(i,first), L(i,j) for the given positions, Q(i,last), X(i).
// Positions are 0-based, ascending, non-empty.
inline std::vector<NodeId> clause_segment(const GadgetLayout& g, std::size_t clause,
                                          const std::vector<std::size_t>& positions) {
  std::vector<NodeId> seg{g.entry[clause], g.prelit[clause][positions.front()]};
  for (std::size_t j : positions) seg.push_back(g.lit[clause][j]);
  seg.push_back(g.postlit[clause][positions.back()]);
  seg.push_back(g.exit[clause]);
  return seg;
}

inline std::vector<std::size_t> true_positions(const Formula& f, std::size_t clause,
                                               const Assignment& a) {
  std::vector<std::size_t> out;
  const auto& lits = f.clauses.at(clause).literals;
  for (std::size_t j = 0; j < lits.size(); ++j) {
    if (a.satisfies(lits[j])) out.push_back(j);
  }
  return out;
}

// Clause segment induced by an assignment, or nullopt if no literal of the
// clause is true.
inline std::optional<std::vector<NodeId>> induced_segment(const GadgetLayout& g, const Formula& f,
                                                          std::size_t clause, const Assignment& a) {
  const auto positions = true_positions(f, clause, a);
  if (positions.empty()) return std::nullopt;
  return clause_segment(g, clause, positions);
}

struct ClauseFailure {
  std::vector<std::size_t> clauses;  // 1-based, ascending
  std::size_t first() const { return clauses.front(); }
};

using InducedPath = std::variant<Path, ClauseFailure>;

inline void require_total(const NcInstance& inst, const Assignment& a) {
  if (!inst.formula || a.var_count() != inst.formula->var_count) {
    throw InputError("assignment must cover every variable of the formula");
  }
}

inline InducedPath assignment_to_path(const NcInstance& inst, const Assignment& a) {
  require_total(inst, a);
  const GadgetLayout g = layout_of(inst);
  Path path;
  ClauseFailure failure;
  for (std::size_t i = 0; i < g.clause_count(); ++i) {
    auto seg = induced_segment(g, *inst.formula, i, a);
    if (!seg) {
      failure.clauses.push_back(i + 1);
      continue;
    }
    path.nodes.insert(path.nodes.end(), seg->begin(), seg->end());
  }
  if (!failure.clauses.empty()) return failure;
  path.nodes.push_back(g.terminal);
  return path;
}

class ContradictionError : public InputError {
 public:
  explicit ContradictionError(int var)
      : InputError("path visits both polarities of variable " + std::to_string(var)), var_(var) {}
  int var() const noexcept { return var_; }

 private:
  int var_;
};

inline PartialAssignment path_to_assignment(const NcInstance& inst, const Path& p) {
  const GadgetLayout g = layout_of(inst);
  const Formula& f = *inst.formula;
  PartialAssignment out(f.var_count);
  for (NodeId v : p.nodes) {
    const auto node = parse_canonical_id(inst.network.name(v));
    if (!node || node->role != Role::Lit) continue;
    const Literal& lit = f.clauses.at(node->clause - 1).literals.at(node->position - 1);
    const bool value = !lit.negated;
    if (auto prior = out[lit.var]; prior && *prior != value) throw ContradictionError(lit.var);
    out.set(lit.var, value);
  }
  return out;
}

// The m preload flows on their single hop.
inline RoutePlan preload_plan(const GadgetLayout& g) {
  RoutePlan plan;
  for (std::size_t i = 0; i < g.clause_count(); ++i) {
    plan.assignments.push_back({g.preload_flows[i], 0, Path{{g.preload[i], g.bypass[i]}}});
  }
  return plan;
}

// Preloads plus one main-flow copy on the given route.
inline RoutePlan with_main_route(const GadgetLayout& g, const Path& route) {
  RoutePlan plan = preload_plan(g);
  plan.assignments.push_back({g.main_flow, 0, route});
  return plan;
}

// Number of clauses whose induced segment exists and fits, with the
// preloads and every other induced segment routed at the same time.
inline std::size_t traversable_clauses(const NcInstance& inst, const Assignment& a) {
  require_total(inst, a);
  const GadgetLayout g = layout_of(inst);
  const Network& net = inst.network;
  const std::size_t m = g.clause_count();

  std::vector<std::optional<std::vector<NodeId>>> segments(m);
  LoadMap load = plan_load(net, preload_plan(g));
  for (std::size_t i = 0; i < m; ++i) {
    segments[i] = induced_segment(g, *inst.formula, i, a);
    if (!segments[i]) continue;
    Path hop_path{*segments[i]};
    hop_path.nodes.push_back(g.after_exit(i));
    load += path_load(net, hop_path);
  }

  std::size_t count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!segments[i]) continue;
    std::vector<NodeId> watched = *segments[i];
    watched.push_back(g.bypass[i]);
    for (const ConflictPair* k : g.conflicts_touching(i)) watched.push_back(k->node);
    const bool fits = std::all_of(watched.begin(), watched.end(),
                                  [&](NodeId v) { return load[v] <= net.capacity(v); });
    if (fits) ++count;
  }
  return count;
}

// ------------------------------------------------------------------ audit

// Smallest capacity - load seen per node class over every intended route.
struct ClassMargins {
  Load entry_exit = kUnlimitedBudget;
  Load pre_post = kUnlimitedBudget;
  Load lit = kUnlimitedBudget;
  Load bypass = kUnlimitedBudget;
  Load conflict = kUnlimitedBudget;
  Load preload = kUnlimitedBudget;

  Load min() const {
    return std::min({entry_exit, pre_post, lit, bypass, conflict, preload});
  }
};

struct ClauseAudit {
  std::size_t clause = 0;  // 1-based
  ClassMargins margins;
  bool bypass_blocked = false;
  bool conflict_blocked = true;
  bool through_route_blocked = true;
  Load bypass_load = 0;  // bypass load when the main flow uses it
  std::vector<std::string> findings;

  bool ok() const {
    return bypass_blocked && conflict_blocked && through_route_blocked && margins.min() >= 0;
  }
};

struct AuditReport {
  std::vector<ClauseAudit> clauses;
  bool ok() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const ClauseAudit& c) { return c.ok(); });
  }
};

namespace detail {

// Main route through clause i with the hops on either side that reach the
// gadget's nodes: X(i-1) -> E(i) before, and E(i+1)'s onward hop after.
inline Path windowed_route(const GadgetLayout& g, std::size_t i, const std::vector<NodeId>& seg) {
  Path p;
  if (i > 0) p.nodes.push_back(g.exit[i - 1]);
  p.nodes.insert(p.nodes.end(), seg.begin(), seg.end());
  p.nodes.push_back(g.after_exit(i));
  if (i + 1 < g.clause_count()) p.nodes.push_back(g.prelit[i + 1].front());
  return p;
}

inline void tighten(Load& slot, Load margin) { slot = std::min(slot, margin); }

// Every non-empty set of true positions some assignment can induce on the
// clause, found by enumerating its distinct variables.
inline std::vector<std::vector<std::size_t>> induced_subsets(const Clause& clause) {
  std::vector<int> vars;
  for (const auto& lit : clause.literals) vars.push_back(lit.var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
    std::vector<std::size_t> positions;
    for (std::size_t j = 0; j < clause.literals.size(); ++j) {
      const Literal& lit = clause.literals[j];
      const auto slot = static_cast<std::size_t>(
          std::lower_bound(vars.begin(), vars.end(), lit.var) - vars.begin());
      if (lit.satisfied_by(mask >> slot & 1u)) positions.push_back(j);
    }
    if (!positions.empty()) out.push_back(std::move(positions));
  }
  return out;
}

}  // namespace detail

// Checks the blocking arithmetic of every clause gadget with the preloads
// routed: (1) a main route over the bypass overloads it, (2) every route
// over a non-empty literal subset fits, (3) routing through a conflict node
// overloads it, (4) using both literals of a conflict pair overloads it.
inline AuditReport audit(const NcInstance& inst) {
  const GadgetLayout g = layout_of(inst);
  const Network& net = inst.network;
  const LoadMap preload = plan_load(net, preload_plan(g));
  AuditReport report;

  for (std::size_t i = 0; i < g.clause_count(); ++i) {
    ClauseAudit ca;
    ca.clause = i + 1;
    const std::string where = "clause " + std::to_string(i + 1);

    const Path bypass_route =
        detail::windowed_route(g, i, {g.entry[i], g.bypass[i], g.exit[i]});
    ca.bypass_load = (preload + path_load(net, bypass_route))[g.bypass[i]];
    ca.bypass_blocked = ca.bypass_load > net.capacity(g.bypass[i]);
    if (!ca.bypass_blocked) {
      ca.findings.push_back(where + ": bypass not blocked (load " + std::to_string(ca.bypass_load) +
                            " <= capacity " + std::to_string(net.capacity(g.bypass[i])) + ")");
    }

    const auto touching = g.conflicts_touching(i);
    const std::size_t c = g.width(i);
    for (const auto& positions : detail::induced_subsets(inst.formula->clauses[i])) {
      const LoadMap load =
          preload + path_load(net, detail::windowed_route(g, i, clause_segment(g, i, positions)));
      auto margin = [&](NodeId v) { return net.capacity(v) - load[v]; };
      auto& mg = ca.margins;
      detail::tighten(mg.entry_exit, std::min(margin(g.entry[i]), margin(g.exit[i])));
      for (std::size_t j = 0; j < c; ++j) {
        detail::tighten(mg.pre_post, std::min(margin(g.prelit[i][j]), margin(g.postlit[i][j])));
        detail::tighten(mg.lit, margin(g.lit[i][j]));
      }
      detail::tighten(mg.bypass, margin(g.bypass[i]));
      detail::tighten(mg.preload, margin(g.preload[i]));
      for (const ConflictPair* k : touching) detail::tighten(mg.conflict, margin(k->node));
    }
    if (ca.margins.min() < 0) {
      ca.findings.push_back(where + ": an intended literal route overloads a node (margin " +
                            std::to_string(ca.margins.min()) + ")");
    }

    for (const ConflictPair* k : touching) {
      const NodeId pos = g.lit[k->positive.clause][k->positive.position];
      const NodeId neg = g.lit[k->negative.clause][k->negative.position];
      const Load cap = net.capacity(k->node);

      const Load through = path_load(net, Path{{pos, k->node, neg}})[k->node];
      if (through <= cap) {
        ca.through_route_blocked = false;
        ca.findings.push_back(where + ": through-route over " + net.name(k->node) + " not blocked");
      }

      const NodeId pos_next = g.postlit[k->positive.clause][k->positive.position];
      const NodeId neg_next = g.postlit[k->negative.clause][k->negative.position];
      const Load both = (path_load(net, Path{{pos, pos_next}}) + path_load(net, Path{{neg, neg_next}}))[k->node];
      if (both <= cap) {
        ca.conflict_blocked = false;
        ca.findings.push_back(where + ": conflict " + net.name(k->node) + " not blocked");
      }
    }
    report.clauses.push_back(std::move(ca));
  }
  return report;
}

}  // namespace tdma
