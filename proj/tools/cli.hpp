#pragma once

// tdma-reduce command line. Exit codes: 0 success / agreement, 1 verification
// or feasibility failure, 2 input error.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdma/tdma.hpp"

namespace tdma::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kInputError = 2;

struct CapacityFlags {
  CapacityPreset preset;

  void attach(CLI::App& cmd) {
    cmd.add_option("--cap-entry-exit", preset.entry_exit, "capacity of entry/exit nodes (V1)");
    cmd.add_option("--cap-pre-post", preset.pre_post, "capacity of pre/post literal nodes (V3)");
    cmd.add_option("--cap-lit", preset.lit, "capacity of literal nodes (V2)");
    cmd.add_option("--cap-bypass", preset.bypass, "capacity of bypass nodes (V4)");
    cmd.add_option("--cap-conflict", preset.conflict, "capacity of conflict nodes (V5)");
    cmd.add_option("--cap-preload", preset.preload, "capacity of preload sources");
    cmd.add_option("--cap-terminal", preset.terminal, "capacity of the terminal");
  }
};

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string token;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n') {
      if (!token.empty()) out.push_back(std::move(token));
      token.clear();
    } else {
      token += c;
    }
  }
  if (!token.empty()) out.push_back(std::move(token));
  return out;
}

// "1 2 -3" or "1,2,-3": every variable exactly once, sign = value.
inline Assignment parse_assignment(const std::string& text, int var_count) {
  std::vector<std::optional<bool>> values(static_cast<std::size_t>(var_count));
  for (const auto& token : split_list(text)) {
    int lit = 0;
    try {
      std::size_t used = 0;
      lit = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw InputError("bad literal '" + token + "' in assignment");
    }
    const int var = lit < 0 ? -lit : lit;
    if (var < 1 || var > var_count) throw InputError("variable " + token + " out of range");
    auto& slot = values[static_cast<std::size_t>(var - 1)];
    if (slot) throw InputError("variable " + std::to_string(var) + " assigned twice");
    slot = lit > 0;
  }
  std::vector<bool> total;
  for (int v = 1; v <= var_count; ++v) {
    if (!values[v - 1]) throw InputError("variable " + std::to_string(v) + " left unassigned");
    total.push_back(*values[v - 1]);
  }
  return Assignment(std::move(total));
}

inline std::string join_nodes(const NcInstance& inst, const std::vector<NodeId>& nodes,
                              const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += sep;
    out += inst.display(nodes[i]);
  }
  return out;
}

inline std::string describe_overloads(const NcInstance& inst, const std::vector<Overload>& overloads) {
  std::string out;
  for (const auto& o : overloads) {
    if (!out.empty()) out += " ";
    out += inst.display(o.node) + "(" + std::to_string(o.load) + ">" + std::to_string(o.capacity) + ")";
  }
  return out;
}

// ---------------------------------------------------------------- compile

struct CompileArgs {
  std::string cnf, out, dot;
  CapacityFlags caps;
};

inline int cmd_compile(const CompileArgs& a, std::ostream& out, std::ostream& err) {
  const Formula f = parse_dimacs(read_file(a.cnf));
  for (const auto& w : lint(f)) err << "warning: " << w << "\n";
  const NcInstance inst = compile(f, a.caps.preset);
  write_file(a.out, save_instance(inst));
  if (!a.dot.empty()) write_file(a.dot, to_dot(inst));
  const SubsetSizes s = subset_sizes(inst);
  out << "compiled " << f.clause_count() << " clauses: " << inst.network.size() << " nodes ("
      << "V1=" << s.v1 << " V2=" << s.v2 << " V3=" << s.v3 << " V4=" << s.v4 << " V5=" << s.v5
      << " aux=" << s.preload + s.terminal << "), " << inst.network.edge_count() << " edges, "
      << inst.flows.size() << " flows\n";
  return kOk;
}

// ------------------------------------------------------------------ check

struct CheckArgs {
  std::string instance, assignment, path;
  bool json = false;
};

inline int cmd_check(const CheckArgs& a, std::ostream& out) {
  const NcInstance inst = load_instance(read_file(a.instance));
  nlohmann::ordered_json doc;
  int status = kOk;

  if (!a.assignment.empty()) {
    if (!inst.formula) throw InputError("instance carries no formula; use --path");
    const Assignment assignment = parse_assignment(a.assignment, inst.formula->var_count);
    const GadgetLayout g = layout_of(inst);
    auto clauses = nlohmann::ordered_json::array();
    std::ostringstream text;
    for (std::size_t i = 0; i < g.clause_count(); ++i) {
      const auto seg = induced_segment(g, *inst.formula, i, assignment);
      text << "clause " << i + 1 << ": " << (seg ? join_nodes(inst, *seg) : "no true literal") << "\n";
      clauses.push_back({{"clause", i + 1},
                         {"segment", seg ? nlohmann::ordered_json(join_nodes(inst, *seg))
                                         : nlohmann::ordered_json(nullptr)}});
    }
    doc["clauses"] = std::move(clauses);
    const InducedPath induced = assignment_to_path(inst, assignment);
    if (const auto* failure = std::get_if<ClauseFailure>(&induced)) {
      text << "verdict: failure at clause " << failure->first() << "\n";
      doc["verdict"] = "failure";
      doc["failed_clauses"] = failure->clauses;
      status = kFailed;
    } else {
      const Path& path = std::get<Path>(induced);
      const FeasibilityVerdict v = check_feasible(inst.network, with_main_route(g, path));
      text << "path: " << join_nodes(inst, path.nodes) << "\n";
      doc["path"] = join_nodes(inst, path.nodes);
      if (v.ok()) {
        text << "verdict: feasible, 0 overloads\n";
        doc["verdict"] = "feasible";
      } else {
        text << "verdict: overloaded " << describe_overloads(inst, v.overloads) << "\n";
        doc["verdict"] = "overloaded";
        status = kFailed;
      }
      doc["overloads"] = v.overloads.size();
    }
    out << (a.json ? doc.dump(2) + "\n" : text.str());
    return status;
  }

  Path path;
  for (const auto& name : split_list(a.path)) path.nodes.push_back(inst.resolve_or_throw(name));
  RoutePlan plan;
  GadgetLayout g;
  const bool gadget = inst.formula.has_value();
  if (gadget) {
    g = layout_of(inst);
    plan = with_main_route(g, path);
  } else {
    plan.assignments.push_back({0, 0, path});
  }
  const FeasibilityVerdict v = check_feasible(inst.network, plan);
  std::ostringstream text;
  if (!v.malformed.empty()) {
    const PathDefect& d = v.malformed.front().defect;
    std::string hop;
    if (d.kind == PathDefect::Kind::NotAdjacent) {
      hop = inst.display(d.from) + "->" + inst.display(d.to);
      text << "malformed: hop " << hop << " has no edge\n";
    } else {
      hop = inst.display(d.from);
      text << "malformed: node " << hop << " repeated\n";
    }
    doc["verdict"] = "malformed";
    doc["hop"] = hop;
    status = kFailed;
  } else if (!v.overloads.empty()) {
    text << "overloaded: " << describe_overloads(inst, v.overloads) << "\n";
    doc["verdict"] = "overloaded";
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& o : v.overloads) {
      nodes.push_back({{"node", inst.display(o.node)}, {"load", o.load}, {"capacity", o.capacity}});
    }
    doc["overloads"] = std::move(nodes);
    status = kFailed;
  } else {
    text << "feasible\n";
    doc["verdict"] = "feasible";
  }
  out << (a.json ? doc.dump(2) + "\n" : text.str());
  return status;
}

// ------------------------------------------------------------------ solve

struct SolveArgs {
  std::string instance;
  std::string mode = "exact";
  std::uint64_t budget = kDefaultSearchBudget;
  std::size_t copies = 0;
  bool json = false;
};

inline int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const NcInstance inst = load_instance(read_file(a.instance));
  SolveOptions opt;
  opt.search_budget = a.budget;
  opt.unbounded_copies = a.copies;
  const SolveResult r = a.mode == "exact" ? solve_exact(inst, opt) : solve_greedy(inst, opt);
  const LoadMap load = plan_load(inst.network, r.plan);

  if (a.json) {
    nlohmann::ordered_json doc;
    doc["mode"] = a.mode;
    doc["accepted"] = r.accepted_count;
    doc["optimal"] = r.optimal;
    doc["nodes_explored"] = r.nodes_explored;
    doc["budget_hit"] = r.wall_budget_hit;
    doc["paths_truncated"] = r.paths_truncated;
    auto routes = nlohmann::ordered_json::array();
    for (const auto& routed : r.plan.assignments) {
      routes.push_back({{"flow", inst.flows[routed.flow].label},
                        {"copy", routed.copy},
                        {"path", join_nodes(inst, routed.path.nodes)}});
    }
    doc["routes"] = std::move(routes);
    auto loads = nlohmann::ordered_json::array();
    for (NodeId v = 0; v < inst.network.size(); ++v) {
      loads.push_back({{"node", inst.network.name(v)}, {"load", load[v]}, {"capacity", inst.network.capacity(v)}});
    }
    doc["load"] = std::move(loads);
    out << doc.dump(2) << "\n";
    return kOk;
  }

  out << "mode: " << a.mode << "\n"
      << "accepted: " << r.accepted_count << "\n"
      << "optimal: " << (r.optimal ? "yes" : "no") << "\n"
      << "search nodes: " << r.nodes_explored << (r.wall_budget_hit ? " (budget hit)" : "") << "\n";
  if (r.paths_truncated) out << "warning: path enumeration truncated\n";
  for (const auto& routed : r.plan.assignments) {
    out << "  " << inst.flows[routed.flow].label << "#" << routed.copy << ": "
        << join_nodes(inst, routed.path.nodes) << "\n";
  }
  out << "load:\n";
  for (NodeId v = 0; v < inst.network.size(); ++v) {
    if (load[v] == 0) continue;
    out << "  " << std::left << std::setw(8) << inst.network.name(v) << std::right << std::setw(4)
        << load[v] << " / " << inst.network.capacity(v) << "\n";
  }
  return kOk;
}

// ----------------------------------------------------------------- verify

struct VerifyArgs {
  VerifyParams params;
  CapacityFlags caps;
  std::string witness_dir = "verify-witnesses";
  bool json = false;
};

inline int cmd_verify(VerifyArgs a, std::ostream& out) {
  a.params.capacities = a.caps.preset;
  const VerificationReport report = run_verification(a.params);
  for (const auto& t : report.trials) {
    if (!t.witness) continue;
    std::filesystem::create_directories(a.witness_dir);
    write_file((std::filesystem::path(a.witness_dir) / ("trial-" + std::to_string(t.index) + ".json")).string(),
               *t.witness);
  }
  out << (a.json ? render_json(report) : render_text(report));
  return report.exit_status();
}

// ------------------------------------------------------------------ bound

inline int cmd_bound(int k, std::ostream& out) {
  const Rational r = inapprox_bound(k);
  out << r.str() << " ≈ " << std::fixed << std::setprecision(6) << r.value() << "\n";
  return kOk;
}

// ------------------------------------------------------------------- main

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"TDMA flow-admission reduction laboratory"};
  app.require_subcommand(1);

  CompileArgs compile_args;
  auto* compile_cmd = app.add_subcommand("compile", "compile a DIMACS CNF into an instance");
  compile_cmd->add_option("--cnf", compile_args.cnf, "input DIMACS file")->required();
  compile_cmd->add_option("--out", compile_args.out, "output instance JSON")->required();
  compile_cmd->add_option("--dot", compile_args.dot, "optional Graphviz output");
  compile_args.caps.attach(*compile_cmd);

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "check an assignment or a path against an instance");
  check_cmd->add_option("--instance", check_args.instance, "instance JSON")->required();
  auto* assignment_opt = check_cmd->add_option("--assignment", check_args.assignment,
                                               "signed variables, e.g. \"1 2 3 -4\"");
  auto* path_opt = check_cmd->add_option("--path", check_args.path,
                                         "node names (canonical ids or n_k^i), comma separated");
  assignment_opt->excludes(path_opt);
  check_cmd->add_flag("--json", check_args.json, "JSON report");

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "maximize accepted flows");
  solve_cmd->add_option("--instance", solve_args.instance, "instance JSON")->required();
  solve_cmd->add_option("--mode", solve_args.mode, "exact or greedy")
      ->check(CLI::IsMember({"exact", "greedy"}));
  solve_cmd->add_option("--budget", solve_args.budget, "search-tree node budget (exact)");
  solve_cmd->add_option("--copies", solve_args.copies, "copies tried for unbounded flows (0: auto)");
  solve_cmd->add_flag("--json", solve_args.json, "JSON report");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "check the reduction on random formulas");
  verify_cmd->add_option("--vars", verify_args.params.vars, "variables per formula")->required();
  verify_cmd->add_option("--clauses", verify_args.params.clauses, "clauses per formula")->required();
  verify_cmd->add_option("--k", verify_args.params.k, "literals per clause")->required();
  verify_cmd->add_option("--trials", verify_args.params.trials, "number of formulas")->required();
  verify_cmd->add_option("--seed", verify_args.params.seed, "base seed")->required();
  verify_cmd->add_option("--budget", verify_args.params.solve.search_budget, "search-tree node budget");
  verify_cmd->add_option("--witness-dir", verify_args.witness_dir, "where disagreeing instances go");
  verify_cmd->add_flag("--json", verify_args.json, "JSON report");
  verify_args.caps.attach(*verify_cmd);

  int bound_k = 0;
  auto* bound_cmd = app.add_subcommand("bound", "inapproximability constant 1/(1-2^-k)");
  bound_cmd->add_option("--k", bound_k, "clause width")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (*compile_cmd) return cmd_compile(compile_args, out, err);
    if (*check_cmd) {
      if (check_args.assignment.empty() == check_args.path.empty()) {
        throw InputError("check needs exactly one of --assignment or --path");
      }
      return cmd_check(check_args, out);
    }
    if (*solve_cmd) return cmd_solve(solve_args, out);
    if (*verify_cmd) return cmd_verify(verify_args, out);
    if (*bound_cmd) return cmd_bound(bound_k, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace tdma::cli
