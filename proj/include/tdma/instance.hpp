#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tdma/capacity_model.hpp"
#include "tdma/cnf.hpp"

namespace tdma {

// Per-node metadata kept parallel to the network's node ids. The network's
// own node name is the canonical id.
struct NodeInfo {
  std::optional<std::string> paper_index;  // e.g. "n_17^1"; absent for plain instances
  std::string subset = "aux";              // "V1".."V5" or "aux"

  friend bool operator==(const NodeInfo&, const NodeInfo&) = default;
};

// A flow-admission problem: a capacitated network plus an ordered demand
// list. Instances compiled from a formula also carry the formula.
struct NcInstance {
  Network network;
  std::vector<FlowRequest> flows;
  std::vector<NodeInfo> node_info;
  std::optional<Formula> formula;

  // Finds a node by canonical id or, failing that, by original-style name. Braces
  // in that form are ignored, so "n_{17}^{1}" matches "n_17^1".
  std::optional<NodeId> resolve(const std::string& name) const {
    if (auto v = network.find(name)) return v;
    std::string bare;
    for (char c : name) {
      if (c != '{' && c != '}') bare += c;
    }
    for (NodeId v = 0; v < node_info.size(); ++v) {
      if (node_info[v].paper_index == bare) return v;
    }
    return std::nullopt;
  }

  NodeId resolve_or_throw(const std::string& name) const {
    if (auto v = resolve(name)) return *v;
    throw InputError("unknown node " + name);
  }

  // Display label: the original-style name when there is one, else the canonical id.
  std::string display(NodeId v) const {
    if (v < node_info.size() && node_info[v].paper_index) return *node_info[v].paper_index;
    return network.name(v);
  }

  void validate() const {
    if (node_info.size() != network.size()) throw InputError("node metadata size mismatch");
    for (const auto& f : flows) {
      if (!network.contains(f.source) || !network.contains(f.destination)) {
        throw InputError("flow " + f.label + " references an unknown node");
      }
      if (f.source == f.destination) throw InputError("flow " + f.label + " has source == destination");
    }
  }
};

// Supply used for unbounded requests when the caller does not set one:
// one more than the number of demands.
inline std::size_t default_unbounded_cap(const NcInstance& inst) { return inst.flows.size() + 1; }

// Endpoint and (flow, copy) uniqueness checks on top of check_feasible.
inline FeasibilityVerdict check_feasible(const NcInstance& inst, const RoutePlan& plan) {
  FeasibilityVerdict verdict = check_feasible(inst.network, plan);
  std::vector<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t a = 0; a < plan.assignments.size(); ++a) {
    const auto& routed = plan.assignments[a];
    const auto& nodes = routed.path.nodes;
    if (routed.flow >= inst.flows.size()) {
      verdict.malformed.push_back({a, {}, "flow index " + std::to_string(routed.flow) + " out of range"});
      continue;
    }
    const FlowRequest& flow = inst.flows[routed.flow];
    if (nodes.empty() || nodes.front() != flow.source || nodes.back() != flow.destination) {
      verdict.malformed.push_back({a, {}, "path endpoints do not match flow " + flow.label});
    }
    const std::pair key{routed.flow, routed.copy};
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      verdict.malformed.push_back({a, {}, "copy routed twice for flow " + flow.label});
    }
    seen.push_back(key);
  }
  return verdict;
}

}  // namespace tdma
