#pragma once

// Single-radio TDMA interference model.
//
// A hop u -> x occupies one slot at the transmitter, at the receiver and at
// every other neighbor of the transmitter. Each node has an integer slot
// budget per frame (its capacity); a set of routed flows is feasible when no
// node is charged more slots than it owns. Charges are additive per hop, so
// two hops of the same flow that both reach a node cost it two slots.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tdma/error.hpp"

namespace tdma {

using NodeId = std::size_t;
using Load = std::int64_t;

class Network {
 public:
  NodeId add_node(std::string name, Load capacity) {
    if (capacity < 0) throw InputError("negative capacity for node " + name);
    if (index_.contains(name)) throw InputError("duplicate node " + name);
    const NodeId id = names_.size();
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    capacity_.push_back(capacity);
    adjacency_.emplace_back();
    return id;
  }

  // Undirected; a repeated edge is a no-op.
  void add_edge(NodeId u, NodeId v) {
    require(u);
    require(v);
    if (u == v) throw InputError("self-loop on node " + names_[u]);
    insert_sorted(adjacency_[u], v);
    insert_sorted(adjacency_[v], u);
  }

  void set_capacity(NodeId v, Load capacity) {
    require(v);
    if (capacity < 0) throw InputError("negative capacity for node " + names_[v]);
    capacity_[v] = capacity;
  }

  std::size_t size() const noexcept { return names_.size(); }
  bool contains(NodeId v) const noexcept { return v < names_.size(); }

  const std::string& name(NodeId v) const {
    require(v);
    return names_[v];
  }

  Load capacity(NodeId v) const {
    require(v);
    return capacity_[v];
  }

  std::optional<NodeId> find(const std::string& name) const {
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    return std::nullopt;
  }

  NodeId at(const std::string& name) const {
    if (auto v = find(name)) return *v;
    throw InputError("unknown node " + name);
  }

  // Ascending node ids.
  std::span<const NodeId> neighbors(NodeId v) const {
    require(v);
    return adjacency_[v];
  }

  bool adjacent(NodeId u, NodeId v) const {
    if (!contains(u) || !contains(v)) return false;
    return std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
  }

  // Each undirected edge once, as (smaller id, larger id), ascending.
  std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (NodeId u = 0; u < size(); ++u) {
      for (NodeId v : adjacency_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  std::size_t edge_count() const noexcept {
    std::size_t twice = 0;
    for (const auto& row : adjacency_) twice += row.size();
    return twice / 2;
  }

 private:
  void require(NodeId v) const {
    if (!contains(v)) throw InputError("unknown node id " + std::to_string(v));
  }

  static void insert_sorted(std::vector<NodeId>& row, NodeId v) {
    auto it = std::lower_bound(row.begin(), row.end(), v);
    if (it == row.end() || *it != v) row.insert(it, v);
  }

  std::vector<std::string> names_;
  std::vector<Load> capacity_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::unordered_map<std::string, NodeId> index_;
};

// Demand multiplicity. An unbounded request models an endless supply of
// identical flows between the same endpoints.
class CopyCount {
 public:
  static CopyCount finite(std::size_t n) {
    if (n == 0) throw InputError("copy count must be positive");
    return CopyCount(n);
  }
  static CopyCount unbounded() { return CopyCount(std::nullopt); }

  bool is_unbounded() const noexcept { return !count_; }
  std::size_t value() const { return count_.value(); }

  // Effective supply once unbounded requests are capped.
  std::size_t capped(std::size_t cap) const noexcept { return count_ ? *count_ : cap; }

  friend bool operator==(const CopyCount&, const CopyCount&) = default;

 private:
  explicit CopyCount(std::optional<std::size_t> n) : count_(n) {}
  std::optional<std::size_t> count_;
};

struct FlowRequest {
  NodeId source = 0;
  NodeId destination = 0;
  CopyCount copies = CopyCount::finite(1);
  std::string label;

  friend bool operator==(const FlowRequest&, const FlowRequest&) = default;
};

struct Path {
  std::vector<NodeId> nodes;

  std::size_t hop_count() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

struct RoutedCopy {
  std::size_t flow = 0;  // index into the instance's demand list
  std::size_t copy = 0;
  Path path;

  friend bool operator==(const RoutedCopy&, const RoutedCopy&) = default;
};

struct RoutePlan {
  std::vector<RoutedCopy> assignments;

  std::size_t size() const noexcept { return assignments.size(); }
  friend bool operator==(const RoutePlan&, const RoutePlan&) = default;
};

class LoadMap {
 public:
  LoadMap() = default;
  explicit LoadMap(std::size_t node_count) : load_(node_count, 0) {}

  std::size_t size() const noexcept { return load_.size(); }
  Load operator[](NodeId v) const { return load_.at(v); }
  Load& operator[](NodeId v) { return load_.at(v); }
  std::span<const Load> values() const noexcept { return load_; }

  Load total() const noexcept {
    Load sum = 0;
    for (Load x : load_) sum += x;
    return sum;
  }

  LoadMap& operator+=(const LoadMap& other) {
    if (other.size() != size()) throw InputError("load maps over different networks");
    for (std::size_t v = 0; v < load_.size(); ++v) load_[v] += other.load_[v];
    return *this;
  }

  friend LoadMap operator+(LoadMap a, const LoadMap& b) { return a += b; }
  friend bool operator==(const LoadMap&, const LoadMap&) = default;

 private:
  std::vector<Load> load_;
};

inline std::vector<NodeId> neighbors(const Network& net, NodeId v) {
  auto row = net.neighbors(v);
  return {row.begin(), row.end()};
}

// Nodes charged one slot by the hop transmitter -> receiver, ascending.
inline std::vector<NodeId> interference_set(const Network& net, NodeId transmitter,
                                            NodeId receiver) {
  if (!net.adjacent(transmitter, receiver)) {
    throw InputError("hop " + net.name(transmitter) + "->" + net.name(receiver) +
                     " is not an edge");
  }
  std::vector<NodeId> out = neighbors(net, transmitter);
  out.insert(std::lower_bound(out.begin(), out.end(), transmitter), transmitter);
  return out;
}

inline bool is_elementary(const Path& p) {
  std::vector<NodeId> sorted = p.nodes;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

struct PathDefect {
  enum class Kind { UnknownNode, NotAdjacent, RepeatedNode };
  Kind kind;
  std::size_t hop = 0;  // position of the offending node (or hop start)
  NodeId from = 0;
  NodeId to = 0;
};

// First defect in node order, or nullopt for a valid elementary path.
inline std::optional<PathDefect> find_path_defect(const Network& net, const Path& p) {
  std::vector<bool> seen(net.size(), false);
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    const NodeId v = p.nodes[i];
    if (!net.contains(v)) return PathDefect{PathDefect::Kind::UnknownNode, i, v, v};
    if (i > 0 && !net.adjacent(p.nodes[i - 1], v)) {
      return PathDefect{PathDefect::Kind::NotAdjacent, i - 1, p.nodes[i - 1], v};
    }
    if (seen[v]) return PathDefect{PathDefect::Kind::RepeatedNode, i, v, v};
    seen[v] = true;
  }
  return std::nullopt;
}

inline std::string describe(const Network& net, const PathDefect& d) {
  switch (d.kind) {
    case PathDefect::Kind::UnknownNode:
      return "unknown node id " + std::to_string(d.from);
    case PathDefect::Kind::NotAdjacent:
      return "no edge " + net.name(d.from) + "->" + net.name(d.to);
    case PathDefect::Kind::RepeatedNode:
      return "node " + net.name(d.from) + " repeated";
  }
  return {};
}

// Adds one slot to every node of the transmitter's closed neighborhood.
inline void charge_hop(const Network& net, NodeId transmitter, LoadMap& load) {
  load[transmitter] += 1;
  for (NodeId w : net.neighbors(transmitter)) load[w] += 1;
}

inline LoadMap path_load(const Network& net, const Path& p) {
  if (auto defect = find_path_defect(net, p)) {
    throw InputError("invalid path: " + describe(net, *defect));
  }
  LoadMap load(net.size());
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) charge_hop(net, p.nodes[i], load);
  return load;
}

inline LoadMap plan_load(const Network& net, const RoutePlan& plan) {
  LoadMap load(net.size());
  for (const auto& routed : plan.assignments) load += path_load(net, routed.path);
  return load;
}

struct Overload {
  NodeId node = 0;
  Load load = 0;
  Load capacity = 0;
  friend bool operator==(const Overload&, const Overload&) = default;
};

struct MalformedPath {
  std::size_t assignment = 0;  // index into RoutePlan::assignments
  PathDefect defect;
  std::string message;
};

struct FeasibilityVerdict {
  std::vector<Overload> overloads;
  std::vector<MalformedPath> malformed;
  LoadMap load;  // charges of the well-formed paths only

  bool ok() const noexcept { return overloads.empty() && malformed.empty(); }
};

// Never throws on bad paths: they are reported and left out of the load sum.
inline FeasibilityVerdict check_feasible(const Network& net, const RoutePlan& plan) {
  FeasibilityVerdict verdict;
  verdict.load = LoadMap(net.size());
  for (std::size_t a = 0; a < plan.assignments.size(); ++a) {
    const Path& p = plan.assignments[a].path;
    if (auto defect = find_path_defect(net, p)) {
      verdict.malformed.push_back({a, *defect, describe(net, *defect)});
      continue;
    }
    verdict.load += path_load(net, p);
  }
  for (NodeId v = 0; v < net.size(); ++v) {
    if (verdict.load[v] > net.capacity(v)) {
      verdict.overloads.push_back({v, verdict.load[v], net.capacity(v)});
    }
  }
  return verdict;
}

inline constexpr Load kUnlimitedBudget = std::numeric_limits<Load>::max() / 4;

// capacity(v) - load(v) for every node; negative entries mean overload.
inline std::vector<Load> remaining_capacity(const Network& net, const LoadMap& load) {
  std::vector<Load> out(net.size());
  for (NodeId v = 0; v < net.size(); ++v) out[v] = net.capacity(v) - load[v];
  return out;
}

}  // namespace tdma
