#pragma once

// Exact and greedy flow admission, plus the inapproximability constant.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <type_traits>
#include <utility>
#include <span>
#include <string>
#include <vector>

#include "tdma/capacity_model.hpp"
#include "tdma/error.hpp"
#include "tdma/instance.hpp"

namespace tdma {

struct PathEnumeration {
  std::vector<Path> paths;
  bool truncated = false;
};

inline constexpr std::size_t kDefaultPathLimit = 100'000;
inline constexpr std::uint64_t kDefaultSearchBudget = 10'000'000;

namespace detail {

// Depth-first walk over elementary source-target paths that fit a budget.
// Transmitting from u charges u's closed neighborhood whatever the next
// node is, so the budget is checked once before u's successors are tried.
// Neighbors are taken by ascending id, which yields paths in lexicographic
// order.
template <class Visitor>
class PathWalker {
 public:
  PathWalker(const Network& net, NodeId target, std::span<const Load> remaining,
             std::size_t max_hops, Visitor& visit)
      : net_(net), target_(target), remaining_(remaining.begin(), remaining.end()),
        on_path_(net.size(), false), max_hops_(max_hops), visit_(visit) {}

  // False when the visitor asked to stop.
  bool run(NodeId source) {
    prefix_.nodes.push_back(source);
    on_path_[source] = true;
    extend(source);
    return !stopped_;
  }

 private:
  void extend(NodeId u) {
    if (u == target_) {
      stopped_ = !visit_(std::as_const(prefix_));
      return;
    }
    if (prefix_.hop_count() >= max_hops_) return;
    if (!charge(u, -1)) {
      charge(u, +1);
      return;
    }
    for (NodeId x : net_.neighbors(u)) {
      if (on_path_[x]) continue;
      on_path_[x] = true;
      prefix_.nodes.push_back(x);
      extend(x);
      prefix_.nodes.pop_back();
      on_path_[x] = false;
      if (stopped_) break;
    }
    charge(u, +1);
  }

  // Applies delta to the transmitter's closed neighborhood and reports
  // whether every touched budget is still non-negative.
  bool charge(NodeId u, Load delta) {
    bool fits = (remaining_[u] += delta) >= 0;
    for (NodeId w : net_.neighbors(u)) fits = ((remaining_[w] += delta) >= 0) && fits;
    return fits;
  }

  const Network& net_;
  NodeId target_;
  std::vector<Load> remaining_;
  std::vector<bool> on_path_;
  Path prefix_;
  std::size_t max_hops_;
  Visitor& visit_;
  bool stopped_ = false;
};

inline void require_endpoints(const Network& net, NodeId source, NodeId target,
                              std::span<const Load> remaining) {
  if (!net.contains(source) || !net.contains(target)) throw InputError("unknown endpoint");
  if (source == target) throw InputError("source and destination coincide");
  if (remaining.size() != net.size()) throw InputError("budget does not cover every node");
}

}  // namespace detail

inline constexpr std::size_t kAnyLength = static_cast<std::size_t>(-1);

// Calls visit(path) for each fitting path in lexicographic order until it
// returns false. Returns false if stopped early.
template <class Visitor>
bool for_each_path(const Network& net, NodeId source, NodeId target,
                   std::span<const Load> remaining, Visitor&& visit,
                   std::size_t max_hops = kAnyLength) {
  detail::require_endpoints(net, source, target, remaining);
  return detail::PathWalker<std::remove_reference_t<Visitor>>(net, target, remaining, max_hops, visit)
      .run(source);
}

// Elementary source-target paths whose own load fits `remaining`; prefixes
// are abandoned as soon as some node's prefix load exceeds its budget.
inline PathEnumeration enum_paths(const Network& net, NodeId source, NodeId target,
                                  std::span<const Load> remaining,
                                  std::size_t limit = kDefaultPathLimit) {
  PathEnumeration out;
  for_each_path(net, source, target, remaining, [&](const Path& p) {
    if (out.paths.size() >= limit) {
      out.truncated = true;
      return false;
    }
    out.paths.push_back(p);
    return true;
  });
  return out;
}

inline PathEnumeration enum_paths(const Network& net, NodeId source, NodeId target,
                                  std::size_t limit = kDefaultPathLimit) {
  const std::vector<Load> unlimited(net.size(), kUnlimitedBudget);
  return enum_paths(net, source, target, unlimited, limit);
}

// Fitting path with the fewest hops, lexicographically smallest among those.
inline std::optional<Path> shortest_fitting_path(const Network& net, NodeId source, NodeId target,
                                                 std::span<const Load> remaining) {
  std::optional<Path> found;
  for (std::size_t hops = 1; hops < net.size() && !found; ++hops) {
    for_each_path(net, source, target, remaining, [&](const Path& p) {
      found = p;
      return false;
    }, hops);
  }
  return found;
}

struct SolveOptions {
  std::uint64_t search_budget = kDefaultSearchBudget;  // search-tree nodes
  std::size_t path_limit = kDefaultPathLimit;
  std::size_t unbounded_copies = 0;  // 0: default_unbounded_cap(instance)
};

struct SolveResult {
  std::size_t accepted_count = 0;
  RoutePlan plan;
  bool optimal = false;
  std::uint64_t nodes_explored = 0;
  bool wall_budget_hit = false;
  bool paths_truncated = false;
};

namespace detail {

inline std::vector<std::size_t> copy_supply(const NcInstance& inst, const SolveOptions& opt) {
  const std::size_t cap = opt.unbounded_copies ? opt.unbounded_copies : default_unbounded_cap(inst);
  std::vector<std::size_t> supply;
  for (const auto& f : inst.flows) supply.push_back(f.copies.capped(cap));
  return supply;
}

// Depth-first branch and bound over (flow, copy). Each copy either takes one
// of the paths that still fit or ends its flow; later copies of a flow
// never take a lexicographically smaller path than earlier ones, since
// copies are interchangeable.
class ExactSearch {
 public:
  ExactSearch(const NcInstance& inst, const SolveOptions& opt)
      : inst_(inst), net_(inst.network), opt_(opt), supply_(copy_supply(inst, opt)),
        load_(net_.size()) {}

  SolveResult run() {
    inst_.validate();
    search(0, 0, kNoFloor);
    result_.optimal = !result_.wall_budget_hit && !result_.paths_truncated;
    result_.accepted_count = result_.plan.size();
    return std::move(result_);
  }

 private:
  // floor: index in current_ of the previous copy of this flow.
  void search(std::size_t flow, std::size_t copy, std::size_t floor) {
    if (result_.wall_budget_hit) return;
    if (++result_.nodes_explored > opt_.search_budget) {
      result_.wall_budget_hit = true;
      return;
    }
    if (current_.size() > best_) {
      best_ = current_.size();
      result_.plan = current_;
    }
    if (flow == supply_.size()) return;
    if (upper_bound(flow, copy) <= best_) return;

    if (copy < supply_[flow]) {
      const FlowRequest& req = inst_.flows[flow];
      const auto remaining = remaining_capacity(net_, load_);
      std::size_t seen = 0;
      for_each_path(net_, req.source, req.destination, remaining, [&](const Path& p) {
        if (++seen > opt_.path_limit) {
          result_.paths_truncated = true;
          return false;
        }
        if (floor != kNoFloor && p < current_.assignments[floor].path) return true;
        const LoadMap added = path_load(net_, p);
        load_ += added;
        current_.assignments.push_back({flow, copy, p});
        search(flow, copy + 1, current_.assignments.size() - 1);
        current_.assignments.pop_back();
        subtract(added);
        return !result_.wall_budget_hit && upper_bound(flow, copy) > best_;
      });
      if (result_.wall_budget_hit || upper_bound(flow, copy) <= best_) return;
    }
    search(flow + 1, 0, kNoFloor);
  }

  // Every copy charges its source once for its own transmission and once
  // more for the second hop (the source neighbors the second node), unless
  // the destination is adjacent to the source. The hop into the destination
  // charges it once. Loads only grow down the tree, so the count of copies
  // the current slack admits bounds each flow's remaining acceptances.
  std::size_t copies_that_fit(std::size_t flow) const {
    const FlowRequest& req = inst_.flows[flow];
    const Load per_copy = net_.adjacent(req.source, req.destination) ? 1 : 2;
    const Load at_source = net_.capacity(req.source) - load_[req.source];
    const Load at_dest = net_.capacity(req.destination) - load_[req.destination];
    const Load fit = std::min(at_source / per_copy, at_dest);
    return fit <= 0 ? 0 : static_cast<std::size_t>(fit);
  }

  std::size_t upper_bound(std::size_t flow, std::size_t copy) const {
    std::size_t upper = current_.size() + std::min(supply_[flow] - copy, copies_that_fit(flow));
    for (std::size_t g = flow + 1; g < supply_.size(); ++g) upper += std::min(supply_[g], copies_that_fit(g));
    return upper;
  }

  void subtract(const LoadMap& added) {
    for (NodeId v = 0; v < net_.size(); ++v) load_[v] -= added[v];
  }

  static constexpr std::size_t kNoFloor = static_cast<std::size_t>(-1);

  const NcInstance& inst_;
  const Network& net_;
  SolveOptions opt_;
  std::vector<std::size_t> supply_;
  LoadMap load_;
  RoutePlan current_;
  std::size_t best_ = 0;
  SolveResult result_;
};

}  // namespace detail

inline SolveResult solve_exact(const NcInstance& inst, const SolveOptions& opt = {}) {
  return detail::ExactSearch(inst, opt).run();
}

// Admits copies in demand order, each on the fitting path with the fewest
// hops (ties: smallest node sequence). A flow stops at its first rejection.
// path_limit does not apply: the shortest path is found by deepening.
inline SolveResult solve_greedy(const NcInstance& inst, const SolveOptions& opt = {}) {
  inst.validate();
  const auto supply = detail::copy_supply(inst, opt);
  SolveResult result;
  LoadMap load(inst.network.size());
  for (std::size_t f = 0; f < inst.flows.size(); ++f) {
    const FlowRequest& req = inst.flows[f];
    for (std::size_t copy = 0; copy < supply[f]; ++copy) {
      ++result.nodes_explored;
      const auto pick = shortest_fitting_path(inst.network, req.source, req.destination,
                                              remaining_capacity(inst.network, load));
      if (!pick) break;
      load += path_load(inst.network, *pick);
      result.plan.assignments.push_back({f, copy, *pick});
    }
  }
  result.accepted_count = result.plan.size();
  result.optimal = false;
  return result;
}

// ---------------------------------------------------------------- bound

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational make(std::uint64_t n, std::uint64_t d) {
    if (d == 0) throw InputError("zero denominator");
    const std::uint64_t g = std::gcd(n, d);
    return {n / g, d / g};
  }
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<unsigned __int128>(a.num) * b.den < static_cast<unsigned __int128>(b.num) * a.den;
  }
};

// 1 / (1 - 2^-k) = 2^k / (2^k - 1), the epsilon-free hardness threshold.
inline Rational inapprox_bound(int k) {
  if (k < 2) throw InputError("k must be at least 2");
  if (k > 62) throw InputError("k too large for an exact 64-bit rational");
  const std::uint64_t p = std::uint64_t{1} << k;
  return Rational::make(p, p - 1);
}

}  // namespace tdma
