#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "test_util.hpp"

using namespace tdma;
using testutil::graph;
using testutil::load_by_name;
using testutil::names;
using testutil::path;
using testutil::path_graph_abc;

using Loads = std::map<std::string, Load>;

namespace {

Network chain6() {
  return graph({{"A", 10}, {"B", 10}, {"C", 10}, {"D", 10}, {"E", 10}, {"F", 10}},
               {{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "E"}, {"E", "F"}});
}

}  // namespace

TEST(Neighbors, PathGraphMiddle) {
  const Network net = path_graph_abc();
  EXPECT_EQ(names(net, neighbors(net, net.at("B"))), (std::vector<std::string>{"A", "C"}));
}

TEST(Neighbors, IsolatedNode) {
  const Network net = graph({{"X", 1}}, {});
  EXPECT_TRUE(neighbors(net, net.at("X")).empty());
}

TEST(Neighbors, TriangleIsSymmetric) {
  const Network net = graph({{"A", 1}, {"B", 1}, {"C", 1}}, {{"A", "B"}, {"B", "C"}, {"A", "C"}});
  for (NodeId v = 0; v < 3; ++v) {
    EXPECT_EQ(neighbors(net, v).size(), 2u);
    for (NodeId w : neighbors(net, v)) {
      const auto back = neighbors(net, w);
      EXPECT_NE(std::find(back.begin(), back.end(), v), back.end());
    }
  }
}

TEST(Neighbors, UnknownNodeIsInputError) {
  const Network net = path_graph_abc();
  EXPECT_THROW(neighbors(net, 7), InputError);
}

TEST(Network, RejectsSelfLoopsAndNegativeCapacity) {
  Network net;
  const auto a = net.add_node("A", 1);
  EXPECT_THROW(net.add_edge(a, a), InputError);
  EXPECT_THROW(net.add_node("B", -1), InputError);
  EXPECT_THROW(net.add_node("A", 1), InputError);
}

TEST(InterferenceSet, IsolatedEdge) {
  const Network net = graph({{"A", 1}, {"B", 1}}, {{"A", "B"}});
  EXPECT_EQ(names(net, interference_set(net, net.at("A"), net.at("B"))),
            (std::vector<std::string>{"A", "B"}));
}

TEST(InterferenceSet, PathGraphMiddleTransmitter) {
  const Network net = path_graph_abc();
  EXPECT_EQ(names(net, interference_set(net, net.at("B"), net.at("C"))),
            (std::vector<std::string>{"A", "B", "C"}));
}

TEST(InterferenceSet, StarCenterReachesEveryLeaf) {
  const Network net =
      graph({{"S", 1}, {"L1", 1}, {"L2", 1}, {"L3", 1}}, {{"S", "L1"}, {"S", "L2"}, {"S", "L3"}});
  EXPECT_EQ(names(net, interference_set(net, net.at("S"), net.at("L1"))),
            (std::vector<std::string>{"S", "L1", "L2", "L3"}));
}

TEST(InterferenceSet, NonAdjacentPairIsInputError) {
  const Network net = path_graph_abc();
  EXPECT_THROW(interference_set(net, net.at("A"), net.at("C")), InputError);
}

// Expected loads below come from listing each hop's interference set by hand.
TEST(PathLoad, PathGraphFullPath) {
  const Network net = path_graph_abc();
  EXPECT_EQ(load_by_name(net, path_load(net, path(net, {"A", "B", "C"}))), (Loads{{"A", 2}, {"B", 2}, {"C", 1}}));
}

TEST(PathLoad, EmptyAndSingleNodePathsChargeNothing) {
  const Network net = path_graph_abc();
  EXPECT_EQ(path_load(net, Path{}).total(), 0);
  EXPECT_EQ(path_load(net, path(net, {"B"})).total(), 0);
}

// The final receiver never transmits, so it takes one unit and its other
// neighbors take none.
TEST(PathLoad, SixNodeChainPrefix) {
  const Network net = chain6();
  EXPECT_EQ(load_by_name(net, path_load(net, path(net, {"A", "B", "C"}))),
            (Loads{{"A", 2}, {"B", 2}, {"C", 1}, {"D", 0}, {"E", 0}, {"F", 0}}));
}

TEST(PathLoad, SixNodeChainInterior) {
  const Network net = chain6();
  EXPECT_EQ(load_by_name(net, path_load(net, path(net, {"B", "C", "D"}))),
            (Loads{{"A", 1}, {"B", 2}, {"C", 2}, {"D", 1}, {"E", 0}, {"F", 0}}));
}

TEST(PathLoad, InvalidPathIsInputError) {
  const Network net = path_graph_abc();
  EXPECT_THROW(path_load(net, path(net, {"A", "C"})), InputError);
  EXPECT_THROW(path_load(net, path(net, {"A", "B", "A"})), InputError);
}

TEST(PlanLoad, EmptyPlan) {
  const Network net = path_graph_abc();
  EXPECT_EQ(plan_load(net, RoutePlan{}).total(), 0);
}

TEST(PlanLoad, TwoCopiesDoubleTheLoad) {
  const Network net = path_graph_abc();
  const Path p = path(net, {"A", "B", "C"});
  RoutePlan plan{{{0, 0, p}, {0, 1, p}}};
  const LoadMap single = path_load(net, p);
  EXPECT_EQ(plan_load(net, plan), single + single);
}

TEST(PlanLoad, OppositeDirections) {
  const Network net = path_graph_abc();
  RoutePlan plan{{{0, 0, path(net, {"A", "B", "C"})}, {1, 0, path(net, {"C", "B", "A"})}}};
  EXPECT_EQ(load_by_name(net, plan_load(net, plan)), (Loads{{"A", 3}, {"B", 4}, {"C", 3}}));
}

TEST(CheckFeasible, SingleFlowFits) {
  const Network net = path_graph_abc(2);
  RoutePlan plan{{{0, 0, path(net, {"A", "B", "C"})}}};
  EXPECT_TRUE(check_feasible(net, plan).ok());
}

TEST(CheckFeasible, TwoCopiesOverloadAandB) {
  const Network net = path_graph_abc(2);
  const Path p = path(net, {"A", "B", "C"});
  const auto verdict = check_feasible(net, RoutePlan{{{0, 0, p}, {0, 1, p}}});
  ASSERT_FALSE(verdict.ok());
  const std::vector<Overload> expected{{net.at("A"), 4, 2}, {net.at("B"), 4, 2}};
  EXPECT_EQ(verdict.overloads, expected);
}

TEST(CheckFeasible, LoadEqualToCapacityIsFine) {
  const Network net = graph({{"A", 1}, {"B", 1}}, {{"A", "B"}});
  EXPECT_TRUE(check_feasible(net, RoutePlan{{{0, 0, path(net, {"A", "B"})}}}).ok());
}

TEST(CheckFeasible, ZeroCapacityNodeBlocksNeighboringTransmissions) {
  const Network net = graph({{"A", 5}, {"B", 5}, {"Z", 0}}, {{"A", "B"}, {"A", "Z"}});
  EXPECT_FALSE(check_feasible(net, RoutePlan{{{0, 0, path(net, {"A", "B"})}}}).ok());
  EXPECT_TRUE(check_feasible(net, RoutePlan{}).ok());
}

TEST(CheckFeasible, NonAdjacentHopIsReportedNotThrown) {
  const Network net = path_graph_abc();
  const auto verdict = check_feasible(net, RoutePlan{{{0, 0, path(net, {"A", "C"})}}});
  ASSERT_EQ(verdict.malformed.size(), 1u);
  EXPECT_EQ(verdict.malformed[0].defect.kind, PathDefect::Kind::NotAdjacent);
  EXPECT_EQ(verdict.malformed[0].defect.from, net.at("A"));
  EXPECT_EQ(verdict.malformed[0].defect.to, net.at("C"));
}

TEST(IsElementary, Examples) {
  EXPECT_TRUE(is_elementary(Path{{0, 1, 2}}));
  EXPECT_FALSE(is_elementary(Path{{0, 1, 0}}));
  EXPECT_TRUE(is_elementary(Path{{0}}));
}

// ------------------------------------------------------------ properties

class RandomPaths : public ::testing::Test {
 protected:
  std::mt19937_64 rng{20240601};
};

TEST_F(RandomPaths, LoadMatchesPerSlotSimulation) {
  for (int trial = 0; trial < 200; ++trial) {
    const Network net = oracle::random_network(rng, 3 + trial % 8, 0.3, 0, 5);
    const Path p{oracle::random_path(rng, net, 6)};
    const auto simulated = oracle::simulate_frame(oracle::EdgeList(net), p.nodes);
    const LoadMap load = path_load(net, p);
    for (NodeId v = 0; v < net.size(); ++v) ASSERT_EQ(load[v], simulated[v]) << "trial " << trial;
  }
}

TEST_F(RandomPaths, AdditivityAndPerHopBound) {
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = oracle::random_network(rng, 8, 0.3, 0, 5);
    const Path p1{oracle::random_path(rng, net, 5)};
    const Path p2{oracle::random_path(rng, net, 5)};
    EXPECT_EQ(plan_load(net, RoutePlan{{{0, 0, p1}, {1, 0, p2}}}), path_load(net, p1) + path_load(net, p2));
    const LoadMap single = path_load(net, p1);
    for (Load x : single.values()) EXPECT_LE(x, static_cast<Load>(p1.hop_count()));
  }
}

TEST_F(RandomPaths, TotalLoadIsSumOfInterferenceSetSizesEitherWay) {
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = oracle::random_network(rng, 8, 0.3, 0, 5);
    Path p{oracle::random_path(rng, net, 6)};
    Path reversed{std::vector<NodeId>(p.nodes.rbegin(), p.nodes.rend())};
    for (const Path& q : {p, reversed}) {
      Load expected = 0;
      for (std::size_t i = 0; i + 1 < q.nodes.size(); ++i) {
        expected += static_cast<Load>(interference_set(net, q.nodes[i], q.nodes[i + 1]).size());
      }
      EXPECT_EQ(path_load(net, q).total(), expected);
    }
  }
}

TEST_F(RandomPaths, FeasibilityIsMonotoneUnderRemoval) {
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = oracle::random_network(rng, 8, 0.3, 2, 8);
    RoutePlan plan;
    for (std::size_t i = 0; i < 4; ++i) plan.assignments.push_back({i, 0, Path{oracle::random_path(rng, net, 4)}});
    if (!check_feasible(net, plan).ok()) continue;
    for (std::size_t drop = 0; drop < plan.size(); ++drop) {
      RoutePlan smaller = plan;
      smaller.assignments.erase(smaller.assignments.begin() + static_cast<std::ptrdiff_t>(drop));
      EXPECT_TRUE(check_feasible(net, smaller).ok());
    }
  }
}
