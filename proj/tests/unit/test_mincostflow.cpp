#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "generators.hpp"
#include "optbound/mincostflow.hpp"
#include "oracles.hpp"

namespace optbound {
namespace {

FlowGraph<Rational> parallel_pair() {
  FlowGraph<Rational> g(2);
  g.supplies = {2, -2};
  g.add_edge(0, 1, 1, 1);
  g.add_edge(0, 1, 2, 3);
  return g;
}

template <typename Cost>
Flow net_outflow(const FlowGraph<Cost>& g, const FlowSolution<Cost>& s, std::size_t v) {
  Flow net = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (g.edges[e].from == v) net += s.flow[e];
    if (g.edges[e].to == v) net -= s.flow[e];
  }
  return net;
}

template <typename Cost>
void expect_feasible(const FlowGraph<Cost>& g, const FlowSolution<Cost>& s) {
  ASSERT_EQ(s.flow.size(), g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    EXPECT_GE(s.flow[e], 0);
    EXPECT_LE(s.flow[e], g.edges[e].capacity);
  }
  for (std::size_t v = 0; v < g.node_count; ++v) EXPECT_EQ(net_outflow(g, s, v), g.supplies[v]);
}

TEST(SolveMinCostFlow, ForcedRouting) {
  FlowGraph<Rational> g(2);
  g.supplies = {1, -1};
  g.add_edge(0, 1, 1, 5);
  const auto s = solve_min_cost_flow(g);
  EXPECT_EQ(s.flow, std::vector<Flow>{1});
  EXPECT_EQ(s.total_cost, 5);
}

TEST(SolveMinCostFlow, ParallelEdgesCheapestFirst) {
  const auto g = parallel_pair();
  for (auto order : {SourceOrder::kSuperSource, SourceOrder::kSequential}) {
    const auto s = solve_min_cost_flow(g, {order});
    EXPECT_EQ(s.flow, (std::vector<Flow>{1, 1}));
    EXPECT_EQ(s.total_cost, 4);
    const auto d = solve_min_cost_flow(testing::to_double(g), {order});
    EXPECT_DOUBLE_EQ(d.total_cost, 4.0);
  }
}

TEST(SolveMinCostFlow, ZeroSupplyGraph) {
  FlowGraph<Rational> g(3);
  g.add_edge(0, 1, 4, 2);
  g.add_edge(1, 2, 4, 1);
  const auto s = solve_min_cost_flow(g);
  EXPECT_EQ(s.total_cost, 0);
  EXPECT_EQ(s.flow, (std::vector<Flow>{0, 0}));
  EXPECT_TRUE(verify_optimality(g, s).optimal);
}

TEST(SolveMinCostFlow, NegativeCycleIsSaturated) {
  // 0 -> 1 -> 0 has cost -1 per unit and capacity 2.
  FlowGraph<Rational> g(2);
  g.add_edge(0, 1, 2, -3);
  g.add_edge(1, 0, 5, 2);
  const auto s = solve_min_cost_flow(g);
  EXPECT_EQ(s.total_cost, -2);
  EXPECT_TRUE(verify_optimality(g, s).optimal);
}

TEST(SolveMinCostFlow, InfeasibleNamesCut) {
  FlowGraph<Rational> g(3);
  g.supplies = {3, 0, -3};
  g.add_edge(0, 1, 5, 1);
  g.add_edge(1, 2, 2, 1);
  try {
    solve_min_cost_flow(g);
    FAIL() << "expected InfeasibleFlowError";
  } catch (const InfeasibleFlowError& e) {
    EXPECT_GT(e.cut_supply(), e.cut_capacity());
    EXPECT_EQ(e.cut_capacity(), 2);
    EXPECT_FALSE(e.cut().empty());
  }
}

TEST(SolveMinCostFlow, RejectsBadInput) {
  FlowGraph<Rational> neg(2);
  neg.add_edge(0, 1, -1, 1);
  EXPECT_THROW(solve_min_cost_flow(neg), FlowInputError);

  FlowGraph<double> nan(2);
  nan.add_edge(0, 1, 1, std::numeric_limits<double>::quiet_NaN());
  EXPECT_THROW(solve_min_cost_flow(nan), FlowInputError);

  FlowGraph<Rational> unbalanced(2);
  unbalanced.supplies = {1, 0};
  EXPECT_THROW(solve_min_cost_flow(unbalanced), FlowInputError);

  FlowGraph<Rational> dangling(2);
  dangling.add_edge(0, 5, 1, 1);
  EXPECT_THROW(solve_min_cost_flow(dangling), FlowInputError);
}

TEST(SolveMinCostFlow, MatchesCycleCancelingOracle) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const auto g = testing::random_flow_graph(rng, 12, 20, 5);
    const auto oracle = testing::cycle_canceling_cost(g);
    ASSERT_TRUE(oracle.has_value());
    for (auto order : {SourceOrder::kSuperSource, SourceOrder::kSequential}) {
      const auto s = solve_min_cost_flow(g, {order});
      expect_feasible(g, s);
      EXPECT_EQ(s.total_cost, *oracle) << "instance " << i;
      EXPECT_TRUE(verify_optimality(g, s).optimal);
      const auto gd = testing::to_double(g);
      const auto d = solve_min_cost_flow(gd, {order});
      expect_feasible(gd, d);
      EXPECT_NEAR(d.total_cost, oracle->get_d(), 1e-9 * std::max(1.0, std::abs(oracle->get_d())));
      EXPECT_TRUE(verify_optimality(gd, d).optimal);
    }
  }
}

TEST(SolveMinCostFlow, PotentialsCertifyReducedCosts) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const auto g = testing::random_flow_graph(rng, 10, 18, 4);
    const auto s = solve_min_cost_flow(g);
    ASSERT_EQ(s.potentials.size(), g.node_count);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto& edge = g.edges[e];
      const Rational reduced = edge.cost + s.potentials[edge.from] - s.potentials[edge.to];
      if (s.flow[e] < edge.capacity) EXPECT_GE(reduced, 0);
      if (s.flow[e] > 0) EXPECT_LE(reduced, 0);
    }
  }
}

TEST(SolveMinCostFlow, CostScalingScalesTotal) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 100; ++i) {
    auto g = testing::random_flow_graph(rng, 10, 16, 4);
    const Rational base = solve_min_cost_flow(g).total_cost;
    for (auto& e : g.edges) e.cost *= Rational(7, 3);
    EXPECT_EQ(solve_min_cost_flow(g).total_cost, base * Rational(7, 3));
  }
}

TEST(VerifyOptimality, SwappedParallelFlowHasNegativeCycle) {
  const auto g = parallel_pair();
  FlowSolution<Rational> s;
  s.flow = {0, 2};
  s.total_cost = 6;
  const auto verdict = verify_optimality(g, s);
  EXPECT_FALSE(verdict.optimal);
  ASSERT_EQ(verdict.cycle.size(), 2u);
  EXPECT_DOUBLE_EQ(verdict.cycle_cost, -2.0);
  VerifyOptions cold;
  cold.warm_start = false;
  EXPECT_FALSE(verify_optimality(g, s, cold).optimal);
  EXPECT_FALSE(verify_optimality(testing::to_double(g), FlowSolution<double>{{0, 2}, 6.0, {}, {}})
                   .optimal);
}

TEST(VerifyOptimality, RejectsInfeasibleSolutions) {
  const auto g = parallel_pair();
  FlowSolution<Rational> over;
  over.flow = {2, 0};
  EXPECT_THROW(verify_optimality(g, over), FlowFeasibilityError);
  FlowSolution<Rational> short_flow;
  short_flow.flow = {1, 0};
  EXPECT_THROW(verify_optimality(g, short_flow), FlowFeasibilityError);
  FlowSolution<Rational> wrong_size;
  wrong_size.flow = {1};
  EXPECT_THROW(verify_optimality(g, wrong_size), FlowFeasibilityError);
}

TEST(VerifyOptimality, ColdAndWarmStartsAgree) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto g = testing::random_flow_graph(rng, 10, 18, 4);
    auto s = solve_min_cost_flow(g);
    VerifyOptions cold;
    cold.warm_start = false;
    EXPECT_TRUE(verify_optimality(g, s, cold).optimal);
    // Stale potentials only slow the search down.
    for (auto& p : s.potentials) p = 0;
    EXPECT_TRUE(verify_optimality(g, s).optimal);
  }
}

TEST(Dimacs, RationalExportScalesToIntegers) {
  FlowGraph<Rational> g(2);
  g.supplies = {1, -1};
  g.add_edge(0, 1, 3, Rational(1, 2));
  g.add_edge(0, 1, 1, Rational(1, 3));
  std::ostringstream out;
  write_dimacs(out, g);
  EXPECT_EQ(out.str(),
            "c costs scaled by 6\np min 2 2\nn 1 1\nn 2 -1\na 1 2 0 3 3\na 1 2 0 1 2\n");
}

TEST(Dimacs, DoubleRoundTrip) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 20; ++i) {
    const auto g = testing::to_double(testing::random_flow_graph(rng, 10, 16, 4));
    std::stringstream buf;
    write_dimacs(buf, g);
    const auto back = read_dimacs(buf);
    ASSERT_EQ(back.node_count, g.node_count);
    EXPECT_EQ(back.supplies, g.supplies);
    ASSERT_EQ(back.edges.size(), g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      EXPECT_EQ(back.edges[e].from, g.edges[e].from);
      EXPECT_EQ(back.edges[e].to, g.edges[e].to);
      EXPECT_EQ(back.edges[e].capacity, g.edges[e].capacity);
      EXPECT_EQ(back.edges[e].cost, g.edges[e].cost);
    }
  }
}

TEST(Dimacs, MalformedInput) {
  std::istringstream none("c nothing\n");
  EXPECT_THROW(read_dimacs(none), FlowInputError);
  std::istringstream bad("p min 2 1\na 1 9 0 1 1\n");
  EXPECT_THROW(read_dimacs(bad), FlowInputError);
}

}  // namespace
}  // namespace optbound
