#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace optbound {

using Flow = std::int64_t;
using Rational = mpq_class;

template <typename Cost>
struct CostTraits;

template <>
struct CostTraits<double> {
  static constexpr bool kExact = false;
  static double to_double(double c) { return c; }
  static bool is_valid(double c) { return std::isfinite(c); }
};

template <>
struct CostTraits<Rational> {
  static constexpr bool kExact = true;
  static double to_double(const Rational& c) { return c.get_d(); }
  static bool is_valid(const Rational&) { return true; }
};

template <typename Cost>
struct FlowEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Flow capacity = 0;
  Cost cost{};
};

/// Min-cost flow instance. supplies[v] > 0 is a source of flow, < 0 a sink;
/// supplies must sum to zero.
template <typename Cost>
struct FlowGraph {
  std::size_t node_count = 0;
  std::vector<Flow> supplies;
  std::vector<FlowEdge<Cost>> edges;

  FlowGraph() = default;
  explicit FlowGraph(std::size_t nodes) : node_count(nodes), supplies(nodes, 0) {}

  std::size_t add_edge(std::size_t from, std::size_t to, Flow capacity, Cost cost) {
    edges.push_back(FlowEdge<Cost>{from, to, capacity, std::move(cost)});
    return edges.size() - 1;
  }
};

struct SolveStats {
  std::size_t phases = 0;        // shortest-path computations
  std::size_t augmentations = 0; // augmenting paths pushed
};

template <typename Cost>
struct FlowSolution {
  std::vector<Flow> flow;  // per edge, same order as FlowGraph::edges
  Cost total_cost{};
  /// Shortest-path labels: every residual arc (u,v) has
  /// cost + potentials[u] - potentials[v] >= 0 at optimality.
  std::vector<Cost> potentials;
  SolveStats stats;
};

class FlowInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No flow satisfies the supplies. `cut` is a node set whose net supply
/// exceeds the capacity of the edges leaving it.
class InfeasibleFlowError : public std::runtime_error {
 public:
  InfeasibleFlowError(std::vector<std::size_t> cut, Flow cut_supply, Flow cut_capacity);
  const std::vector<std::size_t>& cut() const { return cut_; }
  Flow cut_supply() const { return cut_supply_; }
  Flow cut_capacity() const { return cut_capacity_; }

 private:
  std::vector<std::size_t> cut_;
  Flow cut_supply_;
  Flow cut_capacity_;
};

/// A supposed solution breaks a capacity bound or flow conservation.
class FlowFeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Successive shortest paths with node potentials. Each phase runs Dijkstra
/// on reduced costs and then saturates the zero-reduced-cost subgraph with a
/// blocking flow. Negative-cost edges are saturated up front so all residual
/// reduced costs start non-negative. A max-flow pre-check rejects infeasible
/// instances with InfeasibleFlowError.
///
/// kSuperSource grows one shortest-path tree from all excess nodes at once.
/// kSequential drains excess nodes in index order, each search stopping at
/// the nearest deficit node; it stays local when supplies and demands are
/// close together in index order.
enum class SourceOrder { kSuperSource, kSequential };

struct SolverOptions {
  SourceOrder order = SourceOrder::kSuperSource;
};

template <typename Cost>
FlowSolution<Cost> solve_min_cost_flow(const FlowGraph<Cost>& graph,
                                       const SolverOptions& options = {});

struct ResidualArc {
  std::size_t edge = 0;
  bool forward = true;  // false: the reverse arc of a positive flow
};

struct OptimalityVerdict {
  bool optimal = true;
  /// A negative-cost residual cycle, when one was found.
  std::vector<ResidualArc> cycle;
  double cycle_cost = 0.0;
};

struct VerifyOptions {
  /// Seed the label-correcting search with the solution's potentials. The
  /// verdict does not depend on the seed, only the running time does.
  bool warm_start = true;
  /// Relative cycle-cost tolerance for double costs (scaled by max |cost|).
  double relative_tolerance = 1e-9;
};

/// Checks feasibility (throws FlowFeasibilityError naming the first violated
/// edge or node), then searches the residual graph for a negative cycle.
template <typename Cost>
OptimalityVerdict verify_optimality(const FlowGraph<Cost>& graph, const FlowSolution<Cost>& solution,
                                    const VerifyOptions& options = {});

/// DIMACS min-cost-flow format. Rational costs are scaled to integers by
/// the common denominator (written as a comment); double costs are printed
/// with round-trip precision.
void write_dimacs(std::ostream& out, const FlowGraph<Rational>& graph);
void write_dimacs(std::ostream& out, const FlowGraph<double>& graph);
FlowGraph<double> read_dimacs(std::istream& in);

extern template FlowSolution<double> solve_min_cost_flow(const FlowGraph<double>&, const SolverOptions&);
extern template FlowSolution<Rational> solve_min_cost_flow(const FlowGraph<Rational>&,
                                                         const SolverOptions&);
extern template OptimalityVerdict verify_optimality(const FlowGraph<double>&,
                                                    const FlowSolution<double>&,
                                                    const VerifyOptions&);
extern template OptimalityVerdict verify_optimality(const FlowGraph<Rational>&,
                                                    const FlowSolution<Rational>&,
                                                    const VerifyOptions&);

}  // namespace optbound
