#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "optbound/bounds.hpp"
#include "optbound/intervals.hpp"
#include "optbound/mincostflow.hpp"
#include "optbound/trace.hpp"

namespace optbound {

/// Per-interval caching decisions recovered from the flow on outer edges:
/// cached[k] = x = 1 - f/s, the fraction of interval k kept in cache.
struct DecisionVector {
  std::vector<double> cached;
  std::vector<Flow> outer_flow;

  std::size_t size() const { return cached.size(); }
};

/// The FOO flow problem restricted to requests [begin, end). Node t - begin
/// stands for request t. Inner edge t -> t+1 gets capacity inner_capacity(t)
/// and cost 0; every interval lying inside the window and accepted by
/// `include` gets an outer edge of cost 1/s and contributes supply +s at its
/// start and -s at its end. An object larger than `admit_limit` never fits:
/// its edge gets capacity 0 and no supply, so it cannot shortcut other flow,
/// and the caller books the interval as a miss. Inner edges come first, then
/// outer edges in interval order.
template <typename Cost>
struct WindowProblem {
  FlowGraph<Cost> graph;
  std::vector<std::size_t> intervals;  // interval index per outer edge
  std::size_t first_outer_edge = 0;
};

template <typename Cost>
WindowProblem<Cost> build_window_problem(const IntervalSet& intervals, std::size_t begin,
                                         std::size_t end,
                                         const std::function<std::uint64_t(std::size_t)>& inner_capacity,
                                         const std::function<bool(std::size_t)>& include,
                                         std::uint64_t admit_limit);

/// Solves a window problem exactly; the solution refers to problem.graph.
template <typename Cost>
FlowSolution<Cost> solve_window_problem(const WindowProblem<Cost>& problem);

/// Full FOO graph: N nodes, N-1 inner edges of capacity C, one outer edge
/// per interval, 2N - M - 1 edges. Objects larger than C get empty outer
/// edges. Throws DegenerateTraceError when N < 2 and std::invalid_argument
/// when C == 0.
template <typename Cost>
FlowGraph<Cost> build_foo_graph(const Trace& trace, const IntervalSet& intervals,
                                std::uint64_t capacity);

struct FooOptions {
  NumericMode mode = NumericMode::kFloat;
  /// Also run verify_optimality on the solved instance.
  bool verify = false;
};

struct FooResult {
  BoundResult lower;
  BoundResult upper;
  DecisionVector decisions;
  /// Integral decisions behind FOO-U: cached iff no flow on the outer edge.
  std::vector<char> upper_cached;
  SolveStats stats;
  std::optional<OptimalityVerdict> verdict;
};

FooResult foo_bounds(const Trace& trace, const IntervalSet& intervals, std::uint64_t capacity,
                     const FooOptions& options = {});

struct NonIntegrality {
  std::size_t count = 0;  // Omega
  double fraction = 0.0;  // Omega / |I|
};

inline constexpr double kIntegralityEpsilon = 1e-6;

NonIntegrality nonintegrality_stats(const DecisionVector& decisions,
                                    double epsilon = kIntegralityEpsilon);

/// A pair where `nested` takes precedence over `outer` (outer starts earlier,
/// ends later, and is strictly larger), yet outer is partially cached while
/// nested is not fully cached.
struct PrecedenceViolation {
  std::size_t nested = 0;
  std::size_t outer = 0;
};

/// Lists every precedence violation. Sweeps intervals by start while a max
/// segment tree over interval ends holds the sizes of partially cached
/// intervals, so only overlapping candidates are visited.
std::vector<PrecedenceViolation> check_precedence_integrality(const DecisionVector& decisions,
                                                              const IntervalSet& intervals,
                                                              double epsilon = kIntegralityEpsilon);

/// CSV: `start,end,object_id,size,x`.
void write_decisions_csv(std::ostream& out, const DecisionVector& decisions,
                         const IntervalSet& intervals, const Trace& trace);

extern template WindowProblem<double> build_window_problem(
    const IntervalSet&, std::size_t, std::size_t, const std::function<std::uint64_t(std::size_t)>&,
    const std::function<bool(std::size_t)>&, std::uint64_t);
extern template WindowProblem<Rational> build_window_problem(
    const IntervalSet&, std::size_t, std::size_t, const std::function<std::uint64_t(std::size_t)>&,
    const std::function<bool(std::size_t)>&, std::uint64_t);
extern template FlowSolution<double> solve_window_problem(const WindowProblem<double>&);
extern template FlowSolution<Rational> solve_window_problem(const WindowProblem<Rational>&);
extern template FlowGraph<double> build_foo_graph(const Trace&, const IntervalSet&, std::uint64_t);
extern template FlowGraph<Rational> build_foo_graph(const Trace&, const IntervalSet&,
                                                    std::uint64_t);

}  // namespace optbound
