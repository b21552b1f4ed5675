#include "optbound/foo.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <ostream>
#include <tuple>

namespace optbound {

namespace {

template <typename Cost>
Cost unit_miss_cost(std::uint64_t size) {
  if constexpr (CostTraits<Cost>::kExact) {
    return Rational(mpz_class(1), mpz_class(static_cast<unsigned long>(size)));
  } else {
    return 1.0 / static_cast<double>(size);
  }
}

Flow to_flow(std::uint64_t bytes) {
  if (bytes > static_cast<std::uint64_t>(std::numeric_limits<Flow>::max())) {
    throw std::overflow_error("byte count exceeds flow range");
  }
  return static_cast<Flow>(bytes);
}

}  // namespace

template <typename Cost>
WindowProblem<Cost> build_window_problem(
    const IntervalSet& intervals, std::size_t begin, std::size_t end,
    const std::function<std::uint64_t(std::size_t)>& inner_capacity,
    const std::function<bool(std::size_t)>& include, std::uint64_t admit_limit) {
  WindowProblem<Cost> p;
  const std::size_t nodes = end - begin;
  p.graph = FlowGraph<Cost>(nodes);
  p.graph.edges.reserve(2 * nodes);
  for (std::size_t t = begin; t + 1 < end; ++t) {
    p.graph.add_edge(t - begin, t + 1 - begin, to_flow(inner_capacity(t)), Cost(0));
  }
  p.first_outer_edge = p.graph.edges.size();
  for (std::size_t t = begin; t < end; ++t) {
    const auto k = intervals.starting_at(t);
    if (!k) continue;
    const Interval& iv = intervals[*k];
    if (iv.end >= end || !include(*k)) continue;
    const Flow s = iv.size <= admit_limit ? to_flow(iv.size) : 0;
    p.graph.add_edge(iv.start - begin, iv.end - begin, s, unit_miss_cost<Cost>(iv.size));
    p.graph.supplies[iv.start - begin] += s;
    p.graph.supplies[iv.end - begin] -= s;
    p.intervals.push_back(*k);
  }
  return p;
}

template <typename Cost>
FlowGraph<Cost> build_foo_graph(const Trace& trace, const IntervalSet& intervals,
                                std::uint64_t capacity) {
  if (trace.size() < 2) throw DegenerateTraceError("FOO needs a trace of at least 2 requests");
  if (capacity == 0) throw std::invalid_argument("cache capacity must be positive");
  auto problem = build_window_problem<Cost>(
      intervals, 0, trace.size(), [capacity](std::size_t) { return capacity; },
      [](std::size_t) { return true; }, capacity);
  return std::move(problem.graph);
}

template <typename Cost>
FlowSolution<Cost> solve_window_problem(const WindowProblem<Cost>& problem) {
  const FlowGraph<Cost>& g = problem.graph;
  const std::size_t n = g.node_count;
  const std::size_t m = g.edges.size();
  // Request t becomes in(t) = 2t and out(t) = 2t + 1, joined by an uncapped
  // pass-through edge. Each interval supplies its own bytes at out(start) and
  // demands them at in(end), so supply and demand are never netted away and
  // every shortest path stays near the interval that needs it.
  Flow pass_capacity = 0;
  for (std::size_t e = problem.first_outer_edge; e < m; ++e) pass_capacity += g.edges[e].capacity;
  FlowGraph<Cost> split(2 * n);
  split.edges.reserve(m + n);
  for (const auto& e : g.edges) split.add_edge(2 * e.from + 1, 2 * e.to, e.capacity, e.cost);
  for (std::size_t t = 0; t < n; ++t) split.add_edge(2 * t, 2 * t + 1, pass_capacity, Cost(0));
  for (std::size_t e = problem.first_outer_edge; e < m; ++e) {
    split.supplies[2 * g.edges[e].from + 1] += g.edges[e].capacity;
    split.supplies[2 * g.edges[e].to] -= g.edges[e].capacity;
  }
  FlowSolution<Cost> sol = solve_min_cost_flow(split, SolverOptions{SourceOrder::kSequential});

  FlowSolution<Cost> out;
  out.stats = sol.stats;
  out.flow.assign(sol.flow.begin(), sol.flow.begin() + static_cast<std::ptrdiff_t>(m));
  out.total_cost = sol.total_cost;
  out.potentials.resize(n);
  for (std::size_t t = 0; t < n; ++t) out.potentials[t] = sol.potentials[2 * t + 1];
  return out;
}

template FlowSolution<double> solve_window_problem(const WindowProblem<double>&);
template FlowSolution<Rational> solve_window_problem(const WindowProblem<Rational>&);
template WindowProblem<double> build_window_problem(
    const IntervalSet&, std::size_t, std::size_t, const std::function<std::uint64_t(std::size_t)>&,
    const std::function<bool(std::size_t)>&, std::uint64_t);
template WindowProblem<Rational> build_window_problem(
    const IntervalSet&, std::size_t, std::size_t, const std::function<std::uint64_t(std::size_t)>&,
    const std::function<bool(std::size_t)>&, std::uint64_t);
template FlowGraph<double> build_foo_graph(const Trace&, const IntervalSet&, std::uint64_t);
template FlowGraph<Rational> build_foo_graph(const Trace&, const IntervalSet&, std::uint64_t);

namespace {

template <typename Cost>
FooResult solve_foo(const Trace& trace, const IntervalSet& intervals, std::uint64_t capacity,
                    const FooOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  if (trace.size() < 2) throw DegenerateTraceError("FOO needs a trace of at least 2 requests");
  if (capacity == 0) throw std::invalid_argument("cache capacity must be positive");
  const WindowProblem<Cost> problem = build_window_problem<Cost>(
      intervals, 0, trace.size(), [capacity](std::size_t) { return capacity; },
      [](std::size_t) { return true; }, capacity);
  const FlowGraph<Cost>& graph = problem.graph;
  const FlowSolution<Cost> solution = solve_window_problem(problem);

  FooResult result;
  result.stats = solution.stats;
  const std::size_t first_outer = trace.size() - 1;
  const std::size_t count = intervals.size();
  result.decisions.cached.resize(count);
  result.decisions.outer_flow.resize(count);
  result.upper_cached.resize(count);
  std::size_t uncached = 0;
  std::size_t oversize = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto s = static_cast<Flow>(intervals[k].size);
    // An object larger than C is never cached: its whole size is a miss.
    const bool fits = intervals[k].size <= capacity;
    const Flow f = fits ? solution.flow[first_outer + k] : s;
    if (!fits) ++oversize;
    result.decisions.outer_flow[k] = f;
    result.decisions.cached[k] = static_cast<double>(s - f) / static_cast<double>(s);
    // Flows are integral, so any flow above the 1e-9 * s threshold is >= 1.
    result.upper_cached[k] = (f == 0) ? 1 : 0;
    if (f != 0) ++uncached;
  }

  const auto compulsory = static_cast<long>(trace.num_objects());
  const double elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  if constexpr (CostTraits<Cost>::kExact) {
    result.lower = make_bound("foo-l", capacity, trace.size(),
                              Rational(compulsory + static_cast<long>(oversize)) + solution.total_cost,
                              BoundKind::kLower);
  } else {
    double reuse_misses = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      reuse_misses += static_cast<double>(result.decisions.outer_flow[k]) /
                      static_cast<double>(intervals[k].size);
    }
    result.lower.method = "foo-l";
    result.lower.capacity = capacity;
    result.lower.requests = trace.size();
    result.lower.misses = static_cast<double>(compulsory) + reuse_misses;
    result.lower.kind = BoundKind::kLower;
  }
  result.upper = make_bound("foo-u", capacity, trace.size(),
                            Rational(compulsory + static_cast<long>(uncached)), BoundKind::kUpper);
  result.lower.runtime_ms = elapsed;
  result.upper.runtime_ms = elapsed;
  if (options.verify) result.verdict = verify_optimality(graph, solution);
  return result;
}

}  // namespace

FooResult foo_bounds(const Trace& trace, const IntervalSet& intervals, std::uint64_t capacity,
                     const FooOptions& options) {
  if (options.mode == NumericMode::kExact) {
    return solve_foo<Rational>(trace, intervals, capacity, options);
  }
  return solve_foo<double>(trace, intervals, capacity, options);
}

NonIntegrality nonintegrality_stats(const DecisionVector& decisions, double epsilon) {
  NonIntegrality stats;
  for (double x : decisions.cached) {
    if (x > epsilon && x < 1.0 - epsilon) ++stats.count;
  }
  if (!decisions.cached.empty()) {
    stats.fraction = static_cast<double>(stats.count) / static_cast<double>(decisions.size());
  }
  return stats;
}

namespace {

// Max segment tree over interval end positions.
class MaxTree {
 public:
  explicit MaxTree(std::size_t n) : size_(1) {
    while (size_ < std::max<std::size_t>(n, 1)) size_ *= 2;
    tree_.assign(2 * size_, 0);
  }

  void set(std::size_t pos, std::uint64_t value) {
    std::size_t i = pos + size_;
    tree_[i] = value;
    for (i /= 2; i >= 1; i /= 2) tree_[i] = std::max(tree_[2 * i], tree_[2 * i + 1]);
  }

  // Appends every position in [lo, hi) whose value exceeds `threshold`.
  void collect_above(std::size_t lo, std::size_t hi, std::uint64_t threshold,
                     std::vector<std::size_t>& out) const {
    if (lo >= hi) return;
    struct Frame {
      std::size_t node, left, right;
    };
    std::vector<Frame> stack{{1, 0, size_}};
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      if (f.right <= lo || f.left >= hi || tree_[f.node] <= threshold) continue;
      if (f.node >= size_) {
        out.push_back(f.left);
        continue;
      }
      const std::size_t mid = (f.left + f.right) / 2;
      stack.push_back({2 * f.node + 1, mid, f.right});
      stack.push_back({2 * f.node, f.left, mid});
    }
  }

 private:
  std::size_t size_;
  std::vector<std::uint64_t> tree_;
};

}  // namespace

std::vector<PrecedenceViolation> check_precedence_integrality(const DecisionVector& decisions,
                                                              const IntervalSet& intervals,
                                                              double epsilon) {
  if (decisions.size() != intervals.size()) {
    throw std::invalid_argument("decision vector does not match the interval set");
  }
  std::vector<PrecedenceViolation> violations;
  MaxTree partially_cached(intervals.trace_length());
  std::vector<std::size_t> hits;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const Interval& iv = intervals[k];
    if (decisions.cached[k] < 1.0 - epsilon) {
      hits.clear();
      partially_cached.collect_above(iv.end + 1, intervals.trace_length(), iv.size, hits);
      for (std::size_t end_pos : hits) {
        violations.push_back(PrecedenceViolation{k, *intervals.ending_at(end_pos)});
      }
    }
    if (decisions.cached[k] > epsilon) partially_cached.set(iv.end, iv.size);
  }
  std::sort(violations.begin(), violations.end(), [](const auto& a, const auto& b) {
    return std::tie(a.nested, a.outer) < std::tie(b.nested, b.outer);
  });
  return violations;
}

void write_decisions_csv(std::ostream& out, const DecisionVector& decisions,
                         const IntervalSet& intervals, const Trace& trace) {
  out << "start,end,object_id,size,x\n";
  const auto old_precision = out.precision(17);
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const Interval& iv = intervals[k];
    out << iv.start << ',' << iv.end << ',' << trace.object_name(iv.object) << ',' << iv.size
        << ',' << decisions.cached[k] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace optbound
