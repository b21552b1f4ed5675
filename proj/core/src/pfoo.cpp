#include "optbound/pfoo.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>

#include "optbound/foo.hpp"

namespace optbound {

namespace {

mpz_class to_mpz(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

PfooLowerResult pfoo_lower(const Trace& trace, const IntervalSet& intervals,
                           std::uint64_t capacity) {
  const auto started = std::chrono::steady_clock::now();
  if (trace.size() == 0) throw DegenerateTraceError("PFOO-L needs a non-empty trace");
  if (capacity == 0) throw std::invalid_argument("cache capacity must be positive");

  std::vector<std::uint64_t> cost(intervals.size());
  for (std::size_t k = 0; k < intervals.size(); ++k) cost[k] = resource_cost(intervals[k]);
  std::vector<std::size_t> order(intervals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Interval order is start order, so the index breaks ties by start.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cost[a] != cost[b] ? cost[a] < cost[b] : a < b;
  });

  PfooLowerResult r;
  r.budget = Rational(to_mpz(trace.size()) * to_mpz(capacity));
  mpz_class spent = 0;
  const mpz_class& budget = r.budget.get_num();
  Rational hits = 0;
  for (std::size_t k : order) {
    const mpz_class c = to_mpz(cost[k]);
    if (spent + c <= budget) {
      spent += c;
      ++r.fully_claimed;
      continue;
    }
    const mpz_class left = budget - spent;
    if (left > 0) {
      Rational part(left, c);
      part.canonicalize();
      hits = part;
      spent = budget;
    }
    break;
  }
  hits += static_cast<unsigned long>(r.fully_claimed);
  r.claimed = Rational(spent);
  const Rational misses =
      Rational(static_cast<unsigned long>(trace.num_objects() + intervals.size())) - hits;
  r.bound = make_bound("pfoo-l", capacity, trace.size(), misses, BoundKind::kLower);
  r.bound.runtime_ms = ms_since(started);
  return r;
}

void write_window_stats_jsonl(std::ostream& out, const std::vector<WindowStats>& windows) {
  for (const WindowStats& w : windows) {
    out << "{\"window\":" << w.index << ",\"begin\":" << w.begin << ",\"end\":" << w.end
        << ",\"intervals\":" << w.intervals << ",\"fixed_cached\":" << w.fixed_cached
        << ",\"fixed_uncached\":" << w.fixed_uncached << ",\"phases\":" << w.solve.phases
        << ",\"augmentations\":" << w.solve.augmentations << ",\"runtime_ms\":" << w.runtime_ms;
    if (w.optimal) out << ",\"optimal\":" << (*w.optimal ? "true" : "false");
    out << "}\n";
  }
}

namespace {

enum class Fixed : char { kOpen, kCached, kUncached };

template <typename Cost>
PfooUpperResult run_pfoo_upper(const Trace& trace, const IntervalSet& intervals,
                               std::uint64_t capacity, const SegmentPlan& plan,
                               const PfooUpperOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = trace.size();
  // residual[t] is what fixed cached intervals leave of inner edge t -> t+1.
  std::vector<std::uint64_t> residual(n > 0 ? n - 1 : 0, capacity);
  std::vector<Fixed> fixed(intervals.size(), Fixed::kOpen);
  PfooUpperResult result;

  for (std::size_t begin = 0, index = 0;; begin += plan.step(), ++index) {
    const auto window_started = std::chrono::steady_clock::now();
    const std::size_t end = std::min(n, begin + plan.length);
    const bool last = end == n;
    const std::size_t fix_until = last ? n : begin + plan.step();

    WindowStats stats;
    stats.index = index;
    stats.begin = begin;
    stats.end = end;

    const auto problem = build_window_problem<Cost>(
        intervals, begin, end, [&](std::size_t t) { return residual[t]; },
        [&](std::size_t k) { return fixed[k] == Fixed::kOpen; }, capacity);
    stats.intervals = problem.intervals.size();
    // Outer-edge flow by start request - begin; -1 for intervals not in the
    // problem. Window-sized so that a window costs O(S), not O(N).
    std::vector<Flow> start_flow(end - begin, -1);
    if (options.verify) stats.optimal = true;
    if (!problem.intervals.empty()) {
      FlowSolution<Cost> solution;
      try {
        solution = solve_window_problem(problem);
        if (options.verify) stats.optimal = verify_optimality(problem.graph, solution).optimal;
      } catch (const std::exception& e) {
        throw WindowSolveError("window " + std::to_string(index) + " (requests " +
                               std::to_string(begin) + ".." + std::to_string(end) +
                               "): " + e.what());
      }
      stats.solve = solution.stats;
      for (std::size_t j = 0; j < problem.intervals.size(); ++j) {
        start_flow[intervals[problem.intervals[j]].start - begin] =
            solution.flow[problem.first_outer_edge + j];
      }
    }

    for (std::size_t t = begin; t < fix_until; ++t) {
      const auto k = intervals.starting_at(t);
      if (!k || fixed[*k] != Fixed::kOpen) continue;
      const Interval& iv = intervals[*k];
      if (iv.end < end && iv.size <= capacity && start_flow[t - begin] == 0) {
        fixed[*k] = Fixed::kCached;
        for (std::size_t e = iv.start; e < iv.end; ++e) residual[e] -= iv.size;
        ++stats.fixed_cached;
      } else {
        fixed[*k] = Fixed::kUncached;
        ++stats.fixed_uncached;
      }
    }
    stats.runtime_ms = ms_since(window_started);
    result.windows.push_back(stats);
    if (last) break;
  }

  result.cached.resize(intervals.size());
  std::size_t uncached = 0;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    result.cached[k] = fixed[k] == Fixed::kCached ? 1 : 0;
    if (!result.cached[k]) ++uncached;
  }
  result.bound = make_bound("pfoo-u", capacity, n,
                            Rational(static_cast<unsigned long>(trace.num_objects() + uncached)),
                            BoundKind::kUpper);
  result.bound.runtime_ms = ms_since(started);
  return result;
}

}  // namespace

PfooUpperResult pfoo_upper(const Trace& trace, const IntervalSet& intervals, std::uint64_t capacity,
                           const SegmentPlan& plan, const PfooUpperOptions& options) {
  if (trace.size() < 2) throw DegenerateTraceError("PFOO-U needs a trace of at least 2 requests");
  if (capacity == 0) throw std::invalid_argument("cache capacity must be positive");
  if (plan.length < 2 || plan.length % 2 != 0) {
    throw SegmentPlanError("segment length must be even and at least 2, got " +
                           std::to_string(plan.length));
  }
  if (options.mode == NumericMode::kExact) {
    return run_pfoo_upper<Rational>(trace, intervals, capacity, plan, options);
  }
  return run_pfoo_upper<double>(trace, intervals, capacity, plan, options);
}

}  // namespace optbound
