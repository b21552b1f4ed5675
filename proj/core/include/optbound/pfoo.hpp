#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "optbound/bounds.hpp"
#include "optbound/intervals.hpp"
#include "optbound/mincostflow.hpp"
#include "optbound/trace.hpp"

namespace optbound {

struct PfooLowerResult {
  BoundResult bound;
  /// Byte-requests claimed, including the fractional marginal interval.
  /// Always min(N x C, sum of all resource costs).
  Rational claimed;
  Rational budget;         // N x C
  std::size_t fully_claimed = 0;
};

/// Caches the intervals with the smallest resource cost (ties: earlier start)
/// until N x C byte-requests are spent; the marginal interval is credited
/// fractionally. Ignores the per-request capacity limit, hence a lower bound.
PfooLowerResult pfoo_lower(const Trace& trace, const IntervalSet& intervals,
                           std::uint64_t capacity);

inline constexpr std::size_t kDefaultSegmentLength = 4096;

/// Sliding windows of `length` requests that advance by length / 2.
struct SegmentPlan {
  std::size_t length = kDefaultSegmentLength;

  std::size_t step() const { return length / 2; }
};

class SegmentPlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct WindowStats {
  std::size_t index = 0;
  std::size_t begin = 0;  // first request in the window
  std::size_t end = 0;    // one past the last request
  std::size_t intervals = 0;
  std::size_t fixed_cached = 0;
  std::size_t fixed_uncached = 0;
  SolveStats solve;
  double runtime_ms = 0.0;
  /// Set when verification was requested.
  std::optional<bool> optimal;
};

/// One JSON object per line.
void write_window_stats_jsonl(std::ostream& out, const std::vector<WindowStats>& windows);

struct PfooUpperOptions {
  NumericMode mode = NumericMode::kFloat;
  /// Run verify_optimality on every window solve.
  bool verify = false;
};

struct PfooUpperResult {
  BoundResult bound;
  /// Fixed schedule: cached[k] != 0 iff interval k is kept in cache.
  std::vector<char> cached;
  std::vector<WindowStats> windows;
};

/// A window solve failed; the message names the window's request range.
class WindowSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves FOO over each window with inner capacities reduced by intervals
/// already fixed as cached. Only undecided intervals lying inside the window
/// get outer edges. Intervals starting in the first half of the window (all
/// of them in the last window) are then fixed: cached iff their outer flow
/// is zero. An interval that starts in the first half but ends past the
/// window is fixed uncached.
PfooUpperResult pfoo_upper(const Trace& trace, const IntervalSet& intervals, std::uint64_t capacity,
                           const SegmentPlan& plan = {}, const PfooUpperOptions& options = {});

}  // namespace optbound
