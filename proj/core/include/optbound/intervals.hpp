#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "optbound/trace.hpp"

namespace optbound {

/// Next-use sentinel for the last request to an object.
inline constexpr std::size_t kNoNextUse = std::numeric_limits<std::size_t>::max();

/// For every request i, the index of the next request to the same object,
/// or kNoNextUse. Single backward pass.
std::vector<std::size_t> compute_next_uses(const Trace& trace);

/// Reuse span [start, end) between consecutive requests to one object.
/// A cached interval occupies `size` bytes from request `start` up to, but
/// not including, request `end`.
struct Interval {
  std::size_t start = 0;
  std::size_t end = 0;
  std::uint64_t size = 0;
  ObjectId object = 0;

  std::size_t reuse_distance() const { return end - start; }
};

/// The intervals of a trace, ordered by start. Starts are pairwise distinct,
/// and so are ends, which allows O(1) lookup by either endpoint.
class IntervalSet {
 public:
  IntervalSet() = default;

  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  std::span<const Interval> intervals() const { return intervals_; }
  const Interval& operator[](std::size_t k) const { return intervals_[k]; }
  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }

  /// Length of the trace the set was built from.
  std::size_t trace_length() const { return starting_at_.size(); }

  /// Position (in start order) of the interval starting/ending at request t.
  std::optional<std::size_t> starting_at(std::size_t t) const { return lookup(starting_at_, t); }
  std::optional<std::size_t> ending_at(std::size_t t) const { return lookup(ending_at_, t); }

 private:
  friend IntervalSet build_intervals(const Trace& trace);

  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  static std::optional<std::size_t> lookup(const std::vector<std::uint32_t>& v, std::size_t t) {
    if (t >= v.size() || v[t] == kNone) return std::nullopt;
    return v[t];
  }

  std::vector<Interval> intervals_;
  std::vector<std::uint32_t> starting_at_;
  std::vector<std::uint32_t> ending_at_;
};

IntervalSet build_intervals(const Trace& trace);

class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// size x reuse distance, in byte-requests. Throws ArithmeticOverflow.
std::uint64_t resource_cost(const Interval& interval);

/// CSV dump: `start,end,object_id,size,reuse_distance`.
void write_intervals_csv(std::ostream& out, const IntervalSet& intervals, const Trace& trace);

}  // namespace optbound
