#include "optbound/intervals.hpp"

#include <ostream>
#include <string>

namespace optbound {

std::vector<std::size_t> compute_next_uses(const Trace& trace) {
  const std::size_t n = trace.size();
  std::vector<std::size_t> next(n, kNoNextUse);
  std::vector<std::size_t> seen(trace.num_objects(), kNoNextUse);
  for (std::size_t i = n; i-- > 0;) {
    const ObjectId obj = trace[i].object;
    next[i] = seen[obj];
    seen[obj] = i;
  }
  return next;
}

IntervalSet build_intervals(const Trace& trace) {
  const std::size_t n = trace.size();
  if (n >= IntervalSet::kNone) throw std::length_error("trace too long for interval index");
  const auto next = compute_next_uses(trace);

  IntervalSet set;
  set.starting_at_.assign(n, IntervalSet::kNone);
  set.ending_at_.assign(n, IntervalSet::kNone);
  set.intervals_.reserve(n - trace.num_objects());
  for (std::size_t i = 0; i < n; ++i) {
    if (next[i] == kNoNextUse) continue;
    const auto k = static_cast<std::uint32_t>(set.intervals_.size());
    set.intervals_.push_back(Interval{i, next[i], trace[i].size, trace[i].object});
    set.starting_at_[i] = k;
    set.ending_at_[next[i]] = k;
  }
  return set;
}

std::uint64_t resource_cost(const Interval& interval) {
  std::uint64_t cost = 0;
  if (__builtin_mul_overflow(interval.size, static_cast<std::uint64_t>(interval.reuse_distance()),
                             &cost)) {
    throw ArithmeticOverflow("resource cost overflows 64 bits for interval starting at " +
                             std::to_string(interval.start));
  }
  return cost;
}

void write_intervals_csv(std::ostream& out, const IntervalSet& intervals, const Trace& trace) {
  out << "start,end,object_id,size,reuse_distance\n";
  for (const Interval& iv : intervals) {
    out << iv.start << ',' << iv.end << ',' << trace.object_name(iv.object) << ',' << iv.size
        << ',' << iv.reuse_distance() << '\n';
  }
}

}  // namespace optbound
