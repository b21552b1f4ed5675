#include "optbound/bounds.hpp"

#include <cmath>
#include <cstring>

namespace optbound {

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kLower:
      return "lower";
    case BoundKind::kUpper:
      return "upper";
    case BoundKind::kExact:
      return "exact";
    case BoundKind::kHeuristic:
      return "heuristic";
  }
  return "heuristic";
}

BoundKind parse_bound_kind(std::string_view text) {
  if (text == "lower") return BoundKind::kLower;
  if (text == "upper") return BoundKind::kUpper;
  if (text == "exact") return BoundKind::kExact;
  if (text == "heuristic") return BoundKind::kHeuristic;
  throw std::invalid_argument("unknown bound kind '" + std::string(text) + "'");
}

double nearest_double(const Rational& q) {
  const double lo = q.get_d();
  if (Rational(lo) == q) return lo;
  const double hi = std::nextafter(lo, q > 0 ? HUGE_VAL : -HUGE_VAL);
  const Rational d_lo = abs(q - Rational(lo));
  const Rational d_hi = abs(Rational(hi) - q);
  if (d_lo != d_hi) return d_lo < d_hi ? lo : hi;
  std::int64_t bits = 0;
  std::memcpy(&bits, &lo, sizeof bits);
  return bits % 2 == 0 ? lo : hi;
}

double BoundResult::miss_ratio() const {
  if (requests == 0) return 0.0;
  if (exact_misses) return nearest_double(*exact_misses / Rational(requests));
  return misses / static_cast<double>(requests);
}

BoundResult make_bound(std::string method, std::uint64_t capacity, std::size_t requests,
                       const Rational& misses, BoundKind kind) {
  BoundResult r;
  r.method = std::move(method);
  r.capacity = capacity;
  r.requests = requests;
  r.misses = nearest_double(misses);
  r.exact_misses = misses;
  r.kind = kind;
  return r;
}

}  // namespace optbound
