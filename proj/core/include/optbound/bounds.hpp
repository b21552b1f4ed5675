#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "optbound/mincostflow.hpp"

namespace optbound {

enum class BoundKind { kLower, kUpper, kExact, kHeuristic };

std::string_view to_string(BoundKind kind);
BoundKind parse_bound_kind(std::string_view text);

/// Float uses double edge costs; Exact uses arbitrary-precision rationals and
/// zero integrality tolerances.
enum class NumericMode { kFloat, kExact };

/// The double nearest to q (ties to even); GMP's own conversion truncates.
double nearest_double(const Rational& q);

/// Miss count of one method at one cache capacity. Misses include the
/// compulsory miss on every object's first request.
struct BoundResult {
  std::string method;
  std::uint64_t capacity = 0;
  std::size_t requests = 0;
  double misses = 0.0;
  /// Set when the method computes its miss count exactly.
  std::optional<Rational> exact_misses;
  BoundKind kind = BoundKind::kHeuristic;
  double runtime_ms = 0.0;

  /// Correctly rounded from exact_misses when present.
  double miss_ratio() const;
};

BoundResult make_bound(std::string method, std::uint64_t capacity, std::size_t requests,
                       const Rational& misses, BoundKind kind);

class DegenerateTraceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace optbound
