#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "optbound/bounds.hpp"
#include "optbound/trace.hpp"

namespace optbound {

// All simulators count a miss for every request whose object is not
// resident, never let resident bytes exceed C, and let objects larger than
// C bypass the cache.
//
// Belady, Belady-Size and Freq/Size are offline knapsack-style policies: on
// a miss the incoming object competes with the residents, and if it ranks
// as the first victim it is simply not admitted. LRU and GDSF always admit.

/// Evicts the object whose next use is furthest away; objects never used
/// again go first, ties go to the larger object.
BoundResult simulate_belady(const Trace& trace, std::uint64_t capacity);

/// Sentinel for sample_k: scan every resident instead of sampling.
inline constexpr std::size_t kExactScan = std::numeric_limits<std::size_t>::max();

/// Evicts the candidate with the largest size x next-use distance, ties
/// going to the larger object, then the higher id. With
/// sample_k < kExactScan, each eviction compares sample_k residents drawn
/// without replacement (plus the incoming object) using a generator seeded
/// with `seed`.
BoundResult simulate_belady_size(const Trace& trace, std::uint64_t capacity,
                                 std::size_t sample_k = 64, std::uint64_t seed = 1);

/// Evicts the candidate with the lowest whole-trace request count / size;
/// ties go to the lower object id.
BoundResult simulate_freq_size(const Trace& trace, std::uint64_t capacity);

BoundResult simulate_lru(const Trace& trace, std::uint64_t capacity);

/// Priority = clock + requests so far / size. Evicts the lowest priority
/// (earliest admission on ties) and advances the clock to it.
BoundResult simulate_gdsf(const Trace& trace, std::uint64_t capacity);

/// Compulsory misses only.
BoundResult infinite_cap(const Trace& trace);

inline constexpr std::size_t kBruteForceGuard = 22;
inline constexpr std::size_t kCrossCheckGuard = 12;

class OracleGuardError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BruteForceResult {
  BoundResult bound;
  /// One optimal integral decision per interval (interval order).
  std::vector<char> cached;
};

/// Exact OPT by enumerating interval decisions. A cached interval [i, l)
/// holds its bytes at every request t with i <= t < l, and the bytes held
/// at each request must not exceed C. Instances with at most
/// kCrossCheckGuard intervals are also solved by cache_state_opt, and a
/// disagreement throws std::logic_error. Throws OracleGuardError above
/// kBruteForceGuard intervals.
BruteForceResult brute_force_opt(const Trace& trace, std::uint64_t capacity);

inline constexpr std::size_t kCacheStateGuard = 16;

/// Exact OPT by dynamic programming over cache contents after each request:
/// the contents after request t are any subset of (contents before t plus
/// the requested object) that fits in C. Throws OracleGuardError when the
/// trace has more than kCacheStateGuard objects.
std::size_t cache_state_opt(const Trace& trace, std::uint64_t capacity);

}  // namespace optbound
