#include "optbound/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <list>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>

#include "optbound/intervals.hpp"

namespace optbound {

namespace {
__extension__ typedef unsigned __int128 Wide;
}  // namespace

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

BoundResult finish(const char* method, const Trace& trace, std::uint64_t capacity,
                   std::size_t misses, BoundKind kind, Clock::time_point started) {
  BoundResult r = make_bound(method, capacity, trace.size(),
                             Rational(static_cast<unsigned long>(misses)), kind);
  r.runtime_ms = ms_since(started);
  return r;
}

// Resident bytes bookkeeping shared by all simulators.
class Occupancy {
 public:
  explicit Occupancy(std::uint64_t capacity) : capacity_(capacity) {}

  bool fits(std::uint64_t size) const { return used_ + size <= capacity_; }
  void add(std::uint64_t size) {
    used_ += size;
    if (used_ > capacity_) {
      throw std::logic_error("simulator exceeded cache capacity: " + std::to_string(used_) +
                             " > " + std::to_string(capacity_));
    }
  }
  void remove(std::uint64_t size) { used_ -= size; }

 private:
  std::uint64_t capacity_;
  std::uint64_t used_ = 0;
};

// Offline policy where the incoming object competes with residents. Each
// resident has a rank key; the largest key is evicted first. `Key` must be
// totally ordered and distinct per object.
template <typename Key, typename KeyOf>
std::size_t simulate_ranked(const Trace& trace, std::uint64_t capacity, KeyOf key_of) {
  Occupancy occupancy(capacity);
  std::vector<char> resident(trace.num_objects(), 0);
  std::vector<Key> current(trace.num_objects());
  std::set<Key> ranking;
  std::size_t misses = 0;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const Request& r = trace[t];
    const Key key = key_of(t);
    if (resident[r.object]) {
      ranking.erase(current[r.object]);
      ranking.insert(key);
      current[r.object] = key;
      continue;
    }
    ++misses;
    if (r.size > capacity) continue;
    bool admit = true;
    while (!occupancy.fits(r.size)) {
      auto victim = std::prev(ranking.end());
      if (*victim < key) {
        admit = false;
        break;
      }
      const ObjectId o = std::get<ObjectId>(*victim);
      ranking.erase(victim);
      resident[o] = 0;
      occupancy.remove(trace.object_size(o));
    }
    if (!admit) continue;
    ranking.insert(key);
    current[r.object] = key;
    resident[r.object] = 1;
    occupancy.add(r.size);
  }
  return misses;
}

}  // namespace

BoundResult simulate_belady(const Trace& trace, std::uint64_t capacity) {
  const auto started = Clock::now();
  const auto next = compute_next_uses(trace);
  // (next use, size, object): furthest next use first, then larger size.
  using Key = std::tuple<std::size_t, std::uint64_t, ObjectId>;
  const std::size_t misses = simulate_ranked<Key>(trace, capacity, [&](std::size_t t) {
    return Key{next[t], trace[t].size, trace[t].object};
  });
  return finish("belady", trace, capacity, misses, BoundKind::kHeuristic, started);
}

BoundResult simulate_freq_size(const Trace& trace, std::uint64_t capacity) {
  const auto started = Clock::now();
  std::vector<std::uint64_t> frequency(trace.num_objects(), 0);
  for (const Request& r : trace.requests()) ++frequency[r.object];

  // Largest key = lowest utility frequency / size, lower object id on ties.
  struct Key {
    std::uint64_t frequency;
    std::uint64_t size;
    ObjectId object;
    bool operator<(const Key& o) const {
      const auto lhs = static_cast<Wide>(frequency) * o.size;
      const auto rhs = static_cast<Wide>(o.frequency) * size;
      if (lhs != rhs) return lhs > rhs;
      return object > o.object;
    }
  };
  Occupancy occupancy(capacity);
  std::vector<char> resident(trace.num_objects(), 0);
  std::set<Key> ranking;
  std::size_t misses = 0;
  for (const Request& r : trace.requests()) {
    if (resident[r.object]) continue;
    ++misses;
    if (r.size > capacity) continue;
    const Key key{frequency[r.object], r.size, r.object};
    bool admit = true;
    while (!occupancy.fits(r.size)) {
      auto victim = std::prev(ranking.end());
      if (*victim < key) {
        admit = false;
        break;
      }
      resident[victim->object] = 0;
      occupancy.remove(victim->size);
      ranking.erase(victim);
    }
    if (!admit) continue;
    ranking.insert(key);
    resident[r.object] = 1;
    occupancy.add(r.size);
  }
  return finish("freq-size", trace, capacity, misses, BoundKind::kHeuristic, started);
}

BoundResult simulate_belady_size(const Trace& trace, std::uint64_t capacity, std::size_t sample_k,
                                 std::uint64_t seed) {
  if (sample_k == 0) throw std::invalid_argument("sample_k must be at least 1");
  const auto started = Clock::now();
  const auto next = compute_next_uses(trace);
  constexpr Wide kNever = ~Wide{0};
  // Eviction key of an object whose next use is `next_use`, seen at t: cost,
  // then size, then id, so ties resolve as in Belady.
  auto key = [&](std::size_t t, std::size_t next_use, ObjectId object) {
    const std::uint64_t size = trace.object_size(object);
    const auto cost = next_use == kNoNextUse ? kNever
                                             : static_cast<Wide>(size) * (next_use - t);
    return std::make_tuple(cost, size, object);
  };

  Occupancy occupancy(capacity);
  std::mt19937_64 rng(seed);
  std::vector<ObjectId> residents;               // swap-remove pool
  std::vector<std::size_t> slot(trace.num_objects(), kNoNextUse);
  std::vector<std::size_t> next_use(trace.num_objects(), kNoNextUse);
  std::vector<std::size_t> picks;
  std::size_t misses = 0;

  auto evict = [&](std::size_t pos) {
    const ObjectId o = residents[pos];
    residents[pos] = residents.back();
    slot[residents[pos]] = pos;
    residents.pop_back();
    slot[o] = kNoNextUse;
    occupancy.remove(trace.object_size(o));
  };

  for (std::size_t t = 0; t < trace.size(); ++t) {
    const Request& r = trace[t];
    next_use[r.object] = next[t];
    if (slot[r.object] != kNoNextUse) continue;
    ++misses;
    if (r.size > capacity) continue;
    const auto incoming = key(t, next[t], r.object);
    bool admit = true;
    while (!occupancy.fits(r.size)) {
      picks.clear();
      if (sample_k >= residents.size()) {
        for (std::size_t i = 0; i < residents.size(); ++i) picks.push_back(i);
      } else {
        // Floyd's sampling of sample_k distinct positions.
        for (std::size_t j = residents.size() - sample_k; j < residents.size(); ++j) {
          std::size_t v = std::uniform_int_distribution<std::size_t>(0, j)(rng);
          if (std::find(picks.begin(), picks.end(), v) != picks.end()) v = j;
          picks.push_back(v);
        }
        std::sort(picks.begin(), picks.end());
      }
      std::size_t best = picks.front();
      auto best_key = key(t, next_use[residents[best]], residents[best]);
      for (std::size_t pos : picks) {
        const auto k = key(t, next_use[residents[pos]], residents[pos]);
        if (k > best_key) {
          best = pos;
          best_key = k;
        }
      }
      if (incoming > best_key) {
        admit = false;
        break;
      }
      evict(best);
    }
    if (!admit) continue;
    slot[r.object] = residents.size();
    residents.push_back(r.object);
    occupancy.add(r.size);
  }
  return finish("belady-size", trace, capacity, misses, BoundKind::kHeuristic, started);
}

BoundResult simulate_lru(const Trace& trace, std::uint64_t capacity) {
  const auto started = Clock::now();
  Occupancy occupancy(capacity);
  std::list<ObjectId> recency;  // most recent at the front
  std::vector<std::list<ObjectId>::iterator> where(trace.num_objects(), recency.end());
  std::size_t misses = 0;
  for (const Request& r : trace.requests()) {
    if (where[r.object] != recency.end()) {
      recency.splice(recency.begin(), recency, where[r.object]);
      continue;
    }
    ++misses;
    if (r.size > capacity) continue;
    while (!occupancy.fits(r.size)) {
      const ObjectId victim = recency.back();
      recency.pop_back();
      where[victim] = recency.end();
      occupancy.remove(trace.object_size(victim));
    }
    recency.push_front(r.object);
    where[r.object] = recency.begin();
    occupancy.add(r.size);
  }
  return finish("lru", trace, capacity, misses, BoundKind::kHeuristic, started);
}

BoundResult simulate_gdsf(const Trace& trace, std::uint64_t capacity) {
  const auto started = Clock::now();
  struct Entry {
    double priority;
    std::uint64_t sequence;  // admission or last-hit order
    ObjectId object;
    bool operator<(const Entry& o) const {
      return std::tie(priority, sequence) < std::tie(o.priority, o.sequence);
    }
  };
  Occupancy occupancy(capacity);
  std::set<Entry> queue;
  std::vector<std::set<Entry>::iterator> where(trace.num_objects(), queue.end());
  std::vector<std::uint64_t> seen(trace.num_objects(), 0);
  double clock = 0.0;
  std::uint64_t sequence = 0;
  std::size_t misses = 0;
  for (const Request& r : trace.requests()) {
    ++seen[r.object];
    const double priority =
        clock + static_cast<double>(seen[r.object]) / static_cast<double>(r.size);
    if (where[r.object] != queue.end()) {
      queue.erase(where[r.object]);
      where[r.object] = queue.insert(Entry{priority, sequence++, r.object}).first;
      continue;
    }
    ++misses;
    if (r.size > capacity) continue;
    while (!occupancy.fits(r.size)) {
      const Entry victim = *queue.begin();
      queue.erase(queue.begin());
      where[victim.object] = queue.end();
      clock = victim.priority;
      occupancy.remove(trace.object_size(victim.object));
    }
    // The clock may have advanced while making room.
    const double admitted =
        clock + static_cast<double>(seen[r.object]) / static_cast<double>(r.size);
    where[r.object] = queue.insert(Entry{admitted, sequence++, r.object}).first;
    occupancy.add(r.size);
  }
  return finish("gdsf", trace, capacity, misses, BoundKind::kHeuristic, started);
}

BoundResult infinite_cap(const Trace& trace) {
  const auto started = Clock::now();
  return finish("infinite-cap", trace, 0, trace.num_objects(), BoundKind::kLower, started);
}

namespace {

class IntervalEnumerator {
 public:
  IntervalEnumerator(const IntervalSet& intervals, std::uint64_t capacity)
      : iv_(intervals), capacity_(capacity), load_(intervals.trace_length(), 0),
        choice_(intervals.size(), 0), best_choice_(intervals.size(), 0) {}

  std::size_t solve() {
    best_ = iv_.size() + 1;
    search(0, 0);
    return best_;
  }

  const std::vector<char>& best_choice() const { return best_choice_; }

 private:
  void search(std::size_t k, std::size_t uncached) {
    if (uncached >= best_) return;
    if (k == iv_.size()) {
      best_ = uncached;
      best_choice_ = choice_;
      return;
    }
    const Interval& iv = iv_[k];
    bool fits = iv.size <= capacity_;
    for (std::size_t t = iv.start; fits && t < iv.end; ++t) fits = load_[t] + iv.size <= capacity_;
    if (fits) {
      for (std::size_t t = iv.start; t < iv.end; ++t) load_[t] += iv.size;
      choice_[k] = 1;
      search(k + 1, uncached);
      choice_[k] = 0;
      for (std::size_t t = iv.start; t < iv.end; ++t) load_[t] -= iv.size;
    }
    search(k + 1, uncached + 1);
  }

  const IntervalSet& iv_;
  std::uint64_t capacity_;
  std::vector<std::uint64_t> load_;
  std::vector<char> choice_;
  std::vector<char> best_choice_;
  std::size_t best_ = 0;
};

}  // namespace

BruteForceResult brute_force_opt(const Trace& trace, std::uint64_t capacity) {
  const auto started = Clock::now();
  const IntervalSet intervals = build_intervals(trace);
  if (intervals.size() > kBruteForceGuard) {
    throw OracleGuardError("brute-force oracle refuses " + std::to_string(intervals.size()) +
                           " intervals (limit " + std::to_string(kBruteForceGuard) + ")");
  }
  IntervalEnumerator enumerator(intervals, capacity);
  const std::size_t misses = trace.num_objects() + enumerator.solve();
  if (intervals.size() <= kCrossCheckGuard && trace.num_objects() <= kCacheStateGuard) {
    const std::size_t replayed = cache_state_opt(trace, capacity);
    if (replayed != misses) {
      throw std::logic_error("interval enumeration (" + std::to_string(misses) +
                             " misses) disagrees with cache-state search (" +
                             std::to_string(replayed) + ")");
    }
  }
  BruteForceResult r;
  r.bound = finish("brute-force", trace, capacity, misses, BoundKind::kExact, started);
  r.cached = enumerator.best_choice();
  return r;
}

std::size_t cache_state_opt(const Trace& trace, std::uint64_t capacity) {
  const std::size_t objects = trace.num_objects();
  if (objects > kCacheStateGuard) {
    throw OracleGuardError("cache-state oracle refuses " + std::to_string(objects) +
                           " objects (limit " + std::to_string(kCacheStateGuard) + ")");
  }
  const std::size_t states = std::size_t{1} << objects;
  std::vector<std::uint64_t> bytes(states, 0);
  for (std::size_t s = 1; s < states; ++s) {
    const auto low = static_cast<ObjectId>(__builtin_ctzll(s));
    bytes[s] = bytes[s & (s - 1)] + trace.object_size(low);
  }
  constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> best(states, kUnreached);
  std::vector<std::size_t> next(states);
  best[0] = 0;
  for (const Request& r : trace.requests()) {
    std::fill(next.begin(), next.end(), kUnreached);
    const std::size_t bit = std::size_t{1} << r.object;
    for (std::size_t s = 0; s < states; ++s) {
      if (best[s] == kUnreached) continue;
      const std::size_t cost = best[s] + ((s & bit) ? 0 : 1);
      const std::size_t base = s | bit;
      // Every subset of the contents plus the requested object that fits.
      for (std::size_t sub = base;; sub = (sub - 1) & base) {
        if (bytes[sub] <= capacity) next[sub] = std::min(next[sub], cost);
        if (sub == 0) break;
      }
    }
    best.swap(next);
  }
  return *std::min_element(best.begin(), best.end());
}

}  // namespace optbound
