#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace optbound::testing {

namespace {

struct Arc {
  std::size_t to;
  Flow cap;
  Rational cost;
  std::size_t rev;
};

using Adjacency = std::vector<std::vector<Arc>>;

void add_arc(Adjacency& adj, std::size_t a, std::size_t b, Flow cap, const Rational& cost) {
  adj[a].push_back(Arc{b, cap, cost, adj[b].size()});
  adj[b].push_back(Arc{a, 0, -cost, adj[a].size() - 1});
}

}  // namespace

std::optional<Rational> cycle_canceling_cost(const FlowGraph<Rational>& g) {
  const std::size_t n = g.node_count;
  const std::size_t s = n;
  const std::size_t t = n + 1;
  Adjacency adj(n + 2);
  std::vector<std::pair<std::size_t, std::size_t>> edge_pos;
  for (const auto& e : g.edges) {
    edge_pos.emplace_back(e.from, adj[e.from].size());
    add_arc(adj, e.from, e.to, e.capacity, e.cost);
  }
  Flow need = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (g.supplies[v] > 0) {
      add_arc(adj, s, v, g.supplies[v], 0);
      need += g.supplies[v];
    } else if (g.supplies[v] < 0) {
      add_arc(adj, v, t, -g.supplies[v], 0);
    }
  }
  // Feasible flow by shortest (BFS) augmenting paths.
  Flow sent = 0;
  for (;;) {
    std::vector<std::pair<std::size_t, std::size_t>> parent(n + 2, {SIZE_MAX, 0});
    std::deque<std::size_t> q{s};
    parent[s] = {s, 0};
    while (!q.empty() && parent[t].first == SIZE_MAX) {
      const std::size_t u = q.front();
      q.pop_front();
      for (std::size_t i = 0; i < adj[u].size(); ++i) {
        const Arc& a = adj[u][i];
        if (a.cap > 0 && parent[a.to].first == SIZE_MAX) {
          parent[a.to] = {u, i};
          q.push_back(a.to);
        }
      }
    }
    if (parent[t].first == SIZE_MAX) break;
    Flow b = std::numeric_limits<Flow>::max();
    for (std::size_t v = t; v != s; v = parent[v].first) {
      b = std::min(b, adj[parent[v].first][parent[v].second].cap);
    }
    for (std::size_t v = t; v != s; v = parent[v].first) {
      Arc& a = adj[parent[v].first][parent[v].second];
      a.cap -= b;
      adj[a.to][a.rev].cap += b;
    }
    sent += b;
  }
  if (sent != need) return std::nullopt;

  // Cancel negative cycles among the original nodes.
  for (;;) {
    std::vector<Rational> dist(n, 0);
    std::vector<std::pair<std::size_t, std::size_t>> pred(n, {SIZE_MAX, 0});
    std::size_t touched = SIZE_MAX;
    for (std::size_t round = 0; round < n; ++round) {
      touched = SIZE_MAX;
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t i = 0; i < adj[u].size(); ++i) {
          const Arc& a = adj[u][i];
          if (a.cap <= 0 || a.to >= n) continue;
          if (dist[u] + a.cost < dist[a.to]) {
            dist[a.to] = dist[u] + a.cost;
            pred[a.to] = {u, i};
            touched = a.to;
          }
        }
      }
      if (touched == SIZE_MAX) break;
    }
    if (touched == SIZE_MAX) break;
    std::size_t v = touched;
    for (std::size_t i = 0; i < n; ++i) v = pred[v].first;
    std::vector<std::pair<std::size_t, std::size_t>> cycle;
    std::size_t u = v;
    do {
      cycle.push_back(pred[u]);
      u = pred[u].first;
    } while (u != v);
    Flow b = std::numeric_limits<Flow>::max();
    for (auto [x, i] : cycle) b = std::min(b, adj[x][i].cap);
    for (auto [x, i] : cycle) {
      Arc& a = adj[x][i];
      a.cap -= b;
      adj[a.to][a.rev].cap += b;
    }
  }

  Rational cost = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const Arc& a = adj[edge_pos[e].first][edge_pos[e].second];
    cost += g.edges[e].cost * Rational(g.edges[e].capacity - a.cap);
  }
  return cost;
}

Rational interval_lp_max_hits(const IntervalSet& intervals, std::uint64_t capacity) {
  // max c.x subject to A x <= b, x >= 0, with b >= 0 so the slack basis is
  // feasible. Rows: one per request, then one x_k <= 1 per interval.
  const std::size_t k = intervals.size();
  const std::size_t times = intervals.trace_length();
  const std::size_t rows = times + k;
  const std::size_t cols = k + rows;  // structural then slack variables
  std::vector<std::vector<Rational>> tab(rows, std::vector<Rational>(cols + 1, 0));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t t = intervals[j].start; t < intervals[j].end; ++t) {
      tab[t][j] = Rational(static_cast<unsigned long>(intervals[j].size));
    }
    tab[times + j][j] = 1;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    tab[r][k + r] = 1;
    if (r < times) {
      tab[r][cols] = Rational(static_cast<unsigned long>(capacity));
    } else {
      tab[r][cols] = intervals[r - times].size <= capacity ? 1 : 0;
    }
  }
  std::vector<Rational> obj(cols + 1, 0);  // reduced costs of the maximization
  for (std::size_t j = 0; j < k; ++j) obj[j] = 1;
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) basis[r] = k + r;

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (obj[j] > 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = rows;
    Rational best_ratio;
    for (std::size_t r = 0; r < rows; ++r) {
      if (tab[r][enter] <= 0) continue;
      const Rational ratio = tab[r][cols] / tab[r][enter];
      if (leave == rows || ratio < best_ratio ||
          (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == rows) throw std::logic_error("interval LP is unbounded");
    const Rational pivot = tab[leave][enter];
    for (auto& v : tab[leave]) v /= pivot;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave || tab[r][enter] == 0) continue;
      const Rational f = tab[r][enter];
      for (std::size_t j = 0; j <= cols; ++j) tab[r][j] -= f * tab[leave][j];
    }
    const Rational f = obj[enter];
    for (std::size_t j = 0; j <= cols; ++j) obj[j] -= f * tab[leave][j];
    basis[leave] = enter;
  }
  return -obj[cols];
}

std::size_t textbook_lru_misses(const Trace& trace, std::uint64_t capacity) {
  std::vector<ObjectId> stack;  // most recent first
  std::uint64_t used = 0;
  std::size_t misses = 0;
  for (const Request& r : trace.requests()) {
    auto it = std::find(stack.begin(), stack.end(), r.object);
    if (it != stack.end()) {
      stack.erase(it);
      stack.insert(stack.begin(), r.object);
      continue;
    }
    ++misses;
    if (r.size > capacity) continue;
    while (used + r.size > capacity) {
      used -= trace.object_size(stack.back());
      stack.pop_back();
    }
    stack.insert(stack.begin(), r.object);
    used += r.size;
  }
  return misses;
}

std::size_t slow_gdsf_misses(const Trace& trace, std::uint64_t capacity) {
  struct Slot {
    ObjectId object;
    double priority;
    std::uint64_t order;
  };
  std::vector<Slot> cache;
  std::vector<std::uint64_t> count(trace.num_objects(), 0);
  double clock = 0;
  std::uint64_t order = 0;
  std::uint64_t used = 0;
  std::size_t misses = 0;
  for (const Request& r : trace.requests()) {
    ++count[r.object];
    auto it = std::find_if(cache.begin(), cache.end(),
                           [&](const Slot& s) { return s.object == r.object; });
    if (it != cache.end()) {
      it->priority = clock + static_cast<double>(count[r.object]) / static_cast<double>(r.size);
      it->order = order++;
      continue;
    }
    ++misses;
    if (r.size > capacity) continue;
    while (used + r.size > capacity) {
      auto victim = cache.begin();
      for (auto s = cache.begin(); s != cache.end(); ++s) {
        if (s->priority < victim->priority ||
            (s->priority == victim->priority && s->order < victim->order)) {
          victim = s;
        }
      }
      clock = victim->priority;
      used -= trace.object_size(victim->object);
      cache.erase(victim);
    }
    cache.push_back(
        {r.object, clock + static_cast<double>(count[r.object]) / static_cast<double>(r.size), order++});
    used += r.size;
  }
  return misses;
}

std::size_t full_scan_belady_size_misses(const Trace& trace, std::uint64_t capacity) {
  // Next use of every request by forward search.
  const std::size_t n = trace.size();
  std::vector<std::size_t> next(n, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (trace[j].object == trace[i].object) {
        next[i] = j;
        break;
      }
    }
  }
  // (cost, size, id); the largest is evicted first.
  auto key = [&](std::size_t now, std::size_t nu, ObjectId o) {
    const std::uint64_t size = trace.object_size(o);
    const long double cost = nu == SIZE_MAX ? std::numeric_limits<long double>::infinity()
                                            : static_cast<long double>(size) *
                                                  static_cast<long double>(nu - now);
    return std::make_tuple(cost, size, o);
  };
  std::vector<std::pair<ObjectId, std::size_t>> cache;  // object, its next use
  std::uint64_t used = 0;
  std::size_t misses = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const Request& r = trace[t];
    auto it = std::find_if(cache.begin(), cache.end(), [&](auto& p) { return p.first == r.object; });
    if (it != cache.end()) {
      it->second = next[t];
      continue;
    }
    ++misses;
    if (r.size > capacity) continue;
    bool admit = true;
    while (used + r.size > capacity) {
      auto victim = cache.begin();
      for (auto c = cache.begin(); c != cache.end(); ++c) {
        if (key(t, c->second, c->first) > key(t, victim->second, victim->first)) victim = c;
      }
      if (key(t, next[t], r.object) > key(t, victim->second, victim->first)) {
        admit = false;
        break;
      }
      used -= trace.object_size(victim->first);
      cache.erase(victim);
    }
    if (!admit) continue;
    cache.emplace_back(r.object, next[t]);
    used += r.size;
  }
  return misses;
}

bool schedule_fits(const std::vector<char>& cached, const IntervalSet& intervals,
                   std::uint64_t capacity) {
  for (std::size_t t = 0; t < intervals.trace_length(); ++t) {
    std::uint64_t held = 0;
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      if (cached[k] && intervals[k].start <= t && t < intervals[k].end) held += intervals[k].size;
    }
    if (held > capacity) return false;
  }
  return true;
}

}  // namespace optbound::testing
