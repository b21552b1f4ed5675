#include "optbound/mincostflow.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <utility>

namespace optbound {

InfeasibleFlowError::InfeasibleFlowError(std::vector<std::size_t> cut, Flow cut_supply,
                                         Flow cut_capacity)
    : std::runtime_error("infeasible flow: a cut of " + std::to_string(cut.size()) +
                         " node(s) has net supply " + std::to_string(cut_supply) +
                         " but only " + std::to_string(cut_capacity) +
                         " units of outgoing capacity"),
      cut_(std::move(cut)),
      cut_supply_(cut_supply),
      cut_capacity_(cut_capacity) {}

namespace {

constexpr Flow kInfiniteFlow = std::numeric_limits<Flow>::max();

template <typename Cost>
void validate(const FlowGraph<Cost>& g) {
  if (g.supplies.size() != g.node_count) {
    throw FlowInputError("supplies has " + std::to_string(g.supplies.size()) +
                         " entries for " + std::to_string(g.node_count) + " nodes");
  }
  Flow balance = 0;
  for (Flow b : g.supplies) {
    if (__builtin_add_overflow(balance, b, &balance)) throw FlowInputError("supply overflow");
  }
  if (balance != 0) throw FlowInputError("supplies sum to " + std::to_string(balance) + ", not 0");
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    if (edge.from >= g.node_count || edge.to >= g.node_count) {
      throw FlowInputError("edge " + std::to_string(e) + " references a missing node");
    }
    if (edge.capacity < 0) throw FlowInputError("edge " + std::to_string(e) + " has negative capacity");
    if (!CostTraits<Cost>::is_valid(edge.cost)) {
      throw FlowInputError("edge " + std::to_string(e) + " has a non-finite cost");
    }
  }
}

// Residual network in CSR form. Arc 2e is edge e forward, 2e+1 its reverse;
// arcs past 2m connect the super source/sink.
template <typename Cost>
struct Network {
  std::size_t nodes = 0;
  std::size_t source = 0;
  std::size_t sink = 0;
  std::vector<std::size_t> head;
  std::vector<Flow> cap;
  std::vector<Cost> cost;
  std::vector<std::size_t> first;
  std::vector<std::size_t> adj;

  std::size_t tail(std::size_t arc) const { return head[arc ^ 1U]; }

  void add_arc_pair(std::size_t from, std::size_t to, Flow capacity, const Cost& c) {
    head.push_back(to);
    cap.push_back(capacity);
    cost.push_back(c);
    head.push_back(from);
    cap.push_back(0);
    cost.push_back(-c);
  }

  void finalize() {
    first.assign(nodes + 1, 0);
    for (std::size_t a = 0; a < head.size(); ++a) ++first[tail(a) + 1];
    for (std::size_t v = 0; v < nodes; ++v) first[v + 1] += first[v];
    adj.resize(head.size());
    std::vector<std::size_t> fill(first.begin(), first.end() - 1);
    for (std::size_t a = 0; a < head.size(); ++a) adj[fill[tail(a)]++] = a;
  }

  // Orders each adjacency list by head node, so stack-driven searches visit
  // higher-indexed neighbours first.
  void sort_by_head() {
    for (std::size_t v = 0; v < nodes; ++v) {
      std::sort(adj.begin() + static_cast<std::ptrdiff_t>(first[v]),
                adj.begin() + static_cast<std::ptrdiff_t>(first[v + 1]),
                [this](std::size_t a, std::size_t b) { return head[a] < head[b]; });
    }
  }
};

// Dinic blocking flows from source to sink over arcs accepted by `ok`.
template <typename Cost>
class Dinic {
 public:
  explicit Dinic(Network<Cost>& net)
      : net_(net), level_(net.nodes, -1), cur_(net.nodes, 0) {}

  template <typename ArcOk>
  Flow run(ArcOk ok, Flow limit, std::size_t& augmentations) {
    Flow total = 0;
    while (total < limit && bfs(ok)) {
      for (std::size_t v : touched_) cur_[v] = net_.first[v];
      total += augment(ok, limit - total, augmentations);
    }
    return total;
  }

  // Nodes reachable from the source over arcs with residual capacity.
  std::vector<bool> reachable() const {
    std::vector<bool> seen(net_.nodes, false);
    std::vector<std::size_t> stack{net_.source};
    seen[net_.source] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t i = net_.first[u]; i < net_.first[u + 1]; ++i) {
        const std::size_t a = net_.adj[i];
        const std::size_t v = net_.head[a];
        if (net_.cap[a] > 0 && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    return seen;
  }

 private:
  template <typename ArcOk>
  bool bfs(ArcOk& ok) {
    for (std::size_t v : touched_) level_[v] = -1;
    touched_.clear();
    level_[net_.source] = 0;
    touched_.push_back(net_.source);
    for (std::size_t qi = 0; qi < touched_.size(); ++qi) {
      const std::size_t u = touched_[qi];
      if (level_[net_.sink] >= 0 && level_[u] >= level_[net_.sink]) break;
      for (std::size_t i = net_.first[u]; i < net_.first[u + 1]; ++i) {
        const std::size_t a = net_.adj[i];
        const std::size_t v = net_.head[a];
        if (level_[v] < 0 && net_.cap[a] > 0 && ok(a)) {
          level_[v] = level_[u] + 1;
          touched_.push_back(v);
        }
      }
    }
    return level_[net_.sink] >= 0;
  }

  template <typename ArcOk>
  Flow augment(ArcOk& ok, Flow limit, std::size_t& augmentations) {
    Flow pushed = 0;
    path_.clear();
    std::size_t u = net_.source;
    while (pushed < limit) {
      if (u == net_.sink) {
        Flow bottleneck = limit - pushed;
        for (std::size_t a : path_) bottleneck = std::min(bottleneck, net_.cap[a]);
        for (std::size_t a : path_) {
          net_.cap[a] -= bottleneck;
          net_.cap[a ^ 1U] += bottleneck;
        }
        pushed += bottleneck;
        ++augmentations;
        std::size_t k = 0;
        while (k < path_.size() && net_.cap[path_[k]] > 0) ++k;
        path_.resize(std::min(k, path_.size()));
        u = path_.empty() ? net_.source : net_.head[path_.back()];
        continue;
      }
      bool advanced = false;
      for (; cur_[u] < net_.first[u + 1]; ++cur_[u]) {
        const std::size_t a = net_.adj[cur_[u]];
        const std::size_t v = net_.head[a];
        if (net_.cap[a] > 0 && level_[v] == level_[u] + 1 && ok(a)) {
          path_.push_back(a);
          u = v;
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        level_[u] = -1;
        if (path_.empty()) break;
        const std::size_t a = path_.back();
        path_.pop_back();
        u = net_.tail(a);
        ++cur_[u];
      }
    }
    return pushed;
  }

  Network<Cost>& net_;
  std::vector<int> level_;
  std::vector<std::size_t> cur_;
  std::vector<std::size_t> touched_;
  std::vector<std::size_t> path_;
};

template <typename Cost>
double max_abs_cost(const FlowGraph<Cost>& g) {
  double m = 0.0;
  for (const auto& e : g.edges) m = std::max(m, std::abs(CostTraits<Cost>::to_double(e.cost)));
  return m;
}

template <typename Cost>
class PrimalDual {
 public:
  PrimalDual(Network<Cost>& net, double admissible_eps)
      : net_(net),
        eps_(admissible_eps),
        pot_(net.nodes, Cost(0)),
        dist_(net.nodes, Cost(0)),
        parent_(net.nodes, 0),
        reached_(net.nodes, 0),
        settled_(net.nodes, 0),
        dinic_(net) {}

  void run(Flow required, SolveStats& stats) {
    Flow sent = 0;
    while (sent < required) {
      ++stats.phases;
      if (!shortest_paths()) {
        throw std::logic_error("min-cost flow: sink unreachable after feasibility check");
      }
      auto admissible = [this](std::size_t a) {
        const std::size_t v = net_.head[a];
        return settled_[v] == stamp_ && is_zero_reduced(a);
      };
      Flow pushed = dinic_.run(admissible, required - sent, stats.augmentations);
      if (pushed == 0) pushed = augment_tree_path(required - sent, stats);
      sent += pushed;
    }
  }

  // Drains excess nodes among the first `real_nodes` in index order. Each
  // search starts at one excess node and stops at the first deficit node it
  // settles; the super source and sink are ignored.
  void run_sequential(std::vector<Flow> balance, std::size_t real_nodes, SolveStats& stats) {
    for (std::size_t u = 0; u < real_nodes; ++u) {
      while (balance[u] > 0) {
        ++stats.phases;
        const std::size_t w = nearest_deficit(u, balance, real_nodes);
        if (w == real_nodes) {
          throw std::logic_error("min-cost flow: no deficit reachable after feasibility check");
        }
        Flow bottleneck = std::min(balance[u], -balance[w]);
        for (std::size_t v = w; v != u; v = net_.tail(parent_[v])) {
          bottleneck = std::min(bottleneck, net_.cap[parent_[v]]);
        }
        for (std::size_t v = w; v != u; v = net_.tail(parent_[v])) {
          net_.cap[parent_[v]] -= bottleneck;
          net_.cap[parent_[v] ^ 1U] += bottleneck;
        }
        balance[u] -= bottleneck;
        balance[w] += bottleneck;
        ++stats.augmentations;
      }
    }
  }

  const std::vector<Cost>& potentials() const { return pot_; }

 private:
  Cost reduced(std::size_t a) const {
    return net_.cost[a] + pot_[net_.tail(a)] - pot_[net_.head[a]];
  }

  bool is_zero_reduced(std::size_t a) const {
    if constexpr (CostTraits<Cost>::kExact) {
      return sgn(reduced(a)) == 0;
    } else {
      return reduced(a) <= eps_;
    }
  }

  // Dijkstra from the source on reduced costs, stopping once the sink is
  // settled. Potentials of settled nodes move by dist - dist(sink); all other
  // nodes implicitly move by 0, which keeps every residual reduced cost >= 0.
  bool shortest_paths() {
    ++stamp_;
    settled_list_.clear();
    using Entry = std::pair<Cost, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist_[net_.source] = Cost(0);
    reached_[net_.source] = stamp_;
    heap.emplace(Cost(0), net_.source);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (settled_[u] == stamp_ || d != dist_[u]) continue;
      settled_[u] = stamp_;
      settled_list_.push_back(u);
      if (u == net_.sink) break;
      for (std::size_t i = net_.first[u]; i < net_.first[u + 1]; ++i) {
        const std::size_t a = net_.adj[i];
        if (net_.cap[a] <= 0) continue;
        const std::size_t v = net_.head[a];
        if (settled_[v] == stamp_) continue;
        Cost rc = reduced(a);
        if constexpr (!CostTraits<Cost>::kExact) {
          if (rc < 0) rc = 0;
        }
        Cost nd = d + rc;
        if (reached_[v] != stamp_ || nd < dist_[v]) {
          reached_[v] = stamp_;
          dist_[v] = nd;
          parent_[v] = a;
          heap.emplace(std::move(nd), v);
        }
      }
    }
    if (settled_[net_.sink] != stamp_) return false;
    const Cost sink_dist = dist_[net_.sink];
    for (std::size_t u : settled_list_) pot_[u] += dist_[u] - sink_dist;
    return true;
  }

  // Nodes reached over a zero reduced-cost arc from a node at the current
  // minimum distance share that distance, so they go on a LIFO stack and are
  // settled without touching the heap. Heap ties favour higher node indices;
  // both rules make searches run ahead of the source rather than back over
  // nodes that were already routed.
  std::size_t nearest_deficit(std::size_t source, const std::vector<Flow>& balance,
                              std::size_t real_nodes) {
    ++stamp_;
    settled_list_.clear();
    using Entry = std::pair<Cost, std::size_t>;
    heap_.clear();
    const auto later_first = std::greater<>{};
    const std::size_t flip = real_nodes - 1;
    dist_[source] = Cost(0);
    reached_[source] = stamp_;
    level_stack_.assign(1, source);
    std::size_t target = real_nodes;
    while (true) {
      std::size_t u;
      if (!level_stack_.empty()) {
        u = level_stack_.back();
        level_stack_.pop_back();
        if (settled_[u] == stamp_) continue;
      } else if (!heap_.empty()) {
        std::pop_heap(heap_.begin(), heap_.end(), later_first);
        const Entry top = std::move(heap_.back());
        heap_.pop_back();
        u = flip - top.second;
        if (settled_[u] == stamp_ || top.first != dist_[u]) continue;
      } else {
        break;
      }
      settled_[u] = stamp_;
      settled_list_.push_back(u);
      if (balance[u] < 0) {
        target = u;
        break;
      }
      const Cost& d = dist_[u];
      for (std::size_t i = net_.first[u]; i < net_.first[u + 1]; ++i) {
        const std::size_t a = net_.adj[i];
        if (net_.cap[a] <= 0) continue;
        const std::size_t v = net_.head[a];
        if (v >= real_nodes || settled_[v] == stamp_) continue;
        Cost rc = reduced(a);
        bool level = false;
        if constexpr (CostTraits<Cost>::kExact) {
          level = sgn(rc) == 0;
        } else {
          if (rc < 0) rc = 0;
          level = rc == 0;
        }
        if (level) {
          reached_[v] = stamp_;
          dist_[v] = d;
          parent_[v] = a;
          level_stack_.push_back(v);
          continue;
        }
        Cost nd = d + rc;
        if (reached_[v] != stamp_ || nd < dist_[v]) {
          reached_[v] = stamp_;
          dist_[v] = nd;
          parent_[v] = a;
          heap_.emplace_back(std::move(nd), flip - v);
          std::push_heap(heap_.begin(), heap_.end(), later_first);
        }
      }
    }
    if (target == real_nodes) return target;
    const Cost target_dist = dist_[target];
    for (std::size_t u : settled_list_) pot_[u] += dist_[u] - target_dist;
    return target;
  }

  // Fallback when rounding hides the zero-reduced-cost path: push along the
  // Dijkstra tree path to the sink.
  Flow augment_tree_path(Flow limit, SolveStats& stats) {
    Flow bottleneck = limit;
    for (std::size_t v = net_.sink; v != net_.source; v = net_.tail(parent_[v])) {
      bottleneck = std::min(bottleneck, net_.cap[parent_[v]]);
    }
    for (std::size_t v = net_.sink; v != net_.source; v = net_.tail(parent_[v])) {
      net_.cap[parent_[v]] -= bottleneck;
      net_.cap[parent_[v] ^ 1U] += bottleneck;
    }
    ++stats.augmentations;
    return bottleneck;
  }

  Network<Cost>& net_;
  double eps_;
  std::vector<Cost> pot_;
  std::vector<Cost> dist_;
  std::vector<std::size_t> parent_;
  std::vector<std::uint32_t> reached_;
  std::vector<std::uint32_t> settled_;
  std::vector<std::size_t> settled_list_;
  std::uint32_t stamp_ = 0;
  std::vector<std::pair<Cost, std::size_t>> heap_;
  std::vector<std::size_t> level_stack_;
  Dinic<Cost> dinic_;
};

}  // namespace

template <typename Cost>
FlowSolution<Cost> solve_min_cost_flow(const FlowGraph<Cost>& graph, const SolverOptions& options) {
  validate(graph);
  const std::size_t n = graph.node_count;
  const std::size_t m = graph.edges.size();

  // Saturate negative-cost edges so every residual arc starts with a
  // non-negative cost; the remaining excess is routed by the solver.
  std::vector<Flow> excess = graph.supplies;
  Network<Cost> net;
  net.nodes = n + 2;
  net.source = n;
  net.sink = n + 1;
  net.head.reserve(2 * m + 2 * n);
  net.cap.reserve(2 * m + 2 * n);
  net.cost.reserve(2 * m + 2 * n);
  for (const auto& e : graph.edges) {
    net.add_arc_pair(e.from, e.to, e.capacity, e.cost);
    if (e.cost < 0 && e.capacity > 0) {
      const std::size_t a = net.head.size() - 2;
      net.cap[a] = 0;
      net.cap[a + 1] = e.capacity;
      excess[e.from] -= e.capacity;
      excess[e.to] += e.capacity;
    }
  }
  Flow required = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (excess[v] > 0) {
      net.add_arc_pair(net.source, v, excess[v], Cost(0));
      required += excess[v];
    } else if (excess[v] < 0) {
      net.add_arc_pair(v, net.sink, -excess[v], Cost(0));
    }
  }
  net.finalize();

  {
    const std::vector<Flow> saved = net.cap;
    Dinic<Cost> probe(net);
    std::size_t ignored = 0;
    const Flow routable = probe.run([](std::size_t) { return true; }, kInfiniteFlow, ignored);
    if (routable < required) {
      const auto seen = probe.reachable();
      std::vector<std::size_t> cut;
      Flow cut_supply = 0;
      Flow cut_capacity = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (seen[v]) {
          cut.push_back(v);
          cut_supply += graph.supplies[v];
        }
      }
      for (const auto& e : graph.edges) {
        if (seen[e.from] && !seen[e.to]) cut_capacity += e.capacity;
      }
      throw InfeasibleFlowError(std::move(cut), cut_supply, cut_capacity);
    }
    net.cap = saved;
  }

  FlowSolution<Cost> solution;
  PrimalDual<Cost> solver(net, 1e-12 * std::max(1.0, max_abs_cost(graph)));
  if (options.order == SourceOrder::kSequential) {
    net.sort_by_head();
    excess.resize(net.nodes, 0);
    solver.run_sequential(std::move(excess), n, solution.stats);
  } else {
    solver.run(required, solution.stats);
  }

  solution.flow.resize(m);
  solution.total_cost = Cost(0);
  for (std::size_t e = 0; e < m; ++e) {
    solution.flow[e] = graph.edges[e].capacity - net.cap[2 * e];
    if (solution.flow[e] != 0) solution.total_cost += graph.edges[e].cost * Cost(solution.flow[e]);
  }
  const auto& pot = solver.potentials();
  solution.potentials.assign(pot.begin(), pot.begin() + static_cast<std::ptrdiff_t>(n));
  return solution;
}

template <typename Cost>
OptimalityVerdict verify_optimality(const FlowGraph<Cost>& graph, const FlowSolution<Cost>& solution,
                                    const VerifyOptions& options) {
  validate(graph);
  const std::size_t n = graph.node_count;
  const std::size_t m = graph.edges.size();
  if (solution.flow.size() != m) {
    throw FlowFeasibilityError("solution has " + std::to_string(solution.flow.size()) +
                               " edge flows for " + std::to_string(m) + " edges");
  }
  std::vector<Flow> net_out(n, 0);
  for (std::size_t e = 0; e < m; ++e) {
    const Flow f = solution.flow[e];
    if (f < 0 || f > graph.edges[e].capacity) {
      throw FlowFeasibilityError("edge " + std::to_string(e) + " carries " + std::to_string(f) +
                                 " outside [0, " + std::to_string(graph.edges[e].capacity) + "]");
    }
    net_out[graph.edges[e].from] += f;
    net_out[graph.edges[e].to] -= f;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (net_out[v] != graph.supplies[v]) {
      throw FlowFeasibilityError("node " + std::to_string(v) + " sends " +
                                 std::to_string(net_out[v]) + " net units but has supply " +
                                 std::to_string(graph.supplies[v]));
    }
  }

  struct Arc {
    std::size_t from;
    std::size_t to;
    ResidualArc id;
  };
  std::vector<Arc> arcs;
  for (std::size_t e = 0; e < m; ++e) {
    const auto& edge = graph.edges[e];
    if (solution.flow[e] < edge.capacity) arcs.push_back({edge.from, edge.to, {e, true}});
    if (solution.flow[e] > 0) arcs.push_back({edge.to, edge.from, {e, false}});
  }
  std::vector<std::size_t> first(n + 1, 0);
  for (const Arc& a : arcs) ++first[a.from + 1];
  for (std::size_t v = 0; v < n; ++v) first[v + 1] += first[v];
  std::vector<std::size_t> adj(arcs.size());
  {
    std::vector<std::size_t> fill(first.begin(), first.end() - 1);
    for (std::size_t i = 0; i < arcs.size(); ++i) adj[fill[arcs[i].from]++] = i;
  }
  auto arc_cost = [&](const Arc& a) -> Cost {
    return a.id.forward ? graph.edges[a.id.edge].cost : Cost(-graph.edges[a.id.edge].cost);
  };

  const Cost tolerance = CostTraits<Cost>::kExact
                             ? Cost(0)
                             : Cost(options.relative_tolerance * max_abs_cost(graph));
  std::vector<Cost> label(n, Cost(0));
  if (options.warm_start && solution.potentials.size() == n) label = solution.potentials;

  // FIFO label-correcting search; a parent chain of length n proves a cycle.
  std::vector<std::size_t> parent(n, arcs.size());
  std::vector<std::size_t> depth(n, 0);
  std::vector<char> queued(n, 1);
  std::queue<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) queue.push(v);
  std::size_t cycle_hit = n;
  while (!queue.empty() && cycle_hit == n) {
    const std::size_t u = queue.front();
    queue.pop();
    queued[u] = 0;
    for (std::size_t i = first[u]; i < first[u + 1]; ++i) {
      const Arc& a = arcs[adj[i]];
      Cost candidate = label[u] + arc_cost(a);
      if (candidate < label[a.to] - tolerance) {
        label[a.to] = std::move(candidate);
        parent[a.to] = adj[i];
        depth[a.to] = depth[u] + 1;
        if (depth[a.to] >= n) {
          cycle_hit = a.to;
          break;
        }
        if (!queued[a.to]) {
          queued[a.to] = 1;
          queue.push(a.to);
        }
      }
    }
  }

  OptimalityVerdict verdict;
  if (cycle_hit == n) return verdict;

  // Walk back n steps to land on the cycle, then collect it.
  std::size_t x = cycle_hit;
  for (std::size_t k = 0; k < n; ++k) x = arcs[parent[x]].from;
  std::vector<std::size_t> cycle_arcs;
  std::size_t y = x;
  do {
    cycle_arcs.push_back(parent[y]);
    y = arcs[parent[y]].from;
  } while (y != x && cycle_arcs.size() <= n);
  std::reverse(cycle_arcs.begin(), cycle_arcs.end());
  Cost total(0);
  for (std::size_t i : cycle_arcs) {
    verdict.cycle.push_back(arcs[i].id);
    total += arc_cost(arcs[i]);
  }
  verdict.cycle_cost = CostTraits<Cost>::to_double(total);
  verdict.optimal = !(total < -tolerance);
  return verdict;
}

template FlowSolution<double> solve_min_cost_flow(const FlowGraph<double>&, const SolverOptions&);
template FlowSolution<Rational> solve_min_cost_flow(const FlowGraph<Rational>&, const SolverOptions&);
template OptimalityVerdict verify_optimality(const FlowGraph<double>&, const FlowSolution<double>&,
                                             const VerifyOptions&);
template OptimalityVerdict verify_optimality(const FlowGraph<Rational>&,
                                             const FlowSolution<Rational>&, const VerifyOptions&);

namespace {

template <typename Cost, typename CostWriter>
void write_dimacs_body(std::ostream& out, const FlowGraph<Cost>& g, CostWriter write_cost) {
  out << "p min " << g.node_count << ' ' << g.edges.size() << '\n';
  for (std::size_t v = 0; v < g.node_count; ++v) {
    if (g.supplies[v] != 0) out << "n " << v + 1 << ' ' << g.supplies[v] << '\n';
  }
  for (const auto& e : g.edges) {
    out << "a " << e.from + 1 << ' ' << e.to + 1 << " 0 " << e.capacity << ' ';
    write_cost(e.cost);
    out << '\n';
  }
}

}  // namespace

void write_dimacs(std::ostream& out, const FlowGraph<Rational>& graph) {
  mpz_class denom = 1;
  for (const auto& e : graph.edges) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), e.cost.get_den_mpz_t());
  if (!denom.fits_slong_p()) {
    throw std::overflow_error("DIMACS export: common cost denominator exceeds 64 bits");
  }
  out << "c costs scaled by " << denom.get_str() << '\n';
  write_dimacs_body(out, graph, [&](const Rational& c) {
    const mpz_class scaled = c.get_num() * (denom / c.get_den());
    if (!scaled.fits_slong_p()) throw std::overflow_error("DIMACS export: scaled cost overflows");
    out << scaled.get_str();
  });
}

void write_dimacs(std::ostream& out, const FlowGraph<double>& graph) {
  const auto old_precision = out.precision(17);
  write_dimacs_body(out, graph, [&](double c) { out << c; });
  out.precision(old_precision);
}

FlowGraph<double> read_dimacs(std::istream& in) {
  FlowGraph<double> g;
  bool have_problem = false;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw FlowInputError("DIMACS line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    char kind = 0;
    if (!(ls >> kind) || kind == 'c') continue;
    if (kind == 'p') {
      std::string format;
      std::size_t nodes = 0;
      std::size_t arcs = 0;
      if (!(ls >> format >> nodes >> arcs) || format != "min") fail("bad problem line");
      g = FlowGraph<double>(nodes);
      g.edges.reserve(arcs);
      have_problem = true;
    } else if (kind == 'n') {
      std::size_t id = 0;
      Flow supply = 0;
      if (!have_problem || !(ls >> id >> supply) || id == 0 || id > g.node_count) fail("bad node line");
      g.supplies[id - 1] = supply;
    } else if (kind == 'a') {
      std::size_t from = 0;
      std::size_t to = 0;
      Flow low = 0;
      Flow cap = 0;
      double cost = 0;
      if (!have_problem || !(ls >> from >> to >> low >> cap >> cost) || from == 0 || to == 0 ||
          from > g.node_count || to > g.node_count) {
        fail("bad arc line");
      }
      if (low != 0) fail("nonzero lower bounds are not supported");
      g.add_edge(from - 1, to - 1, cap, cost);
    } else {
      fail(std::string("unknown line type '") + kind + "'");
    }
  }
  if (!have_problem) throw FlowInputError("DIMACS input has no problem line");
  return g;
}

}  // namespace optbound
