#ifndef RAILCOVER_SHORTEST_PATHS_HPP
#define RAILCOVER_SHORTEST_PATHS_HPP

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

#include "railcover/network.hpp"

namespace railcover {

// All-pairs shortest network distances with deterministic path recovery.
//
// Ties between equally short paths are broken by fewer hops first, then by
// the lexicographically smallest station-id sequence read from the source.
// This makes predecessor chains, and everything derived from them, stable
// across runs and platforms.
struct ShortestPathMatrix {
  std::vector<StationId> ids;                       // ascending
  std::vector<std::vector<double>> distance_km;     // [from][to]
  std::vector<std::vector<StationId>> predecessor;  // [from][to]: station before `to`
                                                    // on the canonical from->to path; -1 on the diagonal

  std::size_t index_of(StationId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id)
      throw std::invalid_argument("unknown station id " + std::to_string(id));
    return static_cast<std::size_t>(it - ids.begin());
  }

  double distance(StationId from, StationId to) const {
    return distance_km[index_of(from)][index_of(to)];
  }
};

namespace detail {

struct AdjacencyEntry {
  std::size_t to;
  double length;
};

// Canonical path from source to `v`, as indices, recovered through `pred`.
inline std::vector<std::size_t> walk_path(const std::vector<std::size_t>& pred,
                                          std::size_t source, std::size_t v) {
  std::vector<std::size_t> path;
  for (std::size_t cur = v; cur != source; cur = pred[cur]) path.push_back(cur);
  path.push_back(source);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

inline ShortestPathMatrix all_pairs_shortest(const Network& net) {
  ShortestPathMatrix m;
  m.ids = station_ids(net);
  const std::size_t n = m.ids.size();
  if (m.ids.size() != net.stations.size())
    throw std::invalid_argument("network has duplicate station ids");

  std::vector<std::vector<detail::AdjacencyEntry>> adj(n);
  for (const Edge& e : net.edges) {
    if (!(e.length_km > 0.0))
      throw std::invalid_argument("nonpositive edge length on (" + std::to_string(e.a) +
                                  ", " + std::to_string(e.b) + ")");
    std::size_t ia = m.index_of(e.a);
    std::size_t ib = m.index_of(e.b);
    if (ia == ib) throw std::invalid_argument("self-loop at station " + std::to_string(e.a));
    adj[ia].push_back({ib, e.length_km});
    adj[ib].push_back({ia, e.length_km});
  }
  for (auto& row : adj)
    std::sort(row.begin(), row.end(),
              [](const auto& x, const auto& y) { return x.to < y.to; });

  const double inf = std::numeric_limits<double>::infinity();
  m.distance_km.assign(n, std::vector<double>(n, inf));
  m.predecessor.assign(n, std::vector<StationId>(n, -1));

  std::vector<double> dist(n);
  std::vector<char> settled(n);
  std::vector<int> hops(n);
  std::vector<std::size_t> pred(n);
  std::vector<std::size_t> order(n);

  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(settled.begin(), settled.end(), 0);
    dist[s] = 0.0;

    using HeapItem = std::pair<double, std::size_t>;
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;
    heap.push({0.0, s});
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (settled[u]) continue;
      settled[u] = 1;
      for (const auto& [v, w] : adj[u]) {
        if (dist[u] + w < dist[v]) {
          dist[v] = dist[u] + w;
          heap.push({dist[v], v});
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (dist[v] == inf)
        throw std::invalid_argument("network is disconnected: station " +
                                    std::to_string(m.ids[v]) + " unreachable from " +
                                    std::to_string(m.ids[s]));

    // Process nodes by increasing distance (ties by id). Positive weights make
    // this a topological order of the shortest-path DAG, so hop counts and
    // canonical predecessors can be filled in a single pass each.
    for (std::size_t v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (dist[x] != dist[y]) return dist[x] < dist[y];
      return x < y;
    });

    hops[s] = 0;
    pred[s] = s;
    for (std::size_t v : order) {
      if (v == s) continue;
      int best_hops = std::numeric_limits<int>::max();
      for (const auto& [u, w] : adj[v])
        if (dist[u] + w == dist[v]) best_hops = std::min(best_hops, hops[u] + 1);
      hops[v] = best_hops;
    }
    for (std::size_t v : order) {
      if (v == s) continue;
      std::size_t best_parent = n;
      std::vector<std::size_t> best_path;
      for (const auto& [u, w] : adj[v]) {
        if (dist[u] + w != dist[v] || hops[u] + 1 != hops[v]) continue;
        if (best_parent == n) {
          best_parent = u;
          continue;
        }
        if (best_path.empty()) best_path = detail::walk_path(pred, s, best_parent);
        std::vector<std::size_t> candidate = detail::walk_path(pred, s, u);
        if (std::lexicographical_compare(candidate.begin(), candidate.end(),
                                         best_path.begin(), best_path.end())) {
          best_parent = u;
          best_path = std::move(candidate);
        }
      }
      pred[v] = best_parent;
    }

    for (std::size_t v = 0; v < n; ++v) {
      m.distance_km[s][v] = dist[v];
      m.predecessor[s][v] = v == s ? -1 : m.ids[pred[v]];
    }
  }
  return m;
}

}  // namespace railcover

#endif  // RAILCOVER_SHORTEST_PATHS_HPP
