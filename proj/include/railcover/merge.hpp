#ifndef RAILCOVER_MERGE_HPP
#define RAILCOVER_MERGE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "railcover/network.hpp"
#include "railcover/shortest_paths.hpp"

namespace railcover {

// Absolute slack on the distance/time cap comparisons.
inline constexpr double kFeasibilityTol = 1e-9;

// Line-merging preprocessing: every half-segment of track is folded into its
// nearer endpoint station, which turns accidents on open track into accidents
// at stations. A rescuer serving station j must also reach j's merged
// territory, so the working distance from rescuer i to station j is
//
//   effective = L_ij + max(excluded adjacent edge at j) / 2
//
// where the excluded edges are those to neighbors of j that the i->j rescue
// route does not already pass through.
struct MergedInstance {
  std::vector<StationId> ids;  // ascending, mirrors ShortestPathMatrix
  std::vector<std::vector<double>> base_distance_km;       // L_ij, [rescuer][station]
  std::vector<std::vector<double>> exclusion_max_km;       // longest excluded adjacent edge
  std::vector<std::vector<double>> effective_distance_km;  // L_ij + half the above
  std::vector<std::vector<double>> rescue_time_h;          // effective / speed
  std::vector<std::vector<char>> feasible;                 // both caps hold
  std::vector<Diagnostic> warnings;

  std::size_t index_of(StationId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id)
      throw std::invalid_argument("unknown station id " + std::to_string(id));
    return static_cast<std::size_t>(it - ids.begin());
  }

  double effective_distance(StationId rescuer, StationId station) const {
    return effective_distance_km[index_of(rescuer)][index_of(station)];
  }
};

// Canonical shortest route from `from` to `to`, both endpoints included.
// For from == to this is the singleton [from].
inline std::vector<StationId> route_stations(const ShortestPathMatrix& matrix,
                                             StationId from, StationId to) {
  std::size_t source = matrix.index_of(from);
  std::size_t target = matrix.index_of(to);
  std::vector<StationId> route;
  StationId cur = matrix.ids[target];
  while (cur != matrix.ids[source]) {
    route.push_back(cur);
    cur = matrix.predecessor[source][matrix.index_of(cur)];
  }
  route.push_back(matrix.ids[source]);
  std::reverse(route.begin(), route.end());
  return route;
}

// Neighbors of station j that do not lie on the canonical route from j to
// rescuer i. For i == j the route is just [j], so every neighbor qualifies.
inline std::vector<StationId> exclusion_set(const Network& net, const ShortestPathMatrix& matrix,
                                            StationId i, StationId j) {
  std::vector<StationId> route = route_stations(matrix, j, i);
  std::vector<StationId> out;
  for (StationId h : neighbors(net, j))
    if (std::find(route.begin(), route.end(), h) == route.end()) out.push_back(h);
  return out;
}

// Longest direct edge from j to a station in exclusion_set(i, j); zero when
// the set is empty (a station rescued "from behind" has no far side left).
inline double exclusion_max(const Network& net, const ShortestPathMatrix& matrix,
                            StationId i, StationId j) {
  double best = 0.0;
  for (StationId h : exclusion_set(net, matrix, i, j))
    best = std::max(best, edge_length(net, j, h).value());
  return best;
}

inline MergedInstance build_merged_instance(const Network& net) {
  ShortestPathMatrix matrix = all_pairs_shortest(net);
  const std::size_t n = matrix.ids.size();
  const Parameters& p = net.parameters;

  MergedInstance merged;
  merged.ids = matrix.ids;
  merged.base_distance_km = matrix.distance_km;
  merged.exclusion_max_km.assign(n, std::vector<double>(n, 0.0));
  merged.effective_distance_km.assign(n, std::vector<double>(n, 0.0));
  merged.rescue_time_h.assign(n, std::vector<double>(n, 0.0));
  merged.feasible.assign(n, std::vector<char>(n, 0));

  // The exclusion maximum reads adjacent distances off the direct edge, which
  // assumes the direct edge is itself a shortest route between its endpoints.
  for (const Edge& e : net.edges) {
    double shortest = matrix.distance(e.a, e.b);
    if (shortest + kFeasibilityTol < e.length_km)
      merged.warnings.push_back(
          {"edge_shortcut",
           "edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) + ") of length " +
               std::to_string(e.length_km) + " km is longer than the shortest route (" +
               std::to_string(shortest) + " km); adjacent distances use the direct edge",
           {e.a, e.b}});
  }

  for (std::size_t ii = 0; ii < n; ++ii) {
    for (std::size_t jj = 0; jj < n; ++jj) {
      double l_max = exclusion_max(net, matrix, merged.ids[ii], merged.ids[jj]);
      double effective = merged.base_distance_km[ii][jj] + 0.5 * l_max;
      double time_h = effective / p.speed_kmh;
      merged.exclusion_max_km[ii][jj] = l_max;
      merged.effective_distance_km[ii][jj] = effective;
      merged.rescue_time_h[ii][jj] = time_h;
      merged.feasible[ii][jj] = effective <= p.max_rescue_km + kFeasibilityTol &&
                                time_h <= p.max_rescue_hours + kFeasibilityTol;
    }
  }
  return merged;
}

}  // namespace railcover

#endif  // RAILCOVER_MERGE_HPP
