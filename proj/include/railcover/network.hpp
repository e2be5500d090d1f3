#ifndef RAILCOVER_NETWORK_HPP
#define RAILCOVER_NETWORK_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "railcover/errors.hpp"

namespace railcover {

using StationId = int;

enum class ObjectiveSense { maximize, minimize };

struct Station {
  StationId id = 0;
  std::string name;
  double accident_probability = 0.02;  // p_j
  bool is_depot = false;               // pre-equipped rescue station
  bool is_candidate = false;           // eligible for equipping (every depot is)
  double depot_cost_yuan = 600000.0;   // c_k
};

struct Edge {
  StationId a = 0;
  StationId b = 0;
  double length_km = 0.0;
};

// Global planning parameters. Units are km, hours and yuan throughout.
struct Parameters {
  double alpha = 0.025;                 // hot-standby share of the EMU fleet
  double gamma = 0.8;                   // workload fluctuation coefficient
  double speed_kmh = 300.0;             // average rescue speed v
  double max_rescue_km = 800.0;         // one-way distance cap
  double max_rescue_hours = 2.5;        // one-way time cap
  double network_mileage_km = 42000.0;  // total mileage backing the workload cap
  long long emu_fleet_size = 4194;
  double beta = 200.0;                  // yuan per km when scalarizing the location model
  ObjectiveSense objective_sense = ObjectiveSense::maximize;
};

// A rail network is an undirected, simple, connected weighted graph plus
// per-station attributes. Instances are treated as immutable once built;
// every query below is a pure function, so sharing across threads is safe.
struct Network {
  std::vector<Station> stations;
  std::vector<Edge> edges;
  Parameters parameters;
};

struct Diagnostic {
  std::string code;
  std::string message;
  std::vector<StationId> stations;
};

inline const char* to_string(ObjectiveSense sense) {
  return sense == ObjectiveSense::maximize ? "maximize" : "minimize";
}

inline std::string join_ids(const std::vector<StationId>& ids) {
  std::ostringstream out;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k > 0) out << ", ";
    out << ids[k];
  }
  return out.str();
}

inline std::vector<StationId> station_ids(const Network& net) {
  std::vector<StationId> ids;
  ids.reserve(net.stations.size());
  for (const Station& s : net.stations) ids.push_back(s.id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

inline const Station* find_station(const Network& net, StationId id) {
  for (const Station& s : net.stations)
    if (s.id == id) return &s;
  return nullptr;
}

inline const Station& station_at(const Network& net, StationId id) {
  const Station* s = find_station(net, id);
  if (s == nullptr)
    throw std::invalid_argument("unknown station id " + std::to_string(id));
  return *s;
}

inline std::vector<StationId> depot_ids(const Network& net) {
  std::vector<StationId> ids;
  for (const Station& s : net.stations)
    if (s.is_depot) ids.push_back(s.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

inline std::vector<StationId> candidate_ids(const Network& net) {
  std::vector<StationId> ids;
  for (const Station& s : net.stations)
    if (s.is_candidate || s.is_depot) ids.push_back(s.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Stations sharing an edge with j, ascending.
inline std::vector<StationId> neighbors(const Network& net, StationId j) {
  station_at(net, j);
  std::set<StationId> out;
  for (const Edge& e : net.edges) {
    if (e.a == j && e.b != j) out.insert(e.b);
    if (e.b == j && e.a != j) out.insert(e.a);
  }
  return {out.begin(), out.end()};
}

// Direct edge length between adjacent stations, if such an edge exists.
inline std::optional<double> edge_length(const Network& net, StationId a, StationId b) {
  for (const Edge& e : net.edges)
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.length_km;
  return std::nullopt;
}

inline double total_edge_length_km(const Network& net) {
  double sum = 0.0;
  for (const Edge& e : net.edges) sum += e.length_km;
  return sum;
}

namespace detail {

// Connected component containing the smallest station id, as a sorted id list.
inline std::vector<StationId> main_component(const Network& net) {
  std::vector<StationId> ids = station_ids(net);
  if (ids.empty()) return {};
  std::set<StationId> known(ids.begin(), ids.end());
  std::set<StationId> seen{ids.front()};
  std::vector<StationId> stack{ids.front()};
  while (!stack.empty()) {
    StationId v = stack.back();
    stack.pop_back();
    for (const Edge& e : net.edges) {
      if (!known.count(e.a) || !known.count(e.b)) continue;
      StationId other = -1;
      if (e.a == v) other = e.b;
      else if (e.b == v) other = e.a;
      else continue;
      if (seen.insert(other).second) stack.push_back(other);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace detail

inline bool is_connected(const Network& net) {
  return detail::main_component(net).size() == station_ids(net).size();
}

// Structural and parameter checks. Returns one diagnostic per violation;
// an empty list means every invariant holds.
inline std::vector<Diagnostic> validate(const Network& net) {
  std::vector<Diagnostic> out;
  auto add = [&out](std::string code, std::string message, std::vector<StationId> ids = {}) {
    out.push_back({std::move(code), std::move(message), std::move(ids)});
  };

  const Parameters& p = net.parameters;
  auto bad_param = [&](const std::string& name, double value) {
    std::ostringstream msg;
    msg << "parameter " << name << " = " << value << " is out of range";
    add("parameter", msg.str());
  };
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) bad_param("alpha", p.alpha);
  if (!(p.gamma > 0.0 && p.gamma <= 1.0)) bad_param("gamma", p.gamma);
  if (!(p.speed_kmh > 0.0)) bad_param("speed_kmh", p.speed_kmh);
  if (!(p.max_rescue_km > 0.0)) bad_param("max_rescue_km", p.max_rescue_km);
  if (!(p.max_rescue_hours > 0.0)) bad_param("max_rescue_hours", p.max_rescue_hours);
  if (!(p.network_mileage_km > 0.0)) bad_param("network_mileage_km", p.network_mileage_km);
  if (p.emu_fleet_size < 1) bad_param("emu_fleet_size", static_cast<double>(p.emu_fleet_size));
  if (!(p.beta >= 0.0)) bad_param("beta", p.beta);

  if (net.stations.empty()) add("empty", "network has no stations");

  std::set<StationId> ids_seen;
  std::vector<StationId> duplicates;
  std::vector<StationId> depot_not_candidate;
  bool any_candidate = false;
  for (const Station& s : net.stations) {
    if (!ids_seen.insert(s.id).second) duplicates.push_back(s.id);
    if (!(s.accident_probability >= 0.0 && s.accident_probability <= 1.0))
      add("probability_range",
          "station " + std::to_string(s.id) + " accident_probability " +
              std::to_string(s.accident_probability) + " outside [0, 1]",
          {s.id});
    if (s.depot_cost_yuan < 0.0)
      add("negative_cost", "station " + std::to_string(s.id) + " has negative depot_cost", {s.id});
    if (s.is_depot && !s.is_candidate) depot_not_candidate.push_back(s.id);
    if (s.is_candidate || s.is_depot) any_candidate = true;
  }
  if (!duplicates.empty())
    add("duplicate_station", "duplicate station ids: " + join_ids(duplicates), duplicates);
  if (!depot_not_candidate.empty())
    add("depot_not_candidate",
        "depot not in candidate set: " + join_ids(depot_not_candidate), depot_not_candidate);
  if (!any_candidate && !net.stations.empty())
    add("no_candidate", "network declares no candidate station");

  std::set<std::pair<StationId, StationId>> pairs;
  for (const Edge& e : net.edges) {
    std::vector<StationId> missing;
    if (!ids_seen.count(e.a)) missing.push_back(e.a);
    if (!ids_seen.count(e.b)) missing.push_back(e.b);
    if (!missing.empty()) {
      add("unknown_station", "edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                                 ") references unknown station " + join_ids(missing),
          missing);
      continue;
    }
    if (e.a == e.b) {
      add("self_loop", "self-loop at station " + std::to_string(e.a), {e.a});
      continue;
    }
    if (!(e.length_km > 0.0))
      add("nonpositive_length", "edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                                    ") has nonpositive length", {e.a, e.b});
    auto key = std::minmax(e.a, e.b);
    if (!pairs.insert(key).second)
      add("duplicate_edge", "duplicate edge (" + std::to_string(key.first) + ", " +
                                std::to_string(key.second) + ")", {key.first, key.second});
  }

  std::vector<StationId> all = station_ids(net);
  std::vector<StationId> reached = detail::main_component(net);
  if (reached.size() != all.size()) {
    std::vector<StationId> stranded;
    std::set_difference(all.begin(), all.end(), reached.begin(), reached.end(),
                        std::back_inserter(stranded));
    add("disconnected", "stations unreachable from station " +
                            std::to_string(all.front()) + ": " + join_ids(stranded),
        stranded);
  }
  return out;
}

}  // namespace railcover

#endif  // RAILCOVER_NETWORK_HPP
