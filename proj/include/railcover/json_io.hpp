#ifndef RAILCOVER_JSON_IO_HPP
#define RAILCOVER_JSON_IO_HPP

#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "railcover/network.hpp"

namespace railcover {

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                                const std::string& locus) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw SchemaError("unknown field '" + it.key() + "' in " + locus);
  }
}

inline double number_field(const json& obj, const std::string& key, const std::string& locus) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(locus + "." + key + " must be a number");
  return v.get<double>();
}

inline long long integer_field(const json& obj, const std::string& key, const std::string& locus) {
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw SchemaError(locus + "." + key + " must be an integer");
  return v.get<long long>();
}

inline bool bool_field(const json& obj, const std::string& key, const std::string& locus) {
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw SchemaError(locus + "." + key + " must be a boolean");
  return v.get<bool>();
}

inline ObjectiveSense parse_sense(const std::string& text) {
  if (text == "maximize") return ObjectiveSense::maximize;
  if (text == "minimize") return ObjectiveSense::minimize;
  throw SchemaError("objective_sense must be \"maximize\" or \"minimize\", got \"" + text + "\"");
}

}  // namespace detail

// Parses a network document. Field names follow the input schema exactly;
// omitted station attributes and parameters fall back to their defaults,
// and an omitted network_mileage_km falls back to the sum of edge lengths.
inline Network load_network(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw SchemaError("top-level document must be an object");
  detail::reject_unknown_keys(doc, {"parameters", "stations", "edges"}, "document");

  Network net;

  if (doc.contains("parameters")) {
    const json& p = doc.at("parameters");
    if (!p.is_object()) throw SchemaError("parameters must be an object");
    detail::reject_unknown_keys(
        p,
        {"alpha", "gamma", "speed_kmh", "max_rescue_km", "max_rescue_hours",
         "network_mileage_km", "emu_fleet_size", "beta", "objective_sense"},
        "parameters");
    Parameters& out = net.parameters;
    if (p.contains("alpha")) out.alpha = detail::number_field(p, "alpha", "parameters");
    if (p.contains("gamma")) out.gamma = detail::number_field(p, "gamma", "parameters");
    if (p.contains("speed_kmh")) out.speed_kmh = detail::number_field(p, "speed_kmh", "parameters");
    if (p.contains("max_rescue_km"))
      out.max_rescue_km = detail::number_field(p, "max_rescue_km", "parameters");
    if (p.contains("max_rescue_hours"))
      out.max_rescue_hours = detail::number_field(p, "max_rescue_hours", "parameters");
    if (p.contains("network_mileage_km"))
      out.network_mileage_km = detail::number_field(p, "network_mileage_km", "parameters");
    if (p.contains("emu_fleet_size"))
      out.emu_fleet_size = detail::integer_field(p, "emu_fleet_size", "parameters");
    if (p.contains("beta")) out.beta = detail::number_field(p, "beta", "parameters");
    if (p.contains("objective_sense")) {
      const json& v = p.at("objective_sense");
      if (!v.is_string()) throw SchemaError("parameters.objective_sense must be a string");
      out.objective_sense = detail::parse_sense(v.get<std::string>());
    }
  }

  if (!doc.contains("stations")) throw SchemaError("missing required field 'stations'");
  const json& stations = doc.at("stations");
  if (!stations.is_array() || stations.empty())
    throw SchemaError("'stations' must be a non-empty array");

  std::set<StationId> seen;
  for (std::size_t k = 0; k < stations.size(); ++k) {
    const json& s = stations[k];
    const std::string locus = "stations[" + std::to_string(k) + "]";
    if (!s.is_object()) throw SchemaError(locus + " must be an object");
    detail::reject_unknown_keys(
        s, {"id", "name", "accident_probability", "is_depot", "is_candidate", "depot_cost"},
        locus);
    if (!s.contains("id")) throw SchemaError(locus + " is missing required field 'id'");
    long long id = detail::integer_field(s, "id", locus);
    if (id < 0 || id > std::numeric_limits<StationId>::max())
      throw SchemaError(locus + ".id " + std::to_string(id) + " out of range");
    Station st;
    st.id = static_cast<StationId>(id);
    if (!seen.insert(st.id).second)
      throw SchemaError("duplicate station id " + std::to_string(st.id));
    if (s.contains("name")) {
      if (!s.at("name").is_string()) throw SchemaError(locus + ".name must be a string");
      st.name = s.at("name").get<std::string>();
    }
    if (s.contains("accident_probability"))
      st.accident_probability = detail::number_field(s, "accident_probability", locus);
    if (s.contains("is_depot")) st.is_depot = detail::bool_field(s, "is_depot", locus);
    if (s.contains("is_candidate")) st.is_candidate = detail::bool_field(s, "is_candidate", locus);
    if (s.contains("depot_cost")) st.depot_cost_yuan = detail::number_field(s, "depot_cost", locus);
    net.stations.push_back(std::move(st));
  }
  std::sort(net.stations.begin(), net.stations.end(),
            [](const Station& x, const Station& y) { return x.id < y.id; });

  if (doc.contains("edges")) {
    const json& edges = doc.at("edges");
    if (!edges.is_array()) throw SchemaError("'edges' must be an array");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const json& e = edges[k];
      const std::string locus = "edges[" + std::to_string(k) + "]";
      if (!e.is_object()) throw SchemaError(locus + " must be an object");
      detail::reject_unknown_keys(e, {"a", "b", "length_km"}, locus);
      for (const char* key : {"a", "b", "length_km"})
        if (!e.contains(key))
          throw SchemaError(locus + " is missing required field '" + std::string(key) + "'");
      Edge edge;
      edge.a = static_cast<StationId>(detail::integer_field(e, "a", locus));
      edge.b = static_cast<StationId>(detail::integer_field(e, "b", locus));
      edge.length_km = detail::number_field(e, "length_km", locus);
      for (StationId end : {edge.a, edge.b})
        if (!seen.count(end))
          throw SchemaError(locus + " references unknown station " + std::to_string(end));
      net.edges.push_back(edge);
    }
  }

  bool mileage_given =
      doc.contains("parameters") && doc.at("parameters").contains("network_mileage_km");
  if (!mileage_given) net.parameters.network_mileage_km = total_edge_length_km(net);

  return net;
}

inline Network load_network_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_network(buffer.str());
}

// Emits the same schema that load_network accepts, with every field explicit
// and stations/edges in canonical order.
inline std::string serialize_network(const Network& net) {
  using detail::json;
  json doc;
  const Parameters& p = net.parameters;
  doc["parameters"] = {{"alpha", p.alpha},
                       {"gamma", p.gamma},
                       {"speed_kmh", p.speed_kmh},
                       {"max_rescue_km", p.max_rescue_km},
                       {"max_rescue_hours", p.max_rescue_hours},
                       {"network_mileage_km", p.network_mileage_km},
                       {"emu_fleet_size", p.emu_fleet_size},
                       {"beta", p.beta},
                       {"objective_sense", to_string(p.objective_sense)}};

  std::vector<Station> stations = net.stations;
  std::sort(stations.begin(), stations.end(),
            [](const Station& x, const Station& y) { return x.id < y.id; });
  doc["stations"] = json::array();
  for (const Station& s : stations)
    doc["stations"].push_back({{"id", s.id},
                               {"name", s.name},
                               {"accident_probability", s.accident_probability},
                               {"is_depot", s.is_depot},
                               {"is_candidate", s.is_candidate},
                               {"depot_cost", s.depot_cost_yuan}});

  std::vector<Edge> edges = net.edges;
  for (Edge& e : edges)
    if (e.a > e.b) std::swap(e.a, e.b);
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b, x.length_km) < std::tie(y.a, y.b, y.length_km);
  });
  doc["edges"] = json::array();
  for (const Edge& e : edges)
    doc["edges"].push_back({{"a", e.a}, {"b", e.b}, {"length_km", e.length_km}});

  return doc.dump(2) + "\n";
}

}  // namespace railcover

#endif  // RAILCOVER_JSON_IO_HPP
