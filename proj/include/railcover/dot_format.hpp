#ifndef RAILCOVER_DOT_FORMAT_HPP
#define RAILCOVER_DOT_FORMAT_HPP

#include <sstream>
#include <string>
#include <vector>

#include "railcover/lp_format.hpp"
#include "railcover/network.hpp"
#include "railcover/solve.hpp"

namespace railcover {

// Graphviz rendering of a solved plan. Stations are nodes, opened rescue
// stations get a double circle, physical edges keep their km labels, and each
// assignment becomes one dashed arrow from the rescuer. A station covering
// itself is shown by filling its node instead of drawing a self-edge, so the
// document carries exactly one assignment marker per station.
inline std::string render_dot(const Network& net, const AssignmentPlan& plan) {
  std::ostringstream out;
  out << "digraph coverage {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle];\n";

  for (StationId id : station_ids(net)) {
    const Station& s = station_at(net, id);
    bool opened = std::find(plan.opened.begin(), plan.opened.end(), id) != plan.opened.end();
    auto self = plan.assignment.find(id);
    bool self_covered = self != plan.assignment.end() && self->second == id;
    out << "  n" << id << " [label=\"" << id;
    if (!s.name.empty()) out << "\\n" << s.name;
    out << "\"";
    if (opened) out << ", shape=doublecircle";
    if (self_covered) out << ", style=filled, fillcolor=palegreen";
    out << "];\n";
  }

  std::vector<Edge> edges = net.edges;
  for (Edge& e : edges)
    if (e.a > e.b) std::swap(e.a, e.b);
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b, x.length_km) < std::tie(y.a, y.b, y.length_km);
  });
  for (const Edge& e : edges)
    out << "  n" << e.a << " -> n" << e.b << " [dir=none, label=\"" << lp_number(e.length_km)
        << "\"];\n";

  for (const auto& [station, rescuer] : plan.assignment)
    if (station != rescuer)
      out << "  n" << rescuer << " -> n" << station << " [style=dashed, constraint=false];\n";

  out << "}\n";
  return out.str();
}

}  // namespace railcover

#endif  // RAILCOVER_DOT_FORMAT_HPP
