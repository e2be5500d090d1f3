#ifndef RAILCOVER_PROBLEM_HPP
#define RAILCOVER_PROBLEM_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "railcover/merge.hpp"
#include "railcover/network.hpp"

namespace railcover {

// Fleet-derived constants: the hot-standby count is the configured share of
// the EMU fleet, and the per-rescuer workload cap is half the fluctuation-
// adjusted network mileage per hot-standby unit (half, because every rescue
// run is a round trip).
struct ProblemConstants {
  double hot_emu_count = 0.0;    // kept real-valued; see round_down_fleet
  double workload_cap_km = 0.0;
};

// The hot-standby count enters the model only as a denominator, so it stays
// real-valued by default (104.85 in the reference configuration). Pass
// round_down_fleet = true to floor it to a whole number of units instead.
inline ProblemConstants fleet_constants(const Parameters& p, bool round_down_fleet = false) {
  if (!(p.alpha > 0.0) || p.emu_fleet_size < 1)
    throw std::invalid_argument("alpha and emu_fleet_size must be positive");
  if (!(p.gamma > 0.0) || !(p.network_mileage_km > 0.0))
    throw std::invalid_argument("gamma and network_mileage_km must be positive");
  ProblemConstants c;
  c.hot_emu_count = p.alpha * static_cast<double>(p.emu_fleet_size);
  if (round_down_fleet) {
    c.hot_emu_count = std::floor(c.hot_emu_count);
    if (!(c.hot_emu_count > 0.0))
      throw std::invalid_argument("rounded hot-standby fleet is empty");
  }
  c.workload_cap_km = 0.5 * p.gamma * p.network_mileage_km / c.hot_emu_count;
  return c;
}

// Coverage-area model (fixed rescue stations): choose which depot serves each
// station so that every station is covered exactly once, every used pair
// respects the distance/time caps, and no depot exceeds its workload cap.
// Infeasible pairs are dropped up front instead of being carried as
// constraints; the feasible set is identical because the pair caps act on
// single binaries.
struct CoverageInstance {
  std::vector<StationId> depot_ids;    // ascending
  std::vector<StationId> station_ids;  // ascending
  // [depot][station]; NaN marks a dropped (infeasible) pair.
  std::vector<std::vector<double>> coefficient_km;      // effective distance
  std::vector<std::vector<double>> workload_weight_km;  // effective distance * p_j
  double workload_cap_km = 0.0;
  ObjectiveSense objective_sense = ObjectiveSense::maximize;
  // carried for independent plan verification
  double max_rescue_km = 0.0;
  double max_rescue_hours = 0.0;
  double speed_kmh = 0.0;

  bool pair_feasible(std::size_t depot_index, std::size_t station_index) const {
    return std::isfinite(coefficient_km[depot_index][station_index]);
  }
};

// Location-and-coverage model: additionally decide which candidate stations
// to equip. Pre-given depots are forced open; a station may only be assigned
// to an opened candidate.
struct LocationInstance {
  std::vector<StationId> candidate_ids;  // ascending
  std::vector<StationId> station_ids;    // ascending
  std::vector<StationId> forced_open;    // pre-given depots, ascending
  std::vector<double> open_cost_yuan;    // parallel to candidate_ids
  double beta = 0.0;
  // [candidate][station]; NaN marks a dropped pair.
  std::vector<std::vector<double>> coefficient_km;
  std::vector<std::vector<double>> workload_weight_km;
  double workload_cap_km = 0.0;
  ObjectiveSense objective_sense = ObjectiveSense::maximize;  // distance component
  double max_rescue_km = 0.0;
  double max_rescue_hours = 0.0;
  double speed_kmh = 0.0;

  bool pair_feasible(std::size_t candidate_index, std::size_t station_index) const {
    return std::isfinite(coefficient_km[candidate_index][station_index]);
  }
};

// Uniform binary-program form used for LP export and the brute-force oracle.
// Variable names are stable: x_{rescuer}_{station} and y_{candidate}.
// Variables are laid out station-major (for each station ascending, its
// feasible rescuers ascending), then opening variables ascending; constraints
// keep construction order.
struct BinaryProgram {
  enum class VarKind { assignment, opening, other };
  struct Variable {
    std::string name;
    VarKind kind = VarKind::other;
    StationId rescuer = -1;  // i of x_i_j, or k of y_k
    StationId station = -1;  // j of x_i_j
  };
  enum class Comparator { less_equal, equal };
  struct Constraint {
    std::string name;
    std::vector<std::pair<std::size_t, double>> terms;  // (variable index, coefficient)
    Comparator comparator = Comparator::less_equal;
    double rhs = 0.0;
  };

  ObjectiveSense sense = ObjectiveSense::maximize;
  std::vector<Variable> variables;
  std::vector<double> objective;  // parallel to variables
  std::vector<Constraint> constraints;

  std::size_t add_variable(Variable v, double objective_coefficient) {
    variables.push_back(std::move(v));
    objective.push_back(objective_coefficient);
    return variables.size() - 1;
  }
};

inline std::string x_name(StationId rescuer, StationId station) {
  return "x_" + std::to_string(rescuer) + "_" + std::to_string(station);
}

inline std::string y_name(StationId candidate) {
  return "y_" + std::to_string(candidate);
}

namespace detail {

struct InstanceCore {
  std::vector<StationId> rescuer_ids;
  std::vector<std::vector<double>> coefficient_km;
  std::vector<std::vector<double>> workload_weight_km;
};

// Restricts the merged matrices to rescuer rows, drops infeasible pairs, and
// reports every station left without a feasible rescuer.
inline InstanceCore restrict_to_rescuers(const MergedInstance& merged, const Network& net,
                                         const std::vector<StationId>& rescuers) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<StationId>& stations = merged.ids;
  InstanceCore core;
  core.rescuer_ids = rescuers;
  core.coefficient_km.assign(rescuers.size(), std::vector<double>(stations.size(), nan));
  core.workload_weight_km.assign(rescuers.size(), std::vector<double>(stations.size(), nan));

  std::vector<StationId> uncoverable;
  for (std::size_t jj = 0; jj < stations.size(); ++jj) {
    bool covered = false;
    double p_j = station_at(net, stations[jj]).accident_probability;
    for (std::size_t ii = 0; ii < rescuers.size(); ++ii) {
      std::size_t row = merged.index_of(rescuers[ii]);
      if (!merged.feasible[row][jj]) continue;
      double d = merged.effective_distance_km[row][jj];
      core.coefficient_km[ii][jj] = d;
      core.workload_weight_km[ii][jj] = d * p_j;
      covered = true;
    }
    if (!covered) uncoverable.push_back(stations[jj]);
  }
  if (!uncoverable.empty())
    throw UncoverableError(
        "stations with no feasible rescue pair: " + join_ids(uncoverable), uncoverable);
  return core;
}

}  // namespace detail

inline CoverageInstance build_cmhse(const MergedInstance& merged, const Network& net) {
  std::vector<StationId> depots = depot_ids(net);
  if (depots.empty()) throw std::invalid_argument("coverage model needs at least one depot");

  detail::InstanceCore core = detail::restrict_to_rescuers(merged, net, depots);
  ProblemConstants constants = fleet_constants(net.parameters);

  CoverageInstance inst;
  inst.depot_ids = std::move(core.rescuer_ids);
  inst.station_ids = merged.ids;
  inst.coefficient_km = std::move(core.coefficient_km);
  inst.workload_weight_km = std::move(core.workload_weight_km);
  inst.workload_cap_km = constants.workload_cap_km;
  inst.objective_sense = net.parameters.objective_sense;
  inst.max_rescue_km = net.parameters.max_rescue_km;
  inst.max_rescue_hours = net.parameters.max_rescue_hours;
  inst.speed_kmh = net.parameters.speed_kmh;
  return inst;
}

inline LocationInstance build_lchse(const MergedInstance& merged, const Network& net) {
  std::vector<StationId> candidates = candidate_ids(net);
  if (candidates.empty()) throw std::invalid_argument("location model needs a candidate set");

  detail::InstanceCore core = detail::restrict_to_rescuers(merged, net, candidates);

  LocationInstance inst;
  inst.candidate_ids = std::move(core.rescuer_ids);
  inst.station_ids = merged.ids;
  inst.forced_open = depot_ids(net);
  for (StationId k : inst.candidate_ids)
    inst.open_cost_yuan.push_back(station_at(net, k).depot_cost_yuan);
  inst.beta = net.parameters.beta;
  inst.coefficient_km = std::move(core.coefficient_km);
  inst.workload_weight_km = std::move(core.workload_weight_km);
  inst.workload_cap_km = fleet_constants(net.parameters).workload_cap_km;
  inst.objective_sense = net.parameters.objective_sense;
  inst.max_rescue_km = net.parameters.max_rescue_km;
  inst.max_rescue_hours = net.parameters.max_rescue_hours;
  inst.speed_kmh = net.parameters.speed_kmh;
  return inst;
}

// Coverage model in binary-program form: one assignment equality per station,
// one workload row per depot.
inline BinaryProgram to_binary_program(const CoverageInstance& inst) {
  BinaryProgram bp;
  bp.sense = inst.objective_sense;

  const std::size_t m = inst.depot_ids.size();
  const std::size_t n = inst.station_ids.size();
  std::vector<std::vector<std::size_t>> var_of(m, std::vector<std::size_t>(n, SIZE_MAX));
  for (std::size_t jj = 0; jj < n; ++jj)
    for (std::size_t ii = 0; ii < m; ++ii)
      if (inst.pair_feasible(ii, jj))
        var_of[ii][jj] = bp.add_variable(
            {x_name(inst.depot_ids[ii], inst.station_ids[jj]), BinaryProgram::VarKind::assignment,
             inst.depot_ids[ii], inst.station_ids[jj]},
            inst.coefficient_km[ii][jj]);

  std::size_t row = 0;
  for (std::size_t jj = 0; jj < n; ++jj) {
    BinaryProgram::Constraint c;
    c.name = "c" + std::to_string(++row);
    for (std::size_t ii = 0; ii < m; ++ii)
      if (var_of[ii][jj] != SIZE_MAX) c.terms.push_back({var_of[ii][jj], 1.0});
    c.comparator = BinaryProgram::Comparator::equal;
    c.rhs = 1.0;
    bp.constraints.push_back(std::move(c));
  }
  for (std::size_t ii = 0; ii < m; ++ii) {
    BinaryProgram::Constraint c;
    c.name = "c" + std::to_string(++row);
    for (std::size_t jj = 0; jj < n; ++jj)
      if (var_of[ii][jj] != SIZE_MAX)
        c.terms.push_back({var_of[ii][jj], inst.workload_weight_km[ii][jj]});
    c.comparator = BinaryProgram::Comparator::less_equal;
    c.rhs = inst.workload_cap_km;
    bp.constraints.push_back(std::move(c));
  }
  return bp;
}

// Location model scalarized to a single minimization: assignment distance is
// converted to (negative) cost at beta yuan per km and opening costs are
// added, so the optimum trades rescue reach against equipment spending.
// When the configured distance sense is minimize, the distance term enters
// with +beta instead.
inline BinaryProgram scalarize(const LocationInstance& inst) {
  if (inst.beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
  BinaryProgram bp;
  bp.sense = ObjectiveSense::minimize;

  const std::size_t m = inst.candidate_ids.size();
  const std::size_t n = inst.station_ids.size();
  const double sign = inst.objective_sense == ObjectiveSense::maximize ? -1.0 : 1.0;

  std::vector<std::vector<std::size_t>> var_of(m, std::vector<std::size_t>(n, SIZE_MAX));
  for (std::size_t jj = 0; jj < n; ++jj)
    for (std::size_t ii = 0; ii < m; ++ii)
      if (inst.pair_feasible(ii, jj))
        var_of[ii][jj] = bp.add_variable(
            {x_name(inst.candidate_ids[ii], inst.station_ids[jj]),
             BinaryProgram::VarKind::assignment, inst.candidate_ids[ii],
             inst.station_ids[jj]},
            sign * inst.beta * inst.coefficient_km[ii][jj]);
  std::vector<std::size_t> y_var(m);
  for (std::size_t ii = 0; ii < m; ++ii)
    y_var[ii] = bp.add_variable(
        {y_name(inst.candidate_ids[ii]), BinaryProgram::VarKind::opening,
         inst.candidate_ids[ii], -1},
        inst.open_cost_yuan[ii]);

  std::size_t row = 0;
  for (std::size_t jj = 0; jj < n; ++jj) {
    BinaryProgram::Constraint c;
    c.name = "c" + std::to_string(++row);
    for (std::size_t ii = 0; ii < m; ++ii)
      if (var_of[ii][jj] != SIZE_MAX) c.terms.push_back({var_of[ii][jj], 1.0});
    c.comparator = BinaryProgram::Comparator::equal;
    c.rhs = 1.0;
    bp.constraints.push_back(std::move(c));
  }
  for (std::size_t ii = 0; ii < m; ++ii) {
    if (std::find(inst.forced_open.begin(), inst.forced_open.end(), inst.candidate_ids[ii]) ==
        inst.forced_open.end())
      continue;
    BinaryProgram::Constraint c;
    c.name = "c" + std::to_string(++row);
    c.terms.push_back({y_var[ii], 1.0});
    c.comparator = BinaryProgram::Comparator::equal;
    c.rhs = 1.0;
    bp.constraints.push_back(std::move(c));
  }
  for (std::size_t jj = 0; jj < n; ++jj) {
    for (std::size_t ii = 0; ii < m; ++ii) {
      if (var_of[ii][jj] == SIZE_MAX) continue;
      BinaryProgram::Constraint c;
      c.name = "c" + std::to_string(++row);
      c.terms.push_back({var_of[ii][jj], 1.0});
      c.terms.push_back({y_var[ii], -1.0});
      c.comparator = BinaryProgram::Comparator::less_equal;
      c.rhs = 0.0;
      bp.constraints.push_back(std::move(c));
    }
  }
  for (std::size_t ii = 0; ii < m; ++ii) {
    BinaryProgram::Constraint c;
    c.name = "c" + std::to_string(++row);
    for (std::size_t jj = 0; jj < n; ++jj)
      if (var_of[ii][jj] != SIZE_MAX)
        c.terms.push_back({var_of[ii][jj], inst.workload_weight_km[ii][jj]});
    c.comparator = BinaryProgram::Comparator::less_equal;
    c.rhs = inst.workload_cap_km;
    bp.constraints.push_back(std::move(c));
  }
  return bp;
}

// The location model carries two objective components; its binary-program
// form is the scalarized one, which is the only single-objective reading.
inline BinaryProgram to_binary_program(const LocationInstance& inst) { return scalarize(inst); }

}  // namespace railcover

#endif  // RAILCOVER_PROBLEM_HPP
