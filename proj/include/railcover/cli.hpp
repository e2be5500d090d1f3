#ifndef RAILCOVER_CLI_HPP
#define RAILCOVER_CLI_HPP

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "railcover/dot_format.hpp"
#include "railcover/json_io.hpp"
#include "railcover/lp_format.hpp"
#include "railcover/merge.hpp"
#include "railcover/network.hpp"
#include "railcover/problem.hpp"
#include "railcover/solve.hpp"

namespace railcover {

enum class Command { merge, solve_coverage, solve_location, export_lp, render };
enum class ModelKind { coverage, location };

// Exit status contract: 0 solved/emitted, 1 input error, 2 model infeasible.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInfeasible = 2;

struct RunConfig {
  Command command = Command::solve_coverage;
  std::string input_path;
  std::optional<std::string> output_path;
  std::vector<std::pair<std::string, std::string>> overrides;  // applied in order
  std::optional<ObjectiveSense> sense;                         // --sense shorthand
  bool use_oracle = false;       // route through the brute-force solver
  ModelKind model = ModelKind::coverage;  // picked model for export-lp / render
};

namespace detail {

inline double parse_double(const std::string& name, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw InputError("override " + name + ": '" + value + "' is not a number");
  }
}

inline void apply_override(Parameters& p, const std::string& name, const std::string& value) {
  if (name == "alpha") p.alpha = parse_double(name, value);
  else if (name == "gamma") p.gamma = parse_double(name, value);
  else if (name == "speed_kmh") p.speed_kmh = parse_double(name, value);
  else if (name == "max_rescue_km") p.max_rescue_km = parse_double(name, value);
  else if (name == "max_rescue_hours") p.max_rescue_hours = parse_double(name, value);
  else if (name == "network_mileage_km") p.network_mileage_km = parse_double(name, value);
  else if (name == "emu_fleet_size") {
    try {
      p.emu_fleet_size = std::stoll(value);
    } catch (const std::exception&) {
      throw InputError("override emu_fleet_size: '" + value + "' is not an integer");
    }
  } else if (name == "beta") p.beta = parse_double(name, value);
  else if (name == "objective_sense") {
    if (value == "maximize") p.objective_sense = ObjectiveSense::maximize;
    else if (value == "minimize") p.objective_sense = ObjectiveSense::minimize;
    else throw InputError("override objective_sense: expected maximize or minimize");
  } else {
    throw InputError("unknown override '" + name +
                     "'; valid names: alpha, gamma, speed_kmh, max_rescue_km, "
                     "max_rescue_hours, network_mileage_km, emu_fleet_size, beta, "
                     "objective_sense");
  }
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file: " + path);
  out << content;
  if (!out) throw InputError("failed writing output file: " + path);
}

inline void print_matrix(std::ostream& out, const std::string& title,
                         const std::vector<StationId>& ids,
                         const std::vector<std::vector<double>>& m, int decimals) {
  out << title << "\n";
  out << std::setw(9) << " " << " |";
  for (StationId id : ids) out << std::setw(10) << id;
  out << "\n";
  out << std::fixed << std::setprecision(decimals);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << std::setw(9) << ids[i] << " |";
    for (std::size_t j = 0; j < ids.size(); ++j) out << std::setw(10) << m[i][j];
    out << "\n";
  }
  out << "\n";
  out.unsetf(std::ios::fixed);
  out << std::setprecision(6);
}

inline nlohmann::json merged_to_json(const MergedInstance& merged) {
  nlohmann::json doc;
  doc["station_ids"] = merged.ids;
  doc["base_distance_km"] = merged.base_distance_km;
  doc["exclusion_max_km"] = merged.exclusion_max_km;
  doc["effective_distance_km"] = merged.effective_distance_km;
  doc["rescue_time_h"] = merged.rescue_time_h;
  std::vector<std::vector<bool>> feasible;
  for (const auto& row : merged.feasible) feasible.emplace_back(row.begin(), row.end());
  doc["feasible"] = feasible;
  return doc;
}

template <typename Instance>
inline void print_plan(std::ostream& out, const Instance& inst, const SolveReport& report) {
  const AssignmentPlan& plan = report.plan;
  out << std::fixed << std::setprecision(6);
  out << "\n station  rescuer         D_km        tau_h\n";
  for (StationId station : inst.station_ids) {
    StationId rescuer = plan.assignment.at(station);
    auto si = std::lower_bound(inst.station_ids.begin(), inst.station_ids.end(), station) -
              inst.station_ids.begin();
    std::size_t ri = 0;
    const auto& rescuers =
        [&inst]() -> const std::vector<StationId>& {
      if constexpr (std::is_same_v<Instance, CoverageInstance>) return inst.depot_ids;
      else return inst.candidate_ids;
    }();
    ri = static_cast<std::size_t>(
        std::lower_bound(rescuers.begin(), rescuers.end(), rescuer) - rescuers.begin());
    double d = inst.coefficient_km[ri][static_cast<std::size_t>(si)];
    out << std::setw(8) << station << std::setw(9) << rescuer << std::setw(13) << d
        << std::setw(13) << d / inst.speed_kmh << "\n";
  }
  out << "\n rescuer  workload_km       cap_km\n";
  for (const auto& [rescuer, load] : plan.depot_workload_km)
    out << std::setw(8) << rescuer << std::setw(13) << load << std::setw(13)
        << inst.workload_cap_km << "\n";
  out << "\n";
}

struct LoadedNetwork {
  Network net;
  MergedInstance merged;
};

inline LoadedNetwork load_and_prepare(const RunConfig& config, std::ostream& err) {
  Network net = load_network_file(config.input_path);
  for (const auto& [name, value] : config.overrides)
    apply_override(net.parameters, name, value);
  if (config.sense) net.parameters.objective_sense = *config.sense;

  std::vector<Diagnostic> diags = validate(net);
  if (!diags.empty()) {
    for (const Diagnostic& d : diags) err << "invalid network [" << d.code << "]: " << d.message << "\n";
    throw InputError("network failed validation with " + std::to_string(diags.size()) +
                     " diagnostic(s)");
  }
  MergedInstance merged = build_merged_instance(net);
  for (const Diagnostic& w : merged.warnings)
    err << "warning [" << w.code << "]: " << w.message << "\n";
  return {std::move(net), std::move(merged)};
}

}  // namespace detail

// Executes one subcommand against an input document and returns the exit
// status. All human-readable output goes to `out`, diagnostics to `err`.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    detail::LoadedNetwork loaded = detail::load_and_prepare(config, err);
    const Network& net = loaded.net;
    const MergedInstance& merged = loaded.merged;

    switch (config.command) {
      case Command::merge: {
        detail::print_matrix(out, "base distance L_ij (km)", merged.ids,
                             merged.base_distance_km, 3);
        detail::print_matrix(out, "exclusion max l_ij (km)", merged.ids,
                             merged.exclusion_max_km, 3);
        detail::print_matrix(out, "effective distance D_ij (km)", merged.ids,
                             merged.effective_distance_km, 3);
        detail::print_matrix(out, "rescue time tau_ij (h)", merged.ids, merged.rescue_time_h, 4);
        if (config.output_path)
          detail::write_text_file(*config.output_path,
                                  detail::merged_to_json(merged).dump(2) + "\n");
        return kExitOk;
      }

      case Command::solve_coverage: {
        CoverageInstance inst = build_cmhse(merged, net);
        SolveReport report;
        if (config.use_oracle) {
          report = solve_bruteforce(to_binary_program(inst));
          if (report.status == SolveStatus::optimal)
            report.plan = make_plan(inst, report.plan.assignment);
        } else {
          report = solve_exact(inst);
        }
        out << "model: coverage\n";
        out << "objective sense: " << to_string(inst.objective_sense) << "\n";
        out << "stations: " << inst.station_ids.size() << "  depots: " << inst.depot_ids.size()
            << "\n";
        out << std::fixed << std::setprecision(6);
        out << "workload cap (km): " << inst.workload_cap_km << "\n";
        out << "nodes explored: " << report.nodes_explored << "\n";
        if (report.status == SolveStatus::infeasible) {
          out << "status: infeasible\n";
          out << "uncoverable stations: " << join_ids(report.infeasibility_witness) << "\n";
          return kExitInfeasible;
        }
        out << "status: optimal\n";
        std::vector<Violation> violations = verify_plan(inst, report.plan);
        for (const Violation& v : violations)
          err << "verification failure [" << v.code << "]: " << v.message << "\n";
        if (!violations.empty()) return kExitInputError;
        detail::print_plan(out, inst, report);
        out << "Z1 total rescue distance (km): " << report.plan.rescue_distance_total_km << "\n";
        out << "Z  objective value: " << report.plan.objective_value << "\n";
        if (config.output_path) {
          std::ostringstream copy;
          detail::print_plan(copy, inst, report);
          copy << std::fixed << std::setprecision(6);
          copy << "Z1 total rescue distance (km): " << report.plan.rescue_distance_total_km
               << "\n";
          copy << "Z  objective value: " << report.plan.objective_value << "\n";
          detail::write_text_file(*config.output_path, copy.str());
        }
        return kExitOk;
      }

      case Command::solve_location: {
        LocationInstance inst = build_lchse(merged, net);
        SolveReport report;
        if (config.use_oracle) {
          report = solve_bruteforce(scalarize(inst));
          if (report.status == SolveStatus::optimal)
            report.plan = make_plan(inst, report.plan.assignment, report.plan.opened);
        } else {
          report = solve_exact(inst);
        }
        out << "model: location\n";
        out << "objective sense: minimize (scalarized, beta = " << lp_number(inst.beta) << ")\n";
        out << "stations: " << inst.station_ids.size()
            << "  candidates: " << inst.candidate_ids.size()
            << "  pre-given: " << join_ids(inst.forced_open) << "\n";
        out << std::fixed << std::setprecision(6);
        out << "workload cap (km): " << inst.workload_cap_km << "\n";
        out << "nodes explored: " << report.nodes_explored << "\n";
        if (report.status == SolveStatus::infeasible) {
          out << "status: infeasible\n";
          out << "uncoverable stations: " << join_ids(report.infeasibility_witness) << "\n";
          return kExitInfeasible;
        }
        out << "status: optimal\n";
        std::vector<Violation> violations = verify_plan(inst, report.plan);
        for (const Violation& v : violations)
          err << "verification failure [" << v.code << "]: " << v.message << "\n";
        if (!violations.empty()) return kExitInputError;
        out << "opened stations: " << join_ids(report.plan.opened) << "\n";
        detail::print_plan(out, inst, report);
        out << "Z1 total rescue distance (km): " << report.plan.rescue_distance_total_km << "\n";
        out << "Z2 opening cost (yuan): " << report.plan.opening_cost_total_yuan << "\n";
        out << "Z  scalarized objective: " << report.plan.objective_value << "\n";
        if (config.output_path) {
          std::ostringstream copy;
          copy << "opened stations: " << join_ids(report.plan.opened) << "\n";
          detail::print_plan(copy, inst, report);
          copy << std::fixed << std::setprecision(6);
          copy << "Z1 total rescue distance (km): " << report.plan.rescue_distance_total_km
               << "\n";
          copy << "Z2 opening cost (yuan): " << report.plan.opening_cost_total_yuan << "\n";
          copy << "Z  scalarized objective: " << report.plan.objective_value << "\n";
          detail::write_text_file(*config.output_path, copy.str());
        }
        return kExitOk;
      }

      case Command::export_lp: {
        BinaryProgram bp = config.model == ModelKind::coverage
                               ? to_binary_program(build_cmhse(merged, net))
                               : to_binary_program(build_lchse(merged, net));
        std::string text = write_lp(bp);
        if (config.output_path) detail::write_text_file(*config.output_path, text);
        else out << text;
        return kExitOk;
      }

      case Command::render: {
        SolveReport report;
        AssignmentPlan plan;
        if (config.model == ModelKind::coverage) {
          CoverageInstance inst = build_cmhse(merged, net);
          report = solve_exact(inst);
          if (report.status == SolveStatus::infeasible) {
            out << "status: infeasible\n";
            out << "uncoverable stations: " << join_ids(report.infeasibility_witness) << "\n";
            return kExitInfeasible;
          }
        } else {
          LocationInstance inst = build_lchse(merged, net);
          report = solve_exact(inst);
          if (report.status == SolveStatus::infeasible) {
            out << "status: infeasible\n";
            out << "uncoverable stations: " << join_ids(report.infeasibility_witness) << "\n";
            return kExitInfeasible;
          }
        }
        std::string text = render_dot(net, report.plan);
        if (config.output_path) detail::write_text_file(*config.output_path, text);
        else out << text;
        return kExitOk;
      }
    }
    err << "unknown subcommand\n";
    return kExitInputError;
  } catch (const UncoverableError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace railcover

#endif  // RAILCOVER_CLI_HPP
