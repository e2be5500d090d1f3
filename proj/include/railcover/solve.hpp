#ifndef RAILCOVER_SOLVE_HPP
#define RAILCOVER_SOLVE_HPP

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "railcover/problem.hpp"

namespace railcover {

// Absolute slack on bound comparisons inside the search.
inline constexpr double kBoundTol = 1e-9;
// Relative tolerance used by the independent plan verifier.
inline constexpr double kVerifyTol = 1e-6;

struct AssignmentPlan {
  std::map<StationId, StationId> assignment;   // station -> rescuer
  std::vector<StationId> opened;               // equipped stations, ascending
  double objective_value = 0.0;                // Z
  double rescue_distance_total_km = 0.0;       // Z1
  double opening_cost_total_yuan = 0.0;        // Z2
  std::map<StationId, double> depot_workload_km;
};

enum class SolveStatus { optimal, infeasible };

struct SolveReport {
  SolveStatus status = SolveStatus::infeasible;
  AssignmentPlan plan;                          // meaningful when optimal
  std::vector<StationId> infeasibility_witness; // stations blocking coverage
  std::uint64_t nodes_explored = 0;
  std::chrono::duration<double> wall_time{0.0};
};

struct SolveOptions {
  bool use_bounding = true;   // objective-bound pruning
  bool use_lookahead = true;  // prune nodes where some station lost every rescuer
};

struct Violation {
  std::string code;
  std::string message;
};

namespace detail {

inline bool close_rel(double a, double b) {
  return std::fabs(a - b) <= kVerifyTol * std::max(1.0, std::fabs(b));
}

inline bool leq_rel(double lhs, double rhs) {
  return lhs <= rhs + kVerifyTol * std::max(1.0, std::fabs(rhs));
}

// One search model covers both problems. Coverage instances have no opening
// decisions; location instances pay open_cost the first time a candidate is
// used (pre-given depots are paid for up front). Objective terms are summed
// station-ascending and opening costs candidate-ascending everywhere, so the
// exact solver, the brute-force oracle and the verifier reproduce identical
// floating-point objective values.
struct SearchModel {
  std::vector<StationId> rescuer_ids;
  std::vector<StationId> station_ids;
  const std::vector<std::vector<double>>* coeff = nullptr;
  const std::vector<std::vector<double>>* weight = nullptr;
  double cap = 0.0;
  bool minimize = false;
  bool has_openings = false;
  double signed_beta = 0.0;             // location: objective km coefficient
  std::vector<double> open_cost;        // location: per rescuer
  std::vector<char> forced;             // location: per rescuer

  double term(std::size_t i, std::size_t j) const {
    double d = (*coeff)[i][j];
    return has_openings ? signed_beta * d : d;
  }
};

inline SearchModel model_of(const CoverageInstance& inst) {
  SearchModel m;
  m.rescuer_ids = inst.depot_ids;
  m.station_ids = inst.station_ids;
  m.coeff = &inst.coefficient_km;
  m.weight = &inst.workload_weight_km;
  m.cap = inst.workload_cap_km;
  m.minimize = inst.objective_sense == ObjectiveSense::minimize;
  return m;
}

inline SearchModel model_of(const LocationInstance& inst) {
  SearchModel m;
  m.rescuer_ids = inst.candidate_ids;
  m.station_ids = inst.station_ids;
  m.coeff = &inst.coefficient_km;
  m.weight = &inst.workload_weight_km;
  m.cap = inst.workload_cap_km;
  m.minimize = true;  // scalarized objective
  m.has_openings = true;
  m.signed_beta = (inst.objective_sense == ObjectiveSense::maximize ? -1.0 : 1.0) * inst.beta;
  m.open_cost = inst.open_cost_yuan;
  m.forced.assign(inst.candidate_ids.size(), 0);
  for (StationId k : inst.forced_open) {
    auto it = std::lower_bound(inst.candidate_ids.begin(), inst.candidate_ids.end(), k);
    if (it == inst.candidate_ids.end() || *it != k)
      throw std::invalid_argument("forced-open station " + std::to_string(k) +
                                  " is not a candidate");
    m.forced[static_cast<std::size_t>(it - inst.candidate_ids.begin())] = 1;
  }
  return m;
}

// Canonical objective of a complete choice vector: assignment terms summed
// station-ascending, then opening costs candidate-ascending.
inline double canonical_value(const SearchModel& m, const std::vector<std::size_t>& choice,
                              const std::vector<char>& opened) {
  double z = 0.0;
  for (std::size_t j = 0; j < choice.size(); ++j) z += m.term(choice[j], j);
  if (m.has_openings)
    for (std::size_t i = 0; i < m.rescuer_ids.size(); ++i)
      if (opened[i]) z += m.open_cost[i];
  return z;
}

struct Searcher {
  const SearchModel& m;
  const SolveOptions& opts;
  std::size_t n, r;
  std::vector<std::vector<std::size_t>> options;  // feasible rescuers per station, ascending
  std::vector<double> used;
  std::vector<int> usage;
  std::vector<char> opened;
  std::vector<std::size_t> choice;
  std::vector<double> amortized;  // opening cost per station a candidate can still absorb
  double cheapest_unopened = 0.0;
  double value = 0.0;
  std::uint64_t nodes = 0;
  bool have_best = false;
  double best_value = 0.0;
  std::vector<std::size_t> best_choice;
  std::vector<char> best_opened;
  std::ptrdiff_t deepest_block = -1;  // station index that blocked the deepest branch

  Searcher(const SearchModel& model, const SolveOptions& options_in)
      : m(model), opts(options_in), n(model.station_ids.size()), r(model.rescuer_ids.size()) {
    options.assign(n, {});
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < r; ++i) {
        if (!std::isfinite((*m.coeff)[i][j])) continue;
        // A pair whose weight alone exceeds the cap can never be assigned.
        if ((*m.weight)[i][j] > m.cap + kBoundTol) continue;
        options[j].push_back(i);
      }
    used.assign(r, 0.0);
    usage.assign(r, 0);
    opened.assign(r, 0);
    for (std::size_t i = 0; i < r; ++i)
      if (m.has_openings && m.forced[i]) {
        opened[i] = 1;
        value += m.open_cost[i];  // paid up front, mirrored in the canonical value
      }
    choice.assign(n, 0);

    // Opening costs are amortized over the number of stations a candidate
    // could ever absorb: its reachable stations, capped by how many of the
    // lightest ones fit under the workload cap. Any completion uses the
    // candidate for at most that many stations, so charging cost/count per
    // station never overstates the true completion cost.
    amortized.assign(r, 0.0);
    if (m.has_openings) {
      cheapest_unopened = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < r; ++i) {
        std::vector<double> weights;
        for (std::size_t j = 0; j < n; ++j)
          if (std::isfinite((*m.coeff)[i][j]) && (*m.weight)[i][j] <= m.cap + kBoundTol)
            weights.push_back((*m.weight)[i][j]);
        std::sort(weights.begin(), weights.end());
        double sum = 0.0;
        std::size_t absorbable = 0;
        for (double w : weights) {
          if (sum + w > m.cap + kBoundTol) break;
          sum += w;
          ++absorbable;
        }
        if (absorbable > 0) amortized[i] = m.open_cost[i] / static_cast<double>(absorbable);
        if (!m.forced[i]) cheapest_unopened = std::min(cheapest_unopened, m.open_cost[i]);
      }
      if (!std::isfinite(cheapest_unopened)) cheapest_unopened = 0.0;
    }
  }

  bool better(double candidate) const {
    return m.minimize ? candidate < best_value : candidate > best_value;
  }

  void block(std::size_t j) {
    if (static_cast<std::ptrdiff_t>(j) > deepest_block)
      deepest_block = static_cast<std::ptrdiff_t>(j);
  }

  // Admissible completion bound over the unassigned stations j >= k, plus the
  // lookahead check (a station with no residual-feasible rescuer prunes the
  // node). For the scalarized location objective two lower bounds are
  // combined: per-station least cost with amortized opening surcharges, and
  // per-station least cost plus the opening spend forced by the remaining
  // workload volume. Returns nullopt when the node was pruned by lookahead.
  std::optional<double> node_bound(std::size_t k, bool& blocked) {
    blocked = false;
    double bound_amortized = value;
    double bound_plain = value;
    double remaining_weight = 0.0;
    for (std::size_t j = k; j < n; ++j) {
      bool any = false;
      double best_amortized = 0.0, best_plain = 0.0, least_weight = 0.0;
      for (std::size_t i : options[j]) {
        double w = (*m.weight)[i][j];
        if (used[i] + w > m.cap + kBoundTol) continue;
        double t = m.term(i, j);
        double ta = t;
        if (m.has_openings && !opened[i]) ta += amortized[i];
        if (!any) {
          any = true;
          best_amortized = ta;
          best_plain = t;
          least_weight = w;
        } else if (m.minimize) {
          best_amortized = std::min(best_amortized, ta);
          best_plain = std::min(best_plain, t);
          least_weight = std::min(least_weight, w);
        } else {
          best_amortized = std::max(best_amortized, ta);
          best_plain = std::max(best_plain, t);
          least_weight = std::min(least_weight, w);
        }
      }
      if (!any) {
        block(j);
        blocked = true;
        return std::nullopt;
      }
      bound_amortized += best_amortized;
      bound_plain += best_plain;
      remaining_weight += least_weight;
    }
    if (!m.has_openings) return bound_amortized;

    // Capacity argument: the remaining stations carry at least
    // remaining_weight of workload; what the opened rescuers can still absorb
    // is bounded, and every further opening adds at most one full cap.
    double open_capacity = 0.0;
    for (std::size_t i = 0; i < r; ++i)
      if (opened[i]) open_capacity += m.cap - used[i];
    double deficit = remaining_weight - open_capacity;
    if (deficit > 0.0 && m.cap > 0.0) {
      double forced_opens = std::ceil(deficit / m.cap - kBoundTol);
      bound_plain += forced_opens * cheapest_unopened;
    }
    return std::max(bound_amortized, bound_plain);
  }

  void dfs(std::size_t k) {
    ++nodes;
    if (k == n) {
      double z = canonical_value(m, choice, opened);
      if (!have_best || better(z)) {
        have_best = true;
        best_value = z;
        best_choice = choice;
        best_opened = opened;
      }
      return;
    }

    if (opts.use_bounding || opts.use_lookahead) {
      bool blocked = false;
      std::optional<double> bound = node_bound(k, blocked);
      if (blocked && opts.use_lookahead) return;
      if (bound && opts.use_bounding && have_best) {
        if (m.minimize ? *bound >= best_value + kBoundTol : *bound <= best_value - kBoundTol)
          return;
      }
    }

    bool assigned_any = false;
    for (std::size_t i : options[k]) {
      double w = (*m.weight)[i][k];
      if (used[i] + w > m.cap + kBoundTol) continue;
      assigned_any = true;

      double saved_used = used[i];
      double saved_value = value;
      char saved_open = opened[i];
      used[i] = saved_used + w;
      value += m.term(i, k);
      if (m.has_openings && !opened[i]) {
        value += m.open_cost[i];
        opened[i] = 1;
      }
      ++usage[i];
      choice[k] = i;

      dfs(k + 1);

      --usage[i];
      if (m.has_openings && usage[i] == 0 && !m.forced[i]) opened[i] = saved_open;
      value = saved_value;
      used[i] = saved_used;
    }
    if (!assigned_any) block(k);
  }
};

inline AssignmentPlan assemble_plan(const SearchModel& m, const std::vector<std::size_t>& choice,
                                    const std::vector<char>& opened_flags) {
  AssignmentPlan plan;
  double z = 0.0;
  double z1 = 0.0;
  for (std::size_t j = 0; j < m.station_ids.size(); ++j) {
    std::size_t i = choice[j];
    plan.assignment[m.station_ids[j]] = m.rescuer_ids[i];
    z1 += (*m.coeff)[i][j];
    z += m.term(i, j);
    plan.depot_workload_km[m.rescuer_ids[i]] += (*m.weight)[i][j];
  }
  double z2 = 0.0;
  if (m.has_openings) {
    for (std::size_t i = 0; i < m.rescuer_ids.size(); ++i)
      if (opened_flags[i]) {
        plan.opened.push_back(m.rescuer_ids[i]);
        z2 += m.open_cost[i];
        z += m.open_cost[i];
      }
  } else {
    plan.opened = m.rescuer_ids;  // pre-equipped depots
  }
  for (StationId i : plan.opened)
    if (!plan.depot_workload_km.count(i)) plan.depot_workload_km[i] = 0.0;
  plan.objective_value = z;
  plan.rescue_distance_total_km = z1;
  plan.opening_cost_total_yuan = z2;
  return plan;
}

inline SolveReport solve_model(const SearchModel& m, const SolveOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  SolveReport report;

  Searcher searcher(m, opts);
  std::vector<StationId> uncovered;
  for (std::size_t j = 0; j < searcher.n; ++j)
    if (searcher.options[j].empty()) uncovered.push_back(m.station_ids[j]);
  if (!uncovered.empty()) {
    report.status = SolveStatus::infeasible;
    report.infeasibility_witness = uncovered;
    report.wall_time = std::chrono::steady_clock::now() - start;
    return report;
  }

  searcher.dfs(0);

  report.nodes_explored = searcher.nodes;
  if (searcher.have_best) {
    report.status = SolveStatus::optimal;
    report.plan = assemble_plan(m, searcher.best_choice, searcher.best_opened);
  } else {
    report.status = SolveStatus::infeasible;
    if (searcher.deepest_block >= 0)
      report.infeasibility_witness = {m.station_ids[static_cast<std::size_t>(searcher.deepest_block)]};
  }
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

}  // namespace detail

// Depth-first branch and bound over (station, rescuer) assignment choices.
// Children are explored in ascending (station id, rescuer id) order and a new
// incumbent must be strictly better, so among equal-objective optima the
// lexicographically smallest assignment vector wins. Returns a provably
// optimal plan, or infeasibility with a witnessing station set.
inline SolveReport solve_exact(const CoverageInstance& inst, const SolveOptions& opts = {}) {
  return detail::solve_model(detail::model_of(inst), opts);
}

inline SolveReport solve_exact(const LocationInstance& inst, const SolveOptions& opts = {}) {
  return detail::solve_model(detail::model_of(inst), opts);
}

// Rebuilds a fully-evaluated plan from raw assignment decisions; shared by
// the brute-force path and tests.
inline AssignmentPlan make_plan(const CoverageInstance& inst,
                                const std::map<StationId, StationId>& assignment) {
  detail::SearchModel m = detail::model_of(inst);
  std::vector<std::size_t> choice(m.station_ids.size());
  for (std::size_t j = 0; j < m.station_ids.size(); ++j) {
    auto it = assignment.find(m.station_ids[j]);
    if (it == assignment.end())
      throw std::invalid_argument("assignment misses station " +
                                  std::to_string(m.station_ids[j]));
    auto rit = std::lower_bound(m.rescuer_ids.begin(), m.rescuer_ids.end(), it->second);
    if (rit == m.rescuer_ids.end() || *rit != it->second)
      throw std::invalid_argument("unknown rescuer " + std::to_string(it->second));
    choice[j] = static_cast<std::size_t>(rit - m.rescuer_ids.begin());
  }
  return detail::assemble_plan(m, choice, {});
}

inline AssignmentPlan make_plan(const LocationInstance& inst,
                                const std::map<StationId, StationId>& assignment,
                                const std::vector<StationId>& opened) {
  detail::SearchModel m = detail::model_of(inst);
  std::vector<std::size_t> choice(m.station_ids.size());
  for (std::size_t j = 0; j < m.station_ids.size(); ++j) {
    auto it = assignment.find(m.station_ids[j]);
    if (it == assignment.end())
      throw std::invalid_argument("assignment misses station " +
                                  std::to_string(m.station_ids[j]));
    auto rit = std::lower_bound(m.rescuer_ids.begin(), m.rescuer_ids.end(), it->second);
    if (rit == m.rescuer_ids.end() || *rit != it->second)
      throw std::invalid_argument("unknown rescuer " + std::to_string(it->second));
    choice[j] = static_cast<std::size_t>(rit - m.rescuer_ids.begin());
  }
  std::vector<char> flags(m.rescuer_ids.size(), 0);
  for (StationId k : opened) {
    auto it = std::lower_bound(m.rescuer_ids.begin(), m.rescuer_ids.end(), k);
    if (it != m.rescuer_ids.end() && *it == k)
      flags[static_cast<std::size_t>(it - m.rescuer_ids.begin())] = 1;
  }
  return detail::assemble_plan(m, choice, flags);
}

// Exhaustive enumeration of every 0/1 assignment of the program variables,
// sharing solve_exact's tie-break: objective first, then the decoded
// assignment vector, then the smallest opened set. Independent of the
// branch-and-bound path; used as its oracle.
inline SolveReport solve_bruteforce(const BinaryProgram& bp, std::size_t variable_limit = 24) {
  const std::size_t n = bp.variables.size();
  if (n > variable_limit)
    throw std::invalid_argument("brute force limited to " + std::to_string(variable_limit) +
                                " variables, got " + std::to_string(n));
  auto start = std::chrono::steady_clock::now();

  using Mask = unsigned long long;

  // Classify rows so the enumeration loop stays cheap; rows that fit no
  // pattern fall back to exact numeric evaluation in term order.
  std::vector<Mask> one_hot;
  std::vector<std::pair<Mask, Mask>> implies;  // (if-bits, then-bit)
  Mask forbidden = 0;
  std::vector<const BinaryProgram::Constraint*> numeric;
  for (const auto& c : bp.constraints) {
    bool unit = std::all_of(c.terms.begin(), c.terms.end(),
                            [](const auto& t) { return t.second == 1.0; });
    if (unit && c.comparator == BinaryProgram::Comparator::equal && c.rhs == 1.0) {
      Mask group = 0;
      for (const auto& t : c.terms) group |= Mask{1} << t.first;
      one_hot.push_back(group);
      continue;
    }
    if (c.terms.size() == 2 && c.comparator == BinaryProgram::Comparator::less_equal &&
        c.rhs == 0.0 && c.terms[0].second == 1.0 && c.terms[1].second == -1.0) {
      implies.push_back({Mask{1} << c.terms[0].first, Mask{1} << c.terms[1].first});
      continue;
    }
    if (c.terms.size() == 1 && c.comparator == BinaryProgram::Comparator::less_equal &&
        c.terms[0].second > 0.0) {
      if (c.terms[0].second > c.rhs + kBoundTol) forbidden |= Mask{1} << c.terms[0].first;
      continue;
    }
    numeric.push_back(&c);
  }

  auto decode = [&bp](Mask mask) {
    AssignmentPlan plan;
    bool any_opening_vars = false;
    for (std::size_t v = 0; v < bp.variables.size(); ++v) {
      const auto& var = bp.variables[v];
      if (var.kind == BinaryProgram::VarKind::opening) any_opening_vars = true;
      if (!(mask >> v & 1)) continue;
      if (var.kind == BinaryProgram::VarKind::assignment)
        plan.assignment[var.station] = var.rescuer;
      else if (var.kind == BinaryProgram::VarKind::opening)
        plan.opened.push_back(var.rescuer);
    }
    if (!any_opening_vars) {
      // Coverage programs carry no opening variables; every rescuer that
      // appears is pre-equipped.
      std::set<StationId> rescuers;
      for (const auto& var : bp.variables)
        if (var.kind == BinaryProgram::VarKind::assignment) rescuers.insert(var.rescuer);
      plan.opened.assign(rescuers.begin(), rescuers.end());
    }
    return plan;
  };

  auto plan_less = [](const AssignmentPlan& a, const AssignmentPlan& b) {
    std::vector<std::pair<StationId, StationId>> av(a.assignment.begin(), a.assignment.end());
    std::vector<std::pair<StationId, StationId>> bv(b.assignment.begin(), b.assignment.end());
    if (av != bv) return av < bv;
    if (a.opened.size() != b.opened.size()) return a.opened.size() < b.opened.size();
    return a.opened < b.opened;
  };

  SolveReport report;
  bool have_best = false;
  double best_value = 0.0;
  AssignmentPlan best_plan;
  const bool minimize = bp.sense == ObjectiveSense::minimize;

  const Mask total = Mask{1} << n;
  for (Mask mask = 0; mask < total; ++mask) {
    ++report.nodes_explored;
    if (mask & forbidden) continue;
    bool ok = true;
    for (Mask group : one_hot)
      if (std::popcount(mask & group) != 1) { ok = false; break; }
    if (!ok) continue;
    for (const auto& [iff, then] : implies)
      if ((mask & iff) && !(mask & then)) { ok = false; break; }
    if (!ok) continue;
    for (const auto* c : numeric) {
      double lhs = 0.0;
      for (const auto& [v, coef] : c->terms)
        if (mask >> v & 1) lhs += coef;
      if (c->comparator == BinaryProgram::Comparator::equal
              ? std::fabs(lhs - c->rhs) > kBoundTol
              : lhs > c->rhs + kBoundTol) { ok = false; break; }
    }
    if (!ok) continue;

    double z = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (mask >> v & 1) z += bp.objective[v];

    if (!have_best || (minimize ? z < best_value : z > best_value)) {
      have_best = true;
      best_value = z;
      best_plan = decode(mask);
    } else if (z == best_value) {
      AssignmentPlan candidate = decode(mask);
      if (plan_less(candidate, best_plan)) best_plan = std::move(candidate);
    }
  }

  if (have_best) {
    report.status = SolveStatus::optimal;
    best_plan.objective_value = best_value;
    report.plan = std::move(best_plan);
  } else {
    report.status = SolveStatus::infeasible;
  }
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

namespace detail {

inline void verify_common(const SearchModel& m, const AssignmentPlan& plan,
                          std::vector<Violation>& out) {
  auto add = [&out](std::string code, std::string message) {
    out.push_back({std::move(code), std::move(message)});
  };

  std::map<StationId, double> workload;
  double z1 = 0.0;
  double z = 0.0;
  for (std::size_t j = 0; j < m.station_ids.size(); ++j) {
    StationId station = m.station_ids[j];
    auto it = plan.assignment.find(station);
    if (it == plan.assignment.end()) {
      add("unassigned", "station " + std::to_string(station) + " has no rescuer");
      continue;
    }
    StationId rescuer = it->second;
    auto rit = std::lower_bound(m.rescuer_ids.begin(), m.rescuer_ids.end(), rescuer);
    if (rit == m.rescuer_ids.end() || *rit != rescuer) {
      add("unknown_rescuer", "station " + std::to_string(station) + " assigned to unknown " +
                                 std::to_string(rescuer));
      continue;
    }
    std::size_t i = static_cast<std::size_t>(rit - m.rescuer_ids.begin());
    double d = (*m.coeff)[i][j];
    if (!std::isfinite(d)) {
      add("infeasible_pair", "pair (" + std::to_string(rescuer) + ", " +
                                 std::to_string(station) + ") violates the rescue caps");
      continue;
    }
    workload[rescuer] += (*m.weight)[i][j];
    z1 += d;
    z += m.term(i, j);
    if (std::find(plan.opened.begin(), plan.opened.end(), rescuer) == plan.opened.end())
      add("link_open", "station " + std::to_string(station) + " assigned to " +
                           std::to_string(rescuer) + " which is not opened");
  }
  for (const auto& [station, rescuer] : plan.assignment)
    if (std::find(m.station_ids.begin(), m.station_ids.end(), station) == m.station_ids.end())
      add("unknown_station", "plan assigns unknown station " + std::to_string(station));

  double z2 = 0.0;
  if (m.has_openings) {
    for (std::size_t i = 0; i < m.rescuer_ids.size(); ++i) {
      bool open = std::find(plan.opened.begin(), plan.opened.end(), m.rescuer_ids[i]) !=
                  plan.opened.end();
      if (m.forced[i] && !open)
        add("forced_open", "pre-given depot " + std::to_string(m.rescuer_ids[i]) +
                               " is not opened");
      if (open) {
        z2 += m.open_cost[i];
        z += m.open_cost[i];
      }
    }
  }

  for (const auto& [rescuer, load] : workload) {
    if (!leq_rel(load, m.cap))
      add("workload_cap", "rescuer " + std::to_string(rescuer) + " workload " +
                              std::to_string(load) + " km exceeds cap " +
                              std::to_string(m.cap) + " km");
    auto it = plan.depot_workload_km.find(rescuer);
    if (it == plan.depot_workload_km.end() || !close_rel(it->second, load))
      add("workload_mismatch", "stored workload for rescuer " + std::to_string(rescuer) +
                                   " differs from recomputed " + std::to_string(load));
  }

  if (!close_rel(plan.rescue_distance_total_km, z1))
    add("z1_mismatch", "stored Z1 " + std::to_string(plan.rescue_distance_total_km) +
                           " differs from recomputed " + std::to_string(z1));
  if (!close_rel(plan.objective_value, z))
    add("objective_mismatch", "stored objective " + std::to_string(plan.objective_value) +
                                  " differs from recomputed " + std::to_string(z));
  if (m.has_openings && !close_rel(plan.opening_cost_total_yuan, z2))
    add("z2_mismatch", "stored Z2 " + std::to_string(plan.opening_cost_total_yuan) +
                           " differs from recomputed " + std::to_string(z2));
}

// Re-checks the distance and time caps from the raw effective distances,
// independently of the feasibility mask the builder applied.
inline void verify_caps(const SearchModel& m, const AssignmentPlan& plan, double max_km,
                        double max_hours, double speed, std::vector<Violation>& out) {
  for (const auto& [station, rescuer] : plan.assignment) {
    auto sit = std::lower_bound(m.station_ids.begin(), m.station_ids.end(), station);
    auto rit = std::lower_bound(m.rescuer_ids.begin(), m.rescuer_ids.end(), rescuer);
    if (sit == m.station_ids.end() || *sit != station) continue;
    if (rit == m.rescuer_ids.end() || *rit != rescuer) continue;
    double d = (*m.coeff)[static_cast<std::size_t>(rit - m.rescuer_ids.begin())]
                         [static_cast<std::size_t>(sit - m.station_ids.begin())];
    if (!std::isfinite(d)) continue;  // reported as infeasible_pair already
    if (!leq_rel(d, max_km))
      out.push_back({"distance_cap", "pair (" + std::to_string(rescuer) + ", " +
                                         std::to_string(station) + ") distance " +
                                         std::to_string(d) + " km exceeds the cap"});
    if (!leq_rel(d / speed, max_hours))
      out.push_back({"time_cap", "pair (" + std::to_string(rescuer) + ", " +
                                     std::to_string(station) + ") time " +
                                     std::to_string(d / speed) + " h exceeds the cap"});
  }
}

}  // namespace detail

// Independent recheck of a plan against an instance: coverage totality and
// uniqueness, pair caps, workload caps, forced openings, linking, and the
// stored objective components recomputed from raw data.
inline std::vector<Violation> verify_plan(const CoverageInstance& inst,
                                          const AssignmentPlan& plan) {
  detail::SearchModel m = detail::model_of(inst);
  std::vector<Violation> out;
  detail::verify_common(m, plan, out);
  detail::verify_caps(m, plan, inst.max_rescue_km, inst.max_rescue_hours, inst.speed_kmh, out);
  if (!detail::close_rel(plan.opening_cost_total_yuan, 0.0))
    out.push_back({"z2_mismatch", "coverage plans have no opening cost"});
  return out;
}

inline std::vector<Violation> verify_plan(const LocationInstance& inst,
                                          const AssignmentPlan& plan) {
  detail::SearchModel m = detail::model_of(inst);
  std::vector<Violation> out;
  detail::verify_common(m, plan, out);
  detail::verify_caps(m, plan, inst.max_rescue_km, inst.max_rescue_hours, inst.speed_kmh, out);
  return out;
}

}  // namespace railcover

#endif  // RAILCOVER_SOLVE_HPP
