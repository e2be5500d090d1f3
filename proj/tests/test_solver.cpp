#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <random>

#include "railcover/problem.hpp"
#include "railcover/solve.hpp"

#include "generators.hpp"

using namespace railcover;
using railcover::testing::make_station;
using railcover::testing::random_network;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

CoverageInstance tiny_coverage() {
  // One depot (1), one other station (2), D(1,1) = 50, D(1,2) = 130.
  CoverageInstance inst;
  inst.depot_ids = {1};
  inst.station_ids = {1, 2};
  inst.coefficient_km = {{50.0, 130.0}};
  inst.workload_weight_km = {{1.0, 2.6}};
  inst.workload_cap_km = 100.0;
  inst.objective_sense = ObjectiveSense::maximize;
  inst.max_rescue_km = 800.0;
  inst.max_rescue_hours = 2.5;
  inst.speed_kmh = 300.0;
  return inst;
}

}  // namespace

TEST_CASE("solve_exact on the unique feasible plan") {
  CoverageInstance inst = tiny_coverage();
  SolveReport report = solve_exact(inst);
  REQUIRE(report.status == SolveStatus::optimal);
  CHECK(report.plan.objective_value == 50.0 + 130.0);
  CHECK(report.plan.assignment.at(1) == 1);
  CHECK(report.plan.assignment.at(2) == 1);
  CHECK(report.plan.opened == std::vector<StationId>{1});
  CHECK(report.plan.depot_workload_km.at(1) == 3.6);
  CHECK(verify_plan(inst, report.plan).empty());
}

TEST_CASE("solve_exact reports an uncoverable station as the witness") {
  CoverageInstance inst = tiny_coverage();
  inst.coefficient_km[0][1] = kNaN;  // station 2 loses its only depot
  inst.workload_weight_km[0][1] = kNaN;
  SolveReport report = solve_exact(inst);
  REQUIRE(report.status == SolveStatus::infeasible);
  CHECK(report.infeasibility_witness == std::vector<StationId>{2});
}

TEST_CASE("workload-driven infeasibility names the blocking station") {
  CoverageInstance inst = tiny_coverage();
  inst.workload_cap_km = 3.0;  // both stations fit alone but not together
  SolveReport report = solve_exact(inst);
  REQUIRE(report.status == SolveStatus::infeasible);
  CHECK(report.infeasibility_witness == std::vector<StationId>{2});
}

TEST_CASE("brute force on degenerate programs") {
  BinaryProgram empty;
  SolveReport r = solve_bruteforce(empty);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.plan.objective_value == 0.0);

  BinaryProgram capped;
  capped.sense = ObjectiveSense::maximize;
  capped.add_variable({"x", BinaryProgram::VarKind::other, -1, -1}, 5.0);
  BinaryProgram::Constraint c;
  c.name = "c1";
  c.terms = {{0, 1.0}};
  c.comparator = BinaryProgram::Comparator::less_equal;
  c.rhs = 0.0;
  capped.constraints.push_back(c);
  SolveReport capped_report = solve_bruteforce(capped);
  REQUIRE(capped_report.status == SolveStatus::optimal);
  CHECK(capped_report.plan.objective_value == 0.0);

  BinaryProgram big;
  for (int k = 0; k < 30; ++k)
    big.add_variable({"v" + std::to_string(k), BinaryProgram::VarKind::other, -1, -1}, 1.0);
  CHECK_THROWS_AS(solve_bruteforce(big), std::invalid_argument);
}

TEST_CASE("brute force agrees with hand enumeration on a dense instance") {
  // 2 depots x 3 stations, generous caps: the maximize optimum picks the
  // larger coefficient per station.
  CoverageInstance inst;
  inst.depot_ids = {1, 2};
  inst.station_ids = {1, 2, 3};
  inst.coefficient_km = {{10.0, 40.0, 25.0}, {35.0, 15.0, 30.0}};
  inst.workload_weight_km = {{0.2, 0.8, 0.5}, {0.7, 0.3, 0.6}};
  inst.workload_cap_km = 100.0;
  inst.objective_sense = ObjectiveSense::maximize;
  inst.max_rescue_km = 800.0;
  inst.max_rescue_hours = 2.5;
  inst.speed_kmh = 300.0;

  SolveReport oracle = solve_bruteforce(to_binary_program(inst));
  REQUIRE(oracle.status == SolveStatus::optimal);
  CHECK(oracle.plan.objective_value == 35.0 + 40.0 + 30.0);
  CHECK(oracle.plan.assignment.at(1) == 2);
  CHECK(oracle.plan.assignment.at(2) == 1);
  CHECK(oracle.plan.assignment.at(3) == 2);

  SolveReport exact = solve_exact(inst);
  REQUIRE(exact.status == SolveStatus::optimal);
  CHECK(exact.plan.objective_value == oracle.plan.objective_value);
  CHECK(exact.plan.assignment == oracle.plan.assignment);
}

TEST_CASE("equal-objective optima resolve to the smallest assignment vector") {
  CoverageInstance inst;
  inst.depot_ids = {1, 2};
  inst.station_ids = {1, 2};
  inst.coefficient_km = {{20.0, 20.0}, {20.0, 20.0}};
  inst.workload_weight_km = {{0.4, 0.4}, {0.4, 0.4}};
  inst.workload_cap_km = 10.0;
  inst.objective_sense = ObjectiveSense::maximize;
  inst.max_rescue_km = 800.0;
  inst.max_rescue_hours = 2.5;
  inst.speed_kmh = 300.0;

  SolveReport exact = solve_exact(inst);
  REQUIRE(exact.status == SolveStatus::optimal);
  CHECK(exact.plan.assignment.at(1) == 1);
  CHECK(exact.plan.assignment.at(2) == 1);

  SolveReport oracle = solve_bruteforce(to_binary_program(inst));
  CHECK(oracle.plan.assignment == exact.plan.assignment);
}

namespace {

struct Comparison {
  int optimal = 0;
  int infeasible = 0;
};

Comparison compare_on_corpus(int instances, unsigned seed) {
  std::mt19937 rng(seed);
  Comparison tally;
  for (int trial = 0; trial < instances; ++trial) {
    Network net = random_network(rng);
    MergedInstance merged = build_merged_instance(net);

    CoverageInstance coverage = build_cmhse(merged, net);
    SolveReport exact = solve_exact(coverage);
    SolveReport oracle = solve_bruteforce(to_binary_program(coverage));
    REQUIRE(exact.status == oracle.status);
    if (exact.status == SolveStatus::optimal) {
      ++tally.optimal;
      REQUIRE(exact.plan.objective_value == oracle.plan.objective_value);
      REQUIRE(exact.plan.assignment == oracle.plan.assignment);
      AssignmentPlan rebuilt = make_plan(coverage, oracle.plan.assignment);
      REQUIRE(rebuilt.objective_value == oracle.plan.objective_value);
      CHECK(verify_plan(coverage, exact.plan).empty());
      CHECK(verify_plan(coverage, rebuilt).empty());
    } else {
      ++tally.infeasible;
    }

    LocationInstance location = build_lchse(merged, net);
    SolveReport lexact = solve_exact(location);
    SolveReport loracle = solve_bruteforce(scalarize(location));
    REQUIRE(lexact.status == loracle.status);
    if (lexact.status == SolveStatus::optimal) {
      REQUIRE(lexact.plan.objective_value == loracle.plan.objective_value);
      REQUIRE(lexact.plan.assignment == loracle.plan.assignment);
      REQUIRE(lexact.plan.opened == loracle.plan.opened);
      AssignmentPlan rebuilt = make_plan(location, loracle.plan.assignment, loracle.plan.opened);
      REQUIRE(rebuilt.objective_value == loracle.plan.objective_value);
      CHECK(verify_plan(location, lexact.plan).empty());
      CHECK(verify_plan(location, rebuilt).empty());
      // Linking: every assignment target is opened.
      for (const auto& [station, rescuer] : lexact.plan.assignment)
        CHECK(std::find(lexact.plan.opened.begin(), lexact.plan.opened.end(), rescuer) !=
              lexact.plan.opened.end());
    }
  }
  return tally;
}

}  // namespace

TEST_CASE("exact solver matches the brute-force oracle on random instances") {
  Comparison tally = compare_on_corpus(120, 20240820);
  // The generator must exercise both outcomes.
  CHECK(tally.optimal > 30);
  CHECK(tally.infeasible > 3);
}

TEST_CASE("coverage oracle equivalence holds under the minimize sense") {
  std::mt19937 rng(99173);
  for (int trial = 0; trial < 40; ++trial) {
    Network net = random_network(rng);
    net.parameters.objective_sense = ObjectiveSense::minimize;
    MergedInstance merged = build_merged_instance(net);
    CoverageInstance inst = build_cmhse(merged, net);
    SolveReport exact = solve_exact(inst);
    SolveReport oracle = solve_bruteforce(to_binary_program(inst));
    REQUIRE(exact.status == oracle.status);
    if (exact.status == SolveStatus::optimal) {
      REQUIRE(exact.plan.objective_value == oracle.plan.objective_value);
      REQUIRE(exact.plan.assignment == oracle.plan.assignment);
    }
  }
}

TEST_CASE("disabling pruning never changes the result, only the node count") {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 30; ++trial) {
    Network net = random_network(rng);
    MergedInstance merged = build_merged_instance(net);
    CoverageInstance inst = build_cmhse(merged, net);
    SolveOptions plain;
    plain.use_bounding = false;
    plain.use_lookahead = false;
    SolveReport fast = solve_exact(inst);
    SolveReport slow = solve_exact(inst, plain);
    REQUIRE(fast.status == slow.status);
    if (fast.status == SolveStatus::optimal) {
      CHECK(fast.plan.objective_value == slow.plan.objective_value);
      CHECK(fast.plan.assignment == slow.plan.assignment);
    }
    CHECK(slow.nodes_explored >= fast.nodes_explored);

    LocationInstance loc = build_lchse(merged, net);
    SolveReport lfast = solve_exact(loc);
    SolveReport lslow = solve_exact(loc, plain);
    REQUIRE(lfast.status == lslow.status);
    if (lfast.status == SolveStatus::optimal) {
      CHECK(lfast.plan.objective_value == lslow.plan.objective_value);
      CHECK(lfast.plan.assignment == lslow.plan.assignment);
      CHECK(lfast.plan.opened == lslow.plan.opened);
    }
  }
}

TEST_CASE("scaling lengths and caps by k rescales Z1 and keeps the plan") {
  std::mt19937 rng(4242);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 20; ++trial) {
    Network net = random_network(rng);
    MergedInstance merged = build_merged_instance(net);
    CoverageInstance inst = build_cmhse(merged, net);
    SolveReport base = solve_exact(inst);
    if (base.status != SolveStatus::optimal) continue;
    ++checked;

    const double k = 3.0;
    Network scaled = net;
    for (Edge& e : scaled.edges) e.length_km *= k;
    scaled.parameters.max_rescue_km *= k;
    scaled.parameters.max_rescue_hours *= k;
    scaled.parameters.network_mileage_km *= k;
    MergedInstance smerged = build_merged_instance(scaled);
    CoverageInstance sinst = build_cmhse(smerged, scaled);
    SolveReport after = solve_exact(sinst);
    REQUIRE(after.status == SolveStatus::optimal);
    CHECK(after.plan.assignment == base.plan.assignment);
    CHECK_THAT(after.plan.rescue_distance_total_km,
               Catch::Matchers::WithinRel(k * base.plan.rescue_distance_total_km, 1e-9));
  }
  REQUIRE(checked == 20);
}

TEST_CASE("enlarging the rescue caps never lowers the maximize objective") {
  std::mt19937 rng(777);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 20; ++trial) {
    Network net = random_network(rng);
    MergedInstance merged = build_merged_instance(net);
    CoverageInstance inst = build_cmhse(merged, net);
    SolveReport base = solve_exact(inst);
    if (base.status != SolveStatus::optimal) continue;
    ++checked;

    Network looser = net;
    looser.parameters.max_rescue_km *= 1.5;
    looser.parameters.max_rescue_hours *= 1.5;
    CoverageInstance linst = build_cmhse(build_merged_instance(looser), looser);
    SolveReport after = solve_exact(linst);
    REQUIRE(after.status == SolveStatus::optimal);
    CHECK(after.plan.objective_value >= base.plan.objective_value);
  }
  REQUIRE(checked == 20);
}

TEST_CASE("verify_plan flags corrupted plans") {
  CoverageInstance inst = tiny_coverage();
  SolveReport report = solve_exact(inst);
  REQUIRE(report.status == SolveStatus::optimal);

  SECTION("assignment to a non-opened candidate") {
    LocationInstance loc;
    loc.candidate_ids = {1, 2};
    loc.station_ids = {1, 2};
    loc.forced_open = {1};
    loc.open_cost_yuan = {100.0, 100.0};
    loc.beta = 1.0;
    loc.coefficient_km = {{10.0, 20.0}, {20.0, 10.0}};
    loc.workload_weight_km = {{0.2, 0.4}, {0.4, 0.2}};
    loc.workload_cap_km = 50.0;
    loc.max_rescue_km = 800.0;
    loc.max_rescue_hours = 2.5;
    loc.speed_kmh = 300.0;
    AssignmentPlan plan = make_plan(loc, {{1, 1}, {2, 2}}, {1});  // 2 used but closed
    std::vector<Violation> violations = verify_plan(loc, plan);
    bool found = false;
    for (const Violation& v : violations)
      if (v.code == "link_open") found = true;
    CHECK(found);
  }

  SECTION("tampered stored objective") {
    AssignmentPlan broken = report.plan;
    broken.objective_value += 10.0;
    std::vector<Violation> violations = verify_plan(inst, broken);
    bool found = false;
    for (const Violation& v : violations)
      if (v.code == "objective_mismatch") {
        found = true;
        CHECK(v.message.find("differs") != std::string::npos);
      }
    CHECK(found);
  }

  SECTION("workload overrun") {
    AssignmentPlan broken = report.plan;
    CoverageInstance tight = inst;
    tight.workload_cap_km = 1.0;
    std::vector<Violation> violations = verify_plan(tight, broken);
    bool found = false;
    for (const Violation& v : violations)
      if (v.code == "workload_cap") found = true;
    CHECK(found);
  }
}
