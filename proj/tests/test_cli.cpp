#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "railcover/cli.hpp"
#include "railcover/dot_format.hpp"
#include "railcover/json_io.hpp"
#include "railcover/lp_format.hpp"

#include "generators.hpp"

using namespace railcover;
using railcover::testing::make_station;
using railcover::testing::random_network;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "railcover_tests";
  std::filesystem::create_directories(dir);
  std::filesystem::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_config(RunConfig config) {
  std::ostringstream out, err;
  int code = run(config, out, err);
  return {code, out.str(), err.str()};
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

const std::string kSingleDepotDoc = R"({
  "parameters": { "network_mileage_km": 42000 },
  "stations": [
    { "id": 1 },
    { "id": 2, "is_depot": true, "is_candidate": true },
    { "id": 3 }
  ],
  "edges": [
    { "a": 1, "b": 2, "length_km": 100 },
    { "a": 2, "b": 3, "length_km": 60 }
  ]
})";

}  // namespace

TEST_CASE("solve-coverage assigns everything to the only depot") {
  auto input = write_temp("single_depot.json", kSingleDepotDoc);
  RunConfig config;
  config.command = Command::solve_coverage;
  config.input_path = input.string();
  RunResult result = run_config(config);
  INFO(result.err);
  REQUIRE(result.code == kExitOk);
  CHECK(result.out.find("status: optimal") != std::string::npos);
  // Three table rows, all assigned to rescuer 2.
  std::istringstream lines(result.out);
  std::string line;
  int rows = 0;
  bool in_table = false;
  while (std::getline(lines, line)) {
    if (line.find("station") != std::string::npos && line.find("rescuer") != std::string::npos) {
      in_table = true;
      continue;
    }
    if (in_table) {
      std::istringstream fields(line);
      int station, rescuer;
      if (fields >> station >> rescuer) {
        CHECK(rescuer == 2);
        ++rows;
      } else {
        in_table = false;
      }
    }
  }
  CHECK(rows == 3);
}

TEST_CASE("printed Z1 equals the sum of the printed distances") {
  RunConfig config;
  config.command = Command::solve_coverage;
  config.input_path = std::string(RAILCOVER_DATA_DIR) + "/network16.json";
  RunResult result = run_config(config);
  INFO(result.err);
  REQUIRE(result.code == kExitOk);

  std::istringstream lines(result.out);
  std::string line;
  double sum = 0.0;
  double z1 = -1.0;
  bool in_table = false;
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.find("station") != std::string::npos && line.find("rescuer") != std::string::npos) {
      in_table = true;
      continue;
    }
    if (in_table) {
      std::istringstream fields(line);
      int station, rescuer;
      double d, tau;
      if (fields >> station >> rescuer >> d >> tau) {
        sum += d;
        ++rows;
        continue;
      }
      in_table = false;
    }
    auto pos = line.find("Z1 total rescue distance (km): ");
    if (pos != std::string::npos) z1 = std::stod(line.substr(line.find(": ") + 2));
  }
  REQUIRE(rows == 16);
  REQUIRE(z1 > 0.0);
  CHECK_THAT(sum, Catch::Matchers::WithinRel(z1, 1e-6));
}

TEST_CASE("solve-location with every candidate pre-given opens exactly the depots") {
  auto input = write_temp("all_forced.json", kSingleDepotDoc);
  RunConfig config;
  config.command = Command::solve_location;
  config.input_path = input.string();
  RunResult result = run_config(config);
  INFO(result.err);
  REQUIRE(result.code == kExitOk);
  CHECK(result.out.find("opened stations: 2\n") != std::string::npos);
}

TEST_CASE("an impossible rescue cap yields exit 2 and a witness") {
  auto input = write_temp("impossible_cap.json", kSingleDepotDoc);
  RunConfig config;
  config.command = Command::solve_coverage;
  config.input_path = input.string();
  config.overrides = {{"max_rescue_km", "1"}};
  RunResult result = run_config(config);
  REQUIRE(result.code == kExitInfeasible);
  CHECK(result.err.find("no feasible rescue pair") != std::string::npos);
  CHECK(result.err.find("1") != std::string::npos);
  CHECK(result.err.find("3") != std::string::npos);
}

TEST_CASE("unknown overrides are rejected") {
  auto input = write_temp("unknown_override.json", kSingleDepotDoc);
  RunConfig config;
  config.command = Command::solve_coverage;
  config.input_path = input.string();
  config.overrides = {{"maxrescue", "10"}};
  RunResult result = run_config(config);
  REQUIRE(result.code == kExitInputError);
  CHECK(result.err.find("unknown override 'maxrescue'") != std::string::npos);
}

TEST_CASE("a missing input file is an input error") {
  RunConfig config;
  config.command = Command::merge;
  config.input_path = "/nonexistent/net.json";
  RunResult result = run_config(config);
  CHECK(result.code == kExitInputError);
}

TEST_CASE("validation diagnostics are input errors") {
  auto input = write_temp("disconnected.json", R"({
    "stations": [ { "id": 1, "is_depot": true, "is_candidate": true }, { "id": 2 } ],
    "edges": []
  })");
  RunConfig config;
  config.command = Command::solve_coverage;
  config.input_path = input.string();
  RunResult result = run_config(config);
  REQUIRE(result.code == kExitInputError);
  CHECK(result.err.find("disconnected") != std::string::npos);
}

TEST_CASE("merge prints the four matrices and writes structured output") {
  auto input = write_temp("merge_input.json", kSingleDepotDoc);
  auto output = std::filesystem::temp_directory_path() / "railcover_tests" / "merge_out.json";
  RunConfig config;
  config.command = Command::merge;
  config.input_path = input.string();
  config.output_path = output.string();
  RunResult result = run_config(config);
  REQUIRE(result.code == kExitOk);
  CHECK(result.out.find("base distance L_ij (km)") != std::string::npos);
  CHECK(result.out.find("exclusion max l_ij (km)") != std::string::npos);
  CHECK(result.out.find("effective distance D_ij (km)") != std::string::npos);
  CHECK(result.out.find("rescue time tau_ij (h)") != std::string::npos);

  std::ifstream in(output);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto doc = nlohmann::json::parse(buffer.str());
  CHECK(doc["station_ids"].size() == 3);
  // Rescuer 1 covering station 2 pays half of the far edge: 100 + 60/2.
  CHECK(doc["effective_distance_km"][0][1] == 130.0);
}

TEST_CASE("oracle mode matches the exact path on a small instance") {
  auto input = write_temp("oracle_small.json", kSingleDepotDoc);
  RunConfig exact_config;
  exact_config.command = Command::solve_location;
  exact_config.input_path = input.string();
  RunResult exact = run_config(exact_config);
  RunConfig oracle_config = exact_config;
  oracle_config.use_oracle = true;
  RunResult oracle = run_config(oracle_config);
  REQUIRE(exact.code == kExitOk);
  REQUIRE(oracle.code == kExitOk);
  auto strip_nodes = [](const std::string& text) {
    std::istringstream lines(text);
    std::ostringstream kept;
    std::string line;
    while (std::getline(lines, line))
      if (line.rfind("nodes explored:", 0) != 0) kept << line << "\n";
    return kept.str();
  };
  CHECK(strip_nodes(exact.out) == strip_nodes(oracle.out));
}

TEST_CASE("export-lp emits the dialect header and a full Binary section") {
  RunConfig config;
  config.command = Command::export_lp;
  config.input_path = std::string(RAILCOVER_DATA_DIR) + "/network16.json";
  RunResult first = run_config(config);
  REQUIRE(first.code == kExitOk);
  CHECK(first.out.rfind("Maximize\n", 0) == 0);

  Network net = load_network_file(config.input_path);
  BinaryProgram bp = to_binary_program(build_cmhse(build_merged_instance(net), net));
  for (const auto& v : bp.variables)
    CHECK(first.out.find("\n " + v.name + "\n") != std::string::npos);

  RunResult second = run_config(config);
  CHECK(first.out == second.out);  // byte-stable
}

TEST_CASE("LP export round-trips through the internal reader") {
  std::mt19937 rng(20240821);
  int done = 0;
  for (int trial = 0; trial < 40 && done < 20; ++trial) {
    Network net = random_network(rng);
    MergedInstance merged = build_merged_instance(net);
    BinaryProgram bp = trial % 2 == 0 ? to_binary_program(build_cmhse(merged, net))
                                      : to_binary_program(build_lchse(merged, net));
    ++done;
    std::string text = write_lp(bp);
    BinaryProgram parsed = read_lp(text);

    REQUIRE(parsed.variables.size() == bp.variables.size());
    CHECK(parsed.sense == bp.sense);
    for (std::size_t v = 0; v < bp.variables.size(); ++v) {
      CHECK(parsed.variables[v].name == bp.variables[v].name);
      CHECK(parsed.variables[v].kind == bp.variables[v].kind);
      CHECK_THAT(parsed.objective[v],
                 Catch::Matchers::WithinRel(bp.objective[v], 1e-6) ||
                     Catch::Matchers::WithinAbs(bp.objective[v], 1e-9));
    }
    REQUIRE(parsed.constraints.size() == bp.constraints.size());
    for (std::size_t c = 0; c < bp.constraints.size(); ++c) {
      CHECK(parsed.constraints[c].name == bp.constraints[c].name);
      CHECK(parsed.constraints[c].comparator == bp.constraints[c].comparator);
      REQUIRE(parsed.constraints[c].terms.size() == bp.constraints[c].terms.size());
      for (std::size_t t = 0; t < bp.constraints[c].terms.size(); ++t) {
        CHECK(parsed.constraints[c].terms[t].first == bp.constraints[c].terms[t].first);
        CHECK_THAT(parsed.constraints[c].terms[t].second,
                   Catch::Matchers::WithinRel(bp.constraints[c].terms[t].second, 1e-6) ||
                       Catch::Matchers::WithinAbs(bp.constraints[c].terms[t].second, 1e-9));
      }
      CHECK_THAT(parsed.constraints[c].rhs,
                 Catch::Matchers::WithinRel(bp.constraints[c].rhs, 1e-6) ||
                     Catch::Matchers::WithinAbs(bp.constraints[c].rhs, 1e-9));
    }
    // Re-export of the parsed program reproduces the bytes exactly.
    CHECK(write_lp(parsed) == text);
  }
  REQUIRE(done == 20);
}

TEST_CASE("lp_number renders up to nine significant digits without exponents") {
  CHECK(lp_number(0.0) == "0");
  CHECK(lp_number(-0.0) == "0");
  CHECK(lp_number(130.0) == "130");
  CHECK(lp_number(0.5) == "0.5");
  CHECK(lp_number(-26000.0) == "-26000");
  CHECK(lp_number(160.22889842) == "160.228898");
  CHECK(lp_number(1e-5) == "0.00001");
  CHECK(lp_number(1.25e9) == "1250000000");
  CHECK(lp_number(123456789.0) == "123456789");
}

TEST_CASE("render emits one assignment marker per station") {
  RunConfig config;
  config.command = Command::render;
  config.input_path = std::string(RAILCOVER_DATA_DIR) + "/network16.json";
  RunResult result = run_config(config);
  REQUIRE(result.code == kExitOk);
  const std::string& dot = result.out;

  int dashed = count_occurrences(dot, "style=dashed");
  int self_markers = count_occurrences(dot, "fillcolor=palegreen");
  CHECK(dashed + self_markers == 16);

  Network net = load_network_file(config.input_path);
  for (const Edge& e : net.edges) {
    std::ostringstream needle;
    StationId a = std::min(e.a, e.b), b = std::max(e.a, e.b);
    needle << "n" << a << " -> n" << b << " [dir=none, label=\"" << lp_number(e.length_km)
           << "\"];";
    CHECK(count_occurrences(dot, needle.str()) == 1);
  }
  // Opened depots are double circles.
  CHECK(count_occurrences(dot, "shape=doublecircle") == 4);
}

TEST_CASE("render of a single-station network is one node and no edges") {
  auto input = write_temp("single.json", R"({
    "parameters": { "network_mileage_km": 10 },
    "stations": [ { "id": 1, "is_depot": true, "is_candidate": true } ],
    "edges": []
  })");
  RunConfig config;
  config.command = Command::render;
  config.input_path = input.string();
  RunResult result = run_config(config);
  REQUIRE(result.code == kExitOk);
  CHECK(count_occurrences(result.out, "label=") == 1);
  CHECK(count_occurrences(result.out, "->") == 0);
}

TEST_CASE("sense override flows into the coverage objective") {
  auto input = write_temp("sense.json", kSingleDepotDoc);
  RunConfig config;
  config.command = Command::solve_coverage;
  config.input_path = input.string();
  config.sense = ObjectiveSense::minimize;
  RunResult result = run_config(config);
  REQUIRE(result.code == kExitOk);
  CHECK(result.out.find("objective sense: minimize") != std::string::npos);
}
