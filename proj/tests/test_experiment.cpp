#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "friedland/experiment.hpp"

using namespace friedland;

namespace {

const char* kSftConfig = R"({
  "command": "sft",
  "action": {"space": "circle",
             "generators": [{"kind": "circle_linear", "L": 2},
                            {"kind": "circle_linear", "L": 3}]}
})";

const char* kEstimateConfig = R"({
  "command": "estimate",
  "action": {"space": "circle",
             "generators": [{"kind": "circle_linear", "L": 2},
                            {"kind": "circle_linear", "L": 3}]},
  "schedule": [{"n": 3, "epsilon": 0.05, "grid": 5},
               {"n": 4, "epsilon": 0.05, "grid": 11}],
  "budget": 300000
})";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  auto c = parse_config_text(kEstimateConfig);
  CHECK(c.command == "estimate");
  CHECK(c.action.k() == 2);
  CHECK(c.action.generators[1].L == 3);
  REQUIRE(c.schedule.size() == 2);
  CHECK(c.schedule[0].n == 3);
  CHECK(c.schedule[0].grid == doctest::Approx(0.2));
  CHECK(c.schedule[1].grid == doctest::Approx(1.0 / 11));
  CHECK(c.budget == 300000);
  CHECK(!c.echo.empty());
}

TEST_CASE("config rejection") {
  CHECK_THROWS_AS(parse_config_text("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text(R"({"command": "fly"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text(R"({
    "command": "sft", "surprise": 1,
    "action": {"space": "circle", "generators": [{"kind": "circle_linear", "L": 2},
                                                 {"kind": "circle_linear", "L": 3}]}
  })"), std::invalid_argument);
  // multiplier must be an exact integer
  CHECK_THROWS_AS(parse_config_text(R"({
    "command": "sft",
    "action": {"space": "circle", "generators": [{"kind": "circle_linear", "L": 2.5},
                                                 {"kind": "circle_linear", "L": 3}]}
  })"), std::invalid_argument);
  // estimate requires a nonempty schedule
  CHECK_THROWS_AS(parse_config_text(R"({
    "command": "estimate",
    "action": {"space": "circle", "generators": [{"kind": "circle_linear", "L": 2},
                                                 {"kind": "circle_linear", "L": 3}]}
  })"), std::invalid_argument);
}

TEST_CASE("sft run reports the exact entropy") {
  auto rep = run(parse_config_text(kSftConfig));
  CHECK(rep.ok);
  REQUIRE(rep.rows.size() == 1);
  REQUIRE(rep.columns.size() == rep.rows[0].size());
  CHECK(rep.columns[0] == "L_list");
  CHECK(rep.columns[1] == "kM");
  CHECK(rep.columns[2] == "rho");
  CHECK(rep.columns[3] == "entropy_nats");
  CHECK(rep.columns[4] == "exact_target");
  CHECK(rep.columns[5] == "abs_err");
  CHECK(rep.rows[0][1] == "12");
  CHECK(rep.rows[0][2] == "5");
  CHECK(rep.rows[0][5] == "0");
}

TEST_CASE("estimate run matches the library call") {
  auto c = parse_config_text(kEstimateConfig);
  auto rep = run(c);
  CHECK(rep.ok);
  REQUIRE(rep.rows.size() == 2);
  auto direct = estimate_entropy(c.action, c.schedule, c.budget);
  CHECK(rep.rows[0][3] == std::to_string(direct[0].count));
  CHECK(rep.rows[1][3] == std::to_string(direct[1].count));
  CHECK(direct[0].count == 65);
  CHECK(direct[1].count == 321);
}

TEST_CASE("identical configs produce identical numeric output") {
  auto a = run(parse_config_text(kSftConfig));
  auto b = run(parse_config_text(kSftConfig));
  CHECK(to_csv(a) == to_csv(b));

  // timing columns are the only varying fields of estimator reports
  auto e1 = run(parse_config_text(kEstimateConfig));
  auto e2 = run(parse_config_text(kEstimateConfig));
  REQUIRE(e1.rows.size() == e2.rows.size());
  for (std::size_t r = 0; r < e1.rows.size(); ++r)
    for (std::size_t c = 0; c < e1.columns.size(); ++c)
      if (e1.columns[c] != "elapsed_ms") CHECK(e1.rows[r][c] == e2.rows[r][c]);
}

TEST_CASE("emitted files isolate the timestamp in a comment") {
  namespace fs = std::filesystem;
  auto rep = run(parse_config_text(kSftConfig));
  fs::path dir = fs::temp_directory_path() / "friedland_emit_test";
  fs::remove_all(dir);
  auto paths = emit(rep, dir.string());
  REQUIRE(paths.size() == 2);
  auto csv = slurp(paths[0]);
  CHECK(csv.rfind("# generated ", 0) == 0);
  auto body = csv.substr(csv.find('\n') + 1);
  CHECK(body == to_csv(rep));
  auto summary = slurp(paths[1]);
  CHECK(summary.find("command") != std::string::npos);
  CHECK(summary.find("generated") == std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("csv layout is header plus one line per row") {
  auto rep = run(parse_config_text(kEstimateConfig));
  std::istringstream in(to_csv(rep));
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,epsilon,grid,count,rate,elapsed_ms,note");
  int lines = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == (int)rep.rows.size());
}
