#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ginibre/cli.hpp"
#include "ginibre/mc.hpp"
#include "ginibre/types.hpp"

using namespace ginibre;
using namespace ginibre::cli;
namespace fs = std::filesystem;

namespace {

RunConfig make(std::string command, std::string target) {
  RunConfig c;
  c.command = std::move(command);
  c.target = std::move(target);
  c.threads = 1;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "ginibre_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      auto end = line.find(',', start);
      cells.push_back(line.substr(start, end == std::string::npos ? std::string::npos : end - start));
      if (end == std::string::npos) break;
      start = end + 1;
    }
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("sample sizes") {
  std::ostringstream log;
  int code = -1;
  auto c = make("sample", "ginibre");
  c.seed = 7;
  auto j = nlohmann::json::parse(render(c, "t", log, code));
  CHECK(code == kOk);
  CHECK(j["sample"]["points"].size() == 64);
  CHECK(j["sample"]["count"] == 64);
  CHECK(j["config"]["seed"] == 7);
  c.target = "palm";
  auto p = nlohmann::json::parse(render(c, "t", log, code));
  CHECK(p["sample"]["points"].size() == 63);
  CHECK(p["sample"]["points"][0].size() == 2);
}

TEST_CASE("same seed, same file") {
  std::ostringstream log;
  int code = 0;
  for (std::string model : {"ginibre", "palm", "hkpv", "thinned", "poisson"}) {
    auto c = make("sample", model);
    c.M = 24;
    c.seed = 3;
    auto a = render(c, "same", log, code);
    auto b = render(c, "same", log, code);
    CHECK(a == b);
    c.seed = 4;
    CHECK(render(c, "same", log, code) != a);
  }
}

TEST_CASE("written files replay identically apart from the timestamp") {
  std::ostringstream log;
  auto c = make("sample", "palm");
  c.M = 32;
  c.seed = 5;
  c.out = scratch("palm.json").string();
  REQUIRE(run(c, log) == kOk);
  auto again = scratch("palm_again.json").string();
  CHECK(replay(c.out, again, log) == kOk);
  auto j = nlohmann::json::parse(slurp(c.out));
  auto k = nlohmann::json::parse(slurp(again));
  CHECK(j["sample"] == k["sample"]);
  CHECK(j["config"] == k["config"]);

  auto t = make("table", "J");
  t.format = "csv";
  t.params["R"] = "0.5,1,2";
  t.out = scratch("j.csv").string();
  REQUIRE(run(t, log) == kOk);
  CHECK(replay(t.out, "", log) == kOk);

  // a tampered value is detected
  auto text = slurp(t.out);
  auto pos = text.rfind("\n2,");
  REQUIRE(pos != std::string::npos);
  text.replace(pos + 3, 1, text[pos + 3] == '9' ? "8" : "9");
  std::ofstream(t.out) << text;
  CHECK(replay(t.out, "", log) != kOk);
}

TEST_CASE("csv table of void probabilities") {
  std::ostringstream log;
  int code = 0;
  auto c = make("table", "void_prob");
  c.format = "csv";
  auto text = render(c, "ts", log, code);
  CHECK(text.rfind("# config: ", 0) == 0);
  auto rows = csv_rows(text);
  REQUIRE(rows.size() > 3);
  CHECK(rows[0] == std::vector<std::string>{"r", "value", "stderr", "seed"});
  double prev = 2.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double v = std::stod(rows[i][1]);
    CHECK(v < prev);
    CHECK(rows[i][2].empty());
    CHECK(rows[i][3].empty());
    prev = v;
  }
}

TEST_CASE("W_k table for k = 1") {
  std::ostringstream log;
  int code = 0;
  auto c = make("table", "W_k");
  c.format = "csv";
  c.budget = 40000;
  auto rows = csv_rows(render(c, "ts", log, code));
  REQUIRE(rows.size() == 2);
  double v = std::stod(rows[1][1]), se = std::stod(rows[1][2]);
  CHECK(std::abs(v - 0.5) < 3 * se);
  CHECK(rows[1][3] == "1");
}

TEST_CASE("side probability table has four rows summing to at most one") {
  std::ostringstream log;
  int code = 0;
  auto c = make("table", "side_prob");
  c.budget = 400;
  auto j = nlohmann::json::parse(render(c, "ts", log, code));
  REQUIRE(j["rows"].size() == 4);
  double s = 0;
  for (const auto& r : j["rows"]) {
    double v = r[1];
    CHECK(v >= 0.0);
    s += v;
  }
  CHECK(s <= 1.0);
}

TEST_CASE("moments and H tables") {
  std::ostringstream log;
  int code = 0;
  auto c = make("table", "moments");
  c.budget = 2000;
  c.params = {{"region", "ball"}, {"radius", "0.5,1"}, {"k", "1"}, {"model", "poisson"}};
  auto j = nlohmann::json::parse(render(c, "ts", log, code));
  CHECK(j["rows"].size() == 2);
  auto h = make("table", "H");
  h.params["r"] = "0:2:0.5";
  auto jh = nlohmann::json::parse(render(h, "ts", log, code));
  CHECK(jh["rows"].size() == 5);
  CHECK(jh["rows"][0][1] == 0.0);
}

TEST_CASE("configuration errors exit with 2") {
  std::ostringstream log;
  auto bad_model = make("sample", "nosuch");
  CHECK(run(bad_model, log) == kConfigError);
  auto bad_format = make("table", "J");
  bad_format.format = "xml";
  CHECK(run(bad_format, log) == kConfigError);
  auto bad_q = make("table", "nosuch");
  CHECK(run(bad_q, log) == kConfigError);
  auto bad_budget = make("table", "W_k");
  bad_budget.budget = -5;
  CHECK(run(bad_budget, log) == kConfigError);
  auto bad_path = make("table", "J");
  bad_path.out = "/nonexistent_dir/x.csv";
  CHECK(run(bad_path, log) == kConfigError);
  auto bad_grid = make("table", "J");
  bad_grid.params["R"] = "1:0:0.5";
  CHECK(run(bad_grid, log) == kConfigError);
  CHECK(log.str().find("nosuch") != std::string::npos);
}

TEST_CASE("verify exit code follows the checks") {
  std::ostringstream log;
  int code = -1;
  auto c = make("verify", "discrete");
  c.budget = 40;
  auto j = nlohmann::json::parse(render(c, "ts", log, code));
  CHECK(j["passed"] == true);
  CHECK(code == kOk);

  auto a = make("verify", "analytic");
  auto ja = nlohmann::json::parse(render(a, "ts", log, code));
  bool all = true;
  for (const auto& chk : ja["checks"]) all = all && chk["passed"].get<bool>();
  CHECK(code == (all ? kOk : kCheckFailed));
  CHECK(ja["checks"].size() >= 9);
  for (const auto& chk : ja["checks"])
    if (chk["name"] == "ev_typical_cell" || chk["name"] == "mehta_bound") CHECK(chk["passed"] == true);
}

TEST_CASE("number formatting and grids") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-1e-300).find(',') == std::string::npos);
  CHECK(parse_grid("0:1:0.25").size() == 5);
  CHECK(parse_grid("3,4,5,6") == std::vector<double>{3, 4, 5, 6});
  CHECK_THROWS_AS(parse_grid("1,x"), PreconditionError);
  CHECK_THROWS_AS(parse_grid("0:1"), PreconditionError);
}

TEST_CASE("config json round trip") {
  auto c = make("table", "moments");
  c.seed = 99;
  c.M = 48;
  c.budget = 1234;
  c.params = {{"k", "1,2"}};
  auto d = config_from_json(nlohmann::json::parse(to_json(c).dump()));
  CHECK(d.command == c.command);
  CHECK(d.target == c.target);
  CHECK(d.seed == 99);
  CHECK(d.M == 48);
  CHECK(d.budget == 1234);
  CHECK(d.params == c.params);
}

TEST_CASE("thread count from the environment") {
  setenv("GINIBRE_LAB_THREADS", "3", 1);
  CHECK(resolve_threads(0) == 3);
  CHECK(resolve_threads(2) == 2);
  unsetenv("GINIBRE_LAB_THREADS");
}
