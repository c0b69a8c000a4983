#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ginibre::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2 };

struct RunConfig {
  std::string command;  // sample, verify, table
  std::string target;   // model, suite or quantity
  std::uint64_t seed = 1;
  int M = 64;
  int threads = 0;
  std::int64_t budget = 0;  // 0: the command's default
  std::string out;          // empty: stdout
  std::string format = "json";
  std::map<std::string, std::string> params;
};

nlohmann::ordered_json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

/// Throws PreconditionError on unknown targets, non-positive budgets, bad formats or params.
void validate(const RunConfig& c);

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

std::vector<Check> verify_suite(const RunConfig& c, std::ostream& log);

struct Table {
  std::vector<std::string> params;  // parameter column names
  // one row per parameter tuple; stderr < 0 marks an exact value
  struct Row {
    std::vector<double> params;
    double value;
    double std_error;
  };
  std::vector<Row> rows;
  bool monte_carlo = false;
};

Table make_table(const RunConfig& c);

/// Document text for the command (without writing it); `timestamp` is embedded verbatim.
std::string render(const RunConfig& c, const std::string& timestamp, std::ostream& log, int& exit_code);

/// Validates, renders and writes to c.out (stdout when empty). Returns the exit code.
int run(const RunConfig& c, std::ostream& log);

/// Re-runs the configuration embedded in `path`, writes the result to `out` (if non-empty)
/// and compares it with the original apart from the timestamp. 0 when identical.
int replay(const std::string& path, const std::string& out, std::ostream& log);

/// Doubles as 17 significant digits, '.' separator, independent of the locale.
std::string format_double(double v);

/// "a:b:step" (inclusive) or a comma separated list.
std::vector<double> parse_grid(const std::string& s);

std::string current_timestamp();

}  // namespace ginibre::cli
