#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "ncym/serialize.hpp"

namespace ncym {

/// Malformed configuration; the message names the line or field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { Verify, Solve, Spectrum };

struct RunConfig {
  Mode mode = Mode::Verify;
  int algebra_size = 2;
  int charge = 1;
  PolynomialPotential potential;
  double tolerance = 1e-8;
  long max_iterations = 100000;
  std::uint64_t seed = 42;
  Problem problem = Problem::YM;
  StepRule step_rule = StepRule::GradientDescent;
  int grade = -1;  // spectrum: −1 for every grade
  Side side = Side::Left;
  double init_scale = 1.0;
  int samples = 100;
  bool convention_checks_as_warnings = true;
  std::string out = ".";
  std::optional<json> initial;  // {"A": ..., "q1": ..., "q2": ...}
};

/// Parses a JSON document (empty text means {}) and applies `overrides` on top; validates every field.
RunConfig parse_run_config(const std::string& text, const std::string& source, const json& overrides = json::object());

json to_json(const RunConfig& c);

struct RunOutcome {
  int exit_code = 0;  // 0 success, 1 non-convergence or failed check, 2 usage/config error
  std::string report_path;
  std::string message;
};

/// Executes the mode and writes report.json (and spectrum.csv) under config.out.
RunOutcome run(const RunConfig& config);

/// Report without the timing block, for reproducibility comparisons.
json strip_timing(json report);

}  // namespace ncym
