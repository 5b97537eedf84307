// ncym command-line front end; links only the C interface.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ncym/ncym.h"

int main(int argc, char** argv) {
  CLI::App app{"Yang–Mills–scalar-matter fields on matrix algebras: verify, solve, spectrum"};
  app.set_version_flag("--version", std::string(ncym_version()));

  std::string mode_pos, mode, config_path, potential, out, problem, step_rule, side;
  long long seed = -1, charge = 0, grade = -2, n = 0, max_iter = -1, samples = 0;
  double tol = 0.0;
  bool strict = false;

  app.add_option("mode_positional", mode_pos, "verify | solve | spectrum");
  app.add_option("--mode", mode, "verify | solve | spectrum");
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "random seed");
  app.add_option("--tol", tol, "solver tolerance");
  auto* charge_opt = app.add_option("--charge", charge, "charge n of the left section");
  app.add_option("--potential", potential, "polynomial coefficients \"c0,c1,...\"");
  app.add_option("--out", out, "output directory for report.json / spectrum.csv");
  app.add_option("--grade", grade, "spectrum grade (-1 for all)");
  app.add_option("--problem", problem, "ym | sm | ymsm");
  app.add_option("--N", n, "matrix size N");
  app.add_option("--step-rule", step_rule, "gd | gn");
  app.add_option("--max-iter", max_iter, "iteration cap");
  app.add_option("--side", side, "left | right (spectrum)");
  app.add_option("--samples", samples, "random samples per verify check");
  app.add_flag("--strict", strict, "treat convention-sensitive checks as failures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (!mode.empty() && !mode_pos.empty() && mode != mode_pos) {
    std::cerr << "error: positional mode '" << mode_pos << "' conflicts with --mode " << mode << "\n";
    return 2;
  }

  nlohmann::ordered_json ov = nlohmann::ordered_json::object();
  if (!mode.empty() || !mode_pos.empty()) ov["mode"] = mode.empty() ? mode_pos : mode;
  if (seed >= 0) ov["seed"] = seed;
  if (app.count("--tol")) ov["tolerance"] = tol;
  if (charge_opt->count()) ov["charge"] = charge;
  if (app.count("--potential")) ov["potential"] = potential;
  if (!out.empty()) ov["out"] = out;
  if (app.count("--grade")) ov["grade"] = grade;
  if (!problem.empty()) ov["problem"] = problem;
  if (app.count("--N")) ov["algebra_size"] = n;
  if (!step_rule.empty()) ov["step_rule"] = step_rule;
  if (app.count("--max-iter")) ov["max_iterations"] = max_iter;
  if (!side.empty()) ov["side"] = side;
  if (app.count("--samples")) ov["samples"] = samples;
  if (strict) ov["convention_checks_as_warnings"] = false;

  std::string text;
  if (!config_path.empty()) {
    std::ifstream f(config_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot read " << config_path << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }

  int exit_code = 2;
  char* message = nullptr;
  const std::string overrides = ov.dump();
  const ncym_status st = ncym_run(text.c_str(), config_path.empty() ? "config" : config_path.c_str(), overrides.c_str(),
                                  &exit_code, &message);
  if (st != NCYM_OK) {
    std::cerr << "error: " << ncym_last_error() << "\n";
  } else if (message) {
    std::cout << message << "\n";
  }
  ncym_string_free(message);
  return exit_code;
}
