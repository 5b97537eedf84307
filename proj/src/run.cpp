#include "ncym/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>

#include "ncym/verify.hpp"

namespace ncym {

namespace {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Solve:
      return "solve";
    case Mode::Spectrum:
      return "spectrum";
    case Mode::Verify:
      break;
  }
  return "verify";
}

const char* problem_name(Problem p) {
  switch (p) {
    case Problem::SM:
      return "sm";
    case Problem::YMSM:
      return "ymsm";
    case Problem::YM:
      break;
  }
  return "ym";
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw ConfigError("field '" + field + "': " + why);
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

long get_int(const json& v, const std::string& field, long lo, long hi) {
  if (!v.is_number_integer()) bad_field(field, "expected an integer");
  const long x = v.get<long>();
  if (x < lo || x > hi) bad_field(field, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

double get_double(const json& v, const std::string& field) {
  if (!v.is_number()) bad_field(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad_field(field, "must be finite");
  return x;
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) bad_field(field, "expected a string");
  return v.get<std::string>();
}

void apply(RunConfig& c, const std::string& key, const json& v) {
  if (key == "mode") {
    const std::string s = get_string(v, key);
    if (s == "verify") c.mode = Mode::Verify;
    else if (s == "solve") c.mode = Mode::Solve;
    else if (s == "spectrum") c.mode = Mode::Spectrum;
    else bad_field(key, "expected verify, solve or spectrum, got '" + s + "'");
  } else if (key == "algebra_size" || key == "N") {
    c.algebra_size = static_cast<int>(get_int(v, key, 2, kMaxAlgebraSize));
  } else if (key == "charge") {
    c.charge = static_cast<int>(get_int(v, key, -64, 64));
  } else if (key == "potential") {
    if (v.is_string()) {
      try {
        c.potential = PolynomialPotential::parse(v.get<std::string>());
      } catch (const std::exception& e) {
        bad_field(key, e.what());
      }
    } else if (v.is_array()) {
      c.potential.coefficients.clear();
      for (std::size_t i = 0; i < v.size(); ++i)
        c.potential.coefficients.push_back(get_double(v[i], key + "[" + std::to_string(i) + "]"));
    } else {
      bad_field(key, "expected an array of numbers or a \"c0,c1,...\" string");
    }
  } else if (key == "tolerance") {
    c.tolerance = get_double(v, key);
    if (!(c.tolerance > 0.0)) bad_field(key, "must be positive");
  } else if (key == "max_iterations") {
    c.max_iterations = get_int(v, key, 0, std::numeric_limits<long>::max());
  } else if (key == "seed") {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      bad_field(key, "expected a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  } else if (key == "problem") {
    const std::string s = get_string(v, key);
    if (s == "ym") c.problem = Problem::YM;
    else if (s == "sm") c.problem = Problem::SM;
    else if (s == "ymsm") c.problem = Problem::YMSM;
    else bad_field(key, "expected ym, sm or ymsm, got '" + s + "'");
  } else if (key == "step_rule") {
    const std::string s = get_string(v, key);
    if (s == "gd") c.step_rule = StepRule::GradientDescent;
    else if (s == "gn") c.step_rule = StepRule::GaussNewton;
    else bad_field(key, "expected gd or gn, got '" + s + "'");
  } else if (key == "grade") {
    c.grade = static_cast<int>(get_int(v, key, -1, kMaxAlgebraSize * kMaxAlgebraSize - 1));
  } else if (key == "side") {
    const std::string s = get_string(v, key);
    if (s == "left") c.side = Side::Left;
    else if (s == "right") c.side = Side::Right;
    else bad_field(key, "expected left or right, got '" + s + "'");
  } else if (key == "init_scale") {
    c.init_scale = get_double(v, key);
    if (!(c.init_scale > 0.0)) bad_field(key, "must be positive");
  } else if (key == "samples") {
    c.samples = static_cast<int>(get_int(v, key, 1, 1000000));
  } else if (key == "convention_checks_as_warnings") {
    if (!v.is_boolean()) bad_field(key, "expected true or false");
    c.convention_checks_as_warnings = v.get<bool>();
  } else if (key == "out") {
    c.out = get_string(v, key);
    if (c.out.empty()) bad_field(key, "must not be empty");
  } else if (key == "initial") {
    if (!v.is_object()) bad_field(key, "expected an object with A, q1, q2");
    for (const auto& [k, _] : v.items())
      if (k != "A" && k != "q1" && k != "q2") bad_field(key + "." + k, "unknown field");
    c.initial = v;
  } else {
    bad_field(key, "unknown field");
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CConfig initial_config(const RunConfig& rc) {
  const int n = rc.algebra_size;
  const int charge = rc.problem == Problem::YMSM ? rc.charge : 0;
  Rng rng(rc.seed);
  CForm a = rc.problem == Problem::SM ? CForm(n) : rng.form(n, 1, rc.init_scale);
  CMatrix q1 = rc.problem == Problem::YM ? CMatrix(n) : rng.matrix(n, rc.init_scale);
  CMatrix q2 = rc.problem == Problem::YM ? CMatrix(n) : rng.matrix(n, rc.init_scale);
  if (rc.initial) {
    const json& j = *rc.initial;
    try {
      if (j.contains("A")) a = form_from_json(j["A"], n, "initial.A");
      if (j.contains("q1")) q1 = matrix_from_json(j["q1"], n, "initial.q1");
      if (j.contains("q2")) q2 = matrix_from_json(j["q2"], n, "initial.q2");
    } catch (const std::exception& e) {
      throw ConfigError(std::string("field ") + e.what());
    }
    if (!a.is_homogeneous(1) && !a.is_zero()) throw ConfigError("field 'initial.A': must be a one-form");
  }
  return CConfig::make(a, charge, q1, q2, rc.potential);
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing " + p.string());
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& source, const json& overrides) {
  json doc = json::object();
  bool blank = true;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
  if (!blank) {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(source + ": " + line_col(text, e.byte) + ": malformed JSON");
    }
  }
  if (!doc.is_object()) throw ConfigError(source + ": top level must be a JSON object");
  if (!overrides.is_object()) throw ConfigError("overrides must be a JSON object");
  RunConfig c;
  for (const auto& [k, v] : doc.items()) apply(c, k, v);
  for (const auto& [k, v] : overrides.items()) apply(c, k, v);
  if (c.mode == Mode::Spectrum && c.grade > c.algebra_size * c.algebra_size - 1)
    bad_field("grade", "exceeds the top degree " + std::to_string(c.algebra_size * c.algebra_size - 1));
  if (c.problem == Problem::YMSM && c.charge == 0 && c.mode == Mode::Solve)
    bad_field("charge", "the coupled problem needs a nonzero charge");
  return c;
}

json to_json(const RunConfig& c) {
  json j = {{"mode", mode_name(c.mode)},
            {"algebra_size", c.algebra_size},
            {"charge", c.charge},
            {"potential", c.potential.coefficients},
            {"tolerance", c.tolerance},
            {"max_iterations", c.max_iterations},
            {"seed", c.seed},
            {"problem", problem_name(c.problem)},
            {"step_rule", c.step_rule == StepRule::GaussNewton ? "gn" : "gd"},
            {"grade", c.grade},
            {"side", c.side == Side::Left ? "left" : "right"},
            {"init_scale", c.init_scale},
            {"samples", c.samples},
            {"convention_checks_as_warnings", c.convention_checks_as_warnings}};
  if (c.initial) j["initial"] = *c.initial;
  return j;
}

json strip_timing(json report) {
  if (report.is_object()) report.erase("timing");
  return report;
}

RunOutcome run(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  RunOutcome out;
  const std::filesystem::path dir(config.out);
  try {
    std::filesystem::create_directories(dir);
  } catch (const std::exception& e) {
    return {2, "", std::string("cannot create output directory: ") + e.what()};
  }
  const std::filesystem::path report_path = dir / "report.json";
  json report;

  try {
    switch (config.mode) {
      case Mode::Verify: {
        VerifyOptions o;
        o.seed = config.seed;
        o.samples = config.samples;
        o.convention_checks_as_warnings = config.convention_checks_as_warnings;
        const VerifySummary s = run_verify(o);
        report = to_json(s);
        out.exit_code = s.ok() ? 0 : 1;
        out.message = std::to_string(s.count(CheckStatus::Pass)) + " passed, " + std::to_string(s.count(CheckStatus::Warn)) +
                      " warned, " + std::to_string(s.count(CheckStatus::Fail)) + " failed";
        break;
      }
      case Mode::Solve: {
        SolverOptions o;
        o.problem = config.problem;
        o.step_rule = config.step_rule;
        o.tolerance = config.tolerance;
        o.max_iterations = config.max_iterations;
        const CConfig start = initial_config(config);
        const SolveResult r = solve_stationary(start, o, config.seed);
        report = {{"mode", "solve"}, {"ledger_id", r.report.ledger_id}, {"report", to_json(r.report)},
                  {"solution", to_json(r.config)}};
        out.exit_code = r.report.converged ? 0 : 1;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s after %ld iterations, residual %.3e, curvature %.3e",
                      r.report.converged ? "converged" : "not converged", r.report.iterations, r.report.residual_total,
                      r.report.curvature_norm);
        out.message = buf;
        if (!r.report.diagnostic.empty()) out.message += " (" + r.report.diagnostic + ")";
        break;
      }
      case Mode::Spectrum: {
        std::vector<Spectrum> spectra;
        const int top = config.algebra_size * config.algebra_size - 1;
        for (int k = 0; k <= top; ++k)
          if (config.grade < 0 || config.grade == k) spectra.push_back(spectrum(config.algebra_size, k, config.side));
        write_file(dir / "spectrum.csv", spectrum_csv(spectra));
        json grades = json::array();
        for (const auto& sp : spectra)
          grades.push_back({{"grade", sp.grade},
                            {"count", sp.eigenvalues.size()},
                            {"min", sp.eigenvalues.empty() ? 0.0 : sp.eigenvalues.front()},
                            {"max", sp.eigenvalues.empty() ? 0.0 : sp.eigenvalues.back()},
                            {"hermiticity_error", sp.hermiticity_error}});
        report = {{"mode", "spectrum"}, {"ledger_id", ConventionLedger::standard().id()}, {"spectra", grades}};
        out.message = "wrote " + (dir / "spectrum.csv").string();
        break;
      }
    }
  } catch (const ConfigError& e) {
    return {2, "", e.what()};
  } catch (const DomainError& e) {
    return {2, "", e.what()};
  }

  report["config"] = to_json(config);
  report["timing"] = {{"started_utc", started},
                      {"wall_time_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  write_file(report_path, dump(report));
  out.report_path = report_path.string();
  return out;
}

}  // namespace ncym
