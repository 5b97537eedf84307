#include "ncym/ncym.h"

#include <cstring>
#include <string>

#include "ncym/run.hpp"

struct ncym_form {
  ncym::CForm value;
};

struct ncym_config {
  ncym::CConfig value;
};

namespace {

thread_local std::string g_last_error;

ncym_status fail(ncym_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
ncym_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const ncym::DimensionError& e) {
    return fail(NCYM_ERR_DIMENSION, e.what());
  } catch (const ncym::GradeError& e) {
    return fail(NCYM_ERR_GRADE, e.what());
  } catch (const ncym::DomainError& e) {
    return fail(NCYM_ERR_DOMAIN, e.what());
  } catch (const ncym::ConfigError& e) {
    return fail(NCYM_ERR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(NCYM_ERR_DOMAIN, e.what());
  } catch (const std::exception& e) {
    return fail(NCYM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NCYM_ERR_INTERNAL, "unknown error");
  }
}

#define NCYM_REQUIRE(p) \
  if (!(p)) return fail(NCYM_ERR_NULL, #p " is NULL")

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ncym::Side side_of(ncym_side s) {
  if (s != NCYM_LEFT && s != NCYM_RIGHT) throw ncym::DomainError("side must be NCYM_LEFT or NCYM_RIGHT");
  return s == NCYM_LEFT ? ncym::Side::Left : ncym::Side::Right;
}

ncym::Problem problem_of(ncym_problem p) {
  switch (p) {
    case NCYM_PROBLEM_YM:
      return ncym::Problem::YM;
    case NCYM_PROBLEM_SM:
      return ncym::Problem::SM;
    case NCYM_PROBLEM_YMSM:
      return ncym::Problem::YMSM;
  }
  throw ncym::DomainError("unknown problem");
}

ncym::CMatrix read_matrix(int n, const double* e) {
  ncym::CMatrix m(n);
  for (int k = 0; k < n * n; ++k) m.data()[static_cast<std::size_t>(k)] = {e[2 * k], e[2 * k + 1]};
  return m;
}

void write_matrix(const ncym::CMatrix& m, double* e) {
  for (std::size_t k = 0; k < m.data().size(); ++k) {
    e[2 * k] = m.data()[k].real();
    e[2 * k + 1] = m.data()[k].imag();
  }
}

void check_size(int n) {
  if (n < 2 || n > ncym::kMaxAlgebraSize)
    throw ncym::DimensionError("algebra size must lie in [2, " + std::to_string(ncym::kMaxAlgebraSize) + "]");
}

template <class F>
ncym_status unary(const ncym_form* a, ncym_form** out, F&& f) {
  NCYM_REQUIRE(a);
  NCYM_REQUIRE(out);
  return guarded([&] {
    *out = new ncym_form{f(a->value)};
    return NCYM_OK;
  });
}

}  // namespace

extern "C" {

const char* ncym_version(void) { return "1.0.0"; }

const char* ncym_ledger_id(void) {
  static const std::string id = ncym::ConventionLedger::standard().id();
  return id.c_str();
}

const char* ncym_last_error(void) { return g_last_error.c_str(); }

void ncym_string_free(char* s) { std::free(s); }

ncym_status ncym_form_create(int n, ncym_form** out) {
  NCYM_REQUIRE(out);
  return guarded([&] {
    check_size(n);
    *out = new ncym_form{ncym::CForm(n)};
    return NCYM_OK;
  });
}

void ncym_form_destroy(ncym_form* f) { delete f; }

ncym_status ncym_form_clone(const ncym_form* f, ncym_form** out) {
  return unary(f, out, [](const ncym::CForm& a) { return a; });
}

ncym_status ncym_form_algebra_size(const ncym_form* f, int* out) {
  NCYM_REQUIRE(f);
  NCYM_REQUIRE(out);
  *out = f->value.algebra_size();
  return NCYM_OK;
}

ncym_status ncym_form_set(ncym_form* f, const char* index, const double* entries) {
  NCYM_REQUIRE(f);
  NCYM_REQUIRE(index);
  NCYM_REQUIRE(entries);
  return guarded([&] {
    const int n = f->value.algebra_size();
    f->value.set(ncym::mask_from_string(index, f->value.dimension()), read_matrix(n, entries));
    return NCYM_OK;
  });
}

ncym_status ncym_form_get(const ncym_form* f, const char* index, double* entries) {
  NCYM_REQUIRE(f);
  NCYM_REQUIRE(index);
  NCYM_REQUIRE(entries);
  return guarded([&] {
    write_matrix(f->value.coeff(index), entries);
    return NCYM_OK;
  });
}

ncym_status ncym_form_grade(const ncym_form* f, int* out) {
  NCYM_REQUIRE(f);
  NCYM_REQUIRE(out);
  return guarded([&] {
    *out = f->value.grade();
    return NCYM_OK;
  });
}

ncym_status ncym_form_add(const ncym_form* a, const ncym_form* b, ncym_form** out) {
  NCYM_REQUIRE(b);
  return unary(a, out, [&](const ncym::CForm& x) { return x + b->value; });
}

ncym_status ncym_form_scale(const ncym_form* a, double re, double im, ncym_form** out) {
  return unary(a, out, [&](const ncym::CForm& x) { return x * ncym::Complex(re, im); });
}

ncym_status ncym_form_wedge(const ncym_form* a, const ncym_form* b, ncym_form** out) {
  NCYM_REQUIRE(b);
  return unary(a, out, [&](const ncym::CForm& x) { return ncym::wedge(x, b->value); });
}

ncym_status ncym_form_differential(const ncym_form* a, ncym_form** out) {
  return unary(a, out, [](const ncym::CForm& x) { return ncym::differential(x); });
}

ncym_status ncym_form_star(const ncym_form* a, ncym_form** out) {
  return unary(a, out, [](const ncym::CForm& x) { return ncym::star(x); });
}

ncym_status ncym_form_hodge(const ncym_form* a, ncym_side side, ncym_form** out) {
  return unary(a, out, [&](const ncym::CForm& x) { return ncym::hodge(x, side_of(side)); });
}

ncym_status ncym_form_hodge_inverse(const ncym_form* a, ncym_side side, ncym_form** out) {
  return unary(a, out, [&](const ncym::CForm& x) { return ncym::hodge_inverse(x, side_of(side)); });
}

ncym_status ncym_form_codifferential(const ncym_form* a, ncym_side side, ncym_form** out) {
  return unary(a, out, [&](const ncym::CForm& x) { return ncym::codifferential(x, side_of(side)); });
}

ncym_status ncym_form_laplacian(const ncym_form* a, ncym_side side, ncym_form** out) {
  return unary(a, out, [&](const ncym::CForm& x) { return ncym::laplacian(x, side_of(side)); });
}

ncym_status ncym_form_hodge_inner(const ncym_form* a, const ncym_form* b, ncym_side side, double out[2]) {
  NCYM_REQUIRE(a);
  NCYM_REQUIRE(b);
  NCYM_REQUIRE(out);
  return guarded([&] {
    const ncym::Complex v = ncym::hodge_inner(a->value, b->value, side_of(side));
    out[0] = v.real();
    out[1] = v.imag();
    return NCYM_OK;
  });
}

ncym_status ncym_form_to_json(const ncym_form* f, char** out) {
  NCYM_REQUIRE(f);
  NCYM_REQUIRE(out);
  return guarded([&] {
    *out = dup_string(ncym::to_json(f->value).dump());
    return NCYM_OK;
  });
}

ncym_status ncym_config_create(const ncym_form* a, int charge, const double* q1, const double* q2, const double* potential,
                               size_t n_coefficients, ncym_config** out) {
  NCYM_REQUIRE(a);
  NCYM_REQUIRE(q1);
  NCYM_REQUIRE(q2);
  NCYM_REQUIRE(out);
  if (n_coefficients > 0 && !potential) return fail(NCYM_ERR_NULL, "potential is NULL");
  return guarded([&] {
    const int n = a->value.algebra_size();
    if (!a->value.is_zero() && !a->value.is_homogeneous(1)) throw ncym::GradeError("gauge potential must be a one-form");
    ncym::PolynomialPotential v;
    for (size_t k = 0; k < n_coefficients; ++k) {
      if (!std::isfinite(potential[k])) throw ncym::DomainError("potential coefficients must be finite");
      v.coefficients.push_back(potential[k]);
    }
    *out = new ncym_config{ncym::CConfig::make(a->value, charge, read_matrix(n, q1), read_matrix(n, q2), v)};
    return NCYM_OK;
  });
}

void ncym_config_destroy(ncym_config* c) { delete c; }

ncym_status ncym_config_actions(const ncym_config* c, double* ym, double gsm[2]) {
  NCYM_REQUIRE(c);
  NCYM_REQUIRE(ym);
  NCYM_REQUIRE(gsm);
  return guarded([&] {
    *ym = ncym::ym_action(c->value.connection).real();
    const ncym::Complex g = ncym::gsm_action(c->value);
    gsm[0] = g.real();
    gsm[1] = g.imag();
    return NCYM_OK;
  });
}

ncym_status ncym_config_connection_residual(const ncym_config* c, ncym_form** out) {
  NCYM_REQUIRE(c);
  NCYM_REQUIRE(out);
  return guarded([&] {
    *out = new ncym_form{ncym::ymsm_connection_residual(c->value)};
    return NCYM_OK;
  });
}

ncym_status ncym_config_ym_residual(const ncym_config* c, ncym_form** out) {
  NCYM_REQUIRE(c);
  NCYM_REQUIRE(out);
  return guarded([&] {
    *out = new ncym_form{ncym::ym_residual(c->value.connection).left};
    return NCYM_OK;
  });
}

ncym_status ncym_config_section_residuals(const ncym_config* c, double* left, double* right) {
  NCYM_REQUIRE(c);
  NCYM_REQUIRE(left);
  NCYM_REQUIRE(right);
  return guarded([&] {
    const auto r = ncym::ymsm_section_residuals(c->value);
    write_matrix(r.left, left);
    write_matrix(r.right, right);
    return NCYM_OK;
  });
}

ncym_status ncym_config_continuity_norm(const ncym_config* c, double* out) {
  NCYM_REQUIRE(c);
  NCYM_REQUIRE(out);
  return guarded([&] {
    const auto r = ncym::continuity_residual(c->value.connection);
    *out = std::max(ncym::frobenius(r.left), ncym::frobenius(r.right));
    return NCYM_OK;
  });
}

ncym_status ncym_config_evaluate(const ncym_config* c, ncym_problem problem, uint64_t seed, int samples,
                                 char** report_json) {
  NCYM_REQUIRE(c);
  NCYM_REQUIRE(report_json);
  return guarded([&] {
    if (samples < 0) throw ncym::DomainError("samples must be non-negative");
    *report_json = dup_string(ncym::to_json(ncym::evaluate(c->value, problem_of(problem), seed, samples)).dump());
    return NCYM_OK;
  });
}

ncym_status ncym_config_to_json(const ncym_config* c, char** out) {
  NCYM_REQUIRE(c);
  NCYM_REQUIRE(out);
  return guarded([&] {
    *out = dup_string(ncym::to_json(c->value).dump());
    return NCYM_OK;
  });
}

ncym_status ncym_solve(const ncym_config* start, ncym_problem problem, ncym_step_rule rule, double tolerance,
                       long max_iterations, uint64_t seed, ncym_config** out, char** report_json, int* converged) {
  NCYM_REQUIRE(start);
  return guarded([&] {
    if (rule != NCYM_STEP_GRADIENT_DESCENT && rule != NCYM_STEP_GAUSS_NEWTON) throw ncym::DomainError("unknown step rule");
    ncym::SolverOptions o;
    o.problem = problem_of(problem);
    o.step_rule = rule == NCYM_STEP_GAUSS_NEWTON ? ncym::StepRule::GaussNewton : ncym::StepRule::GradientDescent;
    o.tolerance = tolerance;
    o.max_iterations = max_iterations;
    const ncym::SolveResult r = ncym::solve_stationary(start->value, o, seed);
    if (converged) *converged = r.report.converged ? 1 : 0;
    if (report_json) *report_json = dup_string(ncym::to_json(r.report).dump());
    if (out) *out = new ncym_config{r.config};
    return NCYM_OK;
  });
}

ncym_status ncym_spectrum(int n, int grade, ncym_side side, double* eigenvalues, size_t capacity, size_t* count) {
  NCYM_REQUIRE(count);
  if (capacity > 0 && !eigenvalues) return fail(NCYM_ERR_NULL, "eigenvalues is NULL");
  return guarded([&] {
    check_size(n);
    const ncym::Spectrum s = ncym::spectrum(n, grade, side_of(side));
    *count = s.eigenvalues.size();
    for (size_t k = 0; k < std::min(capacity, s.eigenvalues.size()); ++k) eigenvalues[k] = s.eigenvalues[k];
    return NCYM_OK;
  });
}

ncym_status ncym_run(const char* config_json, const char* source_name, const char* overrides_json, int* exit_code,
                     char** message) {
  NCYM_REQUIRE(exit_code);
  *exit_code = 2;
  if (message) *message = nullptr;
  return guarded([&] {
    ncym::json overrides = ncym::json::object();
    if (overrides_json && *overrides_json) {
      try {
        overrides = ncym::json::parse(overrides_json);
      } catch (const ncym::json::parse_error&) {
        throw ncym::ConfigError("overrides: malformed JSON");
      }
    }
    ncym::RunConfig cfg;
    try {
      cfg = ncym::parse_run_config(config_json ? config_json : "", source_name ? source_name : "config", overrides);
    } catch (const ncym::ConfigError& e) {
      if (message) *message = dup_string(e.what());
      throw;
    }
    const ncym::RunOutcome r = ncym::run(cfg);
    *exit_code = r.exit_code;
    if (message) *message = dup_string(r.message);
    if (r.exit_code == 2) return fail(NCYM_ERR_CONFIG, r.message);
    return NCYM_OK;
  });
}

}  // extern "C"
