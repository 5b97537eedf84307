#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "ncym/ncym.h"

namespace {

std::vector<double> identity2() { return {1, 0, 0, 0, 0, 0, 1, 0}; }

std::vector<double> half_pauli1() { return {0, 0, 0.5, 0, 0.5, 0, 0, 0}; }

std::string take(char* s) {
  std::string out = s ? s : "";
  ncym_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("C API: metadata and errors") {
  CHECK(std::string(ncym_version()).size() > 0);
  CHECK(std::string(ncym_ledger_id()) == "dh:ce/star:graded/v1");
  ncym_form* f = nullptr;
  CHECK(ncym_form_create(1, &f) == NCYM_ERR_DIMENSION);
  CHECK(std::string(ncym_last_error()).size() > 0);
  CHECK(ncym_form_create(2, nullptr) == NCYM_ERR_NULL);
  REQUIRE(ncym_form_create(2, &f) == NCYM_OK);
  CHECK(ncym_form_set(f, "4", identity2().data()) != NCYM_OK);
  CHECK(ncym_form_set(f, "1", nullptr) == NCYM_ERR_NULL);
  ncym_form* g = nullptr;
  REQUIRE(ncym_form_create(3, &g) == NCYM_OK);
  ncym_form* out = nullptr;
  CHECK(ncym_form_add(f, g, &out) == NCYM_ERR_DIMENSION);
  ncym_form_destroy(g);
  ncym_form_destroy(f);
  ncym_form_destroy(nullptr);
}

TEST_CASE("C API: forms") {
  ncym_form* p = nullptr;
  REQUIRE(ncym_form_create(2, &p) == NCYM_OK);
  REQUIRE(ncym_form_set(p, "", half_pauli1().data()) == NCYM_OK);
  int grade = 7;
  CHECK(ncym_form_grade(p, &grade) == NCYM_OK);
  CHECK(grade == 0);

  ncym_form* lap = nullptr;
  REQUIRE(ncym_form_laplacian(p, NCYM_LEFT, &lap) == NCYM_OK);
  std::vector<double> v(8);
  REQUIRE(ncym_form_get(lap, "", v.data()) == NCYM_OK);
  CHECK(v[2] == doctest::Approx(1.0));
  CHECK(v[4] == doctest::Approx(1.0));
  CHECK(std::abs(v[0]) < 1e-15);

  ncym_form* d = nullptr;
  REQUIRE(ncym_form_differential(p, &d) == NCYM_OK);
  CHECK(ncym_form_grade(d, &grade) == NCYM_OK);
  CHECK(grade == 1);
  ncym_form* dd = nullptr;
  REQUIRE(ncym_form_differential(d, &dd) == NCYM_OK);
  CHECK(ncym_form_grade(dd, &grade) == NCYM_OK);
  CHECK(grade == -1);

  double inner[2];
  REQUIRE(ncym_form_hodge_inner(p, p, NCYM_LEFT, inner) == NCYM_OK);
  CHECK(inner[0] == doctest::Approx(0.25));
  CHECK(inner[1] == doctest::Approx(0.0));

  ncym_form* h = nullptr;
  REQUIRE(ncym_form_hodge(p, NCYM_LEFT, &h) == NCYM_OK);
  ncym_form* hi = nullptr;
  REQUIRE(ncym_form_hodge_inverse(h, NCYM_LEFT, &hi) == NCYM_OK);
  REQUIRE(ncym_form_get(hi, "", v.data()) == NCYM_OK);
  CHECK(v == half_pauli1());

  ncym_form* one = nullptr;
  REQUIRE(ncym_form_create(2, &one) == NCYM_OK);
  REQUIRE(ncym_form_set(one, "1", identity2().data()) == NCYM_OK);
  ncym_form* two = nullptr;
  REQUIRE(ncym_form_create(2, &two) == NCYM_OK);
  REQUIRE(ncym_form_set(two, "2", identity2().data()) == NCYM_OK);
  ncym_form* w = nullptr;
  REQUIRE(ncym_form_wedge(one, two, &w) == NCYM_OK);
  REQUIRE(ncym_form_get(w, "12", v.data()) == NCYM_OK);
  CHECK(v == identity2());
  ncym_form* cod = nullptr;
  CHECK(ncym_form_codifferential(one, NCYM_RIGHT, &cod) == NCYM_OK);

  ncym_form* scaled = nullptr;
  REQUIRE(ncym_form_scale(one, 0, 2, &scaled) == NCYM_OK);
  REQUIRE(ncym_form_get(scaled, "1", v.data()) == NCYM_OK);
  CHECK(v[1] == 2.0);
  ncym_form* st = nullptr;
  REQUIRE(ncym_form_star(scaled, &st) == NCYM_OK);
  REQUIRE(ncym_form_get(st, "1", v.data()) == NCYM_OK);
  CHECK(v[1] == -2.0);
  ncym_form* mixed = nullptr;
  REQUIRE(ncym_form_add(one, w, &mixed) == NCYM_OK);
  CHECK(ncym_form_grade(mixed, &grade) == NCYM_ERR_GRADE);

  char* js = nullptr;
  REQUIRE(ncym_form_to_json(w, &js) == NCYM_OK);
  const auto j = nlohmann::json::parse(take(js));
  CHECK(j.contains("12"));

  ncym_form* clone = nullptr;
  REQUIRE(ncym_form_clone(w, &clone) == NCYM_OK);
  int n = 0;
  CHECK(ncym_form_algebra_size(clone, &n) == NCYM_OK);
  CHECK(n == 2);

  for (ncym_form* x : {p, lap, d, dd, h, hi, one, two, w, cod, scaled, st, mixed, clone}) ncym_form_destroy(x);
}

TEST_CASE("C API: configurations, evaluation and solve") {
  ncym_form* a = nullptr;
  REQUIRE(ncym_form_create(2, &a) == NCYM_OK);
  // Triplet 1: A = 0, q = S₁ + S₂ + S₃, V(q) = 2q.
  const std::vector<double> q{0.5, 0, 0.5, -0.5, 0.5, 0.5, -0.5, 0};
  const double v[2] = {0.0, 2.0};
  ncym_config* c = nullptr;
  REQUIRE(ncym_config_create(a, 1, q.data(), q.data(), v, 2, &c) == NCYM_OK);
  double ym = 1, gsm[2] = {1, 1};
  REQUIRE(ncym_config_actions(c, &ym, gsm) == NCYM_OK);
  CHECK(ym == 0.0);
  std::vector<double> l(8), r(8);
  REQUIRE(ncym_config_section_residuals(c, l.data(), r.data()) == NCYM_OK);
  for (double x : l) CHECK(std::abs(x) < 1e-12);
  ncym_form* g = nullptr;
  REQUIRE(ncym_config_connection_residual(c, &g) == NCYM_OK);
  int grade = 0;
  CHECK(ncym_form_grade(g, &grade) == NCYM_OK);
  double cont = 1;
  CHECK(ncym_config_continuity_norm(c, &cont) == NCYM_OK);
  CHECK(cont == 0.0);
  char* rep = nullptr;
  REQUIRE(ncym_config_evaluate(c, NCYM_PROBLEM_YMSM, 5, 2, &rep) == NCYM_OK);
  const auto j = nlohmann::json::parse(take(rep));
  CHECK(j["residual_total"].get<double>() < 1e-10);
  CHECK(j["ledger_id"] == "dh:ce/star:graded/v1");
  char* cj = nullptr;
  REQUIRE(ncym_config_to_json(c, &cj) == NCYM_OK);
  CHECK(nlohmann::json::parse(take(cj)).contains("q1"));

  // Pure Yang–Mills solve from a non-flat start.
  ncym_form* a2 = nullptr;
  REQUIRE(ncym_form_create(2, &a2) == NCYM_OK);
  REQUIRE(ncym_form_set(a2, "1", half_pauli1().data()) == NCYM_OK);
  ncym_config* c2 = nullptr;
  const std::vector<double> zero(8, 0.0);
  CHECK(ncym_config_create(a2, 0, nullptr, nullptr, nullptr, 0, &c2) == NCYM_ERR_NULL);
  REQUIRE(ncym_config_create(a2, 0, zero.data(), zero.data(), nullptr, 0, &c2) == NCYM_OK);
  ncym_config* out = nullptr;
  int converged = 0;
  char* srep = nullptr;
  REQUIRE(ncym_solve(c2, NCYM_PROBLEM_YM, NCYM_STEP_GRADIENT_DESCENT, 1e-10, 100000, 1, &out, &srep, &converged) ==
          NCYM_OK);
  CHECK(converged == 1);
  CHECK(nlohmann::json::parse(take(srep))["converged"] == true);
  ncym_form* ymr = nullptr;
  REQUIRE(ncym_config_ym_residual(out, &ymr) == NCYM_OK);
  CHECK(ncym_solve(c2, NCYM_PROBLEM_YM, NCYM_STEP_GRADIENT_DESCENT, -1, 10, 1, nullptr, nullptr, &converged) ==
        NCYM_ERR_DOMAIN);

  for (ncym_form* x : {a, g, a2, ymr}) ncym_form_destroy(x);
  for (ncym_config* x : {c, c2, out}) ncym_config_destroy(x);
}

TEST_CASE("C API: spectrum and run") {
  double ev[4];
  size_t count = 0;
  REQUIRE(ncym_spectrum(2, 0, NCYM_LEFT, ev, 4, &count) == NCYM_OK);
  CHECK(count == 4);
  CHECK(ev[0] == doctest::Approx(0.0));
  CHECK(ev[3] == doctest::Approx(2.0));
  REQUIRE(ncym_spectrum(2, 1, NCYM_LEFT, ev, 4, &count) == NCYM_OK);
  CHECK(count == 12);

  int code = -1;
  char* msg = nullptr;
  REQUIRE(ncym_run("{\"tolerance\": -1}", "inline", nullptr, &code, &msg) == NCYM_ERR_CONFIG);
  CHECK(code == 2);
  CHECK(take(msg).find("tolerance") != std::string::npos);
  REQUIRE(ncym_run("{\"mode\": ", "inline", nullptr, &code, &msg) == NCYM_ERR_CONFIG);
  CHECK(code == 2);
  CHECK(take(msg).find("line") != std::string::npos);
}
