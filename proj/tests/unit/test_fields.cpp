#include "doctest.h"

#include <cmath>

#include "ncym/fields.hpp"

using namespace ncym;
using Q = GaussianRational;

namespace {

CMatrix gen(int k) { return Calculus<Complex>::get(2)->generator(k); }

CForm sum_generators_form() {
  CForm a(2);
  for (int j = 1; j <= 3; ++j) a.set(Mask{1} << (j - 1), gen(j));
  return a;
}

CConfig triplet1() {
  const CMatrix q = gen(1) + gen(2) + gen(3);
  return CConfig::make(CForm(2), 1, q, q, PolynomialPotential{{0.0, 2.0}});
}

CConfig triplet2() {
  return CConfig::make(sum_generators_form(), 1, CMatrix::identity(2) * Complex(std::sqrt(3.0)), CMatrix::identity(2),
                       PolynomialPotential{{0.0, -0.75}});
}

CConfig random_config(Rng& rng, int charge) {
  PolynomialPotential v{{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.5, 0.5)}};
  return CConfig::make(rng.form(2, 1, 0.7), charge, rng.matrix(2, 0.7), rng.matrix(2, 0.7), v);
}

double rel(double a, double b) { return std::abs(a - b) / std::max({1e-3, std::abs(a), std::abs(b)}); }

}  // namespace

TEST_CASE("potential evaluation and parsing") {
  const PolynomialPotential v{{1.0, -2.0, 3.0}};
  Rng rng(51);
  const CMatrix q = rng.matrix(2);
  const CMatrix id = CMatrix::identity(2);
  CHECK(max_abs_diff(v.value(q), id * Complex(1.0) + q * Complex(-2.0) + q * q * Complex(3.0)) < 1e-13);
  CHECK(max_abs_diff(v.derivative(q), id * Complex(-2.0) + q * Complex(6.0)) < 1e-13);
  CHECK(PolynomialPotential{{0.7}}.derivative(q).is_zero());
  CHECK(max_abs_diff(PolynomialPotential{{0.0, -0.75}}.derivative(id * Complex(3.0)), id * Complex(-0.75)) == 0.0);
  CHECK(max_abs_diff(v.value(q).adjoint(), v.value(q.adjoint())) < 1e-13);
  CHECK(max_abs_diff(v.derivative(q).adjoint(), v.derivative(q.adjoint())) < 1e-13);
  const auto parsed = PolynomialPotential::parse("0, 2.5,-1e-3");
  REQUIRE(parsed.coefficients.size() == 3);
  CHECK(parsed.coefficients[1] == 2.5);
  CHECK(PolynomialPotential::parse(parsed.to_string()).coefficients == parsed.coefficients);
  CHECK_THROWS_AS(PolynomialPotential::parse("1,abc"), DomainError);
  CHECK_THROWS_AS(PolynomialPotential::parse("1,,2"), DomainError);
  CHECK_THROWS_AS(PolynomialPotential::parse("nan"), DomainError);
  CHECK_THROWS_AS(PolynomialPotential::parse("inf"), DomainError);
}

TEST_CASE("configuration normalizations") {
  Rng rng(52);
  const CMatrix p1 = rng.matrix(2), p2 = rng.matrix(2);
  const CConfig c = CConfig::from_scaled(CForm(2), 2, p1, p2, {});
  CHECK(max_abs_diff(c.p1(), p1) < 1e-15);
  CHECK(max_abs_diff(c.p2(), p2) < 1e-15);
  CHECK(c.left.charge == 2);
  CHECK(c.right.charge == -2);
  CHECK_THROWS_AS(CConfig::from_scaled(CForm(2), 0, p1, p2, {}), DomainError);
  CHECK_THROWS_AS(CConfig::make(CForm(2), 1, CMatrix(3), p2, {}), DimensionError);
}

TEST_CASE("Yang-Mills action") {
  Rng rng(53);
  CHECK(ym_action(GaugeConnection<Complex>::trivial(2)) == Complex(0.0));
  CHECK(std::abs(ym_action(GaugeConnection<Complex>{differential(CForm::scalar(rng.matrix(2)))})) < 1e-14);
  const GaugeConnection<Complex> c{CForm::basis("1", gen(2))};
  const CForm f = curvature(c);
  const Complex s = ym_action(c);
  CHECK(s.real() < 0.0);
  CHECK(std::abs(s + 0.5 * hodge_inner(f, f, Side::Left)) < 1e-14);
  for (int i = 0; i < 200; ++i) CHECK(std::abs(ym_action(GaugeConnection<Complex>{rng.form(2, 1)}).imag()) < 1e-12);
}

TEST_CASE("scalar matter actions") {
  const CMatrix z(2);
  CHECK(std::abs(sm_action<Complex>({z}, {z}, PolynomialPotential{})) == 0.0);
  const Complex lambda(0.4, -1.3);
  const CMatrix p = CMatrix::identity(2) * lambda;
  CHECK(std::abs(sm_action<Complex>({p}, {p.adjoint()}, PolynomialPotential{{2.5}})) < 1e-15);
  CHECK_THROWS_AS(sm_action<Complex>({p}, {}, PolynomialPotential{}), DimensionError);
  Rng rng(54);
  const CConfig cfg = random_config(rng, 0);
  CHECK(std::abs(sm_action<Complex>({cfg.left.p}, {cfg.right.p}, cfg.potential) - gsm_action(cfg)) < 1e-14);
}

TEST_CASE("Yang-Mills residual characterizes flatness") {
  Rng rng(55);
  for (int s = 0; s < 100; ++s) {
    const GaugeConnection<Complex> flat{differential(CForm::scalar(rng.matrix(2)))};
    CHECK(frobenius(ym_residual(flat).left) < 1e-13);
    CHECK(frobenius(ym_residual(flat).right) < 1e-13);
    const GaugeConnection<Complex> c{rng.form(2, 1)};
    CHECK(frobenius(curvature(c)) > 1e-6);
    CHECK(frobenius(ym_residual(c).left) > 1e-6);
  }
  const CForm a = sum_generators_form();
  const CForm r = ym_residual(GaugeConnection<Complex>{a}).left;
  CHECK(max_coeff_diff(r, a) < 1e-14);
}

TEST_CASE("scalar matter residuals") {
  Rng rng(56);
  const QMatrix l1 = QMatrix::identity(2) * Q(mpq_class(3, 7), mpq_class(-1, 2));
  const QMatrix l2 = QMatrix::identity(2) * Q(mpq_class(5), mpq_class(2, 9));
  const auto r = sm_residuals<Q>({l1}, {l2}, PolynomialPotential{{1.25}});
  CHECK(r.left.front().is_zero());
  CHECK(r.right.front().is_zero());
  const auto h = sm_residuals<Complex>({CMatrix::identity(2)}, {CMatrix::identity(2)}, PolynomialPotential{});
  CHECK(h.left.front().is_zero());
  // p = S₁ is stationary for V(q) = 2q since d^⋆dS₁ = 2S₁; the rule V′(Id) = ½Id does not give it.
  const auto s1 = sm_residuals<Complex>({gen(1)}, {gen(1)}, PolynomialPotential{{0.0, 2.0}});
  CHECK(norm(s1.left.front()) < 1e-15);
  CHECK(norm(s1.right.front()) < 1e-15);
  const auto s1_half = sm_residuals<Complex>({gen(1)}, {gen(1)}, PolynomialPotential{{0.0, 0.5}});
  CHECK(norm(s1_half.left.front()) > 0.5);
}

TEST_CASE("paper triplet 1 solves the coupled equations") {
  const CConfig t = triplet1();
  CHECK(frobenius(ymsm_connection_residual(t)) < 1e-10);
  const auto r = ymsm_section_residuals(t);
  CHECK(norm(r.left) < 1e-10);
  CHECK(norm(r.right) < 1e-10);
}

TEST_CASE("paper triplet 2: connection equation holds, section residuals are reported") {
  const CConfig t = triplet2();
  CHECK(frobenius(ymsm_connection_residual(t)) < 1e-10);
  const auto r = ymsm_section_residuals(t);
  CHECK(norm(r.left) == doctest::Approx(1.5 * std::sqrt(6.0)).epsilon(1e-12));
  CHECK(norm(r.right) == doctest::Approx(1.5 * std::sqrt(2.0)).epsilon(1e-12));
  // The literal adjoint formula makes them vanish; it is not the adjoint for this non-real A.
  const auto f = ymsm_section_residuals_formula(t);
  CHECK(norm(f.left) < 1e-10);
  CHECK(norm(f.right) < 1e-10);
  Rng rng(57);
  for (int s = 0; s < 10; ++s) {
    const FieldDirection dir{CForm(2), rng.matrix(2), rng.matrix(2)};
    CHECK(rel(predicted_derivative(t, dir), action_gradient_fd(t, dir)) < 1e-5);
  }
}

TEST_CASE("connection residual at charge zero is the Yang-Mills residual") {
  Rng rng(58);
  for (int s = 0; s < 20; ++s) {
    const CConfig cfg = random_config(rng, 0);
    CHECK(ymsm_connection_residual(cfg) == ym_residual(cfg.connection).left);
    const auto sec = ymsm_section_residuals(cfg);
    const auto sm = sm_residuals<Complex>({cfg.left.p}, {cfg.right.p}, cfg.potential);
    CHECK(max_abs_diff(sec.left, sm.left.front()) < 1e-13);
    CHECK(max_abs_diff(sec.right, sm.right.front().adjoint()) < 1e-13);
  }
  CHECK(frobenius(ymsm_connection_residual(CConfig::make(CForm(2), 1, CMatrix(2), CMatrix(2), {}))) == 0.0);
}

TEST_CASE("four-term expansion of the section Laplacian") {
  Rng rng(59);
  for (int n : {-2, -1, 1, 2})
    for (int s = 0; s < 10; ++s) {
      // Real connection so the literal formula is the adjoint.
      const CForm a0 = rng.form(2, 1, 0.7);
      const CForm a = (a0 - star(a0)) * Complex(0.5);
      const CConfig cfg = CConfig::make(a, n, rng.matrix(2), rng.matrix(2), PolynomialPotential{});
      const auto derived = section_laplacian_expansion(cfg, QuadraticSign::Derived);
      const QvbForm<Complex> g1 = cov_derivative(cfg.connection, cfg.left);
      const QvbForm<Complex> g2 = cov_derivative(cfg.connection, cfg.right);
      const CMatrix l1 = cov_codifferential(cfg.connection, g1).form.coeff(0);
      const CMatrix l2 = cov_codifferential(cfg.connection, g2).form.coeff(0);
      CHECK(max_abs_diff(derived.left, l1) < 1e-12);
      CHECK(max_abs_diff(derived.right, l2) < 1e-12);
      const auto symmetric = section_laplacian_expansion(cfg, QuadraticSign::Symmetric);
      CHECK(max_abs_diff(symmetric.right, derived.right) < 1e-12);
      CHECK(max_abs_diff(symmetric.left, derived.left) > 1e-6);
    }
}

TEST_CASE("continuity equation") {
  Rng rng(60);
  CHECK(frobenius(continuity_residual(GaugeConnection<Complex>::trivial(2)).left) == 0.0);
  CHECK(frobenius(continuity_residual(GaugeConnection<Complex>{sum_generators_form()}).left) < 1e-10);
  for (int s = 0; s < 100; ++s) {
    const auto r = continuity_residual(GaugeConnection<Complex>{rng.form(2, 1)});
    CHECK(frobenius(r.left) < 1e-10);
    CHECK(frobenius(r.right) < 1e-10);
  }
}

TEST_CASE("variational consistency of every equation") {
  Rng rng(61);
  for (int s = 0; s < 100; ++s) {
    const int n = (s % 4 < 2) ? s % 4 - 2 : s % 4 - 1;
    const CConfig cfg = random_config(rng, n);
    const FieldDirection conn{rng.form(2, 1), CMatrix(2), CMatrix(2)};
    const FieldDirection left{CForm(2), rng.matrix(2), CMatrix(2)};
    const FieldDirection right{CForm(2), CMatrix(2), rng.matrix(2)};
    for (const FieldDirection& d : {conn, left, right})
      CHECK(rel(predicted_derivative(cfg, d), action_gradient_fd(cfg, d)) < 1e-5);
    const CConfig c0 = random_config(rng, 0);
    CHECK(rel(predicted_derivative(c0, conn, ActionKind::YM), action_gradient_fd(c0, conn, 1e-6, ActionKind::YM)) < 1e-5);
    CHECK(rel(predicted_derivative(c0, left, ActionKind::GSM), action_gradient_fd(c0, left, 1e-6, ActionKind::GSM)) <
          1e-5);
    CHECK(rel(predicted_derivative(c0, right, ActionKind::GSM), action_gradient_fd(c0, right, 1e-6, ActionKind::GSM)) <
          1e-5);
  }
}

TEST_CASE("directional derivative is linear and vanishes at flat connections") {
  Rng rng(62);
  const CConfig flat = CConfig::make(differential(CForm::scalar(rng.matrix(2))), 0, CMatrix(2), CMatrix(2), {});
  const FieldDirection d{rng.form(2, 1), CMatrix(2), CMatrix(2)};
  CHECK(std::abs(action_gradient_fd(flat, d, 1e-6, ActionKind::YM)) < 1e-8);
  const CConfig cfg = random_config(rng, 1);
  const FieldDirection d2{d.lambda * Complex(3.0), rng.matrix(2), rng.matrix(2)};
  const FieldDirection d3{d2.lambda * Complex(-0.5), d2.u1 * Complex(-0.5), d2.u2 * Complex(-0.5)};
  CHECK(predicted_derivative(cfg, d3) == doctest::Approx(-0.5 * predicted_derivative(cfg, d2)).epsilon(1e-12));
  CHECK(action_gradient_fd(cfg, d3) == doctest::Approx(-0.5 * action_gradient_fd(cfg, d2)).epsilon(1e-6));
}

TEST_CASE("gauge phases leave every action unchanged exactly") {
  Rng rng(63);
  const Q e1(mpq_class(3, 5), mpq_class(4, 5)), e2(mpq_class(-5, 13), mpq_class(12, 13));
  for (int s = 0; s < 10; ++s) {
    const PolynomialPotential v{{0.5, -1.0, 0.25}};
    const QConfig base = QConfig::make(rng.rational_form(2, 1), 1 + s % 2, rng.rational_matrix(2), rng.rational_matrix(2), v);
    const QConfig ph = QConfig::make(base.connection.A, base.charge(), base.left.p * e1, base.right.p * e2, v);
    CHECK(gsm_action(ph) == gsm_action(base));
    CHECK(ymsm_action(ph) == ymsm_action(base));
    CHECK(sm_action<Q>({base.left.p * e1}, {base.right.p * e2}, v) == sm_action<Q>({base.left.p}, {base.right.p}, v));
  }
}

TEST_CASE("potential reconstruction") {
  Rng rng(64);
  const CMatrix p = rng.matrix(2);
  const auto r = reconstruct_potential(GaugeConnection<Complex>{differential(CForm::scalar(p))});
  CHECK(r.residual < 1e-12);
  CHECK(max_coeff_diff(differential(CForm::scalar(r.p)), differential(CForm::scalar(p))) < 1e-12);
  CHECK(reconstruct_potential(GaugeConnection<Complex>{sum_generators_form()}).residual > 0.1);
}

TEST_CASE("solver: pure Yang-Mills reaches a flat connection") {
  Rng rng(65);
  const CConfig start = CConfig::make(rng.form(2, 1), 0, CMatrix(2), CMatrix(2), {});
  SolverOptions opt;
  opt.problem = Problem::YM;
  const SolveResult r = solve_stationary(start, opt, 42);
  CHECK(r.report.converged);
  CHECK(r.report.residual_total <= opt.tolerance);
  CHECK(frobenius(curvature(r.config.connection)) <= 1e-8);
  CHECK(reconstruct_potential(r.config.connection).residual <= 1e-8);
  CHECK(r.report.ledger_id == ConventionLedger::standard().id());
}

TEST_CASE("solver: constant potential drives sections into span{Id}") {
  Rng rng(66);
  for (StepRule rule : {StepRule::GradientDescent, StepRule::GaussNewton}) {
    const CConfig start = CConfig::make(CForm(2), 0, rng.matrix(2), rng.matrix(2), PolynomialPotential{{1.0}});
    SolverOptions opt;
    opt.problem = Problem::SM;
    opt.step_rule = rule;
    const SolveResult r = solve_stationary(start, opt, 1);
    CHECK(r.report.converged);
    for (const CMatrix& p : {r.config.left.p, r.config.right.p}) {
      const CMatrix centre = CMatrix::identity(2) * (p.trace() * 0.5);
      CHECK(max_abs_diff(p, centre) <= 1e-8);
    }
  }
}

TEST_CASE("solver: coupled system near triplet 1") {
  Rng rng(67);
  CConfig start = triplet1();
  start.connection.A += rng.form(2, 1, 0.05);
  start.left.p += rng.matrix(2, 0.05);
  start.right.p += rng.matrix(2, 0.05);
  SolverOptions opt;
  opt.problem = Problem::YMSM;
  opt.step_rule = StepRule::GaussNewton;
  const SolveResult r = solve_stationary(start, opt, 3);
  CHECK(r.report.converged);
  CHECK(r.report.residual_total <= 1e-8);
  CHECK(std::abs(r.report.total_action - ymsm_action(triplet1()).real()) < 1e-6);
}

TEST_CASE("solver diagnostics") {
  Rng rng(68);
  const CConfig start = CConfig::make(rng.form(2, 1), 0, CMatrix(2), CMatrix(2), {});
  SolverOptions opt;
  opt.max_iterations = 1;
  const SolveResult r = solve_stationary(start, opt);
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.diagnostic == "iteration limit reached");
  opt.tolerance = 0.0;
  CHECK_THROWS_AS(solve_stationary(start, opt), DomainError);
  CConfig bad = start;
  bad.connection.A.set(1, CMatrix::identity(2) * Complex(std::nan("")));
  SolverOptions o2;
  const SolveResult rb = solve_stationary(bad, o2);
  CHECK_FALSE(rb.report.converged);
  CHECK(rb.report.diagnostic.find("non-finite") != std::string::npos);
}

TEST_CASE("evaluation report") {
  const FieldReport rep = evaluate(triplet1(), Problem::YMSM, 9, 3);
  CHECK(rep.residual_norms.size() == 3);
  CHECK(rep.residual_total < 1e-10);
  CHECK(rep.gradient_checks.size() == 9);
  CHECK(rep.gradient_check_max_error < 1e-5);
  const FieldReport again = evaluate(triplet1(), Problem::YMSM, 9, 3);
  for (std::size_t i = 0; i < rep.gradient_checks.size(); ++i)
    CHECK(rep.gradient_checks[i].analytic == again.gradient_checks[i].analytic);
}

TEST_CASE("random generator is reproducible") {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  Rng c(8);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
