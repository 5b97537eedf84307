#include "ncym/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <future>
#include <thread>

namespace ncym {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Warn:
      return "warn";
    case CheckStatus::Fail:
      break;
  }
  return "fail";
}

int VerifySummary::count(CheckStatus s) const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.status == s; }));
}

bool VerifySummary::ok() const { return count(CheckStatus::Fail) == 0; }

namespace {

using Q = GaussianRational;
using QCalc = Calculus<Q>;
using CCalc = Calculus<Complex>;

struct Measurement {
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct CheckSpec {
  std::string name;
  std::string module;
  bool mandatory;
  std::function<Measurement(Rng&, int)> run;
};

double rel(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

double rel(Complex a, Complex b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

Measurement exact(long mismatches, long total) {
  return {static_cast<double>(mismatches), 0.0, std::to_string(total - mismatches) + "/" + std::to_string(total) + " exact"};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// ---------------------------------------------------------------- fixtures

CForm sum_generators_form(int n) {
  auto calc = CCalc::get(n);
  CForm a(n);
  for (int j = 1; j <= calc->dimension(); ++j) a.set(Mask{1} << (j - 1), calc->generator(j));
  return a;
}

CMatrix sum_generators(int n) {
  auto calc = CCalc::get(n);
  CMatrix q(n);
  for (int j = 1; j <= calc->dimension(); ++j) q += calc->generator(j);
  return q;
}

CConfig triplet1() {
  const CMatrix q = sum_generators(2);
  return CConfig::make(CForm(2), 1, q, q, PolynomialPotential{{0.0, 2.0}});
}

CConfig triplet2() {
  return CConfig::make(sum_generators_form(2), 1, CMatrix::identity(2) * Complex(std::sqrt(3.0)), CMatrix::identity(2),
                       PolynomialPotential{{0.0, -0.75}});
}

CConfig random_config(Rng& rng, int n, int charge, double scale = 0.7) {
  PolynomialPotential v{{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.5, 0.5)}};
  return CConfig::make(rng.form(n, 1, scale), charge, rng.matrix(n, scale), rng.matrix(n, scale), v);
}

CMatrix closed_form_laplacian(const CMatrix& p) {
  CMatrix r(2);
  r(0, 0) = p(0, 0) - p(1, 1);
  r(0, 1) = 2.0 * p(0, 1);
  r(1, 0) = 2.0 * p(1, 0);
  r(1, 1) = -p(0, 0) + p(1, 1);
  return r;
}

// Explicit codifferential formulas for N = 2 in exact arithmetic.
QForm codiff_formula(const QForm& mu, int grade) {
  auto c = QCalc::get(2);
  const Q i = ScalarTraits<Q>::unit_i();
  auto br = [&](int k, const QMatrix& p) { return commutator(c->generator(k), p) * i; };
  QForm out(2);
  if (grade == 1) {
    QMatrix s(2);
    for (int k = 1; k <= 3; ++k) s -= br(k, mu.coeff(Mask{1} << (k - 1)));
    out.set(0, s);
  } else if (grade == 2) {
    const QMatrix p12 = mu.coeff("12"), p13 = mu.coeff("13"), p23 = mu.coeff("23");
    out.set(mask_from_string("1", 3), br(2, p12) + br(3, p13) + p23);
    out.set(mask_from_string("2", 3), -br(1, p12) + br(3, p23) - p13);
    out.set(mask_from_string("3", 3), -br(1, p13) - br(2, p23) + p12);
  } else if (grade == 3) {
    const QMatrix p = mu.coeff("123");
    out.set(mask_from_string("12", 3), -br(3, p));
    out.set(mask_from_string("13", 3), br(2, p));
    out.set(mask_from_string("23", 3), -br(1, p));
  }
  return out;
}

template <class F>
double max_over_grades(int n, F&& f) {
  double worst = 0.0;
  for (int k = 0; k <= n * n - 1; ++k) worst = std::max(worst, f(k));
  return worst;
}

// ---------------------------------------------------------------- the suite

std::vector<CheckSpec> build_suite() {
  std::vector<CheckSpec> s;
  auto add = [&](std::string name, std::string module, bool mandatory, std::function<Measurement(Rng&, int)> f) {
    s.push_back({std::move(name), std::move(module), mandatory, std::move(f)});
  };

  // ---- matforms
  for (int n : {2, 3, 4})
    add("generators_trace_orthonormal_N" + std::to_string(n), "matforms", true, [n](Rng&, int) {
      auto c = CCalc::get(n);
      double worst = 0.0;
      for (int a = 1; a <= c->dimension(); ++a)
        for (int b = 1; b <= c->dimension(); ++b) {
          const Complex t = (c->generator(a) * c->generator(b)).trace();
          worst = std::max(worst, std::abs(t - Complex(a == b ? 0.5 : 0.0)));
          worst = std::max(worst, norm(c->generator(a) - c->generator(a).adjoint()));
        }
      return Measurement{worst, 1e-14, "tr(S_a S_b) = δ_ab/2, S_a hermitian"};
    });

  add("structure_constants_su2", "matforms", true, [](Rng&, int) {
    auto c = QCalc::get(2);
    long bad = 0, total = 0;
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b)
        for (int k = 1; k <= 3; ++k) {
          // i[S_a, S_b] = −ε_abk S_k for S = σ/2.
          const int eps = (a == b || b == k || a == k) ? 0 : (((b - a + 3) % 3 == 1) ? 1 : -1);
          ++total;
          if (!(c->structure_constant(a, b, k) == Q(-eps))) ++bad;
        }
    return exact(bad, total);
  });

  add("d_squared_zero_exact", "matforms", true, [](Rng& rng, int) {
    long bad = 0, total = 0;
    for (Mask m = 0; m < 8; ++m) {
      const QForm f = QForm::basis(m, rng.rational_matrix(2));
      ++total;
      if (!differential(differential(f)).is_zero()) ++bad;
    }
    return exact(bad, total);
  });

  add("d_squared_zero_N3", "matforms", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < std::max(1, samples / 10); ++t)
      for (int k = 0; k <= 3; ++k) worst = std::max(worst, frobenius(differential(differential(rng.form(3, k)))));
    return Measurement{worst, 1e-10, "grades 0..3, N = 3"};
  });

  add("leibniz_rule_exact", "matforms", true, [](Rng& rng, int samples) {
    long bad = 0;
    for (int t = 0; t < samples; ++t) {
      const int k = t % 3, l = (t / 3) % 2;
      const QForm a = rng.rational_form(2, k), b = rng.rational_form(2, l);
      const QForm lhs = differential(wedge(a, b));
      const QForm rhs = wedge(differential(a), b) + wedge(a, differential(b)) * Q(k % 2 ? -1 : 1);
      if (!(lhs == rhs)) ++bad;
    }
    return exact(bad, samples);
  });

  add("star_commutes_with_d_exact", "matforms", true, [](Rng& rng, int samples) {
    long bad = 0;
    for (int t = 0; t < samples; ++t) {
      const QForm a = rng.rational_form(2, t % 4);
      if (!(differential(star(a)) == star(differential(a)))) ++bad;
    }
    return exact(bad, samples);
  });

  add("star_antilinear_involution_exact", "matforms", true, [](Rng& rng, int samples) {
    long bad = 0;
    const Q i = ScalarTraits<Q>::unit_i();
    for (int t = 0; t < samples; ++t) {
      const QForm a = rng.rational_form(2, t % 4);
      if (!(star(star(a)) == a) || !(star(a * i) == star(a) * (-i))) ++bad;
    }
    return exact(bad, samples);
  });

  add("star_reverses_wedge_exact", "matforms", true, [](Rng& rng, int samples) {
    long bad = 0;
    for (int t = 0; t < samples; ++t) {
      const int k = t % 3, l = (t / 3) % 2;
      const QForm a = rng.rational_form(2, k), b = rng.rational_form(2, l);
      if (!(star(wedge(a, b)) == wedge(star(b), star(a)) * Q((k * l) % 2 ? -1 : 1))) ++bad;
    }
    return exact(bad, samples);
  });

  add("wedge_associative_exact", "matforms", true, [](Rng& rng, int samples) {
    long bad = 0;
    for (int t = 0; t < samples; ++t) {
      const QForm a = rng.rational_form(2, t % 2), b = rng.rational_form(2, 1), c = rng.rational_form(2, (t / 2) % 2);
      if (!(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)))) ++bad;
    }
    return exact(bad, samples);
  });

  add("differential_of_S1_exact", "matforms", true, [](Rng&, int) {
    auto c = QCalc::get(2);
    const QForm expected = QForm::basis("2", c->generator(3)) - QForm::basis("3", c->generator(2));
    return exact(differential(QForm::scalar(c->generator(1))) == expected ? 0 : 1, 1);
  });

  // ---- qriemann
  add("laplacian_closed_form_grade0", "qriemann", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < 10 * samples; ++t) {
      const CMatrix p = rng.matrix(2);
      worst = std::max(worst, norm(laplacian(CForm::scalar(p)).coeff(0) - closed_form_laplacian(p)));
    }
    return Measurement{worst, 1e-12, std::to_string(10 * samples) + " random p"};
  });

  for (int k : {1, 2, 3})
    add("codifferential_formula_grade" + std::to_string(k) + "_exact", "qriemann", true, [k](Rng& rng, int samples) {
      long bad = 0, total = 0;
      for (Mask m = 0; m < 8; ++m) {
        if (grade_of(m) != k) continue;
        for (int e = 0; e < 4; ++e) {
          QMatrix unit(2);
          unit(e / 2, e % 2) = Q(1);
          const QForm mu = QForm::basis(m, unit);
          ++total;
          if (!(codifferential(mu) == codiff_formula(mu, k))) ++bad;
        }
      }
      for (int t = 0; t < samples; ++t) {
        const QForm mu = rng.rational_form(2, k);
        ++total;
        if (!(codifferential(mu) == codiff_formula(mu, k))) ++bad;
      }
      return exact(bad, total);
    });

  add("hodge_star_squared", "qriemann", true, [](Rng& rng, int samples) {
    double worst = max_over_grades(2, [&](int k) {
      double w = 0.0;
      for (int t = 0; t < samples / 4 + 1; ++t) {
        const CForm a = rng.form(2, k);
        w = std::max(w, max_coeff_diff(hodge(hodge(a)), a * Complex((k * (3 - k)) % 2 ? -1.0 : 1.0)));
      }
      return w;
    });
    return Measurement{worst, 1e-12, "⋆⋆ = (−1)^{k(d−k)} on every grade"};
  });

  add("hodge_defining_relation", "qriemann", true, [](Rng& rng, int samples) {
    const CForm vol = volume_form<Complex>(2);
    double worst = max_over_grades(2, [&](int k) {
      double w = 0.0;
      for (int t = 0; t < samples / 4 + 1; ++t) {
        const CForm a = rng.form(2, k), b = rng.form(2, k);
        w = std::max(w, max_coeff_diff(wedge(a, hodge(b)), metric(a, b, Side::Left) * vol));
      }
      return w;
    });
    return Measurement{worst, 1e-12, "μ̂ ∧ ⋆μ = ⟨μ̂, μ⟩ dvol"};
  });

  add("hodge_module_rules", "qriemann", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const CForm mu = rng.form(2, t % 4);
      const CMatrix p = rng.matrix(2);
      worst = std::max(worst, max_coeff_diff(hodge_inverse(p * mu), hodge_inverse(mu) * p.adjoint()));
      worst = std::max(worst, max_coeff_diff(hodge_inverse(mu * p), p.adjoint() * hodge_inverse(mu)));
      worst = std::max(worst, max_coeff_diff(hodge(p.adjoint() * mu), hodge(mu) * p));
      worst = std::max(worst, max_coeff_diff(hodge(mu * p), p.adjoint() * hodge(mu)));
    }
    const CMatrix id = CMatrix::identity(2);
    worst = std::max(worst, max_coeff_diff(hodge(CForm::scalar(id)), volume_form<Complex>(2)));
    worst = std::max(worst, max_coeff_diff(hodge(volume_form<Complex>(2)), CForm::scalar(id)));
    return Measurement{worst, 1e-12, "module rules, ⋆1 = dvol, ⋆dvol = 1"};
  });

  add("hodge_inner_integral_formula", "qriemann", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const int k = t % 4;
      const CForm a = rng.form(2, k), b = rng.form(2, k);
      worst = std::max(worst, std::abs(hodge_inner(a, b, Side::Left) - integral(wedge(a, hodge(b)))));
    }
    return Measurement{worst, 1e-12, "⟨μ̂|μ⟩ = ∫ μ̂ ∧ ⋆μ"};
  });

  add("right_hodge_is_conjugated_left", "qriemann", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const CForm a = rng.form(2, t % 4);
      worst = std::max(worst, max_coeff_diff(hodge(a, Side::Right), star(hodge(star(a), Side::Left))));
    }
    return Measurement{worst, 1e-12, "⋆_R = ∗⋆_L∗"};
  });

  add("codifferential_adjoint_left", "qriemann", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const int k = t % 3;
      const CForm a = rng.form(2, k), b = rng.form(2, k + 1);
      worst = std::max(worst, std::abs(hodge_inner(differential(a), b, Side::Left) - hodge_inner(a, codifferential(b), Side::Left)));
    }
    return Measurement{worst, 1e-10, "⟨dμ̂|μ⟩ = ⟨μ̂|d^⋆μ⟩"};
  });

  add("codifferential_adjoint_right", "qriemann", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const int k = t % 3;
      const CForm a = rng.form(2, k), b = rng.form(2, k + 1);
      worst = std::max(worst, std::abs(hodge_inner(differential(a), b, Side::Right) -
                                       hodge_inner(a, codifferential(b, Side::Right), Side::Right)));
    }
    return Measurement{worst, 1e-10, "right Hodge product"};
  });

  add("codifferential_squares_to_zero", "qriemann", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) worst = std::max(worst, frobenius(codifferential(codifferential(rng.form(2, 1 + t % 3)))));
    return Measurement{worst, 1e-12, "d^⋆ ∘ d^⋆ = 0"};
  });

  add("codifferential_product_rules", "qriemann", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const int k = t % 3;  // μ ∈ Ω^{k+1}
      const CForm mu = rng.form(2, k + 1);
      const CMatrix p = rng.matrix(2);
      const CForm dp = differential(CForm::scalar(p));
      const CForm dps = differential(CForm::scalar(p.adjoint()));
      const CForm lhs1 = codifferential(p.adjoint() * mu);
      const CForm rhs1 = p.adjoint() * codifferential(mu) - hodge_inverse(wedge(hodge(mu), dp));  // (−1)^n, n = 3
      const CForm lhs2 = codifferential(mu * p);
      const CForm rhs2 = codifferential(mu) * p + hodge_inverse(wedge(dps, hodge(mu))) * Complex(k % 2 ? 1.0 : -1.0);
      worst = std::max({worst, max_coeff_diff(lhs1, rhs1), max_coeff_diff(lhs2, rhs2)});
    }
    return Measurement{worst, 1e-12, "codifferential of p*μ and μp"};
  });

  add("stokes_exact", "qriemann", true, [](Rng& rng, int) {
    long bad = 0, total = 0;
    for (Mask m = 0; m < 8; ++m) {
      if (grade_of(m) != 2) continue;
      for (int t = 0; t < 8; ++t) {
        ++total;
        if (!ScalarTraits<Q>::is_zero(integral(differential(QForm::basis(m, rng.rational_matrix(2)))))) ++bad;
      }
    }
    return exact(bad, total);
  });

  add("integral_is_state_exact", "qriemann", true, [](Rng& rng, int samples) {
    long bad = 0;
    for (int t = 0; t < samples; ++t) {
      const QMatrix p = rng.rational_matrix(2);
      if (!(integral(p * volume_form<Q>(2)) == state(p))) ++bad;
    }
    return exact(bad, samples);
  });

  add("spectrum_grade0_N2", "qriemann", true, [](Rng&, int) {
    const Spectrum sp = spectrum(2, 0);
    const std::vector<double> want{0.0, 2.0, 2.0, 2.0};
    double worst = sp.eigenvalues.size() == want.size() ? 0.0 : 1.0;
    for (std::size_t k = 0; k < std::min(want.size(), sp.eigenvalues.size()); ++k)
      worst = std::max(worst, std::abs(sp.eigenvalues[k] - want[k]));
    return Measurement{worst, 1e-10, "{0, 2, 2, 2}"};
  });

  add("spectrum_hermitian_all_grades", "qriemann", true, [](Rng&, int) {
    double worst = 0.0;
    for (Side side : {Side::Left, Side::Right})
      for (int k = 0; k <= 3; ++k) worst = std::max(worst, spectrum(2, k, side).hermiticity_error);
    return Measurement{worst, 1e-12, "Gram matrices of Δ, both sides"};
  });

  add("spectrum_nonnegative_all_grades", "qriemann", true, [](Rng&, int) {
    double lowest = 0.0;
    for (int k = 0; k <= 3; ++k) lowest = std::min(lowest, spectrum(2, k).min_eigenvalue);
    return Measurement{-lowest, 1e-9, "min eigenvalue " + fmt(lowest)};
  });

  add("laplacian_symmetric", "qriemann", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const int k = t % 4;
      const CForm a = rng.form(2, k), b = rng.form(2, k);
      worst = std::max(worst, std::abs(hodge_inner(laplacian(a), b, Side::Left) - hodge_inner(a, laplacian(b), Side::Left)));
    }
    return Measurement{worst, 1e-10, "⟨Δa|b⟩ = ⟨a|Δb⟩"};
  });

  // ---- qbundle
  for (Side side : {Side::Left, Side::Right})
    add(std::string("cov_codifferential_adjoint_") + (side == Side::Left ? "left" : "right"), "qbundle", true,
        [side](Rng& rng, int samples) {
          double worst = 0.0;
          for (int n : {-2, -1, 1, 2})
            for (int t = 0; t < samples / 4 + 1; ++t) {
              const int k = t % 3;
              const GaugeConnection<Complex> c{rng.form(2, 1)};
              const QvbForm<Complex> psi{n, side, rng.form(2, k)};
              const QvbForm<Complex> chi{n, side, rng.form(2, k + 1)};
              worst = std::max(worst, std::abs(qvb_inner(exterior_cov_derivative(c, psi), chi) -
                                               qvb_inner(psi, cov_codifferential(c, chi))));
            }
          return Measurement{worst, 1e-10, "charges ±1, ±2, non-real connections"};
        });

  add("cov_formula_matches_adjoint_for_real_connections", "qbundle", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const CForm a = rng.form(2, 1);
      const GaugeConnection<Complex> c = real_decomposition(GaugeConnection<Complex>{a}).first;
      const Side side = t % 2 ? Side::Left : Side::Right;
      const QvbForm<Complex> chi{1 + t % 2, side, rng.form(2, 1 + t % 3)};
      worst = std::max(worst, max_coeff_diff(cov_codifferential(c, chi).form, cov_codifferential_formula(c, chi).form));
    }
    return Measurement{worst, 1e-10, "A* = −A"};
  });

  add("real_decomposition", "qbundle", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const GaugeConnection<Complex> c{rng.form(2, 1)};
      const auto [re, im] = real_decomposition(c);
      worst = std::max(worst, max_coeff_diff(re.A + im.A * Complex(0.0, 1.0), c.A));
      if (!is_real(re) || !is_real(im)) worst = std::max(worst, 1.0);
    }
    return Measurement{worst, 1e-12, "A = A_re + i A_im with both parts real"};
  });

  add("regularity_predicate", "qbundle", true, [](Rng& rng, int) {
    long bad = 0;
    CForm reg(2);
    for (int j = 0; j < 3; ++j) reg.set(Mask{1} << j, CMatrix::identity(2) * rng.complex_normal());
    if (!is_regular(GaugeConnection<Complex>{reg})) ++bad;
    if (is_regular(GaugeConnection<Complex>{sum_generators_form(2)})) ++bad;
    return exact(bad, 2);
  });

  add("displacement_operator", "qbundle", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const GaugeConnection<Complex> c{rng.form(2, 1)};
      const ConnectionDisplacement<Complex> l{rng.form(2, 1)};
      const QvbForm<Complex> psi{(t % 2 ? 1 : -2), t % 3 ? Side::Left : Side::Right, rng.form(2, t % 3)};
      const CForm diff = exterior_cov_derivative(c + l, psi).form - exterior_cov_derivative(c, psi).form;
      worst = std::max(worst, max_coeff_diff(diff, displacement_K(l, psi).form));
    }
    return Measurement{worst, 1e-12, "D^{ω+λ} − D^ω = K^λ"};
  });

  add("qvb_inner_positive", "qbundle", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const QvbForm<Complex> psi{1 + t % 2, t % 2 ? Side::Left : Side::Right, rng.form(2, t % 4)};
      const Complex v = qvb_inner(psi, psi);
      worst = std::max({worst, std::abs(v.imag()), std::max(0.0, -v.real())});
    }
    return Measurement{worst, 1e-12, "⟨ψ|ψ⟩ real and ≥ 0"};
  });

  add("cov_laplacian_nonnegative", "qbundle", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const GaugeConnection<Complex> c{rng.form(2, 1)};
      const QvbForm<Complex> psi{t % 2 ? 1 : -1, t % 3 ? Side::Left : Side::Right, rng.form(2, t % 4)};
      const Complex v = qvb_inner(cov_laplacian(c, psi), psi);
      worst = std::max({worst, std::abs(v.imag()) / std::max(1.0, std::abs(v)), std::max(0.0, -v.real())});
    }
    return Measurement{worst, 1e-10, "⟨□ψ|ψ⟩ ≥ 0"};
  });

  // ---- fields
  add("ym_action_vanishes_when_flat", "fields", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t)
      worst = std::max(worst, std::abs(ym_action(GaugeConnection<Complex>{differential(CForm::scalar(rng.matrix(2)))})));
    return Measurement{worst, 1e-12, "A = dp"};
  });

  add("ym_action_real_nonpositive", "fields", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const Complex v = ym_action(GaugeConnection<Complex>{rng.form(2, 1)});
      worst = std::max({worst, std::abs(v.imag()), std::max(0.0, v.real())});
    }
    return Measurement{worst, 1e-12, "Im S_YM and max(S_YM, 0)"};
  });

  add("ym_action_h1S2", "fields", true, [](Rng&, int) {
    auto c = CCalc::get(2);
    const GaugeConnection<Complex> g{CForm::basis("1", c->generator(2))};
    const CForm f = curvature(g);
    const Complex v = ym_action(g);
    const Complex want = -0.5 * hodge_inner(f, f, Side::Left);
    const double err = rel(v, want);
    return Measurement{v.real() < 0 ? err : 1.0, 1e-12, "S_YM = " + fmt(v.real())};
  });

  add("ym_residual_iff_flat", "fields", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
      const GaugeConnection<Complex> flat{differential(CForm::scalar(rng.matrix(2)))};
      worst = std::max(worst, frobenius(ym_residual(flat).left));
      const GaugeConnection<Complex> bent{rng.form(2, 1)};
      const double r = frobenius(ym_residual(bent).left), f = frobenius(curvature(bent));
      if (f > 1e-6 && r < 1e-6) worst = 1.0;
    }
    return Measurement{worst, 1e-12, "flat ⟹ 0, curved ⟹ nonzero"};
  });

  add("ym_gradient_matches_fd", "fields", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    const CConfig cfg = CConfig::make(rng.form(2, 1), 0, CMatrix(2), CMatrix(2), {});
    for (int t = 0; t < std::max(20, samples / 5); ++t) {
      const FieldDirection dir{rng.form(2, 1), CMatrix(2), CMatrix(2)};
      worst = std::max(worst, rel(predicted_derivative(cfg, dir, ActionKind::YM), action_gradient_fd(cfg, dir, 1e-6, ActionKind::YM)));
    }
    return Measurement{worst, 1e-5, "relative"};
  });

  add("eigenvector_sum_generators", "fields", true, [](Rng&, int) {
    const CForm a = sum_generators_form(2);
    const CForm l = codifferential(differential(a));
    const Complex mu = hodge_inner(l, a, Side::Left) / hodge_inner(a, a, Side::Left);
    const double perp = frobenius(l - a * mu);
    return Measurement{std::max(perp, std::abs(mu.imag())), 1e-10, "μ = " + fmt(mu.real())};
  });

  add("sm_constant_potential_identity_exact", "fields", true, [](Rng& rng, int samples) {
    long bad = 0;
    for (int t = 0; t < samples; ++t) {
      const QMatrix p1 = QMatrix::identity(2) * rng.rational_matrix(2)(0, 0);
      const QMatrix p2 = QMatrix::identity(2) * rng.rational_matrix(2)(1, 1);
      const auto r = sm_residuals<Q>({p1}, {p2}, PolynomialPotential{{1.5}});
      if (!r.left[0].is_zero() || !r.right[0].is_zero()) ++bad;
    }
    return exact(bad, samples);
  });

  add("sm_S1_with_matched_potential", "fields", true, [](Rng&, int) {
    auto c = CCalc::get(2);
    const auto r = sm_residuals<Complex>({c->generator(1)}, {c->generator(1)}, PolynomialPotential{{0.0, 2.0}});
    return Measurement{std::max(norm(r.left[0]), norm(r.right[0])), 1e-12, "V(q) = 2q, V′(¼Id) = 2Id"};
  });

  add("sm_S1_with_half_identity_derivative", "fields", false, [](Rng&, int) {
    auto c = CCalc::get(2);
    const auto r = sm_residuals<Complex>({c->generator(1)}, {c->generator(1)}, PolynomialPotential{{0.0, 0.5}});
    const double v = std::max(norm(r.left[0]), norm(r.right[0]));
    return Measurement{v, 1e-12, "V′ = ½Id leaves residual " + fmt(v) + " (inconsistent with d^⋆dS₁ = 2S₁)"};
  });

  add("triplet1_connection_equation", "fields", true, [](Rng&, int) {
    return Measurement{frobenius(ymsm_connection_residual(triplet1())), 1e-10, "trivial connection, sum of generators"};
  });

  add("triplet1_section_equations", "fields", true, [](Rng&, int) {
    const auto r = ymsm_section_residuals(triplet1());
    return Measurement{std::max(norm(r.left), norm(r.right)), 1e-10, "V(q) = 2q"};
  });

  add("triplet2_connection_equation", "fields", true, [](Rng&, int) {
    return Measurement{frobenius(ymsm_connection_residual(triplet2())), 1e-10, "A = Σ h^j S_j, p₁ = √3 Id, p₂ = Id"};
  });

  add("triplet2_section_residual_matches_fd", "fields", true, [](Rng& rng, int samples) {
    const CConfig cfg = triplet2();
    double worst = 0.0;
    for (int t = 0; t < std::max(10, samples / 10); ++t) {
      const FieldDirection d1{CForm(2), rng.matrix(2), CMatrix(2)};
      const FieldDirection d2{CForm(2), CMatrix(2), rng.matrix(2)};
      worst = std::max(worst, rel(predicted_derivative(cfg, d1), action_gradient_fd(cfg, d1)));
      worst = std::max(worst, rel(predicted_derivative(cfg, d2), action_gradient_fd(cfg, d2)));
    }
    const auto r = ymsm_section_residuals(cfg);
    return Measurement{worst, 1e-5, "section residual norms " + fmt(norm(r.left)) + ", " + fmt(norm(r.right))};
  });

  add("triplet2_section_equations_vanish", "fields", false, [](Rng&, int) {
    const auto r = ymsm_section_residuals(triplet2());
    const double v = std::max(norm(r.left), norm(r.right));
    const auto f = ymsm_section_residuals_formula(triplet2());
    return Measurement{v, 1e-10,
                       "adjoint residual " + fmt(v) + "; literal codifferential formula gives " +
                           fmt(std::max(norm(f.left), norm(f.right)))};
  });

  add("section_expansion_derived_sign", "fields", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples / 4 + 1; ++t) {
      CConfig cfg = random_config(rng, 2, t % 2 ? 1 : -2);
      const auto e = section_laplacian_expansion(cfg, QuadraticSign::Derived);
      const auto& c = cfg.connection;
      const CMatrix l = cov_codifferential_formula(c, cov_derivative(c, cfg.left)).form.coeff(0);
      const CMatrix r = cov_codifferential_formula(c, cov_derivative(c, cfg.right)).form.coeff(0);
      worst = std::max({worst, norm(e.left - l), norm(e.right - r)});
    }
    return Measurement{worst, 1e-10, "four-term expansion with −n on the left quadratic term"};
  });

  add("section_expansion_symmetric_sign", "fields", false, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples / 4 + 1; ++t) {
      CConfig cfg = random_config(rng, 2, 1);
      const auto e = section_laplacian_expansion(cfg, QuadraticSign::Symmetric);
      const auto& c = cfg.connection;
      worst = std::max(worst, norm(e.left - cov_codifferential_formula(c, cov_derivative(c, cfg.left)).form.coeff(0)));
    }
    return Measurement{worst, 1e-10, "+n on the left quadratic term"};
  });

  struct Equation {
    const char* name;
    int which;
  };
  for (Equation eq : {Equation{"connection", 0}, Equation{"section_left", 1}, Equation{"section_right", 2}})
    add(std::string("variational_consistency_") + eq.name, "fields", true, [eq](Rng& rng, int samples) {
      double worst = 0.0;
      for (int t = 0; t < samples; ++t) {
        const int charges[] = {1, -1, 2, 0};
        const CConfig cfg = random_config(rng, 2, charges[t % 4]);
        const FieldDirection dir{eq.which == 0 ? rng.form(2, 1) : CForm(2), eq.which == 1 ? rng.matrix(2) : CMatrix(2),
                                 eq.which == 2 ? rng.matrix(2) : CMatrix(2)};
        worst = std::max(worst, rel(predicted_derivative(cfg, dir), action_gradient_fd(cfg, dir)));
      }
      return Measurement{worst, 1e-5, std::to_string(samples) + " random configurations, charges 0, ±1, 2"};
    });

  add("continuity_equation", "fields", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    auto one = [&](const GaugeConnection<Complex>& c) {
      const auto r = continuity_residual(c);
      worst = std::max({worst, frobenius(r.left), frobenius(r.right)});
    };
    one(GaugeConnection<Complex>{sum_generators_form(2)});
    for (int t = 0; t < samples; ++t) one(GaugeConnection<Complex>{rng.form(2, 1)});
    return Measurement{worst, 1e-10, "sum of generators and random connections"};
  });

  add("gauge_phase_invariance_exact", "fields", true, [](Rng& rng, int samples) {
    long bad = 0;
    // Rational points on the unit circle.
    const Q phases[] = {Q(mpq_class(3, 5), mpq_class(4, 5)), Q(mpq_class(-5, 13), mpq_class(12, 13)),
                        Q(mpq_class(8, 17), mpq_class(-15, 17))};
    for (int t = 0; t < samples / 4 + 1; ++t) {
      const QForm a = rng.rational_form(2, 1);
      const QMatrix q1 = rng.rational_matrix(2), q2 = rng.rational_matrix(2);
      const PolynomialPotential v{{0.5, -1.0, 0.25}};
      const QConfig base = QConfig::make(a, 1 + t % 2, q1, q2, v);
      const QConfig turned = QConfig::make(a, 1 + t % 2, q1 * phases[t % 3], q2 * phases[(t + 1) % 3], v);
      if (!(gsm_action(base) == gsm_action(turned)) || !(ymsm_action(base) == ymsm_action(turned))) ++bad;
      const QConfig b0 = QConfig::make(QForm(2), 0, q1, q2, v);
      const QConfig b1 = QConfig::make(QForm(2), 0, q1 * phases[t % 3], q2 * phases[(t + 2) % 3], v);
      if (!(sm_action<Q>({q1}, {q2}, v) == sm_action<Q>({b1.left.p}, {b1.right.p}, v)) || !(gsm_action(b0) == gsm_action(b1)))
        ++bad;
    }
    return exact(bad, samples / 4 + 1);
  });

  add("charge_zero_reduction", "fields", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples / 4 + 1; ++t) {
      const CConfig cfg = random_config(rng, 2, 0);
      const auto sm = sm_residuals<Complex>({cfg.left.p}, {cfg.right.p}, cfg.potential);
      const auto sec = ymsm_section_residuals(cfg);
      worst = std::max(worst, max_coeff_diff(ymsm_connection_residual(cfg), ym_residual(cfg.connection).left));
      worst = std::max(worst, norm(sec.left - sm.left[0]));
      worst = std::max(worst, norm(sec.right - sm.right[0].adjoint()));
    }
    return Measurement{worst, 0.0, "connection ↦ YM residual, sections ↦ SM residuals"};
  });

  add("potential_reconstruction", "fields", true, [](Rng& rng, int samples) {
    double worst = 0.0;
    for (int t = 0; t < samples / 4 + 1; ++t)
      worst = std::max(worst, reconstruct_potential(GaugeConnection<Complex>{differential(CForm::scalar(rng.matrix(2)))}).residual);
    return Measurement{worst, 1e-9, "A = dp recovered"};
  });

  add("solver_ym_flat", "fields", true, [](Rng& rng, int) {
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
      SolverOptions o;
      o.problem = Problem::YM;
      o.tolerance = 1e-12;
      const auto r = solve_stationary(CConfig::make(rng.form(2, 1), 0, CMatrix(2), CMatrix(2), {}), o);
      const double rec = reconstruct_potential(r.config.connection).residual;
      // Normalized: ‖dA‖ against 1e−8 and the reconstruction residual against 1e−9.
      worst = std::max({worst, r.report.converged ? r.report.curvature_norm / 1e-8 : 2.0, rec / 1e-9});
    }
    return Measurement{worst, 1.0, "max(‖dA‖/1e−8, reconstruction/1e−9), three initializations"};
  });

  add("solver_sm_constant_potential", "fields", true, [](Rng& rng, int) {
    SolverOptions o;
    o.problem = Problem::SM;
    const auto r = solve_stationary(CConfig::make(CForm(2), 0, rng.matrix(2), rng.matrix(2), PolynomialPotential{{1.0}}), o);
    auto traceless = [](const CMatrix& p) { return p - CMatrix::identity(2) * (p.trace() / 2.0); };
    const double off = std::max(norm(traceless(r.config.left.p)), norm(traceless(r.config.right.p)));
    return Measurement{r.report.converged ? std::max(r.report.residual_total, off) : 1.0, 1e-8, "distance to span{Id}"};
  });

  add("solver_ymsm_triplet1_basin", "fields", true, [](Rng& rng, int) {
    const CConfig t1 = triplet1();
    CConfig start = t1;
    start.connection.A = rng.form(2, 1, 0.05);
    start.left.p += rng.matrix(2, 0.05);
    start.right.p += rng.matrix(2, 0.05);
    SolverOptions o;
    o.problem = Problem::YMSM;
    o.step_rule = StepRule::GaussNewton;
    const auto r = solve_stationary(start, o);
    const double da = std::abs(r.report.total_action - ymsm_action(t1).real());
    const double v = r.report.converged ? std::max(r.report.residual_total / 1e-8, da / 1e-6) : 2.0;
    return Measurement{v, 1.0, "residual " + fmt(r.report.residual_total) + ", action gap " + fmt(da)};
  });

  return s;
}

}  // namespace

VerifySummary run_verify(const VerifyOptions& options) {
  if (options.samples < 1) throw DomainError("samples must be positive");
  const std::vector<CheckSpec> suite = build_suite();
  std::vector<CheckResult> results(suite.size());

  auto run_one = [&](std::size_t i) {
    const CheckSpec& spec = suite[i];
    CheckResult r;
    r.name = spec.name;
    r.module = spec.module;
    r.mandatory = spec.mandatory;
    // Each check owns a stream derived from the seed and its position.
    Rng rng(options.seed * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL * (i + 1));
    try {
      const Measurement m = spec.run(rng, options.samples);
      r.value = m.value;
      r.threshold = m.threshold;
      r.detail = m.detail;
      const bool pass = std::isfinite(m.value) && m.value <= m.threshold;
      r.status = pass ? CheckStatus::Pass
                      : (!spec.mandatory && options.convention_checks_as_warnings ? CheckStatus::Warn : CheckStatus::Fail);
    } catch (const std::exception& e) {
      r.status = CheckStatus::Fail;
      r.value = std::numeric_limits<double>::infinity();
      r.detail = std::string("exception: ") + e.what();
    }
    results[i] = std::move(r);
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(suite.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  for (unsigned t = 0; t < threads; ++t)
    workers.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < suite.size();) run_one(i);
    }));
  for (auto& w : workers) w.get();

  VerifySummary out;
  out.seed = options.seed;
  out.ledger_id = ConventionLedger::standard().id();
  out.checks = std::move(results);
  return out;
}

json to_json(const VerifySummary& s) {
  json checks = json::array();
  for (const auto& c : s.checks)
    checks.push_back({{"name", c.name},
                      {"module", c.module},
                      {"mandatory", c.mandatory},
                      {"status", to_string(c.status)},
                      {"value", std::isfinite(c.value) ? json(c.value) : json(nullptr)},
                      {"threshold", c.threshold},
                      {"detail", c.detail}});
  return {{"mode", "verify"},
          {"ledger_id", s.ledger_id},
          {"seed", s.seed},
          {"summary",
           {{"total", s.checks.size()},
            {"passed", s.count(CheckStatus::Pass)},
            {"warned", s.count(CheckStatus::Warn)},
            {"failed", s.count(CheckStatus::Fail)},
            {"ok", s.ok()}}},
          {"checks", checks}};
}

}  // namespace ncym
