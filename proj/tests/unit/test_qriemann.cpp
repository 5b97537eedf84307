#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "ncym/fields.hpp"

using namespace ncym;
using Q = GaussianRational;

namespace {

CMatrix gen(int k) { return Calculus<Complex>::get(2)->generator(k); }

CForm dvol2() { return volume_form<Complex>(2); }

}  // namespace

TEST_CASE("metric examples") {
  Rng rng(11);
  const CMatrix p = rng.matrix(2), q = rng.matrix(2);
  CHECK(max_abs_diff(metric(CForm::basis("1", p), CForm::basis("1", q), Side::Left), p * q.adjoint()) < 1e-15);
  CHECK(metric(CForm::basis("1", p), CForm::basis("2", q), Side::Left).is_zero());
  CHECK(max_abs_diff(metric(dvol2() * p, dvol2() * q, Side::Left), p * q.adjoint()) < 1e-15);
  CHECK(max_abs_diff(metric(CForm::basis("1", p), CForm::basis("1", q), Side::Right), p.adjoint() * q) < 1e-15);
  CHECK(metric(CForm(2), CForm::basis("1", q), Side::Left).is_zero());
}

TEST_CASE("metric properties") {
  Rng rng(12);
  for (int s = 0; s < 100; ++s) {
    const int k = s % 4;
    const CForm a = rng.form(2, k), b = rng.form(2, k);
    const CMatrix p = rng.matrix(2);
    CHECK(max_abs_diff(metric(a * p, b, Side::Left), metric(a, b * p.adjoint(), Side::Left)) < 1e-12);
    CHECK(max_abs_diff(metric(a, b, Side::Right), metric(star(a), star(b), Side::Left)) < 1e-12);
    CHECK(state(metric(a, a, Side::Left)).real() > 0.0);
  }
}

TEST_CASE("integral examples") {
  CHECK(std::abs(integral(dvol2()) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(integral(dvol2() * gen(1))) < 1e-15);
  CHECK(std::abs(integral(differential(CForm::basis("12", gen(3))))) < 1e-15);
  CHECK_THROWS_AS(integral(CForm::basis("1", gen(1))), GradeError);
  CHECK(std::abs(integral(CForm(2))) == 0.0);
}

TEST_CASE("state is unital and positive") {
  Rng rng(13);
  for (int n = 2; n <= 4; ++n) {
    CHECK(std::abs(state(CMatrix::identity(n)) - Complex(1.0)) < 1e-15);
    for (int s = 0; s < 20; ++s) {
      const CMatrix p = rng.matrix(n);
      const Complex v = state(p * p.adjoint());
      CHECK(v.real() >= 0.0);
      CHECK(std::abs(v.imag()) < 1e-13);
    }
  }
}

TEST_CASE("boundarylessness: exact for N = 2, floating point for N = 3") {
  Rng rng(14);
  for (Mask m = 0; m < 8; ++m) {
    if (grade_of(m) != 2) continue;
    for (int s = 0; s < 5; ++s) CHECK(is_zero(integral(differential(QForm::basis(m, rng.rational_matrix(2))))));
  }
  for (Mask m = 0; m < (Mask{1} << 8); ++m) {
    if (grade_of(m) != 7) continue;
    for (int s = 0; s < 5; ++s) CHECK(std::abs(integral(differential(CForm::basis(m, rng.matrix(3))))) < 1e-13);
  }
  CHECK_THROWS_AS(Calculus<Q>::get(3), DomainError);
}

TEST_CASE("Hodge star examples") {
  Rng rng(15);
  const CMatrix p = rng.matrix(2);
  CHECK(hodge(CForm::scalar(CMatrix::identity(2))) == dvol2());
  CHECK(hodge(dvol2()) == CForm::scalar(CMatrix::identity(2)));
  CHECK(max_coeff_diff(hodge(CForm::basis("1", p)), CForm::basis("23", p.adjoint())) == 0.0);
  CHECK(max_coeff_diff(hodge(CForm::basis("13", p)), CForm::basis("2", -p.adjoint())) == 0.0);
  CHECK(max_coeff_diff(hodge(CForm::scalar(p)), dvol2() * p.adjoint()) == 0.0);
}

TEST_CASE("Hodge star identities for N = 2 and 3") {
  Rng rng(16);
  for (int n = 2; n <= 3; ++n) {
    const int d = n * n - 1;
    for (int s = 0; s < 40; ++s) {
      const int k = s % (d + 1);
      const CForm a = rng.form(n, k), b = rng.form(n, k);
      const CForm top = wedge(a, hodge(b));
      const CForm expect = volume_form<Complex>(n) * metric(a, b, Side::Left);
      CHECK(max_coeff_diff(top, expect) < 1e-12);
      const double sign = (k * (d - k)) % 2 == 0 ? 1.0 : -1.0;
      CHECK(max_coeff_diff(hodge(hodge(a)), a * Complex(sign)) < 1e-12);
      CHECK(max_coeff_diff(hodge_inverse(hodge(a)), a) < 1e-12);
      CHECK(max_coeff_diff(hodge(hodge_inverse(a)), a) < 1e-12);
      CHECK(max_coeff_diff(hodge(a, Side::Right), star(hodge(star(a)))) < 1e-12);
    }
  }
}

TEST_CASE("hodge inner product examples") {
  const CForm id = CForm::scalar(CMatrix::identity(2));
  CHECK(std::abs(hodge_inner(id, id, Side::Left) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(hodge_inner(CForm::basis("1", gen(1)), CForm::basis("1", gen(1)), Side::Left) - Complex(0.25)) < 1e-15);
  CHECK(std::abs(hodge_inner(id, CForm::basis("1", gen(2)), Side::Left)) == 0.0);
}

TEST_CASE("hodge inner product is sesquilinear and positive") {
  Rng rng(17);
  for (int s = 0; s < 200; ++s) {
    const CForm a = rng.form(2, s % 4) + rng.form(2, (s + 1) % 4);
    const CForm b = rng.form(2, s % 4);
    const Complex c = rng.complex_normal();
    for (Side side : {Side::Left, Side::Right}) {
      CHECK(hodge_inner(a, a, side).real() > 0.0);
      CHECK(std::abs(hodge_inner(a, a, side).imag()) < 1e-12);
      CHECK(std::abs(hodge_inner(a, b, side) - std::conj(hodge_inner(b, a, side))) < 1e-12);
    }
    CHECK(std::abs(hodge_inner(a * c, b, Side::Left) - c * hodge_inner(a, b, Side::Left)) < 1e-12);
  }
}

TEST_CASE("codifferential examples") {
  Rng rng(18);
  const CMatrix p = rng.matrix(2);
  auto c = Calculus<Complex>::get(2);
  CHECK(max_coeff_diff(codifferential(CForm::basis("1", p)), CForm::scalar(-c->derive(1, p))) < 1e-15);
  CHECK(codifferential(CForm::scalar(p)).is_zero());
}

TEST_CASE("codifferential squares to zero exactly") {
  Rng rng(19);
  for (int k = 0; k <= 3; ++k)
    for (int s = 0; s < 40; ++s) {
      const QForm a = rng.rational_form(2, k);
      CHECK(codifferential(codifferential(a)).is_zero());
      CHECK(codifferential(codifferential(a, Side::Right), Side::Right).is_zero());
    }
}

TEST_CASE("codifferential is the adjoint of d on both sides") {
  Rng rng(20);
  for (int n = 2; n <= 3; ++n)
    for (int k = 0; k < n * n - 1; ++k)
      for (int s = 0; s < (n == 2 ? 300 : 5); ++s) {
        const CForm a = rng.form(n, k), b = rng.form(n, k + 1);
        for (Side side : {Side::Left, Side::Right}) {
          const Complex lhs = hodge_inner(differential(a), b, side);
          const Complex rhs = hodge_inner(a, codifferential(b, side), side);
          CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
        }
      }
}

TEST_CASE("codifferential module identities with a unit ε") {
  // d^⋆(p*μ) = p* d^⋆μ + (−1)^N ⋆⁻¹((⋆μ) dp) and d^⋆(μp) = (d^⋆μ)p + (−1)^{k+1} ⋆⁻¹(dp* (⋆μ)), μ of grade k+1.
  Rng rng(21);
  for (int k = 0; k <= 2; ++k)
    for (int s = 0; s < 50; ++s) {
      const QForm mu = rng.rational_form(2, k + 1);
      const QMatrix p = rng.rational_matrix(2);
      const QForm dp = differential(QForm::scalar(p));
      const QForm dps = differential(QForm::scalar(p.adjoint()));
      const QForm lhs1 = codifferential(p.adjoint() * mu);
      const QForm rhs1 = p.adjoint() * codifferential(mu) + hodge_inverse(wedge(hodge(mu), dp)) * Q(-1);
      CHECK(lhs1 == rhs1);
      const QForm lhs2 = codifferential(mu * p);
      const QForm rhs2 = codifferential(mu) * p + hodge_inverse(wedge(dps, hodge(mu))) * Q(k % 2 == 0 ? -1 : 1);
      CHECK(lhs2 == rhs2);
    }
}

TEST_CASE("Laplacian examples") {
  CHECK(laplacian(CForm::scalar(CMatrix::identity(2))).is_zero());
  CHECK(max_coeff_diff(laplacian(CForm::scalar(gen(1))), CForm::scalar(gen(1) * Complex(2.0))) < 1e-15);
  Rng rng(22);
  for (int s = 0; s < 100; ++s) {
    const CMatrix p = rng.matrix(2);
    CMatrix expect(2);
    expect(0, 0) = p(0, 0) - p(1, 1);
    expect(0, 1) = 2.0 * p(0, 1);
    expect(1, 0) = 2.0 * p(1, 0);
    expect(1, 1) = p(1, 1) - p(0, 0);
    CHECK(max_abs_diff(laplacian(CForm::scalar(p)).coeff(0), expect) < 1e-13);
  }
}

TEST_CASE("spectra") {
  const Spectrum s0 = spectrum(2, 0);
  REQUIRE(s0.eigenvalues.size() == 4);
  const std::vector<double> expect{0, 2, 2, 2};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(s0.eigenvalues[i] - expect[i]) < 1e-10);
  const Spectrum s3 = spectrum(2, 3);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(s3.eigenvalues[i] - expect[i]) < 1e-10);
  const Spectrum s1 = spectrum(2, 1);
  CHECK(std::any_of(s1.eigenvalues.begin(), s1.eigenvalues.end(), [](double x) { return std::abs(x - 1.0) < 1e-10; }));
  for (int k = 0; k <= 3; ++k)
    for (Side side : {Side::Left, Side::Right}) {
      const Spectrum s = spectrum(2, k, side);
      CHECK(s.hermiticity_error <= 1e-12);
      CHECK(s.min_eigenvalue >= -1e-9);
      CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    }
  CHECK_THROWS_AS(spectrum(3, 4, Side::Left, 100), DomainError);
}

TEST_CASE("spectrum CSV format") {
  const std::string csv = spectrum_csv({spectrum(2, 0)});
  CHECK(csv.rfind("grade,index,eigenvalue\n", 0) == 0);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<double> ev;
  while (std::getline(in, line)) {
    CHECK(line.rfind("0,", 0) == 0);
    ev.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  }
  REQUIRE(ev.size() == 4);
  CHECK(std::abs(ev[0]) < 1e-10);
  CHECK(std::abs(ev[3] - 2.0) < 1e-10);
}
