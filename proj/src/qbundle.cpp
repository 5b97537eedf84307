#include "ncym/qbundle.hpp"

namespace ncym {

namespace {

template <class S>
void require_grade1(const DiffForm<S>& a, const char* what) {
  if (!a.is_homogeneous(1)) throw GradeError(std::string(what) + " must be a pure one-form");
}

template <class S>
void require_same_size(const GaugeConnection<S>& c, const DiffForm<S>& f) {
  if (c.algebra_size() != f.algebra_size()) throw DimensionError("connection and form live over different algebra sizes");
}

template <class S>
S charge_scalar(int n) {
  return S(static_cast<long>(n));
}

/// ψ ↦ Σ_J over I∪{a}=J of sign(I,a)·ψ_J A_a*: adjoint of μ ↦ μ∧A for the left Hodge pairing.
template <class S>
DiffForm<S> right_wedge_adjoint(const DiffForm<S>& psi, const DiffForm<S>& a) {
  DiffForm<S> r(psi.algebra_size());
  for (const auto& [j, pj] : psi.components()) {
    if (pj.is_zero()) continue;
    for (const auto& [ma, pa] : a.components()) {
      if ((j & ma) != ma || grade_of(ma) != 1) continue;
      const Mask i = j & ~ma;
      const int s = wedge_sign(i, ma);
      Matrix<S> t = pj * pa.adjoint();
      if (s < 0) t = -t;
      r.add(i, t);
    }
  }
  return r;
}

template <class S>
QvbForm<S> conjugate(const QvbForm<S>& psi) {
  Side other = psi.side == Side::Left ? Side::Right : Side::Left;
  return {-psi.charge, other, star(psi.form)};
}

template <class S>
DiffForm<S> left_ext(const DiffForm<S>& a, int n, const DiffForm<S>& psi) {
  DiffForm<S> r = differential(psi);
  if (n == 0) return r;
  for (int k = 0; k <= psi.dimension(); ++k) {
    const DiffForm<S> part = psi.grade_part(k);
    if (part.components().empty()) continue;
    DiffForm<S> t = wedge(part, a) * charge_scalar<S>(n);
    if (k % 2 == 0)
      r -= t;
    else
      r += t;
  }
  return r;
}

template <class S>
DiffForm<S> left_adjoint(const DiffForm<S>& a, int n, const DiffForm<S>& psi) {
  DiffForm<S> r = codifferential(psi, Side::Left);
  if (n == 0) return r;
  for (int g = 1; g <= psi.dimension(); ++g) {
    const DiffForm<S> part = psi.grade_part(g);
    if (part.components().empty()) continue;
    const int k = g - 1;
    DiffForm<S> t = right_wedge_adjoint(part, a) * charge_scalar<S>(n);
    if (k % 2 == 0)
      r -= t;
    else
      r += t;
  }
  return r;
}

}  // namespace

template <class S>
Matrix<S> section_pairing(const ChargedSection<S>& a, const ChargedSection<S>& b) {
  if (a.side != b.side || a.charge != b.charge) throw DomainError("sections differ in side or charge");
  if (a.side == Side::Left) return a.p * b.p.adjoint();
  return a.p.adjoint() * b.p;
}

template <class S>
DiffForm<S> curvature(const GaugeConnection<S>& c) {
  return differential(c.A);
}

bool is_regular(const GaugeConnection<Complex>& c, double tol) {
  for (const auto& [m, p] : c.A.components()) {
    const int n = p.size();
    const Complex lam = p.trace() / static_cast<double>(n);
    if (norm(p - CMatrix::scalar(n, lam)) > tol) return false;
  }
  return true;
}

bool is_regular(const GaugeConnection<GaussianRational>& c) {
  for (const auto& [m, p] : c.A.components()) {
    const int n = p.size();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i != j && !is_zero(p(i, j))) return false;
        if (p(i, i) != p(0, 0)) return false;
      }
  }
  return true;
}

bool is_real(const GaugeConnection<Complex>& c, double tol) {
  return max_coeff_diff(star(c.A), -c.A) <= tol;
}

bool is_real(const GaugeConnection<GaussianRational>& c) { return star(c.A) == -c.A; }

template <class S>
GaugeConnection<S> dual(const GaugeConnection<S>& c) {
  return {-star(c.A)};
}

template <class S>
std::pair<GaugeConnection<S>, GaugeConnection<S>> real_decomposition(const GaugeConnection<S>& c) {
  const S half = ScalarTraits<S>::ratio(1, 2);
  const S i = ScalarTraits<S>::unit_i();
  const DiffForm<S> as = star(c.A);
  GaugeConnection<S> re{(c.A - as) * half};
  // (A + A*) / (2i) = −i (A + A*) / 2
  GaugeConnection<S> im{(c.A + as) * (-i * half)};
  return {re, im};
}

template <class S>
QvbForm<S> upsilon(const std::vector<std::pair<DiffForm<S>, ChargedSection<S>>>& terms) {
  if (terms.empty()) throw DomainError("upsilon needs at least one term");
  QvbForm<S> out{terms.front().second.charge, terms.front().second.side, DiffForm<S>(terms.front().first.algebra_size())};
  for (const auto& [mu, t] : terms) {
    if (t.charge != out.charge || t.side != out.side) throw DomainError("upsilon terms differ in side or charge");
    out.form += (t.side == Side::Left) ? mu * t.p : t.p * mu;
  }
  return out;
}

template <class S>
std::vector<std::pair<DiffForm<S>, ChargedSection<S>>> upsilon_inverse(const QvbForm<S>& psi) {
  std::vector<std::pair<DiffForm<S>, ChargedSection<S>>> out;
  const int n = psi.form.algebra_size();
  for (const auto& [m, p] : psi.form.components())
    out.push_back({DiffForm<S>::basis(m, Matrix<S>::identity(n)), ChargedSection<S>{psi.charge, psi.side, p}});
  return out;
}

template <class S>
QvbForm<S> exterior_cov_derivative(const GaugeConnection<S>& c, const QvbForm<S>& psi) {
  require_grade1(c.A, "gauge potential");
  require_same_size(c, psi.form);
  if (psi.side == Side::Right) return conjugate(exterior_cov_derivative(c, conjugate(psi)));
  return {psi.charge, psi.side, left_ext(c.A, psi.charge, psi.form)};
}

template <class S>
QvbForm<S> cov_derivative(const GaugeConnection<S>& c, const ChargedSection<S>& t) {
  return exterior_cov_derivative(c, QvbForm<S>{t.charge, t.side, DiffForm<S>::scalar(t.p)});
}

template <class S>
QvbForm<S> cov_codifferential(const GaugeConnection<S>& c, const QvbForm<S>& psi) {
  require_grade1(c.A, "gauge potential");
  require_same_size(c, psi.form);
  // ⟨a|b⟩_R = ⟨a*|b*⟩_L, so the right adjoint is the conjugated left one.
  if (psi.side == Side::Right) return conjugate(cov_codifferential(c, conjugate(psi)));
  return {psi.charge, psi.side, left_adjoint(c.A, psi.charge, psi.form)};
}

template <class S>
QvbForm<S> cov_codifferential_formula(const GaugeConnection<S>& c, const QvbForm<S>& psi) {
  require_grade1(c.A, "gauge potential");
  require_same_size(c, psi.form);
  const int n = psi.form.algebra_size();
  const Side side = psi.side;
  const S q = charge_scalar<S>(psi.charge);
  DiffForm<S> out(n);
  for (const auto& [mu, t] : upsilon_inverse(psi)) {
    const int g = grade_of(mu.components().begin()->first);
    if (g == 0) continue;
    const int k = g - 1;
    // ν = ∗⋆μ, of grade d − k − 1.
    const DiffForm<S> nu = star(hodge(mu, side));
    const int j = nu.dimension() - g;
    DiffForm<S> dt;  // form factor of ∇T
    DiffForm<S> term(n);
    if (side == Side::Left) {
      dt = differential(DiffForm<S>::scalar(t.p)) - t.p * c.A * q;
      // d^∇(ν ⊗ T) = dν ⊗ T + (−1)^j ν ∇T
      term += hodge_inverse(star(differential(nu)), side) * t.p;
      DiffForm<S> second = hodge_inverse(star(wedge(nu, dt)), side);
      term += (j % 2 == 0) ? second : -second;
    } else {
      dt = differential(DiffForm<S>::scalar(t.p)) + star(c.A) * t.p * q;
      // d^∇(T ⊗ ν) = ∇T ∧ ν + T ⊗ dν
      term += t.p * hodge_inverse(star(differential(nu)), side);
      term += hodge_inverse(star(wedge(dt, nu)), side);
    }
    out += ((k + 1) % 2 == 0) ? term : -term;
  }
  return {psi.charge, side, out};
}

template <class S>
S qvb_inner(const QvbForm<S>& a, const QvbForm<S>& b) {
  if (a.side != b.side || a.charge != b.charge) throw DomainError("qvb forms differ in side or charge");
  return hodge_inner(a.form, b.form, a.side);
}

template <class S>
QvbForm<S> displacement_K(const ConnectionDisplacement<S>& l, const QvbForm<S>& psi) {
  require_grade1(l.lambda, "displacement");
  if (psi.side == Side::Right) return conjugate(displacement_K(l, conjugate(psi)));
  DiffForm<S> r(psi.form.algebra_size());
  if (psi.charge == 0) return {psi.charge, psi.side, r};
  // −(−1)^k n ψ∧λ
  for (int k = 0; k <= psi.form.dimension(); ++k) {
    const DiffForm<S> part = psi.form.grade_part(k);
    if (part.components().empty()) continue;
    DiffForm<S> t = wedge(part, l.lambda) * charge_scalar<S>(psi.charge);
    if (k % 2 == 0)
      r -= t;
    else
      r += t;
  }
  return {psi.charge, psi.side, r};
}

template <class S>
QvbForm<S> displacement_K(const ConnectionDisplacement<S>& l, const ChargedSection<S>& t) {
  return displacement_K(l, QvbForm<S>{t.charge, t.side, DiffForm<S>::scalar(t.p)});
}

template <class S>
DiffForm<S> s_omega(const GaugeConnection<S>&, const DiffForm<S>& x) {
  return DiffForm<S>(x.algebra_size());
}

template <class S>
DiffForm<S> s_omega_adjoint(const GaugeConnection<S>&, const DiffForm<S>& x) {
  return DiffForm<S>(x.algebra_size());
}

template <class S>
QvbForm<S> cov_laplacian(const GaugeConnection<S>& c, const QvbForm<S>& psi) {
  QvbForm<S> a = exterior_cov_derivative(c, cov_codifferential(c, psi));
  QvbForm<S> b = cov_codifferential(c, exterior_cov_derivative(c, psi));
  return {psi.charge, psi.side, a.form + b.form};
}

#define NCYM_INSTANTIATE(S)                                                                                     \
  template Matrix<S> section_pairing(const ChargedSection<S>&, const ChargedSection<S>&);                       \
  template DiffForm<S> curvature(const GaugeConnection<S>&);                                                    \
  template GaugeConnection<S> dual(const GaugeConnection<S>&);                                                  \
  template std::pair<GaugeConnection<S>, GaugeConnection<S>> real_decomposition(const GaugeConnection<S>&);     \
  template QvbForm<S> upsilon(const std::vector<std::pair<DiffForm<S>, ChargedSection<S>>>&);                   \
  template std::vector<std::pair<DiffForm<S>, ChargedSection<S>>> upsilon_inverse(const QvbForm<S>&);           \
  template QvbForm<S> cov_derivative(const GaugeConnection<S>&, const ChargedSection<S>&);                      \
  template QvbForm<S> exterior_cov_derivative(const GaugeConnection<S>&, const QvbForm<S>&);                    \
  template QvbForm<S> cov_codifferential(const GaugeConnection<S>&, const QvbForm<S>&);                         \
  template QvbForm<S> cov_codifferential_formula(const GaugeConnection<S>&, const QvbForm<S>&);                 \
  template S qvb_inner(const QvbForm<S>&, const QvbForm<S>&);                                                   \
  template QvbForm<S> displacement_K(const ConnectionDisplacement<S>&, const QvbForm<S>&);                      \
  template QvbForm<S> displacement_K(const ConnectionDisplacement<S>&, const ChargedSection<S>&);               \
  template DiffForm<S> s_omega(const GaugeConnection<S>&, const DiffForm<S>&);                                  \
  template DiffForm<S> s_omega_adjoint(const GaugeConnection<S>&, const DiffForm<S>&);                          \
  template QvbForm<S> cov_laplacian(const GaugeConnection<S>&, const QvbForm<S>&);

NCYM_INSTANTIATE(Complex)
NCYM_INSTANTIATE(GaussianRational)
#undef NCYM_INSTANTIATE

}  // namespace ncym
