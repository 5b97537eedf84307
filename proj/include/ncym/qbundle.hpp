#pragma once

#include <utility>
#include <vector>

#include "ncym/matforms.hpp"
#include "ncym/qriemann.hpp"

namespace ncym {

/// Connection on the trivial U(1) bundle, given by its gauge potential A = A(ς) ∈ Ω¹.
template <class S>
struct GaugeConnection {
  DiffForm<S> A;

  static GaugeConnection trivial(int n) { return {DiffForm<S>(n)}; }
  int algebra_size() const { return A.algebra_size(); }
};

/// Direction in the affine space of connections: λ(ς) ∈ Ω¹.
template <class S>
struct ConnectionDisplacement {
  DiffForm<S> lambda;
};

template <class S>
GaugeConnection<S> operator+(const GaugeConnection<S>& c, const ConnectionDisplacement<S>& l) {
  return {c.A + l.lambda};
}

/// Charge-n section: left T = p·Tⁿ, right T = Tⁿ·p.
template <class S>
struct ChargedSection {
  int charge = 0;
  Side side = Side::Left;
  Matrix<S> p;
};

/// Section-valued form after the Υ identification μ ⊗ T ↦ μ·p (left) or T ⊗ μ ↦ p·μ (right).
template <class S>
struct QvbForm {
  int charge = 0;
  Side side = Side::Left;
  DiffForm<S> form;
};

/// ⟨T₁,T₂⟩_L = p₁p₂*, ⟨T₁,T₂⟩_R = p₁*p₂.
template <class S>
Matrix<S> section_pairing(const ChargedSection<S>& a, const ChargedSection<S>& b);

/// F = dA.
template <class S>
DiffForm<S> curvature(const GaugeConnection<S>& c);

/// Every coefficient of A is a multiple of the identity.
bool is_regular(const GaugeConnection<Complex>& c, double tol = 1e-12);
bool is_regular(const GaugeConnection<GaussianRational>& c);

/// ω̂ = ω, i.e. A* = −A (from ς* = −ς).
bool is_real(const GaugeConnection<Complex>& c, double tol = 1e-12);
bool is_real(const GaugeConnection<GaussianRational>& c);

/// Potential of ω̂: Â = −A*.
template <class S>
GaugeConnection<S> dual(const GaugeConnection<S>& c);

/// Real parts of A = A_re + i A_im with A_re, A_im both real.
template <class S>
std::pair<GaugeConnection<S>, GaugeConnection<S>> real_decomposition(const GaugeConnection<S>& c);

template <class S>
QvbForm<S> upsilon(const std::vector<std::pair<DiffForm<S>, ChargedSection<S>>>& terms);
/// Canonical tensor decomposition Σ_I h^I ⊗ (p_I Tⁿ) (left) or Σ_I (Tⁿ p_I) ⊗ h^I (right).
template <class S>
std::vector<std::pair<DiffForm<S>, ChargedSection<S>>> upsilon_inverse(const QvbForm<S>& psi);

/// ∇T: left dp − n·p·A, right dp + n·A*·p.
template <class S>
QvbForm<S> cov_derivative(const GaugeConnection<S>& c, const ChargedSection<S>& t);

/// Left d^∇ψ = dψ − (−1)^k n ψ∧A; right d^∇ψ = dψ + n A*∧ψ.
template <class S>
QvbForm<S> exterior_cov_derivative(const GaugeConnection<S>& c, const QvbForm<S>& psi);

/// Adjoint of exterior_cov_derivative with respect to qvb_inner, for any connection.
template <class S>
QvbForm<S> cov_codifferential(const GaugeConnection<S>& c, const QvbForm<S>& psi);

/// (−1)^{k+1} (⋆⁻¹∘∗ ⊗ id) ∘ d^∇ ∘ (∗∘⋆ ⊗ id) evaluated on the canonical tensor decomposition.
/// Coincides with cov_codifferential for real connections only.
template <class S>
QvbForm<S> cov_codifferential_formula(const GaugeConnection<S>& c, const QvbForm<S>& psi);

template <class S>
S qvb_inner(const QvbForm<S>& a, const QvbForm<S>& b);

/// K^λ(ψ) = (D^{ω+λ} − D^ω)(ψ).
template <class S>
QvbForm<S> displacement_K(const ConnectionDisplacement<S>& l, const QvbForm<S>& psi);
template <class S>
QvbForm<S> displacement_K(const ConnectionDisplacement<S>& l, const ChargedSection<S>& t);

/// S^ω vanishes for this bundle; kept so the field equations carry the term.
template <class S>
DiffForm<S> s_omega(const GaugeConnection<S>& c, const DiffForm<S>& x);
template <class S>
DiffForm<S> s_omega_adjoint(const GaugeConnection<S>& c, const DiffForm<S>& x);

/// □ = d^∇ d^{∇⋆} + d^{∇⋆} d^∇.
template <class S>
QvbForm<S> cov_laplacian(const GaugeConnection<S>& c, const QvbForm<S>& psi);

}  // namespace ncym
