#pragma once

#include <string>
#include <vector>

#include "ncym/matforms.hpp"

namespace ncym {

enum class Side { Left, Right };

/// Normalized trace tr(p)/N.
template <class S>
S state(const Matrix<S>& p);

/// dvol = h^{1…d} ⊗ Id.
template <class S>
DiffForm<S> volume_form(int n);

/// Σ_I a_I b_I* (left) or Σ_I a_I* b_I (right); different grades are orthogonal.
template <class S>
Matrix<S> metric(const DiffForm<S>& a, const DiffForm<S>& b, Side side);

/// s(p) for a = p·dvol. Throws GradeError if a has lower-grade parts.
template <class S>
S integral(const DiffForm<S>& a);

/// ⋆_L(h^I p) = sgn(I, Iᶜ) h^{Iᶜ} p*; ⋆_R = ∗ ⋆_L ∗.
template <class S>
DiffForm<S> hodge(const DiffForm<S>& a, Side side, const Calculus<S>& calc);
template <class S>
DiffForm<S> hodge_inverse(const DiffForm<S>& a, Side side, const Calculus<S>& calc);

/// ∫ ⟨a, b⟩ dvol.
template <class S>
S hodge_inner(const DiffForm<S>& a, const DiffForm<S>& b, Side side);

/// (−1)^{k+1} ⋆⁻¹ d ⋆ on grade k+1, zero on grade 0; right side is ∗ d^{⋆L} ∗.
template <class S>
DiffForm<S> codifferential(const DiffForm<S>& a, Side side, const Calculus<S>& calc);

/// Δ = d d^⋆ + d^⋆ d.
template <class S>
DiffForm<S> laplacian(const DiffForm<S>& a, Side side, const Calculus<S>& calc);

template <class S>
DiffForm<S> hodge(const DiffForm<S>& a, Side side = Side::Left) {
  return hodge(a, side, *Calculus<S>::get(a.algebra_size()));
}
template <class S>
DiffForm<S> hodge_inverse(const DiffForm<S>& a, Side side = Side::Left) {
  return hodge_inverse(a, side, *Calculus<S>::get(a.algebra_size()));
}
template <class S>
DiffForm<S> codifferential(const DiffForm<S>& a, Side side = Side::Left) {
  return codifferential(a, side, *Calculus<S>::get(a.algebra_size()));
}
template <class S>
DiffForm<S> laplacian(const DiffForm<S>& a, Side side = Side::Left) {
  return laplacian(a, side, *Calculus<S>::get(a.algebra_size()));
}

/// Laplacian on grade-k forms as a self-adjoint operator.
struct Spectrum {
  int grade = 0;
  std::vector<double> eigenvalues;  // ascending
  double hermiticity_error = 0.0;   // max |K − Kᴴ| of the Hodge-pairing matrix
  double min_eigenvalue = 0.0;
};

/// Throws DomainError when the grade-k space exceeds max_dim.
Spectrum spectrum(int n, int grade, Side side = Side::Left, int max_dim = 2000);

/// "grade,index,eigenvalue" rows, %.17g.
std::string spectrum_csv(const std::vector<Spectrum>& spectra);

}  // namespace ncym
