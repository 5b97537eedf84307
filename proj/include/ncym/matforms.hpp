#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ncym/errors.hpp"
#include "ncym/matrix.hpp"
#include "ncym/scalar.hpp"

namespace ncym {

/// Largest supported algebra size. d = N²−1 must fit in a 32-bit mask.
inline constexpr int kMaxAlgebraSize = 4;

/// Bit (k−1) set means the Grassmann generator h^k is present.
using Mask = std::uint32_t;

int grade_of(Mask m);
/// Sign of h^I ∧ h^J relative to h^{I∪J}; 0 when I and J overlap.
int wedge_sign(Mask i, Mask j);
/// "" / "1" / "13" / "123"; comma separated once d ≥ 10.
std::string mask_to_string(Mask m, int d);
Mask mask_from_string(const std::string& s, int d);

/// Sign choices the paper leaves implicit.
enum class GeneratorDifferential {
  ChevalleyEilenberg,  // dh^c = −Σ_{a<b} c_ab^c h^{ab}
  Negated,             // dh^c = +Σ_{a<b} c_ab^c h^{ab}
};

enum class StarSign {
  Graded,    // (h^I p)* = h^I p*
  Reversed,  // (h^I p)* = (−1)^{k(k−1)/2} h^I p*
};

struct ConventionLedger {
  GeneratorDifferential dh = GeneratorDifferential::ChevalleyEilenberg;
  StarSign star = StarSign::Graded;

  std::string id() const;
  static ConventionLedger standard() { return {}; }
  friend bool operator==(const ConventionLedger&, const ConventionLedger&) = default;
};

/// Element of Ω•(M_N): index subsets of {1..d} mapped to N×N coefficients.
/// Absent entries are zero.
template <class S>
class DiffForm {
 public:
  using Components = std::map<Mask, Matrix<S>>;

  DiffForm() = default;
  explicit DiffForm(int n);

  static DiffForm zero(int n) { return DiffForm(n); }
  static DiffForm scalar(const Matrix<S>& p);
  /// h^I ⊗ p.
  static DiffForm basis(Mask i, const Matrix<S>& p);
  static DiffForm basis(const std::string& index, const Matrix<S>& p);

  int algebra_size() const { return n_; }
  int dimension() const { return n_ * n_ - 1; }
  Mask top_mask() const { return (Mask{1} << dimension()) - 1; }

  const Components& components() const { return c_; }
  Matrix<S> coeff(Mask i) const;
  Matrix<S> coeff(const std::string& index) const { return coeff(mask_from_string(index, dimension())); }
  void set(Mask i, Matrix<S> p);
  void add(Mask i, const Matrix<S>& p);

  bool is_zero() const;
  /// Grade of a homogeneous form; −1 for the zero form; throws GradeError if mixed.
  int grade() const;
  bool is_homogeneous(int k) const;
  DiffForm grade_part(int k) const;
  /// Drops explicit zero coefficients.
  DiffForm pruned() const;

  DiffForm& operator+=(const DiffForm& o);
  DiffForm& operator-=(const DiffForm& o);
  DiffForm& operator*=(const S& c);

  friend DiffForm operator+(DiffForm a, const DiffForm& b) { return a += b; }
  friend DiffForm operator-(DiffForm a, const DiffForm& b) { return a -= b; }
  friend DiffForm operator-(DiffForm a) { return a *= S(-1); }
  friend DiffForm operator*(DiffForm a, const S& c) { return a *= c; }
  friend DiffForm operator*(const S& c, DiffForm a) { return a *= c; }
  /// Coefficient-wise module actions.
  friend DiffForm operator*(const Matrix<S>& p, const DiffForm& a) { return a.left_mul(p); }
  friend DiffForm operator*(const DiffForm& a, const Matrix<S>& p) { return a.right_mul(p); }

  /// Exact equality after dropping zeros.
  friend bool operator==(const DiffForm& a, const DiffForm& b) { return a.equals(b); }

  DiffForm left_mul(const Matrix<S>& p) const;
  DiffForm right_mul(const Matrix<S>& p) const;

 private:
  bool equals(const DiffForm& b) const;
  void check(const DiffForm& o) const;

  int n_ = 0;
  Components c_;
};

using CForm = DiffForm<Complex>;
using QForm = DiffForm<GaussianRational>;

/// Generators, structure constants and sign data for Ω•_Der(M_N).
template <class S>
class Calculus {
 public:
  Calculus(int n, ConventionLedger ledger);

  /// Shared instance for (N, ledger); built once.
  static std::shared_ptr<const Calculus> get(int n, const ConventionLedger& ledger = ConventionLedger::standard());

  int algebra_size() const { return n_; }
  int dimension() const { return d_; }
  const ConventionLedger& ledger() const { return ledger_; }

  /// S_k for k = 1..d, trace-orthonormal: tr(S_a S_b) = δ_ab / 2.
  const Matrix<S>& generator(int k) const { return gens_.at(static_cast<std::size_t>(k - 1)); }
  /// c_ab^c with i[S_a, S_b] = Σ_c c_ab^c S_c (1-based).
  const S& structure_constant(int a, int b, int c) const;
  /// X_k(p) = i[S_k, p].
  Matrix<S> derive(int k, const Matrix<S>& p) const;
  /// dh^c as a list of (mask of {a,b}, coefficient).
  const std::vector<std::pair<Mask, S>>& dh(int c) const { return dh_.at(static_cast<std::size_t>(c - 1)); }
  /// d(h^I) as a list of (mask, coefficient).
  std::vector<std::pair<Mask, S>> d_basis(Mask i) const;
  /// Sign multiplying p* in (h^I p)* for grade k.
  int star_sign(int k) const;

 private:
  int n_;
  int d_;
  ConventionLedger ledger_;
  std::vector<Matrix<S>> gens_;
  std::vector<S> consts_;
  std::vector<std::vector<std::pair<Mask, S>>> dh_;
};

/// Trace-orthonormal traceless hermitian basis of size N (generalized Gell-Mann / 2).
template <class S>
std::vector<Matrix<S>> su_generators(int n);

template <class S>
DiffForm<S> wedge(const DiffForm<S>& a, const DiffForm<S>& b);

template <class S>
DiffForm<S> differential(const DiffForm<S>& a, const Calculus<S>& calc);
template <class S>
DiffForm<S> differential(const DiffForm<S>& a) {
  return differential(a, *Calculus<S>::get(a.algebra_size()));
}

template <class S>
DiffForm<S> star(const DiffForm<S>& a, const Calculus<S>& calc);
template <class S>
DiffForm<S> star(const DiffForm<S>& a) {
  return star(a, *Calculus<S>::get(a.algebra_size()));
}

/// Largest Frobenius norm of a coefficient of a − b.
double max_coeff_diff(const CForm& a, const CForm& b);
/// Hilbert–Schmidt norm √(Σ_I ‖a_I‖²).
double frobenius(const CForm& a);

template <class S>
CForm to_complex(const DiffForm<S>& a);

extern template class DiffForm<Complex>;
extern template class DiffForm<GaussianRational>;
extern template class Calculus<Complex>;
extern template class Calculus<GaussianRational>;

}  // namespace ncym
