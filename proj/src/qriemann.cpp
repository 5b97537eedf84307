#include "ncym/qriemann.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <Eigen/Dense>

namespace ncym {

template <class S>
S state(const Matrix<S>& p) {
  return p.trace() * ScalarTraits<S>::ratio(1, p.size());
}

template <class S>
DiffForm<S> volume_form(int n) {
  DiffForm<S> f(n);
  f.set(f.top_mask(), Matrix<S>::identity(n));
  return f;
}

template <class S>
Matrix<S> metric(const DiffForm<S>& a, const DiffForm<S>& b, Side side) {
  if (a.algebra_size() != b.algebra_size()) throw DimensionError("metric of forms over different algebra sizes");
  Matrix<S> r = Matrix<S>::zero(a.algebra_size());
  for (const auto& [m, pa] : a.components()) {
    auto it = b.components().find(m);
    if (it == b.components().end()) continue;
    if (side == Side::Left)
      r += pa * it->second.adjoint();
    else
      r += pa.adjoint() * it->second;
  }
  return r;
}

template <class S>
S integral(const DiffForm<S>& a) {
  const Mask top = a.top_mask();
  for (const auto& [m, p] : a.components())
    if (m != top && !p.is_zero())
      throw GradeError("integral needs a top-grade form; found grade " + std::to_string(grade_of(m)));
  return state(a.coeff(top));
}

namespace {

template <class S>
DiffForm<S> hodge_left(const DiffForm<S>& a, bool inverse) {
  const Mask top = a.top_mask();
  const int d = a.dimension();
  DiffForm<S> r(a.algebra_size());
  for (const auto& [m, p] : a.components()) {
    const Mask c = top & ~m;
    int s = wedge_sign(m, c);
    if (inverse) {
      // ⋆⋆ = (−1)^{k(d−k)} on grade k.
      const int k = grade_of(m);
      if ((k * (d - k)) % 2 == 1) s = -s;
    }
    Matrix<S> q = p.adjoint();
    if (s < 0) q = -q;
    r.add(c, q);
  }
  return r;
}

}  // namespace

template <class S>
DiffForm<S> hodge(const DiffForm<S>& a, Side side, const Calculus<S>& calc) {
  if (side == Side::Left) return hodge_left(a, false);
  return star(hodge_left(star(a, calc), false), calc);
}

template <class S>
DiffForm<S> hodge_inverse(const DiffForm<S>& a, Side side, const Calculus<S>& calc) {
  if (side == Side::Left) return hodge_left(a, true);
  return star(hodge_left(star(a, calc), true), calc);
}

template <class S>
S hodge_inner(const DiffForm<S>& a, const DiffForm<S>& b, Side side) {
  return state(metric(a, b, side));
}

template <class S>
DiffForm<S> codifferential(const DiffForm<S>& a, Side side, const Calculus<S>& calc) {
  if (side == Side::Right) return star(codifferential(star(a, calc), Side::Left, calc), calc);
  DiffForm<S> r(a.algebra_size());
  for (int g = 1; g <= a.dimension(); ++g) {
    const DiffForm<S> part = a.grade_part(g);
    if (part.components().empty()) continue;
    DiffForm<S> t = hodge_left(differential(hodge_left(part, false), calc), true);
    if (g % 2 == 1) t = -t;  // (−1)^{k+1} with g = k+1
    r += t;
  }
  return r;
}

template <class S>
DiffForm<S> laplacian(const DiffForm<S>& a, Side side, const Calculus<S>& calc) {
  return differential(codifferential(a, side, calc), calc) + codifferential(differential(a, calc), side, calc);
}

namespace {

std::vector<Mask> masks_of_grade(int d, int k) {
  std::vector<Mask> out;
  for (Mask m = 0; m < (Mask{1} << d); ++m)
    if (grade_of(m) == k) out.push_back(m);
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Spectrum spectrum(int n, int grade, Side side, int max_dim) {
  if (n < 2 || n > kMaxAlgebraSize) throw DimensionError("algebra size out of range");
  const int d = n * n - 1;
  if (grade < 0 || grade > d) throw GradeError("grade must be in 0.." + std::to_string(d));
  const double dim_estimate = binomial(d, grade) * n * n;
  if (dim_estimate > max_dim)
    throw DomainError("grade-" + std::to_string(grade) + " space has dimension " + std::to_string(static_cast<long>(dim_estimate)) +
                      ", above the limit " + std::to_string(max_dim));

  const auto calc = Calculus<Complex>::get(n);
  std::vector<CForm> basis;
  for (Mask m : masks_of_grade(d, grade))
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CMatrix e(n);
        e(i, j) = 1.0;
        basis.push_back(CForm::basis(m, e));
      }
  const int dim = static_cast<int>(basis.size());
  std::vector<CForm> images;
  images.reserve(basis.size());
  for (const auto& b : basis) images.push_back(laplacian(b, side, *calc));

  // K c = λ G c with G_ab = ⟨e_b|e_a⟩, K_ab = ⟨Δe_b|e_a⟩.
  Eigen::MatrixXcd gram(dim, dim), k(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      gram(a, b) = hodge_inner(basis[b], basis[a], side);
      k(a, b) = hodge_inner(images[b], basis[a], side);
    }
  Spectrum out;
  out.grade = grade;
  out.hermiticity_error = (k - k.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd kh = (k + k.adjoint()) * 0.5;
  const Eigen::MatrixXcd gh = (gram + gram.adjoint()) * 0.5;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(kh, gh, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw DomainError("eigensolver failed");
  for (int i = 0; i < dim; ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  out.min_eigenvalue = out.eigenvalues.empty() ? 0.0 : out.eigenvalues.front();
  return out;
}

std::string spectrum_csv(const std::vector<Spectrum>& spectra) {
  std::ostringstream os;
  os << "grade,index,eigenvalue\n";
  char buf[64];
  for (const auto& s : spectra)
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", s.eigenvalues[i]);
      os << s.grade << ',' << i << ',' << buf << '\n';
    }
  return os.str();
}

#define NCYM_INSTANTIATE(S)                                                                \
  template S state(const Matrix<S>&);                                                      \
  template DiffForm<S> volume_form<S>(int);                                                \
  template Matrix<S> metric(const DiffForm<S>&, const DiffForm<S>&, Side);                 \
  template S integral(const DiffForm<S>&);                                                 \
  template DiffForm<S> hodge(const DiffForm<S>&, Side, const Calculus<S>&);                \
  template DiffForm<S> hodge_inverse(const DiffForm<S>&, Side, const Calculus<S>&);        \
  template S hodge_inner(const DiffForm<S>&, const DiffForm<S>&, Side);                    \
  template DiffForm<S> codifferential(const DiffForm<S>&, Side, const Calculus<S>&);       \
  template DiffForm<S> laplacian(const DiffForm<S>&, Side, const Calculus<S>&);

NCYM_INSTANTIATE(Complex)
NCYM_INSTANTIATE(GaussianRational)
#undef NCYM_INSTANTIATE

}  // namespace ncym
