#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncym/errors.hpp"
#include "ncym/scalar.hpp"

namespace ncym {

/// Dense N×N matrix, row-major.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, S(0)) {
    if (n < 1) throw DimensionError("matrix size must be positive");
  }

  static Matrix zero(int n) { return Matrix(n); }
  static Matrix identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }
  static Matrix scalar(int n, const S& c) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = c;
    return m;
  }

  int size() const { return n_; }
  S& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const S& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<S>& data() const { return a_; }
  std::vector<S>& data() { return a_; }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!ncym::is_zero(x)) return false;
    return true;
  }

  Matrix adjoint() const {
    Matrix r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(j, i) = ncym::conj((*this)(i, j));
    return r;
  }

  S trace() const {
    S t(0);
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Matrix& operator*=(const S& c) {
    for (auto& x : a_) x *= c;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.a_) x = -x;
    return a;
  }
  friend Matrix operator*(Matrix a, const S& c) { return a *= c; }
  friend Matrix operator*(const S& c, Matrix a) { return a *= c; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.check(b);
    const int n = a.n_;
    Matrix r(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const S& aik = a(i, k);
        if (ncym::is_zero(aik)) continue;
        for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) { return a.n_ == b.n_ && a.a_ == b.a_; }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  void check(const Matrix& o) const {
    if (o.n_ != n_)
      throw DimensionError("matrix size mismatch: " + std::to_string(n_) + " vs " + std::to_string(o.n_));
  }

  int n_ = 0;
  std::vector<S> a_;
};

using CMatrix = Matrix<Complex>;
using QMatrix = Matrix<GaussianRational>;

template <class S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) {
  return a * b - b * a;
}

/// Frobenius norm.
inline double norm(const CMatrix& m) {
  double s = 0.0;
  for (const auto& x : m.data()) s += std::norm(x);
  return std::sqrt(s);
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return norm(a - b); }

template <class S>
Matrix<Complex> to_complex(const Matrix<S>& m) {
  Matrix<Complex> r(m.size());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) r(i, j) = ncym::to_complex(m(i, j));
  return r;
}

}  // namespace ncym
