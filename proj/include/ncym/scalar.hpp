#pragma once

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace ncym {

using Complex = std::complex<double>;

/// Exact complex scalar a + b·i with a, b arbitrary-precision rationals.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re), im_(0) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational ratio(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return {q, 0};
  }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  GaussianRational conj() const { return {re_, -im_}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    mpq_class den = o.re_ * o.re_ + o.im_ * o.im_;
    mpq_class r = (re_ * o.re_ + im_ * o.im_) / den;
    mpq_class i = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z) {
    return os << '(' << z.re_ << ',' << z.im_ << ')';
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Uniform access to the two coefficient fields the library is instantiated for.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static Complex unit_i() { return {0.0, 1.0}; }
  static Complex ratio(long num, long den) { return {static_cast<double>(num) / static_cast<double>(den), 0.0}; }
  static Complex from_double(double x) { return {x, 0.0}; }
  static Complex conj(const Complex& z) { return std::conj(z); }
  static Complex to_complex(const Complex& z) { return z; }
  static bool is_zero(const Complex& z) { return z.real() == 0.0 && z.imag() == 0.0; }
};

template <>
struct ScalarTraits<GaussianRational> {
  static constexpr bool exact = true;
  static GaussianRational unit_i() { return {0, 1}; }
  static GaussianRational ratio(long num, long den) { return GaussianRational::ratio(num, den); }
  static GaussianRational from_double(double x) { return {mpq_class(x), 0}; }
  static GaussianRational conj(const GaussianRational& z) { return z.conj(); }
  static Complex to_complex(const GaussianRational& z) { return {z.re().get_d(), z.im().get_d()}; }
  static bool is_zero(const GaussianRational& z) { return sgn(z.re()) == 0 && sgn(z.im()) == 0; }
};

template <class S>
S conj(const S& z) {
  return ScalarTraits<S>::conj(z);
}

template <class S>
Complex to_complex(const S& z) {
  return ScalarTraits<S>::to_complex(z);
}

template <class S>
bool is_zero(const S& z) {
  return ScalarTraits<S>::is_zero(z);
}

}  // namespace ncym
