#include "ncym/matforms.hpp"

#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>
#include <tuple>

namespace ncym {

int grade_of(Mask m) { return std::popcount(m); }

int wedge_sign(Mask i, Mask j) {
  if ((i & j) != 0) return 0;
  int swaps = 0;
  for (Mask rest = j; rest != 0; rest &= rest - 1) {
    const Mask low = rest & (~rest + 1);
    // Elements of I above this element of J must move past it.
    swaps += std::popcount(i & ~((low << 1) - 1));
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

std::string mask_to_string(Mask m, int d) {
  std::string out;
  for (int k = 1; k <= d; ++k) {
    if ((m & (Mask{1} << (k - 1))) == 0) continue;
    if (d >= 10 && !out.empty()) out += ',';
    out += std::to_string(k);
  }
  return out;
}

Mask mask_from_string(const std::string& s, int d) {
  Mask m = 0;
  int last = 0;
  auto take = [&](int k) {
    if (k < 1 || k > d) throw DimensionError("index " + std::to_string(k) + " out of range 1.." + std::to_string(d));
    if (k <= last) throw DimensionError("index string '" + s + "' is not strictly increasing");
    last = k;
    m |= Mask{1} << (k - 1);
  };
  if (d >= 10) {
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) throw DimensionError("empty index in '" + s + "'");
      std::size_t pos = 0;
      int k = 0;
      try {
        k = std::stoi(tok, &pos);
      } catch (const std::exception&) {
        throw DimensionError("bad index '" + tok + "'");
      }
      if (pos != tok.size()) throw DimensionError("bad index '" + tok + "'");
      take(k);
    }
  } else {
    for (char ch : s) {
      if (ch < '1' || ch > '9') throw DimensionError(std::string("bad index character '") + ch + "'");
      take(ch - '0');
    }
  }
  return m;
}

std::string ConventionLedger::id() const {
  std::string a = dh == GeneratorDifferential::ChevalleyEilenberg ? "ce" : "neg";
  std::string b = star == StarSign::Graded ? "graded" : "reversed";
  return "dh:" + a + "/star:" + b + "/v1";
}

// ---------------------------------------------------------------- DiffForm

template <class S>
DiffForm<S>::DiffForm(int n) : n_(n) {
  if (n < 2 || n > kMaxAlgebraSize)
    throw DimensionError("algebra size must be in 2.." + std::to_string(kMaxAlgebraSize) + ", got " + std::to_string(n));
}

template <class S>
DiffForm<S> DiffForm<S>::scalar(const Matrix<S>& p) {
  return basis(Mask{0}, p);
}

template <class S>
DiffForm<S> DiffForm<S>::basis(Mask i, const Matrix<S>& p) {
  DiffForm f(p.size());
  f.set(i, p);
  return f;
}

template <class S>
DiffForm<S> DiffForm<S>::basis(const std::string& index, const Matrix<S>& p) {
  const int d = p.size() * p.size() - 1;
  return basis(mask_from_string(index, d), p);
}

template <class S>
Matrix<S> DiffForm<S>::coeff(Mask i) const {
  auto it = c_.find(i);
  if (it == c_.end()) return Matrix<S>::zero(n_);
  return it->second;
}

template <class S>
void DiffForm<S>::set(Mask i, Matrix<S> p) {
  if (p.size() != n_) throw DimensionError("coefficient size does not match form");
  if ((i & ~top_mask()) != 0) throw DimensionError("index exceeds number of generators");
  c_[i] = std::move(p);
}

template <class S>
void DiffForm<S>::add(Mask i, const Matrix<S>& p) {
  if (p.size() != n_) throw DimensionError("coefficient size does not match form");
  if ((i & ~top_mask()) != 0) throw DimensionError("index exceeds number of generators");
  auto it = c_.find(i);
  if (it == c_.end())
    c_.emplace(i, p);
  else
    it->second += p;
}

template <class S>
bool DiffForm<S>::is_zero() const {
  for (const auto& [m, p] : c_)
    if (!p.is_zero()) return false;
  return true;
}

template <class S>
int DiffForm<S>::grade() const {
  int g = -1;
  for (const auto& [m, p] : c_) {
    if (p.is_zero()) continue;
    const int k = grade_of(m);
    if (g >= 0 && g != k) throw GradeError("form is not homogeneous");
    g = k;
  }
  return g;
}

template <class S>
bool DiffForm<S>::is_homogeneous(int k) const {
  for (const auto& [m, p] : c_)
    if (grade_of(m) != k && !p.is_zero()) return false;
  return true;
}

template <class S>
DiffForm<S> DiffForm<S>::grade_part(int k) const {
  DiffForm r(n_);
  for (const auto& [m, p] : c_)
    if (grade_of(m) == k) r.c_.emplace(m, p);
  return r;
}

template <class S>
DiffForm<S> DiffForm<S>::pruned() const {
  DiffForm r(n_);
  for (const auto& [m, p] : c_)
    if (!p.is_zero()) r.c_.emplace(m, p);
  return r;
}

template <class S>
void DiffForm<S>::check(const DiffForm& o) const {
  if (o.n_ != n_)
    throw DimensionError("forms over different algebra sizes: " + std::to_string(n_) + " vs " + std::to_string(o.n_));
}

template <class S>
DiffForm<S>& DiffForm<S>::operator+=(const DiffForm& o) {
  check(o);
  for (const auto& [m, p] : o.c_) add(m, p);
  return *this;
}

template <class S>
DiffForm<S>& DiffForm<S>::operator-=(const DiffForm& o) {
  check(o);
  for (const auto& [m, p] : o.c_) add(m, -p);
  return *this;
}

template <class S>
DiffForm<S>& DiffForm<S>::operator*=(const S& c) {
  for (auto& [m, p] : c_) p *= c;
  return *this;
}

template <class S>
DiffForm<S> DiffForm<S>::left_mul(const Matrix<S>& q) const {
  if (q.size() != n_) throw DimensionError("matrix size does not match form");
  DiffForm r(n_);
  for (const auto& [m, p] : c_) r.c_.emplace(m, q * p);
  return r;
}

template <class S>
DiffForm<S> DiffForm<S>::right_mul(const Matrix<S>& q) const {
  if (q.size() != n_) throw DimensionError("matrix size does not match form");
  DiffForm r(n_);
  for (const auto& [m, p] : c_) r.c_.emplace(m, p * q);
  return r;
}

template <class S>
bool DiffForm<S>::equals(const DiffForm& b) const {
  if (n_ != b.n_) return false;
  return pruned().c_ == b.pruned().c_;
}

// ---------------------------------------------------------------- generators

template <class S>
std::vector<Matrix<S>> su_generators(int n) {
  if (n < 2 || n > kMaxAlgebraSize)
    throw DimensionError("algebra size must be in 2.." + std::to_string(kMaxAlgebraSize));
  const S half = ScalarTraits<S>::ratio(1, 2);
  const S i = ScalarTraits<S>::unit_i();
  std::vector<Matrix<S>> out;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Matrix<S> m(n);
      m(j, k) = half;
      m(k, j) = half;
      out.push_back(m);
    }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Matrix<S> m(n);
      m(j, k) = -i * half;
      m(k, j) = i * half;
      out.push_back(m);
    }
  for (int l = 1; l < n; ++l) {
    // sqrt(2 / (l(l+1))) / 2; rational only for l = 1.
    S scale;
    if constexpr (ScalarTraits<S>::exact) {
      if (l != 1) throw DomainError("exact arithmetic is only available for N = 2");
      scale = half;
    } else {
      scale = S(std::sqrt(2.0 / (l * (l + 1.0))) / 2.0);
    }
    Matrix<S> m(n);
    for (int j = 0; j < l; ++j) m(j, j) = scale;
    m(l, l) = S(-l) * scale;
    out.push_back(m);
  }
  return out;
}

template <class S>
Calculus<S>::Calculus(int n, ConventionLedger ledger)
    : n_(n), d_(n * n - 1), ledger_(ledger), gens_(su_generators<S>(n)) {
  consts_.assign(static_cast<std::size_t>(d_) * d_ * d_, S(0));
  const S i = ScalarTraits<S>::unit_i();
  for (int a = 1; a <= d_; ++a)
    for (int b = 1; b <= d_; ++b) {
      if (a == b) continue;
      const Matrix<S> br = i * commutator(generator(a), generator(b));
      for (int c = 1; c <= d_; ++c) {
        S v = S(2) * (br * generator(c)).trace();
        if constexpr (!ScalarTraits<S>::exact) {
          // Real by construction; drop round-off.
          double r = v.real();
          if (std::abs(r) < 1e-14) r = 0.0;
          v = S(r);
        }
        consts_[(static_cast<std::size_t>(a - 1) * d_ + (b - 1)) * d_ + (c - 1)] = v;
      }
    }
  const S sign = ledger_.dh == GeneratorDifferential::ChevalleyEilenberg ? S(-1) : S(1);
  dh_.resize(static_cast<std::size_t>(d_));
  for (int c = 1; c <= d_; ++c)
    for (int a = 1; a <= d_; ++a)
      for (int b = a + 1; b <= d_; ++b) {
        const S& v = structure_constant(a, b, c);
        if (ncym::is_zero(v)) continue;
        dh_[static_cast<std::size_t>(c - 1)].emplace_back((Mask{1} << (a - 1)) | (Mask{1} << (b - 1)), sign * v);
      }
}

template <class S>
std::shared_ptr<const Calculus<S>> Calculus<S>::get(int n, const ConventionLedger& ledger) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const Calculus<S>>> cache;
  const auto key = std::make_tuple(n, static_cast<int>(ledger.dh), static_cast<int>(ledger.star));
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto c = std::make_shared<const Calculus<S>>(n, ledger);
  cache.emplace(key, c);
  return c;
}

template <class S>
const S& Calculus<S>::structure_constant(int a, int b, int c) const {
  return consts_.at((static_cast<std::size_t>(a - 1) * d_ + (b - 1)) * d_ + (c - 1));
}

template <class S>
Matrix<S> Calculus<S>::derive(int k, const Matrix<S>& p) const {
  return ScalarTraits<S>::unit_i() * commutator(generator(k), p);
}

template <class S>
std::vector<std::pair<Mask, S>> Calculus<S>::d_basis(Mask i) const {
  // Leibniz over h^I = h^{i1} ∧ … ∧ h^{ik}: replace one factor by its differential.
  std::vector<std::pair<Mask, S>> out;
  int pos = 0;
  for (int k = 1; k <= d_; ++k) {
    const Mask bit = Mask{1} << (k - 1);
    if ((i & bit) == 0) continue;
    const Mask left = i & (bit - 1);
    const Mask right = i & ~((bit << 1) - 1);
    const int leib = (pos % 2 == 0) ? 1 : -1;
    for (const auto& [ab, v] : dh(k)) {
      const int s1 = wedge_sign(left, ab);
      if (s1 == 0) continue;
      const int s2 = wedge_sign(left | ab, right);
      if (s2 == 0) continue;
      const Mask m = left | ab | right;
      S term = S(leib * s1 * s2) * v;
      bool merged = false;
      for (auto& e : out)
        if (e.first == m) {
          e.second += term;
          merged = true;
          break;
        }
      if (!merged) out.emplace_back(m, term);
    }
    ++pos;
  }
  return out;
}

template <class S>
int Calculus<S>::star_sign(int k) const {
  if (ledger_.star == StarSign::Graded) return 1;
  return ((k * (k - 1) / 2) % 2 == 0) ? 1 : -1;
}

// ---------------------------------------------------------------- operations

template <class S>
DiffForm<S> wedge(const DiffForm<S>& a, const DiffForm<S>& b) {
  if (a.algebra_size() != b.algebra_size())
    throw DimensionError("wedge of forms over different algebra sizes");
  DiffForm<S> r(a.algebra_size());
  for (const auto& [ma, pa] : a.components()) {
    if (pa.is_zero()) continue;
    for (const auto& [mb, pb] : b.components()) {
      const int s = wedge_sign(ma, mb);
      if (s == 0 || pb.is_zero()) continue;
      Matrix<S> prod = pa * pb;
      if (s < 0) prod = -prod;
      r.add(ma | mb, prod);
    }
  }
  return r;
}

template <class S>
DiffForm<S> differential(const DiffForm<S>& a, const Calculus<S>& calc) {
  if (a.algebra_size() != calc.algebra_size()) throw DimensionError("calculus does not match form");
  const int d = calc.dimension();
  DiffForm<S> r(a.algebra_size());
  for (const auto& [m, p] : a.components()) {
    if (p.is_zero()) continue;
    // d(h^I p) = d(h^I) p + (−1)^k h^I ∧ Σ_a h^a X_a(p)
    for (const auto& [mm, v] : calc.d_basis(m)) r.add(mm, v * p);
    const int k = grade_of(m);
    for (int j = 1; j <= d; ++j) {
      const Mask bit = Mask{1} << (j - 1);
      const int s = wedge_sign(m, bit);
      if (s == 0) continue;
      Matrix<S> x = calc.derive(j, p);
      if ((k % 2 == 1) != (s < 0)) x = -x;
      r.add(m | bit, x);
    }
  }
  return r;
}

template <class S>
DiffForm<S> star(const DiffForm<S>& a, const Calculus<S>& calc) {
  DiffForm<S> r(a.algebra_size());
  for (const auto& [m, p] : a.components()) {
    Matrix<S> q = p.adjoint();
    if (calc.star_sign(grade_of(m)) < 0) q = -q;
    r.set(m, std::move(q));
  }
  return r;
}

double max_coeff_diff(const CForm& a, const CForm& b) {
  const CForm diff = a - b;
  double worst = 0.0;
  for (const auto& [m, p] : diff.components()) worst = std::max(worst, norm(p));
  return worst;
}

double frobenius(const CForm& a) {
  double s = 0.0;
  for (const auto& [m, p] : a.components()) {
    const double x = norm(p);
    s += x * x;
  }
  return std::sqrt(s);
}

template <class S>
CForm to_complex(const DiffForm<S>& a) {
  CForm r(a.algebra_size());
  for (const auto& [m, p] : a.components()) r.set(m, to_complex(p));
  return r;
}

template class DiffForm<Complex>;
template class DiffForm<GaussianRational>;
template class Calculus<Complex>;
template class Calculus<GaussianRational>;

template std::vector<CMatrix> su_generators<Complex>(int);
template std::vector<QMatrix> su_generators<GaussianRational>(int);
template CForm wedge(const CForm&, const CForm&);
template QForm wedge(const QForm&, const QForm&);
template CForm differential(const CForm&, const Calculus<Complex>&);
template QForm differential(const QForm&, const Calculus<GaussianRational>&);
template CForm star(const CForm&, const Calculus<Complex>&);
template QForm star(const QForm&, const Calculus<GaussianRational>&);
template CForm to_complex(const CForm&);
template CForm to_complex(const QForm&);

}  // namespace ncym
