#include "ncym/fields.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace ncym {

// ---------------------------------------------------------------- potential

template <class S>
Matrix<S> PolynomialPotential::value(const Matrix<S>& q) const {
  const int n = q.size();
  Matrix<S> r = Matrix<S>::zero(n);
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
    r = r * q + Matrix<S>::scalar(n, ScalarTraits<S>::from_double(*it));
  return r;
}

template <class S>
Matrix<S> PolynomialPotential::derivative(const Matrix<S>& q) const {
  const int n = q.size();
  Matrix<S> r = Matrix<S>::zero(n);
  for (std::size_t k = coefficients.size(); k-- > 1;)
    r = r * q + Matrix<S>::scalar(n, ScalarTraits<S>::from_double(static_cast<double>(k) * coefficients[k]));
  return r;
}

PolynomialPotential PolynomialPotential::parse(const std::string& csv) {
  PolynomialPotential v;
  if (csv.empty()) return v;
  std::stringstream ss(csv);
  std::string tok;
  int idx = 0;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw DomainError("potential coefficient " + std::to_string(idx) + " is not a number: '" + tok + "'");
    }
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    if (pos != tok.size()) throw DomainError("potential coefficient " + std::to_string(idx) + " has trailing text: '" + tok + "'");
    if (!std::isfinite(x)) throw DomainError("potential coefficient " + std::to_string(idx) + " is not finite");
    v.coefficients.push_back(x);
    ++idx;
  }
  return v;
}

std::string PolynomialPotential::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (i) os << ',';
    os << coefficients[i];
  }
  return os.str();
}

// ---------------------------------------------------------------- configuration

template <class S>
FieldConfiguration<S> FieldConfiguration<S>::make(const DiffForm<S>& a, int n, const Matrix<S>& q1, const Matrix<S>& q2,
                                                  PolynomialPotential v) {
  if (q1.size() != a.algebra_size() || q2.size() != a.algebra_size())
    throw DimensionError("section and connection sizes differ");
  return {GaugeConnection<S>{a}, ChargedSection<S>{n, Side::Left, q1}, ChargedSection<S>{-n, Side::Right, q2}, std::move(v)};
}

template <class S>
FieldConfiguration<S> FieldConfiguration<S>::from_scaled(const DiffForm<S>& a, int n, const Matrix<S>& p1,
                                                         const Matrix<S>& p2, PolynomialPotential v) {
  if (n == 0) throw DomainError("scaled normalization needs a nonzero charge");
  const S inv = ScalarTraits<S>::ratio(1, n);
  return make(a, n, p1 * inv, p2 * (-inv), std::move(v));
}

template <class S>
Matrix<S> FieldConfiguration<S>::p1() const {
  return left.p * S(static_cast<long>(charge()));
}

template <class S>
Matrix<S> FieldConfiguration<S>::p2() const {
  return right.p * S(static_cast<long>(-charge()));
}

// ---------------------------------------------------------------- actions

template <class S>
S ym_action(const GaugeConnection<S>& c) {
  const DiffForm<S> f = curvature(c);
  const DiffForm<S> fh = -star(f);
  return ScalarTraits<S>::ratio(-1, 4) * (hodge_inner(f, f, Side::Left) + hodge_inner(fh, fh, Side::Right));
}

template <class S>
S gsm_action(const FieldConfiguration<S>& cfg) {
  const QvbForm<S> d1 = cov_derivative(cfg.connection, cfg.left);
  const QvbForm<S> d2 = cov_derivative(cfg.connection, cfg.right);
  const Matrix<S>& q1 = cfg.left.p;
  const Matrix<S>& q2 = cfg.right.p;
  S total = qvb_inner(d1, d1) - state(cfg.potential.value(q1 * q1.adjoint())) - qvb_inner(d2, d2) +
            state(cfg.potential.value(q2.adjoint() * q2));
  return ScalarTraits<S>::ratio(1, 4) * total;
}

template <class S>
S sm_action(const std::vector<Matrix<S>>& t1, const std::vector<Matrix<S>>& t2, const PolynomialPotential& v) {
  if (t1.size() != t2.size()) throw DimensionError("multiplets differ in length");
  if (t1.empty()) return S(0);
  S total(0);
  const int n = t1.front().size();
  for (std::size_t i = 0; i < t1.size(); ++i)
    total += gsm_action(FieldConfiguration<S>::make(DiffForm<S>(n), 0, t1[i], t2[i], v));
  return total;
}

// ---------------------------------------------------------------- residuals

template <class S>
YMResidual<S> ym_residual(const GaugeConnection<S>& c) {
  const DiffForm<S> f = curvature(c);
  const DiffForm<S> fh = -star(f);
  // Adjoint representation carries charge 0; S^ω and its adjoint vanish.
  DiffForm<S> left = cov_codifferential(c, QvbForm<S>{0, Side::Left, f}).form - s_omega_adjoint(c, f);
  DiffForm<S> right = cov_codifferential(c, QvbForm<S>{0, Side::Right, fh}).form - s_omega_adjoint(c, fh);
  return {left, right};
}

template <class S>
SMResidual<S> sm_residuals(const std::vector<Matrix<S>>& t1, const std::vector<Matrix<S>>& t2,
                           const PolynomialPotential& v) {
  if (t1.size() != t2.size()) throw DimensionError("multiplets differ in length");
  SMResidual<S> r;
  for (std::size_t i = 0; i < t1.size(); ++i) {
    const Matrix<S>& p = t1[i];
    r.left.push_back(laplacian(DiffForm<S>::scalar(p)).coeff(0) - v.derivative(p * p.adjoint()).adjoint() * p);
    const Matrix<S> ps = t2[i].adjoint();
    r.right.push_back(laplacian(DiffForm<S>::scalar(ps)).coeff(0) - v.derivative(t2[i].adjoint() * t2[i]) * ps);
  }
  return r;
}

template <class S>
DiffForm<S> ymsm_connection_residual(const FieldConfiguration<S>& cfg) {
  const int n = cfg.charge();
  if (cfg.right.charge != -n) throw DomainError("sections must carry opposite charges");
  if (n == 0) return ym_residual(cfg.connection).left;
  const DiffForm<S>& a = cfg.connection.A;
  const Matrix<S> p1 = cfg.p1();
  const Matrix<S> p2 = cfg.p2();
  const DiffForm<S> dp1 = differential(DiffForm<S>::scalar(p1));
  const DiffForm<S> dp2s = differential(DiffForm<S>::scalar(p2.adjoint()));
  DiffForm<S> r = (p1.adjoint() * dp1 - p2 * dp2s) * (-ScalarTraits<S>::ratio(1, n));
  r += (p1.adjoint() * p1) * a;
  r -= (p2 * p2.adjoint()) * a;
  r -= codifferential(differential(a)) * S(2);
  return r;
}

namespace {

template <class S>
SectionResidual<S> section_residuals_with(const FieldConfiguration<S>& cfg, bool use_formula) {
  const auto& c = cfg.connection;
  auto adj = [&](const QvbForm<S>& psi) {
    return use_formula ? cov_codifferential_formula(c, psi) : cov_codifferential(c, psi);
  };
  const Matrix<S>& q1 = cfg.left.p;
  const Matrix<S>& q2 = cfg.right.p;
  SectionResidual<S> r;
  r.left = adj(cov_derivative(c, cfg.left)).form.coeff(0) - cfg.potential.derivative(q1 * q1.adjoint()).adjoint() * q1;
  r.right = adj(cov_derivative(c, cfg.right)).form.coeff(0) - q2 * cfg.potential.derivative(q2.adjoint() * q2).adjoint();
  return r;
}

}  // namespace

template <class S>
SectionResidual<S> ymsm_section_residuals(const FieldConfiguration<S>& cfg) {
  return section_residuals_with(cfg, false);
}

template <class S>
SectionResidual<S> ymsm_section_residuals_formula(const FieldConfiguration<S>& cfg) {
  return section_residuals_with(cfg, true);
}

template <class S>
SectionResidual<S> section_laplacian_expansion(const FieldConfiguration<S>& cfg, QuadraticSign sign) {
  const int n = cfg.charge();
  if (n == 0) throw DomainError("expansion is written for nonzero charge");
  const DiffForm<S>& a = cfg.connection.A;
  const DiffForm<S> as = star(a);
  const Matrix<S> p1 = cfg.p1();
  const Matrix<S> p2 = cfg.p2();
  const S inv = ScalarTraits<S>::ratio(1, n);
  const S quad_left = S(static_cast<long>(sign == QuadraticSign::Symmetric ? n : -n));
  const S quad_right = S(static_cast<long>(n));
  const Side L = Side::Left, R = Side::Right;
  auto sc = [](const Matrix<S>& m) { return DiffForm<S>::scalar(m); };

  DiffForm<S> el = codifferential(differential(sc(p1))) * inv;
  el += hodge_inverse(differential(hodge(a, L) * p1.adjoint()), L);
  el += hodge_inverse(wedge(as, hodge(differential(sc(p1)), L)), L);
  el += hodge_inverse(wedge(as, hodge(a, L)) * p1.adjoint(), L) * quad_left;

  DiffForm<S> er = codifferential(differential(sc(p2)), R) * (-inv);
  er -= hodge_inverse(differential(p2.adjoint() * hodge(as, R)), R);
  er -= hodge_inverse(wedge(hodge(differential(sc(p2)), R), a), R);
  er += hodge_inverse(wedge(p2.adjoint() * hodge(as, R), a), R) * quad_right;

  return {el.coeff(0), er.coeff(0)};
}

template <class S>
YMResidual<S> continuity_residual(const GaugeConnection<S>& c) {
  const YMResidual<S> y = ym_residual(c);
  DiffForm<S> left = cov_codifferential(c, QvbForm<S>{0, Side::Left, y.left}).form - s_omega_adjoint(c, y.left);
  DiffForm<S> right = cov_codifferential(c, QvbForm<S>{0, Side::Right, y.right}).form - s_omega_adjoint(c, y.right);
  return {left, right};
}

// ---------------------------------------------------------------- variational checks

namespace {

CConfig displaced(const CConfig& cfg, const FieldDirection& dir, double t) {
  CConfig out = cfg;
  out.connection.A += dir.lambda * Complex(t);
  out.left.p += dir.u1 * Complex(t);
  out.right.p += dir.u2 * Complex(t);
  return out;
}

double action_of(const CConfig& cfg, ActionKind kind) {
  switch (kind) {
    case ActionKind::YM:
      return ym_action(cfg.connection).real();
    case ActionKind::GSM:
      return gsm_action(cfg).real();
    case ActionKind::Total:
      break;
  }
  return ymsm_action(cfg).real();
}

}  // namespace

double action_gradient_fd(const CConfig& cfg, const FieldDirection& dir, double step, ActionKind kind) {
  if (!(step > 0.0)) throw DomainError("finite-difference step must be positive");
  const double plus = action_of(displaced(cfg, dir, step), kind);
  const double minus = action_of(displaced(cfg, dir, -step), kind);
  return (plus - minus) / (2.0 * step);
}

double predicted_derivative(const CConfig& cfg, const FieldDirection& dir, ActionKind kind) {
  double total = 0.0;
  const CForm dda = codifferential(differential(cfg.connection.A));
  if (kind != ActionKind::GSM) total += -hodge_inner(dir.lambda, dda, Side::Left).real();
  if (kind == ActionKind::YM) return total;
  if (cfg.charge() != 0) {
    const CForm matter = ymsm_connection_residual(cfg) + dda * Complex(2.0);
    total += 0.5 * hodge_inner(dir.lambda, matter, Side::Left).real();
  }
  const auto r = ymsm_section_residuals(cfg);
  total += 0.5 * state(dir.u1 * r.left.adjoint()).real();
  total -= 0.5 * state(dir.u2.adjoint() * r.right).real();
  return total;
}

PotentialReconstruction reconstruct_potential(const GaugeConnection<Complex>& c) {
  const int n = c.algebra_size();
  const int d = n * n - 1;
  const int rows = d * n * n;
  const int cols = n * n;
  Eigen::MatrixXcd l(rows, cols);
  Eigen::VectorXcd rhs(rows);
  auto flatten = [&](const CForm& f, auto&& put) {
    for (int a = 1; a <= d; ++a) {
      const CMatrix m = f.coeff(Mask{1} << (a - 1));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) put(((a - 1) * n + i) * n + j, m(i, j));
    }
  };
  for (int col = 0; col < cols; ++col) {
    CMatrix e(n);
    e(col / n, col % n) = 1.0;
    flatten(differential(CForm::scalar(e)), [&](int row, Complex v) { l(row, col) = v; });
  }
  flatten(c.A, [&](int row, Complex v) { rhs(row) = v; });
  const Eigen::VectorXcd x = l.completeOrthogonalDecomposition().solve(rhs);
  PotentialReconstruction out;
  out.p = CMatrix(n);
  for (int col = 0; col < cols; ++col) out.p(col / n, col % n) = x(col);
  out.residual = frobenius(differential(CForm::scalar(out.p)) - c.A);
  return out;
}

// ---------------------------------------------------------------- randomness

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * M_PI * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

CMatrix Rng::matrix(int n, double scale) {
  CMatrix m(n);
  for (auto& x : m.data()) x = complex_normal() * scale;
  return m;
}

CForm Rng::form(int n, int grade, double scale) {
  CForm f(n);
  for (Mask m = 0; m <= f.top_mask(); ++m)
    if (grade_of(m) == grade) f.set(m, matrix(n, scale));
  return f;
}

QMatrix Rng::rational_matrix(int n, long range, long den) {
  QMatrix m(n);
  const std::uint64_t span = static_cast<std::uint64_t>(2 * range + 1);
  for (auto& x : m.data()) {
    const long a = static_cast<long>(engine_() % span) - range;
    const long b = static_cast<long>(engine_() % span) - range;
    mpq_class re(a, den), im(b, den);
    re.canonicalize();
    im.canonicalize();
    x = GaussianRational(re, im);
  }
  return m;
}

QForm Rng::rational_form(int n, int grade, long range, long den) {
  QForm f(n);
  for (Mask m = 0; m <= f.top_mask(); ++m)
    if (grade_of(m) == grade) f.set(m, rational_matrix(n, range, den));
  return f;
}

#define NCYM_INSTANTIATE(S)                                                                                      \
  template Matrix<S> PolynomialPotential::value(const Matrix<S>&) const;                                         \
  template Matrix<S> PolynomialPotential::derivative(const Matrix<S>&) const;                                    \
  template struct FieldConfiguration<S>;                                                                         \
  template S ym_action(const GaugeConnection<S>&);                                                               \
  template S gsm_action(const FieldConfiguration<S>&);                                                           \
  template S sm_action(const std::vector<Matrix<S>>&, const std::vector<Matrix<S>>&, const PolynomialPotential&); \
  template YMResidual<S> ym_residual(const GaugeConnection<S>&);                                                 \
  template SMResidual<S> sm_residuals(const std::vector<Matrix<S>>&, const std::vector<Matrix<S>>&,              \
                                      const PolynomialPotential&);                                               \
  template DiffForm<S> ymsm_connection_residual(const FieldConfiguration<S>&);                                   \
  template SectionResidual<S> ymsm_section_residuals(const FieldConfiguration<S>&);                              \
  template SectionResidual<S> ymsm_section_residuals_formula(const FieldConfiguration<S>&);                      \
  template SectionResidual<S> section_laplacian_expansion(const FieldConfiguration<S>&, QuadraticSign);          \
  template YMResidual<S> continuity_residual(const GaugeConnection<S>&);

NCYM_INSTANTIATE(Complex)
NCYM_INSTANTIATE(GaussianRational)
#undef NCYM_INSTANTIATE

}  // namespace ncym
