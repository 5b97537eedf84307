#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ncym/qbundle.hpp"

namespace ncym {

/// V(q) = Σ c_k q^k with real coefficients; V′ is the formal derivative.
struct PolynomialPotential {
  std::vector<double> coefficients;

  template <class S>
  Matrix<S> value(const Matrix<S>& q) const;
  template <class S>
  Matrix<S> derivative(const Matrix<S>& q) const;

  /// "c0,c1,..."; throws DomainError on malformed or non-finite input.
  static PolynomialPotential parse(const std::string& csv);
  std::string to_string() const;
};

/// (ω, T₁, T₂): left section of charge n, right section of charge −n.
template <class S>
struct FieldConfiguration {
  GaugeConnection<S> connection;
  ChargedSection<S> left;
  ChargedSection<S> right;
  PolynomialPotential potential;

  int charge() const { return left.charge; }
  int algebra_size() const { return connection.algebra_size(); }

  /// T₁ = q₁Tⁿ, T₂ = T^{−n}q₂.
  static FieldConfiguration make(const DiffForm<S>& a, int n, const Matrix<S>& q1, const Matrix<S>& q2,
                                 PolynomialPotential v);
  /// Coefficients in the normalization T₁ = (1/n)p₁Tⁿ, T₂ = −(1/n)T^{−n}p₂ (n ≠ 0).
  static FieldConfiguration from_scaled(const DiffForm<S>& a, int n, const Matrix<S>& p1, const Matrix<S>& p2,
                                        PolynomialPotential v);
  /// p₁ = n·q₁ and p₂ = −n·q₂.
  Matrix<S> p1() const;
  Matrix<S> p2() const;
};

using CConfig = FieldConfiguration<Complex>;
using QConfig = FieldConfiguration<GaussianRational>;

/// Variation direction (λ, U₁, U₂).
struct FieldDirection {
  CForm lambda;
  CMatrix u1;
  CMatrix u2;
};

// ---------------------------------------------------------------- actions

/// −¼(⟨F|F⟩_L + ⟨F̂|F̂⟩_R), F = dA, F̂ = −(dA)*.
template <class S>
S ym_action(const GaugeConnection<S>& c);

/// Charge-0 multiplets; the connection drops out.
template <class S>
S sm_action(const std::vector<Matrix<S>>& t1, const std::vector<Matrix<S>>& t2, const PolynomialPotential& v);

/// ¼(‖∇T₁‖²_L − s(V(q₁q₁*)) − ‖∇̂T₂‖²_R + s(V(q₂*q₂))).
template <class S>
S gsm_action(const FieldConfiguration<S>& cfg);

template <class S>
S ymsm_action(const FieldConfiguration<S>& cfg) {
  return ym_action(cfg.connection) + gsm_action(cfg);
}

// ---------------------------------------------------------------- residuals

template <class S>
struct YMResidual {
  DiffForm<S> left;   // d^{∇⋆L} F, here d^{⋆L}dA
  DiffForm<S> right;  // d^{∇̂⋆R} F̂
};

template <class S>
YMResidual<S> ym_residual(const GaugeConnection<S>& c);

template <class S>
struct SMResidual {
  std::vector<Matrix<S>> left;   // d^⋆d p − V′(pp*)* p
  std::vector<Matrix<S>> right;  // d^⋆d(p*) − V′(p*p) p*
};

template <class S>
SMResidual<S> sm_residuals(const std::vector<Matrix<S>>& t1, const std::vector<Matrix<S>>& t2,
                           const PolynomialPotential& v);

/// −(1/n)(p₁*dp₁ − p₂dp₂*) + p₁*p₁A − p₂p₂*A − 2d^⋆dA; for n = 0 the Yang–Mills residual d^⋆dA.
template <class S>
DiffForm<S> ymsm_connection_residual(const FieldConfiguration<S>& cfg);

template <class S>
struct SectionResidual {
  Matrix<S> left;   // ∇†∇q₁ − V′(q₁q₁*)* q₁
  Matrix<S> right;  // ∇̂†∇̂q₂ − q₂ V′(q₂*q₂)*
};

/// Uses the true adjoint of the covariant derivative.
template <class S>
SectionResidual<S> ymsm_section_residuals(const FieldConfiguration<S>& cfg);

/// Same equations with cov_codifferential_formula in place of the adjoint.
template <class S>
SectionResidual<S> ymsm_section_residuals_formula(const FieldConfiguration<S>& cfg);

enum class QuadraticSign { Symmetric, Derived };

/// Four-term expansion of ∇^⋆∇T in the scaled normalization (coefficient of Tⁿ, resp. of T^{−n}).
/// Symmetric uses +n on both quadratic terms; Derived uses −n on the left one, which is what ∇^⋆∇ gives.
template <class S>
SectionResidual<S> section_laplacian_expansion(const FieldConfiguration<S>& cfg, QuadraticSign sign);

/// (d^{∇⋆})² applied to the curvature, left and right.
template <class S>
YMResidual<S> continuity_residual(const GaugeConnection<S>& c);

// ---------------------------------------------------------------- variational checks

enum class ActionKind { YM, GSM, Total };

/// Central difference of Re S(cfg + t·dir) at t = 0.
double action_gradient_fd(const CConfig& cfg, const FieldDirection& dir, double step = 1e-6,
                          ActionKind kind = ActionKind::Total);

/// d/dt Re S(cfg + t·dir) from the analytic residuals:
/// ½Re⟨λ|G⟩ + ½Re⟨U₁|R₁⟩_L − ½Re⟨U₂|R₂⟩_R (−Re⟨λ|d^⋆dA⟩ for YM alone).
double predicted_derivative(const CConfig& cfg, const FieldDirection& dir, ActionKind kind = ActionKind::Total);

/// Least-squares p with dp ≈ A; returns p and ‖dp − A‖ (Frobenius).
struct PotentialReconstruction {
  CMatrix p;
  double residual = 0.0;
};
PotentialReconstruction reconstruct_potential(const GaugeConnection<Complex>& c);

// ---------------------------------------------------------------- solver

enum class Problem { YM, SM, YMSM };
enum class StepRule { GradientDescent, GaussNewton };

struct SolverOptions {
  Problem problem = Problem::YM;
  StepRule step_rule = StepRule::GradientDescent;
  double tolerance = 1e-8;
  long max_iterations = 100000;
  double fd_step = 1e-6;
};

struct GradientCheck {
  std::string equation;
  double analytic = 0.0;
  double finite_difference = 0.0;
  double relative_error = 0.0;
};

struct FieldReport {
  double ym_action = 0.0;
  double gsm_action = 0.0;
  double total_action = 0.0;
  double total_action_imag = 0.0;
  std::map<std::string, double> residual_norms;
  double residual_total = 0.0;
  double curvature_norm = 0.0;
  std::vector<GradientCheck> gradient_checks;
  double gradient_check_max_error = 0.0;
  long iterations = 0;
  bool converged = false;
  std::string diagnostic;
  std::uint64_t seed = 0;
  std::string ledger_id;
  double wall_time_seconds = 0.0;
};

/// Residuals of the selected problem, by name.
std::map<std::string, CForm> problem_residuals(const CConfig& cfg, Problem problem);

/// Fills actions, residual norms and a seeded gradient-check table.
FieldReport evaluate(const CConfig& cfg, Problem problem, std::uint64_t seed, int gradient_samples = 4);

struct SolveResult {
  CConfig config;
  FieldReport report;
};

SolveResult solve_stationary(const CConfig& start, const SolverOptions& options, std::uint64_t seed = 0);

// ---------------------------------------------------------------- randomness

/// Deterministic across platforms: mt19937_64 with hand-rolled uniform/normal maps.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  Complex complex_normal() { return {normal(), normal()}; }
  CMatrix matrix(int n, double scale = 1.0);
  CForm form(int n, int grade, double scale = 1.0);
  /// Entries (a + bi)/den with a, b integers in [−range, range].
  QMatrix rational_matrix(int n, long range = 5, long den = 3);
  QForm rational_form(int n, int grade, long range = 5, long den = 3);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ncym
