#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ncym/fields.hpp"

namespace ncym {

std::map<std::string, CForm> problem_residuals(const CConfig& cfg, Problem problem) {
  std::map<std::string, CForm> out;
  switch (problem) {
    case Problem::YM: {
      auto r = ym_residual(cfg.connection);
      out.emplace("ym_left", std::move(r.left));
      out.emplace("ym_right", std::move(r.right));
      break;
    }
    case Problem::SM: {
      auto r = sm_residuals<Complex>({cfg.left.p}, {cfg.right.p}, cfg.potential);
      out.emplace("sm_left", CForm::scalar(r.left.front()));
      out.emplace("sm_right", CForm::scalar(r.right.front()));
      break;
    }
    case Problem::YMSM: {
      out.emplace("connection", ymsm_connection_residual(cfg));
      auto r = ymsm_section_residuals(cfg);
      out.emplace("section_left", CForm::scalar(r.left));
      out.emplace("section_right", CForm::scalar(r.right));
      break;
    }
  }
  return out;
}

namespace {

double total_norm(const std::map<std::string, CForm>& r) {
  double s = 0.0;
  for (const auto& [_, f] : r) {
    const double x = frobenius(f);
    s += x * x;
  }
  return std::sqrt(s);
}

// Real coordinates of the variables a problem moves.
class Coordinates {
 public:
  Coordinates(const CConfig& base, Problem problem) : base_(base), problem_(problem) {
    n_ = base.algebra_size();
    d_ = n_ * n_ - 1;
  }

  bool moves_connection() const { return problem_ != Problem::SM; }
  bool moves_sections() const { return problem_ != Problem::YM; }

  int size() const {
    const int nn = n_ * n_;
    return 2 * ((moves_connection() ? d_ * nn : 0) + (moves_sections() ? 2 * nn : 0));
  }

  Eigen::VectorXd pack(const CConfig& cfg) const {
    Eigen::VectorXd x(size());
    int k = 0;
    auto put = [&](const CMatrix& m) {
      for (const auto& z : m.data()) {
        x(k++) = z.real();
        x(k++) = z.imag();
      }
    };
    if (moves_connection())
      for (int a = 0; a < d_; ++a) put(cfg.connection.A.coeff(Mask{1} << a));
    if (moves_sections()) {
      put(cfg.left.p);
      put(cfg.right.p);
    }
    return x;
  }

  CConfig unpack(const Eigen::VectorXd& x) const {
    CConfig cfg = base_;
    int k = 0;
    auto get = [&]() {
      CMatrix m(n_);
      for (auto& z : m.data()) {
        z = Complex(x(k), x(k + 1));
        k += 2;
      }
      return m;
    };
    if (moves_connection()) {
      CForm a(n_);
      for (int i = 0; i < d_; ++i) a.set(Mask{1} << i, get());
      cfg.connection.A = a;
    }
    if (moves_sections()) {
      cfg.left.p = get();
      cfg.right.p = get();
    }
    return cfg;
  }

 private:
  CConfig base_;
  Problem problem_;
  int n_ = 0;
  int d_ = 0;
};

Eigen::VectorXd flatten(const std::map<std::string, CForm>& r) {
  std::vector<double> v;
  for (const auto& [_, f] : r)
    for (Mask m = 0; m <= f.top_mask(); ++m) {
      if (f.components().find(m) == f.components().end()) {
        // Keep a fixed layout: absent components contribute zeros.
        for (int i = 0; i < 2 * f.algebra_size() * f.algebra_size(); ++i) v.push_back(0.0);
        continue;
      }
      const CMatrix c = f.coeff(m);
      for (const auto& z : c.data()) {
        v.push_back(z.real());
        v.push_back(z.imag());
      }
    }
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct System {
  const Coordinates& coords;
  Problem problem;

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const { return flatten(problem_residuals(coords.unpack(x), problem)); }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, Eigen::Index rows, double h) const {
    Eigen::MatrixXd j(rows, x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      xp(i) = x(i) + h;
      const Eigen::VectorXd rp = residual(xp);
      xp(i) = x(i) - h;
      const Eigen::VectorXd rm = residual(xp);
      xp(i) = x(i);
      j.col(i) = (rp - rm) / (2.0 * h);
    }
    return j;
  }
};

}  // namespace

FieldReport evaluate(const CConfig& cfg, Problem problem, std::uint64_t seed, int gradient_samples) {
  FieldReport rep;
  rep.seed = seed;
  rep.ledger_id = ConventionLedger::standard().id();
  const Complex ym = ym_action(cfg.connection);
  const Complex gsm = gsm_action(cfg);
  rep.ym_action = ym.real();
  rep.gsm_action = gsm.real();
  rep.total_action = problem == Problem::YM ? rep.ym_action
                     : problem == Problem::SM ? rep.gsm_action
                                              : rep.ym_action + rep.gsm_action;
  rep.total_action_imag = problem == Problem::YM ? ym.imag()
                          : problem == Problem::SM ? gsm.imag()
                                                   : (ym + gsm).imag();
  const auto res = problem_residuals(cfg, problem);
  for (const auto& [name, f] : res) rep.residual_norms[name] = frobenius(f);
  rep.residual_total = total_norm(res);
  rep.curvature_norm = frobenius(curvature(cfg.connection));

  // Seeded directional derivative checks: analytic pairing against central differences.
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int n = cfg.algebra_size();
  const CForm zero_form(n);
  const CMatrix zero_mat(n);
  struct Probe {
    std::string name;
    ActionKind kind;
    int which;  // 0 connection, 1 left section, 2 right section
  };
  std::vector<Probe> probes;
  if (problem == Problem::YM) probes.push_back({"ym", ActionKind::YM, 0});
  if (problem == Problem::SM) {
    probes.push_back({"sm_left", ActionKind::GSM, 1});
    probes.push_back({"sm_right", ActionKind::GSM, 2});
  }
  if (problem == Problem::YMSM) {
    probes.push_back({"connection", ActionKind::Total, 0});
    probes.push_back({"section_left", ActionKind::Total, 1});
    probes.push_back({"section_right", ActionKind::Total, 2});
  }
  double worst = 0.0;
  for (const auto& p : probes)
    for (int s = 0; s < gradient_samples; ++s) {
      FieldDirection dir{p.which == 0 ? rng.form(n, 1) : zero_form, p.which == 1 ? rng.matrix(n) : zero_mat,
                         p.which == 2 ? rng.matrix(n) : zero_mat};
      GradientCheck g;
      g.equation = p.name;
      g.analytic = predicted_derivative(cfg, dir, p.kind);
      g.finite_difference = action_gradient_fd(cfg, dir, 1e-6, p.kind);
      // Relative to the larger magnitude, floored at 1 so stationary points do not divide by ~0.
      g.relative_error =
          std::abs(g.analytic - g.finite_difference) / std::max({1.0, std::abs(g.analytic), std::abs(g.finite_difference)});
      worst = std::max(worst, g.relative_error);
      rep.gradient_checks.push_back(g);
    }
  rep.gradient_check_max_error = worst;
  return rep;
}

SolveResult solve_stationary(const CConfig& start, const SolverOptions& options, std::uint64_t seed) {
  if (!(options.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (!(options.fd_step > 0.0)) throw DomainError("finite-difference step must be positive");
  if (options.max_iterations < 0) throw DomainError("max_iterations must be non-negative");
  const auto t0 = std::chrono::steady_clock::now();

  const Coordinates coords(start, options.problem);
  const System sys{coords, options.problem};
  Eigen::VectorXd x = coords.pack(start);
  Eigen::VectorXd r = sys.residual(x);
  double f = 0.5 * r.squaredNorm();

  long it = 0;
  bool converged = false;
  std::string diagnostic;
  double alpha = 1.0;
  double mu = 1e-3;

  for (;; ++it) {
    if (!std::isfinite(f)) {
      diagnostic = "non-finite residual at iteration " + std::to_string(it);
      break;
    }
    if (std::sqrt(2.0 * f) <= options.tolerance) {
      converged = true;
      break;
    }
    if (it >= options.max_iterations) {
      diagnostic = "iteration limit reached";
      break;
    }
    const Eigen::MatrixXd j = sys.jacobian(x, r.size(), options.fd_step);
    const Eigen::VectorXd g = j.transpose() * r;
    if (!g.allFinite()) {
      diagnostic = "non-finite gradient at iteration " + std::to_string(it);
      break;
    }

    if (options.step_rule == StepRule::GradientDescent) {
      const double gg = g.squaredNorm();
      if (gg == 0.0) {
        diagnostic = "zero gradient at a non-stationary point";
        break;
      }
      // Armijo backtracking, restarting from twice the last accepted step.
      alpha = std::min(alpha * 2.0, 1e6);
      bool accepted = false;
      while (alpha > 1e-20) {
        const Eigen::VectorXd xn = x - alpha * g;
        const Eigen::VectorXd rn = sys.residual(xn);
        const double fn = 0.5 * rn.squaredNorm();
        if (std::isnan(fn)) {
          diagnostic = "NaN in line search at iteration " + std::to_string(it);
          break;
        }
        if (fn <= f - 1e-4 * alpha * gg) {
          x = xn;
          r = rn;
          f = fn;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!diagnostic.empty()) break;
      if (!accepted) {
        diagnostic = "line search stalled at iteration " + std::to_string(it);
        break;
      }
    } else {
      // Levenberg–Marquardt damping of the Gauss–Newton step.
      const Eigen::MatrixXd h = j.transpose() * j;
      bool accepted = false;
      for (int tries = 0; tries < 60; ++tries) {
        Eigen::MatrixXd hd = h;
        hd.diagonal().array() += mu * (1.0 + h.diagonal().array());
        const Eigen::VectorXd step = hd.ldlt().solve(-g);
        const Eigen::VectorXd xn = x + step;
        const Eigen::VectorXd rn = sys.residual(xn);
        const double fn = 0.5 * rn.squaredNorm();
        if (std::isnan(fn)) {
          diagnostic = "NaN in damped step at iteration " + std::to_string(it);
          break;
        }
        if (fn < f) {
          x = xn;
          r = rn;
          f = fn;
          mu = std::max(mu / 3.0, 1e-12);
          accepted = true;
          break;
        }
        mu *= 4.0;
      }
      if (!diagnostic.empty()) break;
      if (!accepted) {
        diagnostic = "damped step stalled at iteration " + std::to_string(it);
        break;
      }
    }
  }

  SolveResult out{coords.unpack(x), {}};
  out.report = evaluate(out.config, options.problem, seed);
  out.report.iterations = it;
  out.report.converged = converged && out.report.residual_total <= options.tolerance;
  if (converged && !out.report.converged) diagnostic = "residual above tolerance on re-evaluation";
  out.report.diagnostic = diagnostic;
  out.report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace ncym
