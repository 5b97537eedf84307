#include "ncym/serialize.hpp"

#include <cmath>

namespace ncym {

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.size(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const CForm& f) {
  json out = json::object();
  for (const auto& [mask, c] : f.components())
    if (!c.is_zero()) out[mask_to_string(mask, f.dimension())] = to_json(c);
  return out;
}

json to_json(const CConfig& cfg) {
  return {{"algebra_size", cfg.algebra_size()},
          {"charge", cfg.charge()},
          {"potential", cfg.potential.coefficients},
          {"A", to_json(cfg.connection.A)},
          {"q1", to_json(cfg.left.p)},
          {"q2", to_json(cfg.right.p)}};
}

json to_json(const FieldReport& r) {
  json checks = json::array();
  for (const auto& g : r.gradient_checks)
    checks.push_back({{"equation", g.equation},
                      {"analytic", g.analytic},
                      {"finite_difference", g.finite_difference},
                      {"relative_error", g.relative_error}});
  json norms = json::object();
  for (const auto& [k, v] : r.residual_norms) norms[k] = v;
  return {{"ledger_id", r.ledger_id},
          {"seed", r.seed},
          {"actions", {{"ym", r.ym_action}, {"gsm", r.gsm_action}, {"total", r.total_action}, {"total_imag", r.total_action_imag}}},
          {"residual_norms", norms},
          {"residual_total", r.residual_total},
          {"curvature_norm", r.curvature_norm},
          {"gradient_checks", checks},
          {"gradient_check_max_error", r.gradient_check_max_error},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"diagnostic", r.diagnostic}};
}

namespace {

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw DomainError(where + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw DomainError(where + ": not finite");
  return x;
}

}  // namespace

CMatrix matrix_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw DomainError(where + ": expected " + std::to_string(n) + " rows");
  CMatrix m(n);
  for (int i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    const std::string rw = where + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw DomainError(rw + ": expected " + std::to_string(n) + " entries");
    for (int k = 0; k < n; ++k) {
      const auto& e = row[static_cast<std::size_t>(k)];
      const std::string ew = rw + "[" + std::to_string(k) + "]";
      if (e.is_number()) {
        m(i, k) = Complex(number_at(e, ew), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(i, k) = Complex(number_at(e[0], ew + "[0]"), number_at(e[1], ew + "[1]"));
      } else {
        throw DomainError(ew + ": expected a number or [re, im]");
      }
    }
  }
  return m;
}

CForm form_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_object()) throw DomainError(where + ": expected an object keyed by index strings");
  CForm f(n);
  for (const auto& [key, value] : j.items()) {
    Mask m = 0;
    try {
      m = mask_from_string(key, f.dimension());
    } catch (const std::exception& e) {
      throw DomainError(where + "." + key + ": " + e.what());
    }
    f.add(m, matrix_from_json(value, n, where + "." + key));
  }
  return f;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace ncym
