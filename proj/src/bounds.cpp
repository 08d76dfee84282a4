#include "crgen/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

#include "crgen/quantum.hpp"

namespace crgen {

namespace {

void require_rho(double rho) {
  if (std::isnan(rho) || rho < 0.0 || rho > 1.0)
    throw std::domain_error("bounds: rho must lie in [0, 1]");
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw std::domain_error("bounds: gamma must lie in (0, 1)");
}

void require_k(double k) {
  if (!(k >= 1.0)) throw std::domain_error("bounds: k must be >= 1");
}

// Golden-section maximizer on log(delta) over [1e-9, 1e9], refined until the
// bracket is narrower than 1e-10. The objectives here are unimodal in delta.
double golden_max(const std::function<double(double)>& f) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::log(1e-9), b = std::log(1e9);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(std::exp(c)), fd = f(std::exp(d));
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(std::exp(d));
    }
  }
  return std::max(fc, fd);
}

}  // namespace

double bound_free(double rho, double k) {
  require_rho(rho);
  if (!(k >= 0.0)) throw std::domain_error("bound_free: k must be >= 0");
  return std::pow(2.0, -k * (1.0 - rho) / (1.0 + rho));
}

double bound_classical_lb(double rho, double gamma, double k) {
  require_rho(rho);
  require_gamma(gamma);
  require_k(k);
  const double c = 1.0 - rho * rho;
  const double value = (c * (1.0 - gamma) - 2.0 * std::sqrt(c * (1.0 - c) * gamma)) * k;
  return std::max(value, 0.0);
}

double bound_classical_sweep(double rho, double gamma, double k) {
  require_rho(rho);
  require_gamma(gamma);
  require_k(k);
  const double c = 1.0 - rho * rho;
  const auto objective = [&](double delta) {
    return (c / (1.0 + (1.0 - c) * delta) - gamma / delta - gamma) * k;
  };
  double best = golden_max(objective);
  best = std::max(best, objective(1e-9));
  best = std::max(best, objective(1e9));
  // delta -> infinity asymptote: (1-gamma) k when the channel is noiseless
  // (c = 1), -gamma k otherwise.
  best = std::max(best, c >= 1.0 ? (1.0 - gamma) * k : -gamma * k);
  return std::max(best, 0.0);
}

double bound_quantum_lb(double rho, double gamma, double k) {
  require_rho(rho);
  require_gamma(gamma);
  require_k(k);
  const double c = (1.0 - rho * rho) / (1.0 + rho * rho);
  const double value =
      (c - c * c * gamma - std::sqrt(c * (1.0 - c * c) * (2.0 - c * gamma) * gamma)) * k;
  return std::max(value, 0.0);
}

double bound_quantum_sweep(double rho, double gamma, double k) {
  require_rho(rho);
  require_gamma(gamma);
  require_k(k);
  const double r2 = rho * rho;
  // p = 1 + rho^2 delta and q = 1 + delta keep rho admissible for every
  // delta > 0; the objective is the induced rate bound at that exponent pair.
  const auto objective = [&](double delta) {
    const double numer = (1.0 - r2) * delta - gamma * (1.0 + delta + r2 * delta + r2 * delta * delta);
    const double denom = (1.0 + r2) * delta + 2.0 * r2 * delta * delta;
    return (numer / denom) * k;
  };
  double best = golden_max(objective);
  best = std::max(best, objective(1e-9));
  best = std::max(best, objective(1e9));
  best = std::max(best, rho == 0.0 ? (1.0 - gamma) * k : -0.5 * gamma * k);
  return std::max(best, 0.0);
}

double superdense_rate(double rho) {
  require_rho(rho);
  return 2.0 - von_neumann_entropy(isotropic_state(rho, 1));
}

double achievable_quantum_rate(double rho) {
  require_rho(rho);
  return (1.0 - rho * rho) / std::max(1.0, superdense_rate(rho));
}

double capacity_upper(double rho) {
  require_rho(rho);
  return 1.0 + rho * rho;
}

BoundModel bound_model_from_name(const std::string& name) {
  if (name == "free") return BoundModel::free;
  if (name == "classical") return BoundModel::classical;
  if (name == "quantum") return BoundModel::quantum;
  if (name == "capacity") return BoundModel::capacity;
  if (name == "superdense") return BoundModel::superdense;
  throw std::invalid_argument("unknown bound model '" + name + "'");
}

std::string bound_model_name(BoundModel model) {
  switch (model) {
    case BoundModel::free: return "free";
    case BoundModel::classical: return "classical";
    case BoundModel::quantum: return "quantum";
    case BoundModel::capacity: return "capacity";
    case BoundModel::superdense: return "superdense";
  }
  throw std::logic_error("bound_model_name: unknown model");
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 0) throw std::invalid_argument("linear_grid: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return grid;
}

BoundCurve evaluate_bound_curve(BoundModel model, const std::vector<double>& rho_grid,
                                const std::vector<double>& gamma_grid, double k) {
  if (rho_grid.empty() || gamma_grid.empty())
    throw std::invalid_argument("evaluate_bound_curve: grids must be nonempty");
  BoundCurve curve;
  curve.model = model;
  curve.k = k;
  for (double gamma : gamma_grid) {
    for (double rho : rho_grid) {
      double value = 0.0;
      switch (model) {
        case BoundModel::free: value = bound_free(rho, k); break;
        case BoundModel::classical: value = bound_classical_lb(rho, gamma, k); break;
        case BoundModel::quantum: value = bound_quantum_lb(rho, gamma, k); break;
        case BoundModel::capacity: value = capacity_upper(rho); break;
        case BoundModel::superdense: value = superdense_rate(rho); break;
      }
      curve.samples.push_back({rho, gamma, value});
    }
  }
  return curve;
}

std::string format_g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string curve_to_csv(const BoundCurve& curve) {
  std::string out = "model,rho,gamma,value\n";
  const std::string name = bound_model_name(curve.model);
  for (const auto& s : curve.samples) {
    out += name;
    out += ',';
    out += format_g12(s.rho);
    out += ',';
    out += format_g12(s.gamma);
    out += ',';
    out += format_g12(s.value);
    out += '\n';
  }
  return out;
}

std::string curve_to_json(const BoundCurve& curve) {
  std::string out = "{\n  \"meta\": {\"model\": \"" + bound_model_name(curve.model) +
                    "\", \"k\": " + format_g12(curve.k) + "},\n  \"samples\": [\n";
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const auto& s = curve.samples[i];
    out += "    {\"rho\": " + format_g12(s.rho) + ", \"gamma\": " + format_g12(s.gamma) +
           ", \"value\": " + format_g12(s.value) + "}";
    out += (i + 1 < curve.samples.size()) ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

}  // namespace crgen
