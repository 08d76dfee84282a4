#pragma once

#include <string>
#include <vector>

namespace crgen {

/// Largest agreement probability of any min-entropy-k strategy without
/// communication: 2^{-k (1-rho)/(1+rho)}.
double bound_free(double rho, double k);

/// Closed-form communication lower bound (bits) for classical messages at
/// agreement probability 2^{-gamma k}: (C (1-gamma) - 2 sqrt(C (1-C) gamma)) k
/// with C = 1 - rho^2, clamped at 0.
double bound_classical_lb(double rho, double gamma, double k);

/// Same bound through the underlying one-parameter family:
/// sup_delta of (C/(1 + (1-C) delta) - gamma/delta - gamma) k, maximized
/// numerically over delta and clamped at 0.
double bound_classical_sweep(double rho, double gamma, double k);

/// Closed-form communication lower bound (qubits) for quantum messages:
/// (C - C^2 gamma - sqrt(C (1-C^2) (2 - C gamma) gamma)) k with
/// C = (1-rho^2)/(1+rho^2), clamped at 0.
double bound_quantum_lb(double rho, double gamma, double k);

/// Quantum bound through its delta-parameterized family with p = 1 + rho^2
/// delta, q = 1 + delta, maximized numerically and clamped at 0.
double bound_quantum_sweep(double rho, double gamma, double k);

/// Qubits of communication saved per EPR pair by superdense-style coding:
/// 2 - H(Phi_rho), where H is the von Neumann entropy of one isotropic pair.
double superdense_rate(double rho);

/// Achievable common-randomness rate per qubit of communication:
/// (1 - rho^2) / max{1, 2 - H(Phi_rho)}.
double achievable_quantum_rate(double rho);

/// Upper bound on common randomness per qubit: 1 + rho^2.
double capacity_upper(double rho);

enum class BoundModel { free, classical, quantum, capacity, superdense };

BoundModel bound_model_from_name(const std::string& name);
std::string bound_model_name(BoundModel model);

struct BoundSample {
  double rho = 0.0;
  double gamma = 0.0;
  double value = 0.0;
};

/// One evaluated curve; samples are ordered gamma-major, rho ascending
/// within each gamma slice.
struct BoundCurve {
  BoundModel model = BoundModel::free;
  double k = 1.0;
  std::vector<BoundSample> samples;
};

/// Inclusive linear grid with `count` points from lo to hi (count >= 1;
/// count == 1 yields {lo}).
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

/// Evaluates a bound model over the rho x gamma grid. Models that ignore
/// gamma (free, capacity, superdense) are sampled once per rho with
/// gamma echoed as given (use a single-point gamma grid).
BoundCurve evaluate_bound_curve(BoundModel model, const std::vector<double>& rho_grid,
                                const std::vector<double>& gamma_grid, double k);

/// CSV with header "model,rho,gamma,value", every number printed with 12
/// significant digits; byte-identical across runs for identical inputs.
std::string curve_to_csv(const BoundCurve& curve);

/// JSON equivalent of curve_to_csv with the same ordering and formatting.
std::string curve_to_json(const BoundCurve& curve);

/// Shortest round-trippable 12-significant-digit decimal form ("%.12g").
std::string format_g12(double x);

}  // namespace crgen
