#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "crgen/linalg.hpp"
#include "crgen/quantum.hpp"

namespace crgen {

/// Deterministic generator: mt19937_64 plus an explicit Box-Muller transform,
/// because std::normal_distribution's stream is implementation-defined.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double gaussian();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

enum class EnsembleKind { ginibre, hermitian, psd, density, povm_element };

std::string ensemble_kind_name(EnsembleKind kind);

struct RandomEnsemble {
  EnsembleKind kind = EnsembleKind::ginibre;
  std::size_t dim = 2;
  std::uint64_t seed = 0;
};

/// Draws `count` matrices. Identical (kind, dim, seed, count) reproduce the
/// same matrices bit for bit under this generator. For povm_element the
/// returned family is a complete POVM: PSD elements summing to the identity.
std::vector<ComplexMatrix> sample(const RandomEnsemble& ensemble, std::size_t count);

/// Random trace-preserving channel: a Haar-ish isometry built by
/// Gram-Schmidt on a Ginibre block, cut into n_kraus row blocks.
QuantumChannel random_trace_preserving_channel(std::size_t in_dim, std::size_t out_dim,
                                               std::size_t n_kraus, Prng& rng);

/// Everything needed to regenerate one checked case deterministically.
struct CheckParams {
  double p = 0.0;
  double q = 0.0;
  double rho = 0.0;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  long index = -1;
  std::string kind;

  std::string to_string() const;
};

/// One inequality instance: slack = rhs - lhs, so negative slack means a
/// violation. Checks that compare two routes to the same value report
/// slack = -|difference| instead.
struct SlackReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  CheckParams params;
};

/// 2^{-n/q} ||(Delta_rho^n (x) id_m)(a)||_q <= 2^{-n/p} ||a||_p for Hermitian
/// a on n+m qubits, 1 <= p <= q, rho <= sqrt((p-1)/(q-1)) (+1e-12 slop, with
/// p = 1 admitting only rho = 0 when q > 1).
SlackReport check_hypercontractivity(const ComplexMatrix& a, double rho, double p, double q,
                                     int n, int m);

/// Tr[sum A_i B_i] <= (Tr sum |A_i|^p)^{1/p} (Tr sum |B_i|^q)^{1/q} with
/// p = q/(q-1), for equal-length Hermitian sequences.
SlackReport check_holder_sequences(const std::vector<ComplexMatrix>& as,
                                   const std::vector<ComplexMatrix>& bs, double q);

/// ||Tr_B m||_p <= dim(B)^{(p-1)/p} ||m||_p on a dims.first x dims.second
/// bipartite space (B is the second factor).
SlackReport check_partial_trace_norm(const ComplexMatrix& m, double p,
                                     std::pair<std::size_t, std::size_t> dims);

/// ||m||_q^q <= ||m||_inf^{q-1} ||m||_1 for q >= 1.
SlackReport check_spectral_power(const ComplexMatrix& m, double q);

/// ||(c (x) id)(EPR^n)||_inf <= 2^{-n+t} for a trace-nonincreasing channel
/// c from n qubits to t qubits.
SlackReport check_epr_channel_norm(const QuantumChannel& c, int n);

/// |Tr[(A (x) B) Phi_rho^n] - 2^{-n} Tr[Delta_rho^n(A) B^T]| reported as
/// slack = -|lhs - rhs|; A, B arbitrary 2^n x 2^n matrices.
SlackReport check_trace_identity(const ComplexMatrix& a, const ComplexMatrix& b, double rho,
                                 int n);

enum class Suite {
  hypercontractivity,
  holder,
  partial_trace,
  spectral_power,
  epr_channel,
  trace_identity,
};

std::string suite_name(Suite s);

struct SuiteConfig {
  long trials = 10;       // random draws per parameter cell
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  double tamper = 0.0;    // test hook: scales hypercontractivity lhs by 1+tamper
};

struct SuiteResult {
  std::string name;
  long trials = 0;
  double min_slack = 0.0;
  CheckParams worst;
  std::optional<ComplexMatrix> witness;

  bool pass(double tolerance) const { return min_slack >= -tolerance; }
};

/// Runs one suite over its fixed parameter grid with `trials` draws per cell.
SuiteResult run_suite(Suite s, const SuiteConfig& cfg);

std::vector<SuiteResult> run_all_suites(const SuiteConfig& cfg);

/// Cheap falsification pressure: greedy random search over PSD inputs for
/// the most negative hypercontractivity slack. Entrywise Gaussian
/// perturbations on the Ginibre factor, step decays by 0.9 on rejection.
SlackReport extremal_search_hypercontractivity(double rho, double p, double q, int n, int m,
                                               std::uint64_t seed, int iters = 200);

}  // namespace crgen
