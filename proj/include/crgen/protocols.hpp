#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crgen/linalg.hpp"
#include "crgen/quantum.hpp"

namespace crgen {

/// Positive operator-valued measure with string outcome labels. Labels are
/// bit strings for computational-basis constructions but are not restricted
/// to them.
struct Povm {
  std::map<std::string, ComplexMatrix> elements;

  std::size_t dim() const;

  /// Number of qubits: log2(dim); throws when dim is not a power of two.
  std::size_t qubits() const;

  /// Throws std::runtime_error naming the first violated invariant:
  /// elements PSD (eigenvalues >= -1e-10) and summing to the identity
  /// within 1e-10 entrywise.
  void validate() const;
};

/// One-round classical-message strategy. Alice measures her n qubits with a
/// joint POVM over (output, message) labels; Bob measures his n qubits with
/// a POVM selected by the received message.
struct ClassicalStrategy {
  std::size_t n = 0;  // qubit pairs
  std::size_t t = 0;  // message bits
  /// message label -> (output label -> element); the union over all
  /// (output, message) pairs forms one POVM on Alice's side.
  std::map<std::string, std::map<std::string, ComplexMatrix>> alice;
  /// message label -> Bob's POVM over output labels.
  std::map<std::string, Povm> bob;

  void validate() const;
};

/// One-round quantum-message strategy. Alice applies a quantum instrument:
/// for classical output a, a trace-nonincreasing sub-channel from her n
/// qubits to a t-qubit message; the sub-channels sum to a trace-preserving
/// map. Bob measures message (x) his-qubits, message factor first.
struct QuantumStrategy {
  std::size_t n = 0;
  std::size_t t = 0;
  std::map<std::string, QuantumChannel> subchannels;  // output label -> sub-channel
  Povm bob;                                           // on 2^t * 2^n

  void validate() const;
};

/// P(outputs agree) when Alice and Bob each measure their halves of
/// Phi_rho^{(x) n} with no communication. Evaluated two ways (direct traces
/// on the 4^n-dimensional state and the 2^n-dimensional reduction through
/// the depolarizing channel); disagreement beyond 1e-10 throws.
double success_free(const Povm& alice, const Povm& bob, double rho, std::size_t n);

double success_classical(const ClassicalStrategy& s, double rho);

double success_quantum(const QuantumStrategy& s, double rho);

/// Min-entropy of Alice's output distribution when measuring the maximally
/// mixed state (the marginal of Phi_rho^{(x) n} for every rho):
/// -log2 max_a 2^{-n} Tr[P_a].
double output_min_entropy(const Povm& alice);

/// Classical-strategy variant, message marginalized out:
/// mu(a) = sum_pi 2^{-n} Tr[P_{a,pi}].
double output_min_entropy(const ClassicalStrategy& s);

/// Quantum-strategy variant: mu(a) = Tr[C_a(I/2^n)].
double output_min_entropy(const QuantumStrategy& s);

/// Strictest form for classical strategies: min-entropy of the joint
/// (output, message) distribution, no marginalization.
double joint_output_min_entropy(const ClassicalStrategy& s);

/// Both parties measure every qubit in the computational basis. Labels are
/// n-bit strings, most significant qubit first. Success is ((1+rho)/2)^n.
std::pair<Povm, Povm> basis_protocol(std::size_t n);

/// Example quantum strategy (t = n): Alice measures all n qubits in the
/// basis and forwards the post-measurement state; Bob reads the message.
/// Success is 1 for every rho; output min-entropy is n.
QuantumStrategy quantum_measure_forward_strategy(std::size_t n);

/// Example quantum strategy (t <= n): Alice measures all n qubits, embeds
/// the first t outcome bits into a fresh message register; Bob takes those
/// bits from the message and measures his remaining qubits for the rest.
/// Success is ((1+rho)/2)^(n-t).
QuantumStrategy quantum_measure_embed_strategy(std::size_t n, std::size_t t);

struct SeesawResult {
  Povm alice;
  Povm bob;
  double value = 0.0;
  int iterations = 0;
};

/// Alternating maximization of the agreement probability over POVMs with
/// 2^k outcomes on each side, all element traces pinned to 2^{n-k} (the
/// min-entropy-k feasible set with every cap tight). One side is updated at
/// a time; each update is an exact best response on a pair of elements with
/// their sum held fixed, so the objective never decreases.
SeesawResult seesaw_refine(const Povm& alice0, const Povm& bob0, double rho, std::size_t n,
                           std::size_t k, int iters);

/// Seesaw from a random POVM start drawn from `seed`.
SeesawResult seesaw_optimize(double rho, std::size_t n, std::size_t k, int iters,
                             std::uint64_t seed);

/// Best of: one run from the coarse computational-basis start (first k bits
/// of the outcome) plus `restarts` random starts with seeds seed+1, ...
SeesawResult seesaw_best_of(double rho, std::size_t n, std::size_t k, int iters, int restarts,
                            std::uint64_t seed);

/// n-bit binary label of x, most significant bit first.
std::string bit_label(std::size_t x, std::size_t bits);

}  // namespace crgen
