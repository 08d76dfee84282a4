#pragma once

#include <cstddef>
#include <vector>

#include "crgen/linalg.hpp"

namespace crgen {

/// Completely positive map in Kraus form. Each Kraus operator is
/// out_dim x in_dim; the map is trace-preserving when sum K†K = identity
/// and trace-nonincreasing when sum K†K <= identity.
struct QuantumChannel {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<ComplexMatrix> kraus;

  static QuantumChannel from_kraus(std::vector<ComplexMatrix> ops);

  /// sum_j K_j† K_j (in_dim x in_dim).
  ComplexMatrix kraus_gram() const;
  bool is_trace_preserving(double tol = 1e-10) const;
  bool is_trace_nonincreasing(double tol = 1e-10) const;

  /// Applies the map to a state on the full input space.
  ComplexMatrix apply(const ComplexMatrix& m) const;
};

/// Heisenberg-picture adjoint: Kraus operators are daggered, dims swap.
QuantumChannel channel_adjoint(const QuantumChannel& c);

/// Applies `c` to tensor factor `on` of a state with the given factor
/// dimensions; the other factors are untouched. factor_dims[on] must equal
/// c.in_dim and that slot becomes c.out_dim in the result.
ComplexMatrix channel_apply(const QuantumChannel& c, const ComplexMatrix& m, std::size_t on,
                            const std::vector<std::size_t>& factor_dims);

/// Qubit depolarizing channel phi -> rho*phi + (1-rho)*Tr[phi]*I/2 in Kraus
/// form, rho in [0, 1].
QuantumChannel depolarizing_channel(double rho);

/// Qubit erasure channel with erasure probability eps: output dimension 3,
/// the third level flags the erasure.
QuantumChannel erasure_channel(double eps);

/// Applies the depolarizing channel with parameter rho to each listed qubit
/// of a 2^total_qubits-dimensional operator (qubit 0 most significant).
/// Self-adjoint, so it serves both Schrodinger and Heisenberg duty.
ComplexMatrix depolarize(const ComplexMatrix& m, double rho,
                         const std::vector<std::size_t>& qubits, std::size_t total_qubits);

/// Density matrix of n EPR pairs in block layout: Alice's n qubits first,
/// then Bob's n qubits, pair i sharing qubits (i, n+i).
ComplexMatrix epr_state(std::size_t n);

/// n-fold tensor power of the isotropic state
/// rho * EPR + (1-rho) * I/4 per pair, in the same block layout.
ComplexMatrix isotropic_state(double rho, std::size_t n);

/// Relabels 2n qubit factors from interleaved pair order
/// (A1 B1 A2 B2 ...) to block order (A1..An B1..Bn).
ComplexMatrix pair_interleaved_to_blocks(const ComplexMatrix& m, std::size_t n);

/// Pauli basis element: 0 -> I, 1 -> X, 2 -> Y, 3 -> Z.
ComplexMatrix pauli_matrix(int which);

/// Coefficients c_sigma with m = sum_sigma c_sigma * B_sigma over the n-qubit
/// Pauli basis; sigma is a base-4 multi-index, factor 0 most significant.
std::vector<Complex> pauli_decompose(const ComplexMatrix& m, std::size_t n_qubits);

ComplexMatrix pauli_reconstruct(const std::vector<Complex>& coeffs, std::size_t n_qubits);

/// Von Neumann entropy in bits of a density matrix (unit trace, PSD within
/// tolerance). Zero eigenvalues contribute zero.
double von_neumann_entropy(const ComplexMatrix& state);

}  // namespace crgen
