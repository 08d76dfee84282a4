#include "crgen/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace crgen {

namespace {

void require_unit_interval(double x, const char* what) {
  if (std::isnan(x) || x < 0.0 || x > 1.0)
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

std::size_t pow2(std::size_t k) { return std::size_t{1} << k; }

}  // namespace

QuantumChannel QuantumChannel::from_kraus(std::vector<ComplexMatrix> ops) {
  if (ops.empty()) throw std::invalid_argument("QuantumChannel: at least one Kraus operator");
  QuantumChannel c;
  c.out_dim = ops.front().rows();
  c.in_dim = ops.front().cols();
  for (const auto& k : ops)
    if (k.rows() != c.out_dim || k.cols() != c.in_dim)
      throw std::invalid_argument("QuantumChannel: Kraus operators must share one shape");
  c.kraus = std::move(ops);
  return c;
}

ComplexMatrix QuantumChannel::kraus_gram() const {
  ComplexMatrix g(in_dim, in_dim);
  for (const auto& k : kraus) g += k.dagger() * k;
  return g;
}

bool QuantumChannel::is_trace_preserving(double tol) const {
  return max_abs_diff(kraus_gram(), ComplexMatrix::identity(in_dim)) <= tol;
}

bool QuantumChannel::is_trace_nonincreasing(double tol) const {
  auto eig = hermitian_eig(kraus_gram());
  return eig.eigenvalues.front() >= -tol && eig.eigenvalues.back() <= 1.0 + tol;
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& m) const {
  if (m.dim() != in_dim)
    throw std::invalid_argument("QuantumChannel::apply: dimension mismatch");
  ComplexMatrix out(out_dim, out_dim);
  for (const auto& k : kraus) out += k * m * k.dagger();
  return out;
}

QuantumChannel channel_adjoint(const QuantumChannel& c) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(c.kraus.size());
  for (const auto& k : c.kraus) ops.push_back(k.dagger());
  return QuantumChannel::from_kraus(std::move(ops));
}

ComplexMatrix channel_apply(const QuantumChannel& c, const ComplexMatrix& m, std::size_t on,
                            const std::vector<std::size_t>& factor_dims) {
  if (on >= factor_dims.size())
    throw std::invalid_argument("channel_apply: factor index out of range");
  if (factor_dims[on] != c.in_dim)
    throw std::invalid_argument("channel_apply: channel input does not match factor dimension");
  std::size_t pre = 1, post = 1, total = 1;
  for (std::size_t f = 0; f < factor_dims.size(); ++f) {
    total *= factor_dims[f];
    if (f < on) pre *= factor_dims[f];
    if (f > on) post *= factor_dims[f];
  }
  if (total != m.dim())
    throw std::invalid_argument("channel_apply: factor dimensions do not match matrix");

  const ComplexMatrix ipre = ComplexMatrix::identity(pre);
  const ComplexMatrix ipost = ComplexMatrix::identity(post);
  ComplexMatrix out(pre * c.out_dim * post, pre * c.out_dim * post);
  for (const auto& k : c.kraus) {
    const ComplexMatrix e = kron(ipre, kron(k, ipost));
    out += e * m * e.dagger();
  }
  return out;
}

QuantumChannel depolarizing_channel(double rho) {
  require_unit_interval(rho, "depolarizing_channel: rho");
  const double w_id = std::sqrt((1.0 + 3.0 * rho) / 4.0);
  const double w_pauli = std::sqrt((1.0 - rho) / 4.0);
  std::vector<ComplexMatrix> ops;
  ops.push_back(pauli_matrix(0) * w_id);
  for (int s = 1; s < 4; ++s) ops.push_back(pauli_matrix(s) * w_pauli);
  return QuantumChannel::from_kraus(std::move(ops));
}

QuantumChannel erasure_channel(double eps) {
  require_unit_interval(eps, "erasure_channel: eps");
  // Keep: sqrt(1-eps) * (|0><0| + |1><1|) embedded into the 3-level output.
  // Erase: sqrt(eps) * |2><b| for each input basis state b.
  ComplexMatrix keep(3, 2);
  keep(0, 0) = std::sqrt(1.0 - eps);
  keep(1, 1) = std::sqrt(1.0 - eps);
  ComplexMatrix erase0(3, 2), erase1(3, 2);
  erase0(2, 0) = std::sqrt(eps);
  erase1(2, 1) = std::sqrt(eps);
  return QuantumChannel::from_kraus({keep, erase0, erase1});
}

ComplexMatrix depolarize(const ComplexMatrix& m, double rho,
                         const std::vector<std::size_t>& qubits, std::size_t total_qubits) {
  require_unit_interval(rho, "depolarize: rho");
  if (total_qubits == 0 || total_qubits > 20)
    throw std::invalid_argument("depolarize: total_qubits out of supported range");
  const std::size_t d = pow2(total_qubits);
  if (m.dim() != d)
    throw std::invalid_argument("depolarize: matrix dimension is not 2^total_qubits");
  std::vector<bool> seen(total_qubits, false);
  for (std::size_t f : qubits) {
    if (f >= total_qubits) throw std::invalid_argument("depolarize: qubit index out of range");
    if (seen[f]) throw std::invalid_argument("depolarize: duplicate qubit index");
    seen[f] = true;
  }

  ComplexMatrix cur = m;
  for (std::size_t f : qubits) {
    // Factor 0 is the most significant bit of the flat index.
    const std::size_t mask = pow2(total_qubits - 1 - f);
    ComplexMatrix next(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        Complex val = rho * cur(i, j);
        if ((i & mask) == (j & mask)) {
          // Same bit on both sides: add (1-rho)/2 * Tr_f applied at this slot.
          const std::size_t i0 = i & ~mask, j0 = j & ~mask;
          val += 0.5 * (1.0 - rho) * (cur(i0, j0) + cur(i0 | mask, j0 | mask));
        }
        next(i, j) = val;
      }
    }
    cur = next;
  }
  return cur;
}

ComplexMatrix epr_state(std::size_t n) {
  if (n == 0 || n > 3) throw std::invalid_argument("epr_state: n must lie in [1, 3]");
  const std::size_t half = pow2(n);
  ComplexMatrix out(half * half, half * half);
  const double amp = 1.0 / static_cast<double>(half);
  for (std::size_t x = 0; x < half; ++x)
    for (std::size_t y = 0; y < half; ++y) out(x * half + x, y * half + y) = amp;
  return out;
}

ComplexMatrix isotropic_state(double rho, std::size_t n) {
  require_unit_interval(rho, "isotropic_state: rho");
  if (n == 0 || n > 3) throw std::invalid_argument("isotropic_state: n must lie in [1, 3]");
  const ComplexMatrix pair =
      epr_state(1) * rho + ComplexMatrix::identity(4) * ((1.0 - rho) / 4.0);
  ComplexMatrix interleaved = pair;
  for (std::size_t i = 1; i < n; ++i) interleaved = kron(interleaved, pair);
  return pair_interleaved_to_blocks(interleaved, n);
}

ComplexMatrix pair_interleaved_to_blocks(const ComplexMatrix& m, std::size_t n) {
  const std::vector<std::size_t> dims(2 * n, 2);
  std::vector<std::size_t> perm(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    perm[i] = 2 * i;          // Alice's half of pair i
    perm[n + i] = 2 * i + 1;  // Bob's half of pair i
  }
  return permute_factors(m, dims, perm);
}

ComplexMatrix pauli_matrix(int which) {
  ComplexMatrix m(2, 2);
  switch (which) {
    case 0: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 2: m(0, 1) = Complex(0.0, -1.0); m(1, 0) = Complex(0.0, 1.0); break;
    case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: throw std::invalid_argument("pauli_matrix: index must lie in [0, 3]");
  }
  return m;
}

namespace {

ComplexMatrix pauli_word(std::size_t sigma, std::size_t n_qubits) {
  ComplexMatrix word = pauli_matrix(static_cast<int>((sigma >> (2 * (n_qubits - 1))) & 3));
  for (std::size_t f = 1; f < n_qubits; ++f)
    word = kron(word, pauli_matrix(static_cast<int>((sigma >> (2 * (n_qubits - 1 - f))) & 3)));
  return word;
}

}  // namespace

std::vector<Complex> pauli_decompose(const ComplexMatrix& m, std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > 6)
    throw std::invalid_argument("pauli_decompose: n_qubits out of supported range");
  const std::size_t d = pow2(n_qubits);
  if (m.dim() != d)
    throw std::invalid_argument("pauli_decompose: matrix dimension is not 2^n_qubits");
  const std::size_t words = std::size_t{1} << (2 * n_qubits);
  std::vector<Complex> coeffs(words);
  for (std::size_t sigma = 0; sigma < words; ++sigma) {
    const ComplexMatrix b = pauli_word(sigma, n_qubits);
    Complex t = 0.0;  // Tr[B m], B Hermitian
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) t += b(i, k) * m(k, i);
    coeffs[sigma] = t / static_cast<double>(d);
  }
  return coeffs;
}

ComplexMatrix pauli_reconstruct(const std::vector<Complex>& coeffs, std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > 6)
    throw std::invalid_argument("pauli_reconstruct: n_qubits out of supported range");
  const std::size_t words = std::size_t{1} << (2 * n_qubits);
  if (coeffs.size() != words)
    throw std::invalid_argument("pauli_reconstruct: coefficient count must be 4^n_qubits");
  ComplexMatrix out(pow2(n_qubits), pow2(n_qubits));
  for (std::size_t sigma = 0; sigma < words; ++sigma) {
    if (coeffs[sigma] == Complex(0.0, 0.0)) continue;
    out += pauli_word(sigma, n_qubits) * coeffs[sigma];
  }
  return out;
}

double von_neumann_entropy(const ComplexMatrix& state) {
  const auto eig = hermitian_eig(state);
  double trace = 0.0;
  for (double lam : eig.eigenvalues) {
    if (lam < -1e-10)
      throw std::runtime_error("von_neumann_entropy: state is not PSD within tolerance");
    trace += lam;
  }
  if (std::abs(trace - 1.0) > 1e-10)
    throw std::runtime_error("von_neumann_entropy: state trace deviates from 1");
  double h = 0.0;
  for (double lam : eig.eigenvalues)
    if (lam > 0.0) h -= lam * std::log2(lam);
  return h;
}

}  // namespace crgen
