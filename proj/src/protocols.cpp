#include "crgen/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crgen/inequalities.hpp"

namespace crgen {

namespace {

constexpr double kPsdTol = 1e-10;
constexpr double kCompletenessTol = 1e-10;
constexpr double kPathTol = 1e-10;

std::size_t pow2(std::size_t k) { return std::size_t{1} << k; }

ComplexMatrix basis_projector(std::size_t x, std::size_t dim) {
  ComplexMatrix p(dim, dim);
  p(x, x) = 1.0;
  return p;
}

void require_psd(const ComplexMatrix& m, const std::string& what) {
  const auto eig = hermitian_eig(m);
  if (eig.eigenvalues.front() < -kPsdTol)
    throw std::runtime_error(what + ": element is not PSD (eigenvalue " +
                             std::to_string(eig.eigenvalues.front()) + ")");
}

std::vector<std::size_t> first_n_qubits(std::size_t n) {
  std::vector<std::size_t> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = i;
  return q;
}

// Effective Alice-side operator of a Bob element under the reduction:
// success contribution is Tr[P_a * reduce(Q_a)].
ComplexMatrix reduce_other_side(const ComplexMatrix& q, double rho, std::size_t n) {
  return depolarize(q.transpose(), rho, first_n_qubits(n), n) *
         (1.0 / static_cast<double>(pow2(n)));
}

double clamp_probability(double v, const std::string& what) {
  if (v < -1e-9 || v > 1.0 + 1e-9)
    throw std::runtime_error(what + ": value escapes [0, 1] beyond tolerance");
  return std::max(v, 0.0);
}

void check_paths(double direct, double reduced, const std::string& what) {
  if (std::abs(direct - reduced) > kPathTol)
    throw std::logic_error(what + ": direct and reduced evaluations disagree beyond 1e-10");
}

}  // namespace

std::string bit_label(std::size_t x, std::size_t bits) {
  std::string s(bits, '0');
  for (std::size_t i = 0; i < bits; ++i)
    if (x & (std::size_t{1} << (bits - 1 - i))) s[i] = '1';
  return s;
}

std::size_t Povm::dim() const {
  if (elements.empty()) throw std::runtime_error("Povm: no elements");
  return elements.begin()->second.dim();
}

std::size_t Povm::qubits() const {
  const std::size_t d = dim();
  for (std::size_t k = 0; k <= 12; ++k)
    if (d == pow2(k)) return k;
  throw std::runtime_error("Povm: dimension is not a power of two");
}

void Povm::validate() const {
  const std::size_t d = dim();
  ComplexMatrix sum(d, d);
  for (const auto& [label, m] : elements) {
    if (!m.is_square() || m.dim() != d)
      throw std::runtime_error("Povm: element '" + label + "' has mismatched dimension");
    require_psd(require_hermitian(m), "Povm element '" + label + "'");
    sum += m;
  }
  if (max_abs_diff(sum, ComplexMatrix::identity(d)) > kCompletenessTol)
    throw std::runtime_error("Povm: completeness violated (sum of elements is not the identity)");
}

void ClassicalStrategy::validate() const {
  if (n < 1 || n > 3) throw std::runtime_error("ClassicalStrategy: n must lie in [1, 3]");
  if (alice.empty() || bob.empty())
    throw std::runtime_error("ClassicalStrategy: empty Alice or Bob map");
  if (alice.size() > pow2(t))
    throw std::runtime_error("ClassicalStrategy: more messages than 2^t");
  const std::size_t d = pow2(n);

  ComplexMatrix sum(d, d);
  for (const auto& [pi, branch] : alice) {
    if (bob.find(pi) == bob.end())
      throw std::runtime_error("ClassicalStrategy: Bob has no POVM for message '" + pi + "'");
    for (const auto& [a, m] : branch) {
      if (!m.is_square() || m.dim() != d)
        throw std::runtime_error("ClassicalStrategy: Alice element (" + a + ", " + pi +
                                 ") has mismatched dimension");
      require_psd(require_hermitian(m), "ClassicalStrategy Alice element (" + a + ", " + pi + ")");
      sum += m;
    }
  }
  if (max_abs_diff(sum, ComplexMatrix::identity(d)) > kCompletenessTol)
    throw std::runtime_error(
        "ClassicalStrategy: Alice completeness violated over (output, message) pairs");

  for (const auto& [pi, povm] : bob) {
    if (alice.find(pi) == alice.end())
      throw std::runtime_error("ClassicalStrategy: Alice never sends message '" + pi + "'");
    if (povm.dim() != d)
      throw std::runtime_error("ClassicalStrategy: Bob POVM for message '" + pi +
                               "' has mismatched dimension");
    povm.validate();
    for (const auto& [a, m] : alice.at(pi))
      if (povm.elements.find(a) == povm.elements.end())
        throw std::runtime_error("ClassicalStrategy: Bob POVM for message '" + pi +
                                 "' lacks outcome '" + a + "'");
  }
}

void QuantumStrategy::validate() const {
  if (n < 1 || n > 3) throw std::runtime_error("QuantumStrategy: n must lie in [1, 3]");
  if (subchannels.empty()) throw std::runtime_error("QuantumStrategy: no sub-channels");
  const std::size_t din = pow2(n);
  const std::size_t dout = pow2(t);

  ComplexMatrix gram_sum(din, din);
  for (const auto& [a, c] : subchannels) {
    if (c.in_dim != din || c.out_dim != dout)
      throw std::runtime_error("QuantumStrategy: sub-channel '" + a +
                               "' does not map 2^n to 2^t");
    if (!c.is_trace_nonincreasing())
      throw std::runtime_error("QuantumStrategy: sub-channel '" + a +
                               "' is not trace-nonincreasing");
    gram_sum += c.kraus_gram();
  }
  if (max_abs_diff(gram_sum, ComplexMatrix::identity(din)) > kCompletenessTol)
    throw std::runtime_error(
        "QuantumStrategy: sub-channels do not sum to a trace-preserving map");

  if (bob.dim() != dout * din)
    throw std::runtime_error("QuantumStrategy: Bob POVM is not on message (x) qubits");
  bob.validate();
  for (const auto& [a, c] : subchannels)
    if (bob.elements.find(a) == bob.elements.end())
      throw std::runtime_error("QuantumStrategy: Bob POVM lacks outcome '" + a + "'");
}

double success_free(const Povm& alice, const Povm& bob, double rho, std::size_t n) {
  if (std::isnan(rho) || rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("success_free: rho must lie in [0, 1]");
  if (n < 1 || n > 3) throw std::invalid_argument("success_free: n must lie in [1, 3]");
  alice.validate();
  bob.validate();
  const std::size_t d = pow2(n);
  if (alice.dim() != d || bob.dim() != d)
    throw std::invalid_argument("success_free: POVMs must act on 2^n dimensions");

  const ComplexMatrix state = isotropic_state(rho, n);
  double direct = 0.0, reduced = 0.0;
  for (const auto& [label, p] : alice.elements) {
    const auto q = bob.elements.find(label);
    if (q == bob.elements.end())
      throw std::invalid_argument("success_free: Bob POVM lacks outcome '" + label + "'");
    direct += std::real((kron(p, q->second) * state).trace());
    reduced += std::real((p * reduce_other_side(q->second, rho, n)).trace());
  }
  check_paths(direct, reduced, "success_free");
  return clamp_probability(direct, "success_free");
}

double success_classical(const ClassicalStrategy& s, double rho) {
  if (std::isnan(rho) || rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("success_classical: rho must lie in [0, 1]");
  s.validate();
  const ComplexMatrix state = isotropic_state(rho, s.n);
  double direct = 0.0, reduced = 0.0;
  for (const auto& [pi, branch] : s.alice) {
    const Povm& bob = s.bob.at(pi);
    for (const auto& [a, p] : branch) {
      const ComplexMatrix& q = bob.elements.at(a);
      direct += std::real((kron(p, q) * state).trace());
      reduced += std::real((p * reduce_other_side(q, rho, s.n)).trace());
    }
  }
  check_paths(direct, reduced, "success_classical");
  return clamp_probability(direct, "success_classical");
}

double success_quantum(const QuantumStrategy& s, double rho) {
  if (std::isnan(rho) || rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("success_quantum: rho must lie in [0, 1]");
  s.validate();
  const std::size_t half = pow2(s.n);
  const ComplexMatrix state = isotropic_state(rho, s.n);

  // Schrodinger picture on the state vs Heisenberg picture on Bob's element.
  double schro = 0.0, heis = 0.0;
  for (const auto& [a, c] : s.subchannels) {
    const ComplexMatrix& q = s.bob.elements.at(a);
    const ComplexMatrix moved = channel_apply(c, state, 0, {half, half});
    schro += std::real((moved * q).trace());
    const ComplexMatrix pulled =
        channel_apply(channel_adjoint(c), q, 0, {pow2(s.t), half});
    heis += std::real((state * pulled).trace());
  }
  check_paths(schro, heis, "success_quantum");
  return clamp_probability(schro, "success_quantum");
}

namespace {

double min_entropy_from_masses(const std::vector<double>& masses, const std::string& what) {
  double peak = 0.0;
  for (double mu : masses) peak = std::max(peak, mu);
  if (peak <= 0.0) throw std::runtime_error(what + ": output distribution has empty support");
  return -std::log2(peak);
}

}  // namespace

double output_min_entropy(const Povm& alice) {
  const double d = static_cast<double>(alice.dim());
  std::vector<double> mu;
  for (const auto& [label, p] : alice.elements) mu.push_back(std::real(p.trace()) / d);
  return min_entropy_from_masses(mu, "output_min_entropy");
}

double output_min_entropy(const ClassicalStrategy& s) {
  const double d = static_cast<double>(pow2(s.n));
  std::map<std::string, double> mu;
  for (const auto& [pi, branch] : s.alice)
    for (const auto& [a, p] : branch) mu[a] += std::real(p.trace()) / d;
  std::vector<double> masses;
  for (const auto& [a, v] : mu) masses.push_back(v);
  return min_entropy_from_masses(masses, "output_min_entropy");
}

double output_min_entropy(const QuantumStrategy& s) {
  const double d = static_cast<double>(pow2(s.n));
  std::vector<double> mu;
  for (const auto& [a, c] : s.subchannels)
    mu.push_back(std::real(c.kraus_gram().trace()) / d);
  return min_entropy_from_masses(mu, "output_min_entropy");
}

double joint_output_min_entropy(const ClassicalStrategy& s) {
  const double d = static_cast<double>(pow2(s.n));
  std::vector<double> mu;
  for (const auto& [pi, branch] : s.alice)
    for (const auto& [a, p] : branch) mu.push_back(std::real(p.trace()) / d);
  return min_entropy_from_masses(mu, "joint_output_min_entropy");
}

std::pair<Povm, Povm> basis_protocol(std::size_t n) {
  if (n < 1 || n > 3) throw std::invalid_argument("basis_protocol: n must lie in [1, 3]");
  Povm p;
  const std::size_t d = pow2(n);
  for (std::size_t x = 0; x < d; ++x) p.elements[bit_label(x, n)] = basis_projector(x, d);
  return {p, p};
}

QuantumStrategy quantum_measure_forward_strategy(std::size_t n) {
  return quantum_measure_embed_strategy(n, n);
}

QuantumStrategy quantum_measure_embed_strategy(std::size_t n, std::size_t t) {
  if (n < 1 || n > 3) throw std::invalid_argument("quantum_measure_embed_strategy: n in [1, 3]");
  if (t > n) throw std::invalid_argument("quantum_measure_embed_strategy: t must be <= n");
  QuantumStrategy s;
  s.n = n;
  s.t = t;
  const std::size_t din = pow2(n);
  const std::size_t dmsg = pow2(t);
  for (std::size_t a = 0; a < din; ++a) {
    const std::size_t prefix = a >> (n - t);
    ComplexMatrix k(dmsg, din);
    k(prefix, a) = 1.0;  // |first t bits of a><a|
    s.subchannels[bit_label(a, n)] = QuantumChannel::from_kraus({k});
    // Bob: read the message, ignore his first t qubits, measure the rest.
    const std::size_t suffix = a & (pow2(n - t) - 1);
    s.bob.elements[bit_label(a, n)] =
        kron(basis_projector(prefix, dmsg),
             kron(ComplexMatrix::identity(dmsg), basis_projector(suffix, pow2(n - t))));
  }
  return s;
}

namespace {

// Exact best response on one element pair: maximize Tr[P D] over
// 0 <= P <= S with Tr[P] = c. Lagrangian form: P(mu) collects the positive
// eigenspace of W - mu*S (W = S^{1/2} D S^{1/2}) back through S^{1/2};
// mu is bisected until the trace budget c is met, with fractional weight on
// the crossing eigendirection.
ComplexMatrix pair_best_response(const ComplexMatrix& s_in, const ComplexMatrix& d_in,
                                 double c) {
  const ComplexMatrix s = require_hermitian(s_in);
  const ComplexMatrix d = require_hermitian(d_in);
  const std::size_t dim = s.dim();
  const double tr_s = std::real(s.trace());
  if (c <= 1e-14) return ComplexMatrix(dim, dim);
  if (c >= tr_s - 1e-14) return s;

  const ComplexMatrix sq = psd_power(s, 0.5);
  const ComplexMatrix w = require_hermitian(sq * d * sq);

  const auto weighted_trace = [&](const EigenDecomposition& eig, std::size_t k) {
    Complex t = 0.0;  // <v_k| S |v_k>
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        t += std::conj(eig.eigenvectors(i, k)) * s(i, j) * eig.eigenvectors(j, k);
    return std::max(std::real(t), 0.0);
  };

  const double spread = schatten_norm(d, kInfP) + 1.0;
  double lo = -spread, hi = spread;  // trace(lo) >= c >= trace(hi)
  for (int it = 0; it < 100; ++it) {
    const double mu = 0.5 * (lo + hi);
    const auto eig = hermitian_eig(w - s * mu);
    double tr = 0.0;
    for (std::size_t k = 0; k < dim; ++k)
      if (eig.eigenvalues[k] > 0.0) tr += weighted_trace(eig, k);
    (tr >= c ? lo : hi) = mu;
  }

  // Fill the budget greedily by eigenvalue; at the converged mu only
  // directions crossing zero can end up fractional.
  const double mu = 0.5 * (lo + hi);
  const auto eig = hermitian_eig(w - s * mu);
  std::vector<std::size_t> order(dim);
  for (std::size_t k = 0; k < dim; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return eig.eigenvalues[a] > eig.eigenvalues[b];
  });

  ComplexMatrix f(dim, dim);
  double remaining = c;
  for (std::size_t k : order) {
    if (remaining <= 1e-15) break;
    const double tau = weighted_trace(eig, k);
    if (tau <= 1e-14) continue;
    const double weight = std::min(1.0, remaining / tau);
    remaining -= weight * tau;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        f(i, j) += weight * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
  }
  return require_hermitian(sq * f * sq);
}

std::vector<ComplexMatrix> effective_operators(const Povm& other, double rho, std::size_t n,
                                               const std::vector<std::string>& labels) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(labels.size());
  for (const auto& label : labels)
    ops.push_back(reduce_other_side(other.elements.at(label), rho, n));
  return ops;
}

double seesaw_objective(const Povm& povm, const std::vector<ComplexMatrix>& effective,
                        const std::vector<std::string>& labels) {
  double v = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    v += std::real((povm.elements.at(labels[i]) * effective[i]).trace());
  return v;
}

// One coordinate sweep: exact pairwise best responses against the fixed
// effective operators. Updates are committed only when they improve the
// objective, so the sweep is monotone by construction.
void sweep_povm(Povm& povm, const std::vector<ComplexMatrix>& effective,
                const std::vector<std::string>& labels, double cap) {
  for (std::size_t a = 0; a + 1 < labels.size(); ++a) {
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      ComplexMatrix& pa = povm.elements.at(labels[a]);
      ComplexMatrix& pb = povm.elements.at(labels[b]);
      const ComplexMatrix s = require_hermitian(pa + pb);
      const ComplexMatrix d = effective[a] - effective[b];
      const ComplexMatrix cand = pair_best_response(s, d, cap);
      const double gain = std::real(((cand - pa) * d).trace());
      if (gain > 1e-15) {
        pa = cand;
        pb = require_hermitian(s - cand);
      }
    }
  }
}

// Rescales oversized elements and spreads the freed mass so every element
// trace equals the cap exactly while completeness and positivity survive.
Povm tighten_traces(const Povm& in, double cap) {
  const std::size_t d = in.dim();
  Povm out;
  ComplexMatrix shrunk_sum(d, d);
  for (const auto& [label, p] : in.elements) {
    const double tr = std::real(p.trace());
    const double scale = tr > cap ? cap / tr : 1.0;
    out.elements[label] = p * scale;
    shrunk_sum += out.elements[label];
  }
  const ComplexMatrix slack = ComplexMatrix::identity(d) - shrunk_sum;
  const double tr_slack = std::real(slack.trace());
  if (tr_slack > 1e-13) {
    for (auto& [label, p] : out.elements) {
      const double deficit = cap - std::real(p.trace());
      if (deficit > 0.0) p += slack * (deficit / tr_slack);
    }
  }
  return out;
}

Povm coarse_basis_start(std::size_t n, std::size_t k) {
  Povm p;
  const std::size_t d = pow2(n);
  for (std::size_t a = 0; a < pow2(k); ++a) {
    ComplexMatrix m(d, d);
    for (std::size_t x = 0; x < d; ++x)
      if ((x >> (n - k)) == a) m(x, x) = 1.0;
    p.elements[bit_label(a, k)] = m;
  }
  return p;
}

Povm random_povm_start(std::size_t n, std::size_t k, std::uint64_t seed) {
  const auto draws = sample({EnsembleKind::povm_element, pow2(n), seed}, pow2(k));
  Povm p;
  for (std::size_t a = 0; a < draws.size(); ++a) p.elements[bit_label(a, k)] = draws[a];
  return p;
}

void check_seesaw_args(double rho, std::size_t n, std::size_t k, int iters) {
  if (std::isnan(rho) || rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("seesaw: rho must lie in [0, 1]");
  if (n < 1 || n > 3) throw std::invalid_argument("seesaw: n must lie in [1, 3]");
  if (k < 1 || k > n) throw std::invalid_argument("seesaw: k must lie in [1, n]");
  if (iters < 1) throw std::invalid_argument("seesaw: iters must be >= 1");
}

}  // namespace

SeesawResult seesaw_refine(const Povm& alice0, const Povm& bob0, double rho, std::size_t n,
                           std::size_t k, int iters) {
  check_seesaw_args(rho, n, k, iters);
  const double cap = static_cast<double>(pow2(n - k));
  alice0.validate();
  bob0.validate();
  if (alice0.elements.size() != pow2(k) || bob0.elements.size() != pow2(k))
    throw std::invalid_argument("seesaw_refine: POVMs must have 2^k outcomes");

  Povm alice = tighten_traces(alice0, cap);
  Povm bob = tighten_traces(bob0, cap);
  std::vector<std::string> labels;
  for (const auto& [label, m] : alice.elements) labels.push_back(label);
  for (const auto& label : labels)
    if (bob.elements.find(label) == bob.elements.end())
      throw std::invalid_argument("seesaw_refine: POVMs must share outcome labels");

  double value = seesaw_objective(alice, effective_operators(bob, rho, n, labels), labels);
  int used = 0;
  for (int it = 0; it < iters; ++it) {
    sweep_povm(alice, effective_operators(bob, rho, n, labels), labels, cap);
    sweep_povm(bob, effective_operators(alice, rho, n, labels), labels, cap);
    const double next = seesaw_objective(alice, effective_operators(bob, rho, n, labels), labels);
    used = it + 1;
    if (next - value < 1e-13) {
      value = next;
      break;
    }
    value = next;
  }

  SeesawResult res;
  res.alice = alice;
  res.bob = bob;
  res.value = success_free(alice, bob, rho, n);  // revalidates and cross-checks
  res.iterations = used;
  return res;
}

SeesawResult seesaw_optimize(double rho, std::size_t n, std::size_t k, int iters,
                             std::uint64_t seed) {
  check_seesaw_args(rho, n, k, iters);
  return seesaw_refine(random_povm_start(n, k, seed), random_povm_start(n, k, seed + 0x9e37),
                       rho, n, k, iters);
}

SeesawResult seesaw_best_of(double rho, std::size_t n, std::size_t k, int iters, int restarts,
                            std::uint64_t seed) {
  check_seesaw_args(rho, n, k, iters);
  if (restarts < 0) throw std::invalid_argument("seesaw_best_of: restarts must be >= 0");
  SeesawResult best =
      seesaw_refine(coarse_basis_start(n, k), coarse_basis_start(n, k), rho, n, k, iters);
  for (int r = 1; r <= restarts; ++r) {
    SeesawResult cand = seesaw_optimize(rho, n, k, iters, seed + static_cast<std::uint64_t>(r));
    if (cand.value > best.value) best = cand;
  }
  return best;
}

}  // namespace crgen
