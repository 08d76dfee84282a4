#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "crgen/inequalities.hpp"
#include "crgen/linalg.hpp"
#include "crgen/quantum.hpp"

using namespace crgen;

namespace {

const Complex I(0.0, 1.0);

ComplexMatrix make2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

}  // namespace

TEST_CASE("depolarizing channel is trace preserving and matches the closed form") {
  for (double rho : {0.0, 0.3, 0.7, 1.0}) {
    const auto ch = depolarizing_channel(rho);
    CHECK(ch.in_dim == 2);
    CHECK(ch.out_dim == 2);
    CHECK(ch.is_trace_preserving());
    const auto ms = sample({EnsembleKind::hermitian, 2, 17}, 3);
    for (const auto& m : ms) {
      const auto direct =
          m * rho + ComplexMatrix::identity(2) * (0.5 * (1.0 - rho) * m.trace());
      CHECK(max_abs_diff(ch.apply(m), direct) < 1e-12);
    }
  }
  CHECK_THROWS_AS(depolarizing_channel(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing_channel(1.1), std::invalid_argument);
}

TEST_CASE("depolarizing a fixed matrix gives the hand-computed image") {
  // rho = 0.3 on [[1, 2+i], [2-i, 3]]: trace 4, so the image is
  // 0.3 M + 0.35 * 4 * I/2... spelled out entrywise below.
  const auto m = make2(1.0, 2.0 + I, 2.0 - I, 3.0);
  const auto out = depolarizing_channel(0.3).apply(m);
  const auto expected = make2(1.7, 0.6 + 0.3 * I, 0.6 - 0.3 * I, 2.3);
  CHECK(max_abs_diff(out, expected) < 1e-13);
  // depolarize() on the single qubit of a 1-qubit operator agrees
  CHECK(max_abs_diff(depolarize(m, 0.3, {0}, 1), expected) < 1e-13);
}

TEST_CASE("depolarize acts per qubit and composes as a semigroup") {
  const auto ms = sample({EnsembleKind::hermitian, 4, 29}, 2);
  for (const auto& m : ms) {
    // channel_apply route vs the direct bit-mask route, each qubit
    const auto ch = depolarizing_channel(0.4);
    for (std::size_t qubit : {0u, 1u}) {
      const auto via_channel = channel_apply(ch, m, qubit, {2, 2});
      const auto direct = depolarize(m, 0.4, {qubit}, 2);
      CHECK(max_abs_diff(via_channel, direct) < 1e-12);
    }
    // semigroup on the full register: Delta_a Delta_b = Delta_{ab}
    const auto twice = depolarize(depolarize(m, 0.8, {0, 1}, 2), 0.5, {0, 1}, 2);
    CHECK(max_abs_diff(twice, depolarize(m, 0.4, {0, 1}, 2)) < 1e-12);
  }
  CHECK_THROWS_AS(depolarize(ms[0], 0.5, {2}, 2), std::invalid_argument);
}

TEST_CASE("depolarize is self-adjoint") {
  const auto as = sample({EnsembleKind::ginibre, 4, 31}, 2);
  const auto bs = sample({EnsembleKind::ginibre, 4, 37}, 2);
  for (std::size_t i = 0; i < as.size(); ++i) {
    const auto lhs = (depolarize(as[i], 0.6, {0, 1}, 2) * bs[i]).trace();
    const auto rhs = (as[i] * depolarize(bs[i], 0.6, {0, 1}, 2)).trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("channel adjoint reverses the trace pairing") {
  Prng rng(43);
  const auto ch = random_trace_preserving_channel(2, 4, 3, rng);
  CHECK(ch.is_trace_preserving());
  const auto adj = channel_adjoint(ch);
  CHECK(adj.in_dim == 4);
  CHECK(adj.out_dim == 2);
  const auto a = sample({EnsembleKind::hermitian, 2, 47}, 1)[0];
  const auto b = sample({EnsembleKind::hermitian, 4, 53}, 1)[0];
  const auto lhs = (ch.apply(a) * b).trace();
  const auto rhs = (a * adj.apply(b)).trace();
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("erasure channel flags the lost qubit") {
  const auto ch = erasure_channel(0.25);
  CHECK(ch.in_dim == 2);
  CHECK(ch.out_dim == 3);
  CHECK(ch.is_trace_preserving());
  const auto out = ch.apply(ComplexMatrix::identity(2) * 0.5);
  CHECK(std::abs(out(2, 2) - Complex(0.25, 0.0)) < 1e-12);
  CHECK(std::abs(out(0, 0) - Complex(0.375, 0.0)) < 1e-12);
  CHECK_THROWS_AS(erasure_channel(-0.5), std::invalid_argument);
}

TEST_CASE("channel_apply embeds into the right slot") {
  const auto ch = depolarizing_channel(0.0);  // fully depolarizing
  const auto ms = sample({EnsembleKind::hermitian, 2, 59}, 2);
  const auto joint = kron(ms[0], ms[1]);
  const auto hit_second = channel_apply(ch, joint, 1, {2, 2});
  const auto expected = kron(ms[0], ComplexMatrix::identity(2) * (0.5 * ms[1].trace()));
  CHECK(max_abs_diff(hit_second, expected) < 1e-12);
  CHECK_THROWS_AS(channel_apply(ch, joint, 2, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(channel_apply(ch, joint, 0, {4, 1}), std::invalid_argument);
}

TEST_CASE("epr_state has the right entries and marginals") {
  const auto phi1 = epr_state(1);
  CHECK(phi1.rows() == 4);
  for (std::size_t x : {0u, 1u})
    for (std::size_t y : {0u, 1u})
      CHECK(std::abs(phi1(x * 2 + x, y * 2 + y) - Complex(0.5, 0.0)) == 0.0);
  CHECK(std::abs(phi1.trace() - Complex(1.0, 0.0)) < 1e-15);
  CHECK(max_abs_diff(partial_trace(phi1, {2, 2}, {0}), ComplexMatrix::identity(2) * 0.5) <
        1e-15);

  const auto phi2 = epr_state(2);
  CHECK(phi2.rows() == 16);
  CHECK(std::abs(phi2.trace() - Complex(1.0, 0.0)) < 1e-15);
  // projector onto a pure state: Phi^2 = Phi
  CHECK(max_abs_diff(phi2 * phi2, phi2) < 1e-14);
  // Alice's marginal (first two factors of four) is maximally mixed
  const auto alice = partial_trace(phi2, {2, 2, 2, 2}, {0, 1});
  CHECK(max_abs_diff(alice, ComplexMatrix::identity(4) * 0.25) < 1e-14);
  CHECK_THROWS_AS(epr_state(0), std::invalid_argument);
  CHECK_THROWS_AS(epr_state(4), std::invalid_argument);
}

TEST_CASE("isotropic state: spectrum, two construction routes, entropy endpoints") {
  for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto iso = isotropic_state(rho, 1);
    const auto eig = hermitian_eig(iso);
    // three eigenvalues (1-rho)/4, one (1+3 rho)/4, ascending
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(eig.eigenvalues[i] - (1.0 - rho) / 4.0) < 1e-12);
    CHECK(std::abs(eig.eigenvalues[3] - (1.0 + 3.0 * rho) / 4.0) < 1e-12);

    // depolarizing Alice's half of the EPR state gives the same matrix
    for (std::size_t n : {1u, 2u}) {
      std::vector<std::size_t> alice_qubits;
      for (std::size_t q = 0; q < n; ++q) alice_qubits.push_back(q);
      const auto via_channel = depolarize(epr_state(n), rho, alice_qubits, 2 * n);
      CHECK(max_abs_diff(isotropic_state(rho, n), via_channel) < 1e-13);
    }
  }
  CHECK(von_neumann_entropy(isotropic_state(1.0, 1)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(isotropic_state(0.0, 1)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(isotropic_state(0.5, 1)) ==
        doctest::Approx(1.5487949406953985).epsilon(1e-13));
  CHECK(von_neumann_entropy(isotropic_state(0.9, 1)) ==
        doctest::Approx(0.5031837316805838).epsilon(1e-13));
}

TEST_CASE("pair_interleaved_to_blocks reorders factors") {
  const auto ms = sample({EnsembleKind::hermitian, 2, 61}, 4);
  // interleaved A1 B1 A2 B2 -> blocks A1 A2 B1 B2
  const auto interleaved = kron(kron(ms[0], ms[1]), kron(ms[2], ms[3]));
  const auto blocks = kron(kron(ms[0], ms[2]), kron(ms[1], ms[3]));
  CHECK(max_abs_diff(pair_interleaved_to_blocks(interleaved, 2), blocks) < 1e-15);
}

TEST_CASE("pauli basis and decomposition") {
  const auto x = pauli_matrix(1);
  const auto y = pauli_matrix(2);
  const auto z = pauli_matrix(3);
  CHECK(max_abs_diff(x * x, ComplexMatrix::identity(2)) == 0.0);
  CHECK(max_abs_diff(x * y, z * I) < 1e-15);
  CHECK_THROWS_AS(pauli_matrix(4), std::invalid_argument);

  // EPR projector decomposes as (II + XX - YY + ZZ) / 4
  const auto coeffs = pauli_decompose(epr_state(1), 2);
  REQUIRE(coeffs.size() == 16);
  for (std::size_t sigma = 0; sigma < 16; ++sigma) {
    const double expected = (sigma == 0 || sigma == 5 || sigma == 15)  ? 0.25
                            : (sigma == 10)                            ? -0.25
                                                                       : 0.0;
    CHECK(std::abs(coeffs[sigma] - Complex(expected, 0.0)) < 1e-14);
  }

  // round trip on arbitrary (non-Hermitian) matrices
  for (std::size_t n : {1u, 2u, 3u}) {
    const auto m = sample({EnsembleKind::ginibre, std::size_t{1} << n, 67}, 1)[0];
    const auto back = pauli_reconstruct(pauli_decompose(m, n), n);
    CHECK(max_abs_diff(back, m) < 1e-12);
  }
  CHECK_THROWS_AS(pauli_decompose(ComplexMatrix::identity(4), 1), std::invalid_argument);
}

TEST_CASE("von_neumann_entropy input guards") {
  CHECK_THROWS_AS(von_neumann_entropy(ComplexMatrix::identity(2)), std::runtime_error);
  auto neg = ComplexMatrix::identity(2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(von_neumann_entropy(neg), std::runtime_error);
  // pure state: zero entropy, zero eigenvalues contribute nothing
  auto pure = ComplexMatrix(2, 2);
  pure(0, 0) = 1.0;
  CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0));
}

TEST_CASE("from_kraus validates shapes") {
  CHECK_THROWS_AS(QuantumChannel::from_kraus({}), std::invalid_argument);
  CHECK_THROWS_AS(
      QuantumChannel::from_kraus({ComplexMatrix::identity(2), ComplexMatrix::identity(3)}),
      std::invalid_argument);
  const auto half = ComplexMatrix::identity(2) * std::sqrt(0.5);
  const auto sub = QuantumChannel::from_kraus({half});
  CHECK(!sub.is_trace_preserving());
  CHECK(sub.is_trace_nonincreasing());
}

TEST_CASE("random channels are trace preserving across shapes") {
  Prng rng(71);
  for (auto [in, out, k] : {std::tuple<std::size_t, std::size_t, std::size_t>{2, 2, 3},
                            {4, 2, 5},
                            {2, 4, 2},
                            {4, 4, 1}}) {
    const auto ch = random_trace_preserving_channel(in, out, k, rng);
    CHECK(ch.is_trace_preserving());
    // trace preservation on a sample state too
    const auto state = sample({EnsembleKind::density, in, 73}, 1)[0];
    CHECK(std::abs(ch.apply(state).trace() - Complex(1.0, 0.0)) < 1e-10);
  }
}
