#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "crgen/inequalities.hpp"
#include "crgen/linalg.hpp"

using namespace crgen;

namespace {

ComplexMatrix make(std::size_t rows, std::size_t cols, std::initializer_list<Complex> vals) {
  ComplexMatrix m(rows, cols);
  auto it = vals.begin();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

const Complex I(0.0, 1.0);

}  // namespace

TEST_CASE("construction and shape guards") {
  CHECK_THROWS_AS(ComplexMatrix(0, 2), std::invalid_argument);
  ComplexMatrix rect(2, 3);
  CHECK(!rect.is_square());
  CHECK_THROWS_AS(rect.dim(), std::invalid_argument);
  CHECK_THROWS_AS(rect.trace(), std::invalid_argument);
  CHECK(ComplexMatrix::identity(3).trace() == Complex(3.0, 0.0));
}

TEST_CASE("arithmetic and adjoints") {
  const auto a = make(2, 2, {1.0, I, 2.0, -1.0});
  CHECK(max_abs_diff(a.dagger().dagger(), a) == 0.0);
  CHECK(a.transpose()(0, 1) == Complex(2.0, 0.0));
  CHECK(a.dagger()(1, 0) == -I);
  const auto prod = a * ComplexMatrix::identity(2);
  CHECK(max_abs_diff(prod, a) == 0.0);
  CHECK_THROWS_AS(a * ComplexMatrix(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(a + ComplexMatrix(3, 3), std::invalid_argument);
}

TEST_CASE("kron matches hand expansion") {
  const auto a = make(2, 2, {1.0, 2.0, 3.0, 4.0});
  const auto b = make(2, 2, {0.0, 1.0, 1.0, 0.0});
  const auto k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 1) == Complex(1.0, 0.0));
  CHECK(k(0, 3) == Complex(2.0, 0.0));
  CHECK(k(2, 1) == Complex(3.0, 0.0));
  CHECK(k(3, 2) == Complex(4.0, 0.0));
  // mixed-product property on random draws
  const auto ms = sample({EnsembleKind::ginibre, 2, 11}, 4);
  const auto lhs = kron(ms[0], ms[1]) * kron(ms[2], ms[3]);
  const auto rhs = kron(ms[0] * ms[2], ms[1] * ms[3]);
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("partial trace splits a product and contracts an EPR projector") {
  const auto ms = sample({EnsembleKind::psd, 2, 5}, 2);
  const auto joint = kron(ms[0], ms[1]);
  const auto left = partial_trace(joint, {2, 2}, {0});
  const auto right = partial_trace(joint, {2, 2}, {1});
  CHECK(max_abs_diff(left, ms[0] * std::real(ms[1].trace())) < 1e-12);
  CHECK(max_abs_diff(right, ms[1] * std::real(ms[0].trace())) < 1e-12);

  // EPR projector: both marginals are maximally mixed.
  ComplexMatrix epr(4, 4);
  for (std::size_t x : {0, 3})
    for (std::size_t y : {0, 3}) epr(x, y) = 0.5;
  CHECK(max_abs_diff(partial_trace(epr, {2, 2}, {0}), ComplexMatrix::identity(2) * 0.5) < 1e-15);

  CHECK_THROWS_AS(partial_trace(joint, {3, 2}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(joint, {2, 2}, {}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(joint, {2, 2}, {2}), std::invalid_argument);
}

TEST_CASE("permute_factors swaps tensor slots") {
  const auto ms = sample({EnsembleKind::ginibre, 2, 7}, 2);
  const auto ab = kron(ms[0], ms[1]);
  const auto ba = permute_factors(ab, {2, 2}, {1, 0});
  CHECK(max_abs_diff(ba, kron(ms[1], ms[0])) < 1e-15);
  // identity permutation
  CHECK(max_abs_diff(permute_factors(ab, {2, 2}, {0, 1}), ab) == 0.0);
  // three factors: rotate left
  const auto ms3 = sample({EnsembleKind::hermitian, 2, 9}, 3);
  const auto abc = kron(ms3[0], kron(ms3[1], ms3[2]));
  const auto bca = permute_factors(abc, {2, 2, 2}, {1, 2, 0});
  CHECK(max_abs_diff(bca, kron(ms3[1], kron(ms3[2], ms3[0]))) < 1e-15);
  CHECK_THROWS_AS(permute_factors(ab, {2, 2}, {0, 0}), std::invalid_argument);
}

TEST_CASE("hermitian_eig on frozen oracles") {
  // [[2, 1-i], [1+i, 3]] has eigenvalues 1 and 4.
  const auto m2 = make(2, 2, {2.0, 1.0 - I, 1.0 + I, 3.0});
  const auto e2 = hermitian_eig(m2);
  CHECK(e2.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e2.eigenvalues[1] == doctest::Approx(4.0).epsilon(1e-12));

  // [[1, i, 0], [-i, 2, 1], [0, 1, 1]] has eigenvalues exactly {0, 1, 3}.
  const auto m3 = make(3, 3, {1.0, I, 0.0, -I, 2.0, 1.0, 0.0, 1.0, 1.0});
  const auto e3 = hermitian_eig(m3);
  CHECK(std::abs(e3.eigenvalues[0] - 0.0) < 1e-12);
  CHECK(std::abs(e3.eigenvalues[1] - 1.0) < 1e-12);
  CHECK(std::abs(e3.eigenvalues[2] - 3.0) < 1e-12);
}

TEST_CASE("hermitian_eig reconstruction and unitarity on random inputs") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (std::size_t dim : {2u, 4u, 8u}) {
      const auto ms = sample({EnsembleKind::hermitian, dim, seed}, 2);
      for (const auto& m : ms) {
        const auto eig = hermitian_eig(m);
        ComplexMatrix recon(dim, dim);
        for (std::size_t k = 0; k < dim; ++k)
          for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
              recon(i, j) += eig.eigenvalues[k] * eig.eigenvectors(i, k) *
                             std::conj(eig.eigenvectors(j, k));
        const double scale = std::max(1.0, m.frobenius_norm());
        CHECK(max_abs_diff(recon, m) <= 1e-10 * scale);
        const auto vhv = eig.eigenvectors.dagger() * eig.eigenvectors;
        CHECK(max_abs_diff(vhv, ComplexMatrix::identity(dim)) <= 1e-10);
        for (std::size_t k = 0; k + 1 < dim; ++k)
          CHECK(eig.eigenvalues[k] <= eig.eigenvalues[k + 1]);
      }
    }
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  const auto bad = make(2, 2, {1.0, 2.0, 3.0, 4.0});
  CHECK_THROWS_AS(hermitian_eig(bad), std::invalid_argument);
  // asymmetry within tolerance is symmetrized instead
  auto almost = make(2, 2, {1.0, 1.0, 1.0 + Complex(0.0, 1e-14), 2.0});
  CHECK_NOTHROW(hermitian_eig(almost));
}

TEST_CASE("schatten norms on frozen values") {
  const auto d = make(2, 2, {3.0, 0.0, 0.0, -4.0});
  CHECK(schatten_norm(d, 1.0) == doctest::Approx(7.0).epsilon(1e-13));
  CHECK(schatten_norm(d, 2.0) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(schatten_norm(d, 3.0) == doctest::Approx(4.4979414452754148).epsilon(1e-13));
  CHECK(schatten_norm(d, kInfP) == doctest::Approx(4.0).epsilon(1e-13));

  // nilpotent: all Schatten norms equal 1
  const auto nil = make(2, 2, {0.0, 1.0, 0.0, 0.0});
  for (double p : {1.0, 2.0, 3.5}) CHECK(schatten_norm(nil, p) == doctest::Approx(1.0));
  CHECK(schatten_norm(nil, kInfP) == doctest::Approx(1.0));

  CHECK_THROWS_AS(schatten_norm(d, 0.5), std::domain_error);
  CHECK_THROWS_AS(schatten_norm(d, std::nan("")), std::domain_error);
}

TEST_CASE("schatten 2-norm agrees with the Frobenius route") {
  for (std::size_t dim : {2u, 4u}) {
    const auto ms = sample({EnsembleKind::ginibre, dim, 23}, 3);
    for (const auto& m : ms)
      CHECK(std::abs(schatten_norm(m, 2.0) - m.frobenius_norm()) <= 1e-10);
  }
}

TEST_CASE("schatten norms are monotone decreasing in p") {
  const double ps[] = {1.0, 1.5, 2.0, 3.0, 6.0, kInfP};
  for (std::uint64_t seed : {31u, 32u}) {
    const auto hs = sample({EnsembleKind::hermitian, 4, seed}, 2);
    const auto gs = sample({EnsembleKind::ginibre, 4, seed + 100}, 2);
    for (const auto* batch : {&hs, &gs})
      for (const auto& m : *batch)
        for (std::size_t i = 0; i + 1 < std::size(ps); ++i)
          CHECK(schatten_norm(m, ps[i + 1]) <= schatten_norm(m, ps[i]) + 1e-12);
  }
}

TEST_CASE("psd_power on frozen and random inputs") {
  const auto d = make(2, 2, {4.0, 0.0, 0.0, 9.0});
  const auto root = psd_power(d, 0.5);
  CHECK(max_abs_diff(root, make(2, 2, {2.0, 0.0, 0.0, 3.0})) < 1e-12);
  CHECK(max_abs_diff(psd_power(d, 0.0), ComplexMatrix::identity(2)) < 1e-12);

  const auto ps = sample({EnsembleKind::psd, 4, 41}, 2);
  for (const auto& p : ps) {
    const auto half = psd_power(p, 0.5);
    CHECK(max_abs_diff(half * half, p) < 1e-9 * std::max(1.0, p.max_abs()));
    const auto square = psd_power(p, 2.0);
    CHECK(max_abs_diff(square, p * p) < 1e-9 * std::max(1.0, (p * p).max_abs()));
  }

  const auto indef = make(2, 2, {1.0, 0.0, 0.0, -1.0});
  CHECK_THROWS_AS(psd_power(indef, 0.5), std::runtime_error);
  CHECK_THROWS_AS(psd_power(d, -1.0), std::domain_error);
  // tiny negative eigenvalues clamp to zero
  const auto wiggle = make(2, 2, {1.0, 0.0, 0.0, -1e-12});
  CHECK_NOTHROW(psd_power(wiggle, 0.5));
}

TEST_CASE("require_hermitian symmetrizes within tolerance only") {
  const auto h = make(2, 2, {1.0, I, -I, 2.0});
  CHECK(max_abs_diff(require_hermitian(h), h) == 0.0);
  CHECK_THROWS_AS(require_hermitian(make(2, 2, {1.0, I, I, 2.0})), std::invalid_argument);
}
