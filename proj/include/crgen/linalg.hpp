#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace crgen {

using Complex = std::complex<double>;

/// Sentinel for the spectral norm (p = infinity). Never fed to std::pow.
inline constexpr double kInfP = std::numeric_limits<double>::infinity();

/// Dense complex matrix, row-major storage.
///
/// Square matrices carry all spectral machinery (eigendecomposition,
/// Schatten norms, fractional powers). Rectangular shapes appear only as
/// Kraus operators mapping between spaces of different dimension.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("ComplexMatrix: dimensions must be >= 1");
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zero(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_ && rows_ > 0; }

  /// Dimension of a square matrix; throws on rectangular input.
  std::size_t dim() const {
    if (!is_square())
      throw std::invalid_argument("ComplexMatrix: square matrix required");
    return rows_;
  }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<Complex>& entries() const { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);
  ComplexMatrix& operator*=(double s) { return (*this) *= Complex(s, 0.0); }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  ComplexMatrix dagger() const;
  ComplexMatrix transpose() const;

  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  /// max_ij |m(i,j) - conj(m(j,i))|; zero for exactly Hermitian matrices.
  double hermiticity_defect() const;

  bool is_hermitian(double tol = 1e-12) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Largest entrywise |a - b|; matrices must share shape.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // unitary, column i pairs with eigenvalues[i]
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Partial trace over the factors not listed in `keep`. `dims` are the tensor
/// factor dimensions (factor 0 most significant); kept factors preserve their
/// relative order. Throws std::invalid_argument when dims do not factor m.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

/// Reorders tensor factors: new slot i holds old factor perm[i].
ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm);

/// Symmetrizes (m + m†)/2 when the hermiticity defect is within
/// 1e-12 * max(1, max-abs entry); rejects anything beyond.
ComplexMatrix require_hermitian(const ComplexMatrix& m);

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
/// Converges when the off-diagonal Frobenius mass drops below
/// 1e-13 * ||input||_F; capped at 100 sweeps.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

/// Singular values, descending not guaranteed (ascending order).
/// Hermitian inputs use |eigenvalue| directly; general inputs go through
/// the eigenvalues of m†m.
std::vector<double> singular_values(const ComplexMatrix& m);

/// Schatten p-norm for p in [1, inf]. Pass kInfP for the spectral norm.
double schatten_norm(const ComplexMatrix& m, double p);

/// Eigenvalues raised to the power p (p >= 0), eigenvectors preserved.
/// Eigenvalues in [-1e-10, 0) are clamped to 0 first; anything below
/// -1e-10 is a not-PSD error.
ComplexMatrix psd_power(const ComplexMatrix& m, double p);

}  // namespace crgen
