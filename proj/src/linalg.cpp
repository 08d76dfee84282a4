#include "crgen/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crgen {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("ComplexMatrix: shape mismatch");
}

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw std::invalid_argument("tensor factor dimension must be >= 1");
    p *= d;
  }
  return p;
}

// Flat index -> per-factor digits, factor 0 most significant.
void decompose_index(std::size_t idx, const std::vector<std::size_t>& dims,
                     std::vector<std::size_t>& digits) {
  digits.resize(dims.size());
  for (std::size_t f = dims.size(); f-- > 0;) {
    digits[f] = idx % dims[f];
    idx /= dims[f];
  }
}

std::size_t compose_index(const std::vector<std::size_t>& digits,
                          const std::vector<std::size_t>& dims) {
  std::size_t idx = 0;
  for (std::size_t f = 0; f < dims.size(); ++f) idx = idx * dims[f] + digits[f];
  return idx;
}

double offdiag_frobenius(const ComplexMatrix& a) {
  double sum = 0.0;
  const std::size_t d = a.rows();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

}  // namespace

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& x : data_) x *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("ComplexMatrix: inner dimension mismatch in product");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexMatrix ComplexMatrix::dagger() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& x : data_) sum += std::norm(x);
  return std::sqrt(sum);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

double ComplexMatrix::hermiticity_defect() const {
  if (!is_square()) throw std::invalid_argument("hermiticity_defect: square matrix required");
  double defect = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      defect = std::max(defect, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return defect;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  return hermiticity_defect() <= tol * std::max(1.0, max_abs());
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const Complex s = a(ia, ja);
      if (s == Complex(0.0, 0.0)) continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          out(ia * b.rows() + ib, ja * b.cols() + jb) = s * b(ib, jb);
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
  const std::size_t d = m.dim();
  if (product(dims) != d)
    throw std::invalid_argument("partial_trace: factor dimensions do not match matrix");
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t f : keep) {
    if (f >= dims.size()) throw std::invalid_argument("partial_trace: keep index out of range");
    if (kept[f]) throw std::invalid_argument("partial_trace: duplicate keep index");
    kept[f] = true;
  }

  std::vector<std::size_t> keep_sorted, traced;
  for (std::size_t f = 0; f < dims.size(); ++f) (kept[f] ? keep_sorted : traced).push_back(f);

  std::vector<std::size_t> keep_dims, traced_dims;
  for (std::size_t f : keep_sorted) keep_dims.push_back(dims[f]);
  for (std::size_t f : traced) traced_dims.push_back(dims[f]);
  const std::size_t dk = product(keep_dims);
  const std::size_t dt = product(traced_dims);

  ComplexMatrix out(dk, dk);
  std::vector<std::size_t> krow, kcol, tdig, full(dims.size());
  for (std::size_t r = 0; r < dk; ++r) {
    decompose_index(r, keep_dims, krow);
    for (std::size_t c = 0; c < dk; ++c) {
      decompose_index(c, keep_dims, kcol);
      Complex sum = 0.0;
      for (std::size_t t = 0; t < dt; ++t) {
        decompose_index(t, traced_dims, tdig);
        for (std::size_t f = 0; f < keep_sorted.size(); ++f) full[keep_sorted[f]] = krow[f];
        for (std::size_t f = 0; f < traced.size(); ++f) full[traced[f]] = tdig[f];
        const std::size_t row = compose_index(full, dims);
        for (std::size_t f = 0; f < keep_sorted.size(); ++f) full[keep_sorted[f]] = kcol[f];
        const std::size_t col = compose_index(full, dims);
        sum += m(row, col);
      }
      out(r, c) = sum;
    }
  }
  return out;
}

ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm) {
  const std::size_t d = m.dim();
  if (product(dims) != d)
    throw std::invalid_argument("permute_factors: factor dimensions do not match matrix");
  if (perm.size() != dims.size())
    throw std::invalid_argument("permute_factors: permutation length mismatch");
  std::vector<bool> seen(dims.size(), false);
  for (std::size_t f : perm) {
    if (f >= dims.size() || seen[f])
      throw std::invalid_argument("permute_factors: not a permutation");
    seen[f] = true;
  }

  std::vector<std::size_t> new_dims(dims.size());
  for (std::size_t i = 0; i < perm.size(); ++i) new_dims[i] = dims[perm[i]];

  // Old flat index for each new flat index, shared by rows and columns.
  std::vector<std::size_t> old_of(d);
  std::vector<std::size_t> digits, old_digits(dims.size());
  for (std::size_t idx = 0; idx < d; ++idx) {
    decompose_index(idx, new_dims, digits);
    for (std::size_t i = 0; i < perm.size(); ++i) old_digits[perm[i]] = digits[i];
    old_of[idx] = compose_index(old_digits, dims);
  }

  ComplexMatrix out(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out(r, c) = m(old_of[r], old_of[c]);
  return out;
}

ComplexMatrix require_hermitian(const ComplexMatrix& m) {
  const double defect = m.hermiticity_defect();
  if (defect > 1e-12 * std::max(1.0, m.max_abs()))
    throw std::invalid_argument("require_hermitian: matrix is not Hermitian within tolerance");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return out;
}

EigenDecomposition hermitian_eig(const ComplexMatrix& m_in) {
  ComplexMatrix a = require_hermitian(m_in);
  const std::size_t d = a.dim();
  ComplexMatrix v = ComplexMatrix::identity(d);
  const double target = 1e-13 * a.frobenius_norm();

  bool converged = (d == 1) || offdiag_frobenius(a) <= target;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;

        // Phase rotation makes the pivot real, then a standard real Jacobi
        // rotation annihilates it. Smaller-root choice keeps |t| <= 1.
        const Complex phase = apq / r;  // e^{i arg(a_pq)}
        const double tau = (std::real(a(q, q)) - std::real(a(p, p))) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // U differs from identity in the (p,q) block:
        //   U[p][p] = c        U[p][q] = s
        //   U[q][p] = -s/phase U[q][q] = c/phase
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);

        for (std::size_t j = 0; j < d; ++j) {  // rows: a <- U† a
          const Complex apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * phase * aqj;
          a(q, j) = s * apj + c * phase * aqj;
        }
        for (std::size_t i = 0; i < d; ++i) {  // cols: a <- a U
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * c + aiq * uqp;
          a(i, q) = aip * s + aiq * uqq;
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = vip * c + viq * uqp;
          v(i, q) = vip * s + viq * uqq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
    converged = offdiag_frobenius(a) <= target;
  }
  if (!converged)
    throw std::runtime_error("hermitian_eig: Jacobi iteration did not converge in 100 sweeps");

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return std::real(a(i, i)) < std::real(a(j, j)); });

  EigenDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors = ComplexMatrix(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    out.eigenvalues[k] = std::real(a(order[k], order[k]));
    for (std::size_t i = 0; i < d; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  if (m.is_square() && m.is_hermitian()) {
    auto eig = hermitian_eig(m);
    std::vector<double> s(eig.eigenvalues.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::abs(eig.eigenvalues[i]);
    std::sort(s.begin(), s.end());
    return s;
  }
  auto eig = hermitian_eig(m.dagger() * m);
  std::vector<double> s(eig.eigenvalues.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
  std::sort(s.begin(), s.end());
  return s;
}

double schatten_norm(const ComplexMatrix& m, double p) {
  if (std::isnan(p) || p < 1.0)
    throw std::domain_error("schatten_norm: p must lie in [1, inf]");
  const auto s = singular_values(m);
  if (std::isinf(p)) return s.empty() ? 0.0 : s.back();
  double sum = 0.0;
  for (double x : s) sum += std::pow(x, p);
  return std::pow(sum, 1.0 / p);
}

ComplexMatrix psd_power(const ComplexMatrix& m, double p) {
  if (std::isnan(p) || p < 0.0 || std::isinf(p))
    throw std::domain_error("psd_power: exponent must be a finite real >= 0");
  auto eig = hermitian_eig(m);
  const std::size_t d = eig.eigenvalues.size();
  for (double& lam : eig.eigenvalues) {
    if (lam < -1e-10)
      throw std::runtime_error("psd_power: matrix is not PSD (eigenvalue below -1e-10)");
    if (lam < 0.0) lam = 0.0;
  }
  ComplexMatrix out(d, d);
  const ComplexMatrix& v = eig.eigenvectors;
  for (std::size_t k = 0; k < d; ++k) {
    const double w = std::pow(eig.eigenvalues[k], p);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out(i, j) += w * v(i, k) * std::conj(v(j, k));
  }
  return out;
}

}  // namespace crgen
