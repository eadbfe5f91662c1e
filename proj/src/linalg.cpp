#include "equiframe/linalg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace equiframe {

bool approx_equal(double a, double b, double rel, double abs) {
  const double diff = std::abs(a - b);
  const double scale = std::max(std::abs(a), std::abs(b));
  return diff <= std::max(abs, rel * scale);
}

bool approx_equal(const Complex& a, const Complex& b, double rel, double abs) {
  const double diff = std::abs(a - b);
  const double scale = std::max(std::abs(a), std::abs(b));
  return diff <= std::max(abs, rel * scale);
}

Complex root_of_unity(long long k, long long n) {
  if (n <= 0) throw std::invalid_argument("root_of_unity: n must be positive");
  k %= n;
  if (k < 0) k += n;
  // Quarter turns are exact so that +/-1 and +/-i entries carry no rounding.
  if (4 * k % n == 0) {
    switch (4 * k / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

CMat::CMat(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

CMat CMat::identity(std::size_t n) {
  CMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMat CMat::diagonal(const CVec& diag) {
  CMat m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMat CMat::adjoint() const {
  CMat out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

CMat CMat::operator*(const CMat& rhs) const {
  if (cols_ != rhs.rows_)
    throw std::invalid_argument("CMat::operator*: inner dimensions disagree");
  CMat out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex a = (*this)(r, k);
      if (a == Complex{0.0, 0.0}) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
    }
  return out;
}

CVec CMat::apply(const CVec& v) const {
  if (v.size() != cols_)
    throw std::invalid_argument("CMat::apply: dimension mismatch");
  CVec out(rows_, Complex{0.0, 0.0});
  for (std::size_t r = 0; r < rows_; ++r) {
    Complex acc{0.0, 0.0};
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

CVec CMat::col(std::size_t j) const {
  if (j >= cols_) throw std::invalid_argument("CMat::col: index out of range");
  CVec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, j);
  return out;
}

void CMat::set_col(std::size_t j, const CVec& v) {
  if (j >= cols_ || v.size() != rows_)
    throw std::invalid_argument("CMat::set_col: shape mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, j) = v[r];
}

Complex CMat::trace() const {
  Complex acc{0.0, 0.0};
  const std::size_t n = std::min(rows_, cols_);
  for (std::size_t i = 0; i < n; ++i) acc += (*this)(i, i);
  return acc;
}

double CMat::max_abs_diff(const CMat& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("CMat::max_abs_diff: shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    worst = std::max(worst, std::abs(data_[i] - rhs.data_[i]));
  return worst;
}

bool CMat::is_unitary(double tol) const {
  if (rows_ != cols_) return false;
  const CMat prod = (*this) * adjoint();
  return prod.max_abs_diff(identity(rows_)) <= tol;
}

Complex inner(const CVec& u, const CVec& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("inner: length mismatch");
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k < u.size(); ++k) acc += u[k] * std::conj(v[k]);
  return acc;
}

double norm_sq(const CVec& v) {
  double acc = 0.0;
  for (const Complex& z : v) acc += std::norm(z);
  return acc;
}

double norm(const CVec& v) { return std::sqrt(norm_sq(v)); }

Complex hs_inner(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_inner: shape mismatch");
  Complex acc{0.0, 0.0};
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      acc += a(r, c) * std::conj(b(r, c));
  return acc;
}

double hs_norm_sq(const CMat& a) {
  double acc = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) acc += std::norm(a(r, c));
  return acc;
}

CMat dft_matrix(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dft_matrix: n must be >= 1");
  CMat w(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const long long nn = static_cast<long long>(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      // omega^(jk) with omega = exp(-2*pi*i/n).
      const long long t = static_cast<long long>(j) * static_cast<long long>(k) % nn;
      w(j, k) = root_of_unity(-t, nn) * scale;
    }
  return w;
}

CVec apply_dft(const CVec& v) { return dft_matrix(v.size()).apply(v); }

}  // namespace equiframe
