#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace equiframe {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

// Default tolerances. Everything in this library lives in dimension <= 64,
// so conditioning is benign and these are comfortable.
inline constexpr double kRelTol = 1e-10;   // relative tolerance for comparisons
inline constexpr double kAbsTol = 1e-12;   // absolute floor near zero
inline constexpr double kEigenTol = 1e-9;  // max-norm tolerance for eigen relations

bool approx_equal(double a, double b, double rel = kRelTol, double abs = kAbsTol);
bool approx_equal(const Complex& a, const Complex& b, double rel = kRelTol,
                  double abs = kAbsTol);

// exp(2*pi*i*k/n), with exact values at the quarter turns so that e.g.
// fourth roots of unity come out as exactly {1, i, -1, -i}.
Complex root_of_unity(long long k, long long n);

// Dense row-major complex matrix. Small sizes only; no sparse paths.
class CMat {
 public:
  CMat() = default;
  CMat(std::size_t rows, std::size_t cols);

  static CMat identity(std::size_t n);
  static CMat diagonal(const CVec& diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  CMat adjoint() const;
  CMat operator*(const CMat& rhs) const;
  CVec apply(const CVec& v) const;

  CVec col(std::size_t j) const;
  void set_col(std::size_t j, const CVec& v);

  Complex trace() const;
  double max_abs_diff(const CMat& rhs) const;
  bool is_unitary(double tol = kRelTol) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  CVec data_;
};

// <u, v> = sum_k u[k] * conj(v[k]). Conjugate-linear in the second slot.
Complex inner(const CVec& u, const CVec& v);

double norm_sq(const CVec& v);
double norm(const CVec& v);

// Entrywise (Hilbert-Schmidt) inner product, conjugating the second argument.
Complex hs_inner(const CMat& a, const CMat& b);
double hs_norm_sq(const CMat& a);

// W[j,k] = omega^(j*k) / sqrt(n) with omega = exp(-2*pi*i/n). Unitary, and
// W^4 = I, so its eigenvalues lie in {1, -1, i, -i}.
CMat dft_matrix(std::size_t n);

// dft_matrix(v.size()) * v.
CVec apply_dft(const CVec& v);

}  // namespace equiframe
