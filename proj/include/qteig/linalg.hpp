#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qteig/poly.hpp"

namespace qteig {

/// Row-major dense complex matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix column(std::span<const cplx> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const cplx> data() const { return data_; }

  std::vector<cplx> col(std::size_t j) const;
  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                    std::size_t nc) const;
  DenseMatrix adjoint() const;

  DenseMatrix& operator+=(const DenseMatrix& o);
  DenseMatrix& operator-=(const DenseMatrix& o);
  DenseMatrix& operator*=(cplx s);

  double norm_inf() const;
  double norm_fro() const;
  double max_abs() const;
  cplx trace() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(cplx s, DenseMatrix a);
std::vector<cplx> operator*(const DenseMatrix& a, std::span<const cplx> x);

/// LU factorization with partial pivoting, reusable for several solves.
class LU {
 public:
  /// Throws Singular when a pivot falls below 1e-14 * max|A|.
  explicit LU(const DenseMatrix& a);

  DenseMatrix solve(const DenseMatrix& b) const;
  cplx determinant() const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> piv_;
  int sign_ = 1;
};

DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b);

/// Determinant by LU; zero when the matrix is numerically singular.
cplx determinant(const DenseMatrix& a);

struct RankRevealingQR {
  DenseMatrix Q;  // rows x rows, unitary
  DenseMatrix R;  // rows x cols, upper trapezoidal
  std::vector<std::size_t> permutation;  // column j of A*P is column perm[j] of A
  int rank = 0;
};

/// Householder QR with column pivoting. rank counts |R_ii| > tol * |R_11|.
RankRevealingQR qr_rank_revealing(const DenseMatrix& a, double tol);

inline constexpr std::size_t kEigDimensionCap = 4000;

/// All eigenvalues (with multiplicity) by balancing, Hessenberg reduction and
/// complex single-shift QR. Throws ConvergenceFailure after 30*n sweeps.
std::vector<cplx> eig_dense(const DenseMatrix& a);

/// All roots of b from its monic companion matrix.
std::vector<cplx> roots_companion(const Poly& b);

}  // namespace qteig
