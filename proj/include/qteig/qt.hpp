#pragma once

#include <vector>

#include "qteig/linalg.hpp"
#include "qteig/poly.hpp"

namespace qteig {

/// Finite-support correction E, stored as 1-based triplets. Zero values are
/// dropped and (k1, k2) is the tight row/column support.
class Correction {
 public:
  struct Entry {
    int i;
    int j;
    cplx value;
  };

  Correction() = default;
  /// Throws InvalidInput on non-positive indices or duplicate (i, j).
  explicit Correction(std::vector<Entry> entries);
  /// Top-left dense block; entry (r, c) becomes E_{r+1, c+1}.
  static Correction from_dense(const DenseMatrix& block);

  int k1() const { return k1_; }
  int k2() const { return k2_; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// k1 x k2 dense assembly.
  DenseMatrix dense() const;

 private:
  std::vector<Entry> entries_;  // sorted by (i, j)
  int k1_ = 0;
  int k2_ = 0;
};

/// A = T(a) + E acting on l^2.
class QTMatrix {
 public:
  QTMatrix(LaurentSymbol symbol, Correction correction)
      : symbol_(std::move(symbol)), correction_(std::move(correction)) {}

  const LaurentSymbol& symbol() const { return symbol_; }
  const Correction& correction() const { return correction_; }
  int m() const { return symbol_.m(); }
  int n() const { return symbol_.n(); }
  int k1() const { return correction_.k1(); }
  int k2() const { return correction_.k2(); }

 private:
  LaurentSymbol symbol_;
  Correction correction_;
};

/// neg = (a_0, a_-1, ..., a_-m), pos = (a_0, a_1, ..., a_n).
QTMatrix qt_new(std::vector<cplx> neg, std::vector<cplx> pos, Correction correction);

/// N x N leading principal submatrix. Throws SectionTooSmall when
/// N < max(m, n, k1, k2).
DenseMatrix finite_section(const QTMatrix& a, int n);

/// Entries 1..out_len of A v, where v is the prefix of an l^2 vector.
/// Throws PrefixTooShort when v does not reach every needed column.
std::vector<cplx> apply_prefix(const QTMatrix& a, std::span<const cplx> v, int out_len);

/// Exact operator infinity-norm.
double norm_inf(const QTMatrix& a);

/// a(exp(2 pi i k / nsamples)), k = 0..nsamples-1.
std::vector<cplx> symbol_curve(const QTMatrix& a, int nsamples);

}  // namespace qteig
