#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace qteig {

using cplx = std::complex<double>;

/// Ordinary polynomial with coefficients in ascending degree. Trailing
/// zeros are stripped on construction, so the leading coefficient is
/// nonzero unless the polynomial is identically zero (degree -1).
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<cplx> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx operator[](int i) const {
    return (i >= 0 && i <= degree()) ? coeffs_[i] : cplx{};
  }
  cplx leading() const { return coeffs_.empty() ? cplx{} : coeffs_.back(); }

  cplx operator()(cplx z) const;
  double norm1() const;

 private:
  std::vector<cplx> coeffs_;
};

/// Laurent polynomial sum_{k} c[k] z^(low + k); used for a'(z).
struct LaurentPoly {
  int low = 0;
  std::vector<cplx> coeffs;

  cplx operator()(cplx z) const;
  cplx coeff(int power) const;
};

/// Symbol a(z) = sum_{i=-m}^{n} a_i z^i of the Toeplitz part. Stored as the
/// two half-vectors (a_0, a_-1, ..., a_-m) and (a_0, a_1, ..., a_n).
class LaurentSymbol {
 public:
  /// Throws InvalidSymbol if a_-m or a_n vanish (or m, n < 1) and
  /// InconsistentConstant if neg[0] != pos[0].
  LaurentSymbol(std::vector<cplx> neg, std::vector<cplx> pos);

  int m() const { return static_cast<int>(neg_.size()) - 1; }
  int n() const { return static_cast<int>(pos_.size()) - 1; }
  const std::vector<cplx>& neg() const { return neg_; }
  const std::vector<cplx>& pos() const { return pos_; }

  /// a_i, zero outside [-m, n].
  cplx coeff(int i) const;
  double norm1() const;

 private:
  std::vector<cplx> neg_;
  std::vector<cplx> pos_;
};

struct RootCount {
  int count = 0;
  bool failure = false;
  int iterations_used = 0;
  bool fallback_used = false;
  /// min | |root| - 1 | over the explicitly computed roots; +inf when the
  /// Graeffe test certified the count.
  double circle_gap = std::numeric_limits<double>::infinity();
};

inline constexpr int kGraeffeMaxit = 30;
inline constexpr double kTolCircle = 1e-8;

cplx eval(const LaurentSymbol& sym, cplx z);
LaurentPoly deriv(const LaurentSymbol& sym);

/// b(z) = z^m (a(z) - lambda), degree m + n.
Poly char_poly(const LaurentSymbol& sym, cplx lambda);

Poly convolve(const Poly& p, const Poly& q);

/// One normalized root-squaring step: c(z^2) = b(z) b(-z), returned as
/// c / c_h with h the smallest index of maximal modulus.
Poly graeffe_step(const Poly& b);

/// Number of roots of b strictly inside the unit disk. Falls back to
/// companion-matrix rootfinding when the Graeffe test does not fire.
RootCount count_inside(const Poly& b, int maxit = kGraeffeMaxit);

/// wind(a - lambda). Throws OnCurve when lambda is numerically on a(T).
int winding(const LaurentSymbol& sym, cplx lambda,
            double tol_circle = kTolCircle);

}  // namespace qteig
