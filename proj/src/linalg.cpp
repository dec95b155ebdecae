#include "qteig/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qteig/errors.hpp"

namespace qteig {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

inline double abs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw Error(ErrorKind::InvalidInput, "DenseMatrix: entry count mismatch");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

DenseMatrix DenseMatrix::column(std::span<const cplx> v) {
  return DenseMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

std::vector<cplx> DenseMatrix::col(std::size_t j) const {
  std::vector<cplx> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) const {
  DenseMatrix out(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

double DenseMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (const auto& x : row(i)) s += std::abs(x);
    best = std::max(best, s);
  }
  return best;
}

double DenseMatrix::norm_fro() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
  double best = 0.0;
  for (const auto& x : data_) best = std::max(best, std::abs(x));
  return best;
}

cplx DenseMatrix::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorKind::InvalidInput, "matrix product: shape mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(cplx s, DenseMatrix a) { return a *= s; }

std::vector<cplx> operator*(const DenseMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size())
    throw Error(ErrorKind::InvalidInput, "matrix-vector product: shape mismatch");
  std::vector<cplx> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s{};
    const auto ai = a.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

// ---------------------------------------------------------------- LU

LU::LU(const DenseMatrix& a) : lu_(a), piv_(a.rows()) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::InvalidInput, "LU of non-square matrix");
  const double thresh = 1e-14 * a.max_abs();
  std::iota(piv_.begin(), piv_.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > thresh) || best == 0.0)
      throw Error(ErrorKind::Singular, "matrix is numerically singular");
    if (p != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
      std::swap(piv_[k], piv_[p]);
      sign_ = -sign_;
    }
    const cplx inv = 1.0 / lu_(k, k);
    const auto rk = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto ri = lu_.row(i);
      const cplx l = ri[k] * inv;
      ri[k] = l;
      if (l == cplx{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
    }
  }
}

DenseMatrix LU::solve(const DenseMatrix& b) const {
  const std::size_t n = lu_.rows();
  if (b.rows() != n) throw Error(ErrorKind::InvalidInput, "LU solve: shape mismatch");
  DenseMatrix x(n, b.cols());
  for (std::size_t i = 0; i < n; ++i)
    std::copy(b.row(piv_[i]).begin(), b.row(piv_[i]).end(), x.row(i).begin());
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const cplx l = lu_(i, k);
      if (l == cplx{}) continue;
      const auto xk = x.row(k);
      for (std::size_t j = 0; j < xi.size(); ++j) xi[j] -= l * xk[j];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    auto xi = x.row(i);
    for (std::size_t k = i + 1; k < n; ++k) {
      const cplx u = lu_(i, k);
      if (u == cplx{}) continue;
      const auto xk = x.row(k);
      for (std::size_t j = 0; j < xi.size(); ++j) xi[j] -= u * xk[j];
    }
    const cplx inv = 1.0 / lu_(i, i);
    for (auto& v : xi) v *= inv;
  }
  return x;
}

cplx LU::determinant() const {
  cplx d = static_cast<double>(sign_);
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b) {
  return LU(a).solve(b);
}

cplx determinant(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::InvalidInput, "determinant of non-square matrix");
  DenseMatrix w = a;
  cplx det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(w(i, k)) > std::abs(w(p, k))) p = i;
    if (w(p, k) == cplx{}) return 0.0;
    if (p != k) {
      std::swap_ranges(w.row(k).begin(), w.row(k).end(), w.row(p).begin());
      det = -det;
    }
    det *= w(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = w(i, k) / w(k, k);
      for (std::size_t j = k + 1; j < n; ++j) w(i, j) -= l * w(k, j);
    }
  }
  return det;
}

// ---------------------------------------------------------------- QR

namespace {

struct Householder {
  std::vector<cplx> v;
  double tau = 0.0;  // H = I - tau v v^H
  cplx beta{};       // H x = beta e_1
};

Householder make_householder(std::span<const cplx> x) {
  Householder h;
  h.v.assign(x.begin(), x.end());
  double alpha = 0.0;
  for (const auto& e : x) alpha += std::norm(e);
  alpha = std::sqrt(alpha);
  if (alpha == 0.0) return h;
  const cplx phase = std::abs(x[0]) > 0.0 ? x[0] / std::abs(x[0]) : cplx{1.0};
  h.v[0] += phase * alpha;
  double vv = 0.0;
  for (const auto& e : h.v) vv += std::norm(e);
  h.tau = 2.0 / vv;
  h.beta = -phase * alpha;
  return h;
}

}  // namespace

RankRevealingQR qr_rank_revealing(const DenseMatrix& a, double tol) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  RankRevealingQR out;
  out.R = a;
  out.permutation.resize(cols);
  std::iota(out.permutation.begin(), out.permutation.end(), std::size_t{0});
  DenseMatrix& R = out.R;
  const std::size_t steps = std::min(rows, cols);
  std::vector<Householder> reflectors;
  reflectors.reserve(steps);

  for (std::size_t j = 0; j < steps; ++j) {
    std::size_t piv = j;
    double best = -1.0;
    for (std::size_t c = j; c < cols; ++c) {
      double s = 0.0;
      for (std::size_t i = j; i < rows; ++i) s += std::norm(R(i, c));
      if (s > best) {
        best = s;
        piv = c;
      }
    }
    if (piv != j) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(R(i, j), R(i, piv));
      std::swap(out.permutation[j], out.permutation[piv]);
    }
    std::vector<cplx> x(rows - j);
    for (std::size_t i = j; i < rows; ++i) x[i - j] = R(i, j);
    Householder h = make_householder(x);
    if (h.tau != 0.0) {
      for (std::size_t c = j; c < cols; ++c) {
        cplx dot{};
        for (std::size_t i = j; i < rows; ++i) dot += std::conj(h.v[i - j]) * R(i, c);
        dot *= h.tau;
        for (std::size_t i = j; i < rows; ++i) R(i, c) -= h.v[i - j] * dot;
      }
      R(j, j) = h.beta;
      for (std::size_t i = j + 1; i < rows; ++i) R(i, j) = 0.0;
    }
    reflectors.push_back(std::move(h));
  }

  out.Q = DenseMatrix::identity(rows);
  for (std::size_t j = reflectors.size(); j-- > 0;) {
    const auto& h = reflectors[j];
    if (h.tau == 0.0) continue;
    for (std::size_t c = 0; c < rows; ++c) {
      cplx dot{};
      for (std::size_t i = j; i < rows; ++i) dot += std::conj(h.v[i - j]) * out.Q(i, c);
      dot *= h.tau;
      for (std::size_t i = j; i < rows; ++i) out.Q(i, c) -= h.v[i - j] * dot;
    }
  }

  const double r11 = steps > 0 ? std::abs(R(0, 0)) : 0.0;
  out.rank = 0;
  if (r11 > 0.0)
    for (std::size_t i = 0; i < steps; ++i)
      if (std::abs(R(i, i)) > tol * r11) ++out.rank;
  return out;
}

// ---------------------------------------------------------------- eig

namespace {

void balance(DenseMatrix& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const std::size_t n = a.rows();
  bool noconv = true;
  while (noconv) {
    noconv = false;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(a(j, i));
        r += abs1(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        noconv = true;
        const double ginv = 1.0 / f;
        for (auto& x : a.row(i)) x *= ginv;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

void hessenberg(DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (n < 3) return;
  std::vector<cplx> x;
  std::vector<cplx> w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    x.resize(len);
    bool tail_zero = true;
    for (std::size_t i = 0; i < len; ++i) {
      x[i] = a(k + 1 + i, k);
      if (i > 0 && x[i] != cplx{}) tail_zero = false;
    }
    if (tail_zero) continue;
    const Householder h = make_householder(x);
    // left: rows k+1.., columns k..
    std::fill(w.begin(), w.end(), cplx{});
    for (std::size_t i = 0; i < len; ++i) {
      const cplx vi = std::conj(h.v[i]);
      const auto ri = a.row(k + 1 + i);
      for (std::size_t c = k; c < n; ++c) w[c] += vi * ri[c];
    }
    for (std::size_t i = 0; i < len; ++i) {
      const cplx vi = h.tau * h.v[i];
      auto ri = a.row(k + 1 + i);
      for (std::size_t c = k; c < n; ++c) ri[c] -= vi * w[c];
    }
    // right: all rows, columns k+1..
    for (std::size_t r = 0; r < n; ++r) {
      auto rr = a.row(r);
      cplx dot{};
      for (std::size_t i = 0; i < len; ++i) dot += rr[k + 1 + i] * h.v[i];
      dot *= h.tau;
      for (std::size_t i = 0; i < len; ++i) rr[k + 1 + i] -= dot * std::conj(h.v[i]);
    }
    a(k + 1, k) = h.beta;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx p = 0.5 * (a - d);
  const cplx bc = b * c;
  cplx s = std::sqrt(p * p + bc);
  if ((std::conj(p) * s).real() < 0.0) s = -s;
  const cplx den = p + s;
  if (den == cplx{}) return d;
  return d - bc / den;
}

// Eigenvalues of an upper Hessenberg matrix; H is overwritten.
std::vector<cplx> hessenberg_qr(DenseMatrix& H) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(H.rows());
  std::vector<cplx> eig(n);
  const double hnorm = std::max(H.max_abs(), std::numeric_limits<double>::min());
  const std::ptrdiff_t max_sweeps = 30 * n;
  std::ptrdiff_t sweeps = 0;
  std::ptrdiff_t hi = n - 1;
  int its = 0;
  std::vector<double> rot_c;
  std::vector<cplx> rot_s;

  while (hi >= 0) {
    std::ptrdiff_t l = hi;
    while (l > 0) {
      const double sub = std::abs(H(l, l - 1));
      double ref = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (ref == 0.0) ref = hnorm;
      if (sub <= kEps * ref) {
        H(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == hi) {
      eig[hi] = H(hi, hi);
      --hi;
      its = 0;
      continue;
    }
    if (++sweeps > max_sweeps)
      throw Error(ErrorKind::ConvergenceFailure,
                  "eig_dense: QR iteration did not converge");
    ++its;

    cplx mu;
    if (its % 10 == 0) {
      mu = H(hi, hi) + 0.75 * std::abs(H(hi, hi - 1));
    } else {
      mu = wilkinson_shift(H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1), H(hi, hi));
    }

    // Bulge chase. Column rotations reach rows l..k+2; only rows k..k+2
    // are needed right away, the rest are applied row by row afterwards so
    // that every pass over H is contiguous.
    rot_c.assign(hi - l, 1.0);
    rot_s.assign(hi - l, cplx{});
    cplx x = H(l, l) - mu;
    cplx y = H(l + 1, l);
    for (std::ptrdiff_t k = l; k < hi; ++k) {
      if (k > l) {
        x = H(k, k - 1);
        y = H(k + 1, k - 1);
      }
      const double ay = std::abs(y);
      if (ay == 0.0 && k > l) continue;
      double c;
      cplx s;
      const double ax = std::abs(x);
      const double nrm = std::hypot(ax, ay);
      if (nrm == 0.0) continue;
      if (ax == 0.0) {
        c = 0.0;
        s = std::conj(y) / ay;
      } else {
        c = ax / nrm;
        s = (x / ax) * std::conj(y) / nrm;
      }
      rot_c[k - l] = c;
      rot_s[k - l] = s;
      const cplx sc = std::conj(s);
      const std::ptrdiff_t c0 = (k > l) ? k - 1 : l;
      cplx* rk = &H(k, 0);
      cplx* rk1 = &H(k + 1, 0);
      for (std::ptrdiff_t j = c0; j <= hi; ++j) {
        const cplx t1 = rk[j];
        const cplx t2 = rk1[j];
        rk[j] = c * t1 + s * t2;
        rk1[j] = c * t2 - sc * t1;
      }
      if (k > l) H(k + 1, k - 1) = 0.0;
      const std::ptrdiff_t r1 = std::min(k + 2, hi);
      for (std::ptrdiff_t i = std::max(l, k); i <= r1; ++i) {
        cplx* ri = &H(i, 0);
        const cplx t1 = ri[k];
        const cplx t2 = ri[k + 1];
        ri[k] = c * t1 + sc * t2;
        ri[k + 1] = c * t2 - s * t1;
      }
    }
    for (std::ptrdiff_t i = l; i + 1 < hi; ++i) {
      cplx* ri = &H(i, 0);
      for (std::ptrdiff_t k = i + 1; k < hi; ++k) {
        const double c = rot_c[k - l];
        const cplx s = rot_s[k - l];
        if (s == cplx{} && c == 1.0) continue;
        const cplx t1 = ri[k];
        const cplx t2 = ri[k + 1];
        ri[k] = c * t1 + std::conj(s) * t2;
        ri[k + 1] = c * t2 - s * t1;
      }
    }
  }
  return eig;
}

}  // namespace

std::vector<cplx> eig_dense(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n)
    throw Error(ErrorKind::InvalidInput, "eig_dense needs a non-empty square matrix");
  if (n > kEigDimensionCap)
    throw Error(ErrorKind::InvalidInput,
                "eig_dense: dimension exceeds " + std::to_string(kEigDimensionCap));
  for (const auto& v : a.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::InvalidInput, "eig_dense: non-finite entry");
  DenseMatrix h = a;
  balance(h);
  hessenberg(h);
  return hessenberg_qr(h);
}

std::vector<cplx> roots_companion(const Poly& b) {
  const int d = b.degree();
  if (d < 1) throw Error(ErrorKind::InvalidInput, "roots_companion needs degree >= 1");
  const cplx lead = b.leading();
  DenseMatrix c(d, d);
  for (int i = 1; i < d; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) c(i, d - 1) = -b[i] / lead;
  return eig_dense(c);
}

}  // namespace qteig
