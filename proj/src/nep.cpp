#include "qteig/nep.hpp"

#include <algorithm>
#include <cmath>

#include "qteig/errors.hpp"

namespace qteig {

NEPContext build_w(const QTMatrix& a) {
  const int m = a.m();
  const int k1 = a.k1();
  const int k2 = a.k2();
  const int width = m + k2;
  const auto& sym = a.symbol();

  NEPContext ctx;
  ctx.m = m;
  ctx.width = width;

  // Rows 1..m: [-B, E_1].
  const int r2_rows = std::max(0, k1 - m);
  DenseMatrix top(m, width);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) top(i, j) = -sym.coeff(-m + (j - i));
  DenseMatrix e2(r2_rows, k2);
  for (const auto& e : a.correction().entries()) {
    if (e.i <= m)
      top(e.i - 1, m + e.j - 1) = e.value;
    else
      e2(e.i - m - 1, e.j - 1) = e.value;
  }

  int r2 = 0;
  RankRevealingQR qr;
  if (r2_rows > 0) {
    const double tol = kRankTolE2 * std::max(r2_rows, k2);
    qr = qr_rank_revealing(e2, tol);
    r2 = qr.rank;
  }

  ctx.r2 = r2;
  ctx.q = m + r2;
  ctx.W = DenseMatrix(ctx.q, width);
  for (int i = 0; i < m; ++i)
    std::copy(top.row(i).begin(), top.row(i).end(), ctx.W.row(i).begin());
  for (int r = 0; r < r2; ++r)
    for (int c = 0; c < k2; ++c) ctx.W(m + r, m + qr.permutation[c]) = qr.R(r, c);
  return ctx;
}

std::vector<cplx> inside_roots(const LaurentSymbol& sym, cplx lambda) {
  const auto roots = roots_companion(char_poly(sym, lambda));
  std::vector<cplx> inside;
  for (const auto& r : roots) {
    const double mod = std::abs(r);
    if (std::abs(mod - 1.0) < kFactorCircleTol)
      throw Error(ErrorKind::OnCurve, "lambda lies on the symbol curve a(T)");
    if (mod < 1.0) inside.push_back(r);
  }
  std::sort(inside.begin(), inside.end(), [](cplx x, cplx y) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    return ax != ay ? ax < ay : std::arg(x) < std::arg(y);
  });
  return inside;
}

BasisPair basis_vandermonde(const LaurentSymbol& sym, cplx lambda, int rows) {
  BasisPair out;
  out.kind = BasisKind::Vandermonde;
  out.xi = inside_roots(sym, lambda);
  const int p = static_cast<int>(out.xi.size());
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (std::abs(out.xi[i] - out.xi[j]) < kClusterTol)
        throw Error(ErrorKind::ClusteredRoots, "inside roots are clustered");
  const LaurentPoly da = deriv(sym);
  std::vector<cplx> dxi(p);
  for (int j = 0; j < p; ++j) {
    const cplx d = da(out.xi[j]);
    if (d == cplx{}) throw Error(ErrorKind::ClusteredRoots, "multiple root of a(z) - lambda");
    dxi[j] = 1.0 / d;
  }
  out.V = DenseMatrix(rows, p);
  out.V_prime = DenseMatrix(rows, p);
  for (int j = 0; j < p; ++j) {
    cplx pw = 1.0;  // xi^(i-1)
    cplx pw_prev{};  // xi^(i-2)
    for (int i = 0; i < rows; ++i) {
      out.V(i, j) = pw;
      out.V_prime(i, j) = static_cast<double>(i) * pw_prev * dxi[j];
      pw_prev = pw;
      pw *= out.xi[j];
    }
  }
  return out;
}

BasisPair basis_frobenius(const WienerHopfFactors& factors, int rows) {
  const int p = factors.p();
  if (p < 1) throw Error(ErrorKind::InvalidInput, "Frobenius basis needs p >= 1");
  if (rows < p) throw Error(ErrorKind::InvalidInput, "Frobenius basis needs rows >= p");
  BasisPair out;
  out.kind = BasisKind::Frobenius;
  out.g = g_pair(factors);
  out.V = DenseMatrix(rows, p);
  out.V_prime = DenseMatrix(rows, p);
  DenseMatrix pw = DenseMatrix::identity(p);
  DenseMatrix dpw(p, p);
  for (int r0 = 0; r0 < rows; r0 += p) {
    const int nr = std::min(p, rows - r0);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < p; ++j) {
        out.V(r0 + i, j) = pw(i, j);
        out.V_prime(r0 + i, j) = dpw(i, j);
      }
    if (r0 + p < rows) {
      // (G^k)' = (G^{k-1})' G + G^{k-1} G'
      dpw = dpw * out.g.G + pw * out.g.G_prime;
      pw = pw * out.g.G;
    }
  }
  return out;
}

PhiPair phi(const NEPContext& ctx, const BasisPair& basis, int rows) {
  if (rows > ctx.q || rows < 0) throw Error(ErrorKind::InvalidInput, "phi: rows exceed q");
  if (static_cast<int>(basis.V.rows()) != ctx.width)
    throw Error(ErrorKind::InvalidInput, "phi: basis rows must equal the width of W");
  const DenseMatrix w = ctx.W.block(0, 0, rows, ctx.width);
  return {w * basis.V, w * basis.V_prime};
}

cplx newton_correction(const DenseMatrix& Phi, const DenseMatrix& Phi_prime) {
  // trace((R Phi D)^{-1} R Phi' D) = trace(Phi^{-1} Phi'), so equilibrating
  // rows and columns leaves the correction unchanged but keeps the
  // singularity test from firing on merely badly scaled W rows.
  DenseMatrix a = Phi;
  DenseMatrix b = Phi_prime;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r = std::max(r, std::abs(a(i, j)));
    if (r == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) /= r;
      b(i, j) /= r;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c = std::max(c, std::abs(a(i, j)));
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      a(i, j) /= c;
      b(i, j) /= c;
    }
  }
  DenseMatrix x;
  try {
    x = LU(a).solve(b);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Singular) return 0.0;
    throw;
  }
  const cplx t = x.trace();
  if (!(std::abs(t) >= 1e-300))
    throw Error(ErrorKind::DerivativeVanishes, "trace(Phi^-1 Phi') vanishes");
  return 1.0 / t;
}

std::vector<cplx> eigvec_prefix(const BasisPair& basis, std::span<const cplx> beta,
                                int length, int m) {
  const int p = basis.p();
  if (static_cast<int>(beta.size()) != p)
    throw Error(ErrorKind::InvalidInput, "beta must have length p");
  if (std::all_of(beta.begin(), beta.end(), [](cplx b) { return b == cplx{}; }))
    throw Error(ErrorKind::InvalidInput, "beta must be nonzero");
  std::vector<cplx> v(length);
  if (basis.kind == BasisKind::Vandermonde) {
    for (int j = 0; j < p; ++j) {
      cplx pw = std::pow(basis.xi[j], m);
      for (int i = 0; i < length; ++i) {
        v[i] += pw * beta[j];
        pw *= basis.xi[j];
      }
    }
    return v;
  }
  const DenseMatrix bcol = DenseMatrix::column(beta);
  DenseMatrix blk = bcol;  // G^k beta
  int k = 0;
  for (int i = 0; i < length; ++i) {
    const int r = i + m;
    while (k < r / p) {
      blk = basis.g.G * blk;
      ++k;
    }
    v[i] = blk(r % p, 0);
  }
  return v;
}

}  // namespace qteig
