#include "qteig/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qteig/errors.hpp"

namespace qteig {

namespace {

// Quotient of b by the monic s, highest degree first. The recurrence runs
// in powers of 1/z, which is stable because s has its roots inside the disk.
Poly divide_monic(const Poly& b, const Poly& s) {
  const int d = b.degree();
  const int p = s.degree();
  std::vector<cplx> r(b.coeffs().begin(), b.coeffs().end());
  std::vector<cplx> q(d - p + 1);
  for (int k = d; k >= p; --k) {
    const cplx c = r[k];
    q[k - p] = c;
    for (int j = 0; j <= p; ++j) r[k - p + j] -= c * s[j];
  }
  return Poly(std::move(q));
}

// Resultant matrix [U^, S^] of the map (ds, du) -> ds*u + s*du on the free
// coefficients (s monic, u with fixed leading coefficient).
DenseMatrix resultant(const WienerHopfFactors& f) {
  const int p = f.p();
  const int ph = f.p_hat();
  const int d = p + ph;
  DenseMatrix M(d, d);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i <= ph && i + j < d; ++i) M(i + j, j) = f.u[i];
  for (int j = 0; j < ph; ++j)
    for (int i = 0; i <= p && i + j < d; ++i) M(i + j, p + j) = f.s[i];
  return M;
}

double mismatch(const WienerHopfFactors& f, const Poly& b, std::vector<cplx>* r = nullptr) {
  const Poly rec = convolve(f.s, f.u);
  double res = 0.0;
  if (r) r->assign(b.degree(), cplx{});
  for (int i = 0; i <= b.degree(); ++i) {
    const cplx e = b[i] - rec[i];
    res += std::abs(e);
    if (r && i < b.degree()) (*r)[i] = e;
  }
  return res;
}

// Newton refinement of s*u = b: the coefficients of s from the roots carry
// absolute errors of order eps that the powers of G amplify.
void refine(WienerHopfFactors& f, const Poly& b) {
  const int p = f.p();
  const int ph = f.p_hat();
  std::vector<cplx> r;
  double res = mismatch(f, b, &r);
  for (int it = 0; it < 3 && res > 0.0; ++it) {
    DenseMatrix x;
    try {
      x = lu_solve(resultant(f), DenseMatrix::column(r));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Singular) return;
      throw;
    }
    WienerHopfFactors g = f;
    std::vector<cplx> s(g.s.coeffs().begin(), g.s.coeffs().end());
    std::vector<cplx> u(g.u.coeffs().begin(), g.u.coeffs().end());
    for (int i = 0; i < p; ++i) s[i] += x(i, 0);
    for (int i = 0; i < ph; ++i) u[i] += x(p + i, 0);
    g.s = Poly(std::move(s));
    g.u = Poly(std::move(u));
    std::vector<cplx> rg;
    const double res_g = mismatch(g, b, &rg);
    if (!(res_g < res)) return;
    f = std::move(g);
    r = std::move(rg);
    res = res_g;
  }
}

void derivatives(WienerHopfFactors& f, int m) {
  const int p = f.p();
  const int ph = f.p_hat();
  f.s_prime.clear();
  f.u_prime.clear();
  if (p == 0) return;
  DenseMatrix rhs(p + ph, 1);
  rhs(m, 0) = -1.0;
  const DenseMatrix x = lu_solve(resultant(f), rhs);
  f.s_prime.resize(p);
  f.u_prime.resize(ph);
  for (int i = 0; i < p; ++i) f.s_prime[i] = x(i, 0);
  for (int i = 0; i < ph; ++i) f.u_prime[i] = x(p + i, 0);
}

void finish_factors(WienerHopfFactors& f, const Poly& b, int m) {
  f.u = divide_monic(b, f.s);
  refine(f, b);
  if (mismatch(f, b) > 1e-6 * b.norm1())
    throw Error(ErrorKind::FactorizationUnstable,
                "Wiener-Hopf deconvolution residual too large");
  derivatives(f, m);
}

// Block A_k (p x p) of the unilateral equation, read from b's coefficients.
DenseMatrix mateq_block(const Poly& b, int p, int k) {
  DenseMatrix a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = b[j - i + (k + 1) * p];
  return a;
}

// Forward substitution with the unit lower-triangular Toeplitz matrix whose
// first column is (1, s_{p-1}, ..., s_1).
DenseMatrix solve_unit_lower_toeplitz(const Poly& s, DenseMatrix rhs) {
  const int p = s.degree();
  for (int i = 0; i < p; ++i)
    for (int k = 0; k < i; ++k) {
      const cplx l = s[p - (i - k)];
      if (l == cplx{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) -= l * rhs(k, j);
    }
  return rhs;
}

}  // namespace

WienerHopfFactors wiener_hopf(const LaurentSymbol& sym, cplx lambda, FactorMethod method) {
  const Poly b = char_poly(sym, lambda);
  const int m = sym.m();
  WienerHopfFactors f;

  if (method == FactorMethod::CR) {
    const auto rc = count_inside(b);
    if (rc.failure) throw Error(ErrorKind::ConvergenceFailure, "root count failed");
    if (rc.fallback_used && rc.circle_gap < kFactorCircleTol)
      throw Error(ErrorKind::OnCurve, "lambda lies on the symbol curve a(T)");
    const int p = rc.count;
    if (p == 0) {
      f.s = Poly({cplx{1.0}});
      f.u = b;
      return f;
    }
    const DenseMatrix G = cyclic_reduction_g(sym, lambda, p);
    std::vector<cplx> s(p + 1);
    for (int j = 0; j < p; ++j) s[j] = -G(0, j);
    s[p] = 1.0;
    f.s = Poly(std::move(s));
    finish_factors(f, b, m);
    return f;
  }

  auto roots = roots_companion(b);
  for (const auto& r : roots)
    if (std::abs(std::abs(r) - 1.0) < kFactorCircleTol)
      throw Error(ErrorKind::OnCurve, "lambda lies on the symbol curve a(T)");
  std::vector<cplx> inside;
  for (const auto& r : roots)
    if (std::abs(r) < 1.0) inside.push_back(r);
  std::sort(inside.begin(), inside.end(),
            [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
  Poly s({cplx{1.0}});
  for (const auto& r : inside) s = convolve(s, Poly({-r, cplx{1.0}}));
  f.s = s;
  if (inside.empty()) {
    f.u = b;
    return f;
  }
  finish_factors(f, b, m);
  return f;
}

DenseMatrix barnett_g(const Poly& s) {
  const int p = s.degree();
  if (p < 1) throw Error(ErrorKind::InvalidInput, "barnett_g needs degree >= 1");
  DenseMatrix U(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) U(i, j) = -s[j - i];
  return solve_unit_lower_toeplitz(s, std::move(U));
}

DenseMatrix barnett_g_prime(const Poly& s, std::span<const cplx> s_prime) {
  const int p = s.degree();
  if (static_cast<int>(s_prime.size()) != p)
    throw Error(ErrorKind::InvalidInput, "barnett_g_prime: s' must have length p");
  const DenseMatrix G = barnett_g(s);
  // G' = -L^{-1} (U' + L' G)
  DenseMatrix rhs(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) rhs(i, j) = s_prime[j - i];
  for (int i = 0; i < p; ++i)
    for (int k = 0; k < i; ++k) {
      const cplx l = s_prime[p - (i - k)];
      if (l == cplx{}) continue;
      for (int j = 0; j < p; ++j) rhs(i, j) += l * G(k, j);
    }
  rhs *= -1.0;
  return solve_unit_lower_toeplitz(s, std::move(rhs));
}

GPair g_pair(const WienerHopfFactors& f) {
  return {barnett_g(f.s), barnett_g_prime(f.s, f.s_prime)};
}

double residual_mateq(const LaurentSymbol& sym, cplx lambda, const DenseMatrix& G) {
  const int p = static_cast<int>(G.rows());
  if (p == 0) return 0.0;
  const Poly b = char_poly(sym, lambda);
  const int kmax = (b.degree() - 1) / p;
  DenseMatrix acc = mateq_block(b, p, -1);
  DenseMatrix pow = G;
  for (int k = 0; k <= kmax; ++k) {
    acc += mateq_block(b, p, k) * pow;
    if (k < kmax) pow = pow * G;
  }
  return acc.norm_inf();
}

DenseMatrix cyclic_reduction_g(const LaurentSymbol& sym, cplx lambda, int p) {
  if (p < 1) throw Error(ErrorKind::InvalidInput, "cyclic reduction needs p >= 1");
  const Poly b = char_poly(sym, lambda);
  const int kmax = (b.degree() - 1) / p;
  if (kmax == 0) {
    return -1.0 * lu_solve(mateq_block(b, p, 0), mateq_block(b, p, -1));
  }
  // Reblock into P x P blocks so that only three block diagonals survive.
  const int K = kmax;
  const int P = K * p;
  auto big = [&](int d) {
    DenseMatrix out(P, P);
    for (int r = 0; r < K; ++r)
      for (int c = 0; c < K; ++c) {
        const int t = d * K + c - r;
        if (t < -1 || t > kmax) continue;
        const DenseMatrix blk = mateq_block(b, p, t);
        for (int i = 0; i < p; ++i)
          for (int j = 0; j < p; ++j) out(r * p + i, c * p + j) = blk(i, j);
      }
    return out;
  };
  const DenseMatrix am1_orig = big(-1);
  DenseMatrix am1 = am1_orig;
  DenseMatrix a0 = big(0);
  DenseMatrix a1 = big(1);
  DenseMatrix a0hat = a0;
  constexpr int kMaxCR = 60;
  for (int it = 0; it < kMaxCR; ++it) {
    const LU lu(a0);
    const DenseMatrix s_am1 = lu.solve(am1);
    const DenseMatrix s_a1 = lu.solve(a1);
    const DenseMatrix a1_s_am1 = a1 * s_am1;
    a0hat -= a1_s_am1;
    a0 -= am1 * s_a1 + a1_s_am1;
    am1 = -1.0 * (am1 * s_am1);
    a1 = -1.0 * (a1 * s_a1);
    if (a1_s_am1.norm_inf() <= std::numeric_limits<double>::epsilon() * a0hat.norm_inf() ||
        a1.norm_inf() <= std::numeric_limits<double>::epsilon() * a0.norm_inf())
      break;
  }
  const DenseMatrix big_g = -1.0 * lu_solve(a0hat, am1_orig);
  return big_g.block(0, (K - 1) * p, p, p);
}

}  // namespace qteig
