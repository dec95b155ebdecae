#pragma once

#include <vector>

#include "qteig/linalg.hpp"
#include "qteig/poly.hpp"

namespace qteig {

/// z^m (a(z) - lambda) = s(z) u(z): s monic with the p roots inside the unit
/// disk, u of degree m+n-p with leading coefficient a_n. s_prime / u_prime
/// hold d/dlambda of (s_0..s_{p-1}) and (u_0..u_{p̂-1}).
struct WienerHopfFactors {
  Poly s;
  Poly u;
  std::vector<cplx> s_prime;
  std::vector<cplx> u_prime;

  int p() const { return s.degree(); }
  int p_hat() const { return u.degree(); }
};

struct GPair {
  DenseMatrix G;
  DenseMatrix G_prime;
};

enum class FactorMethod { Roots, CR };

/// Roots modulus band treated as lying on the unit circle.
inline constexpr double kFactorCircleTol = 1e-10;

/// Wiener-Hopf factors and their lambda-derivatives. Throws OnCurve when a
/// root is within kFactorCircleTol of the unit circle and
/// FactorizationUnstable when the deconvolution residual is too large.
WienerHopfFactors wiener_hopf(const LaurentSymbol& sym, cplx lambda,
                              FactorMethod method = FactorMethod::Roots);

/// G = F^p for the companion matrix F of monic s, via the Barnett
/// factorization F^p = -L^{-1} U with triangular Toeplitz L, U.
DenseMatrix barnett_g(const Poly& s);

/// dG/dlambda from s and (s_0', ..., s_{p-1}').
DenseMatrix barnett_g_prime(const Poly& s, std::span<const cplx> s_prime);

GPair g_pair(const WienerHopfFactors& f);

/// ||sum_{k>=-1} A_k G^{k+1}||_inf for the unilateral matrix equation whose
/// minimal solvent is F^p; used as a certificate for G.
double residual_mateq(const LaurentSymbol& sym, cplx lambda, const DenseMatrix& G);

/// Minimal solvent of the unilateral equation by cyclic reduction on the
/// reblocked (block tridiagonal) form. p is the number of inside roots.
DenseMatrix cyclic_reduction_g(const LaurentSymbol& sym, cplx lambda, int p);

}  // namespace qteig
