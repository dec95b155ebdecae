#pragma once

#include <vector>

#include "qteig/factor.hpp"
#include "qteig/linalg.hpp"
#include "qteig/qt.hpp"

namespace qteig {

/// Constant part of the reduced problem W V(lambda) beta = 0. W keeps only
/// its m + k2 possibly nonzero columns.
struct NEPContext {
  DenseMatrix W;  // q x width
  int m = 0;
  int q = 0;
  int r2 = 0;
  int width = 0;
};

enum class BasisKind { Vandermonde, Frobenius };

/// K x p basis of the l^2 solutions of the difference equation, with its
/// lambda-derivative. Vandermonde keeps the inside roots `xi`; Frobenius
/// keeps G = F^p and G'.
struct BasisPair {
  DenseMatrix V;
  DenseMatrix V_prime;
  BasisKind kind = BasisKind::Frobenius;
  std::vector<cplx> xi;
  GPair g;

  int p() const { return static_cast<int>(V.cols()); }
};

/// Rank tolerance factor for compressing the rows of E below row m.
inline constexpr double kRankTolE2 = 1e-12;
inline constexpr double kClusterTol = 1e-10;

NEPContext build_w(const QTMatrix& a);

/// Inside roots of z^m(a(z) - lambda), sorted by modulus then argument.
/// Throws OnCurve or ClusteredRoots.
std::vector<cplx> inside_roots(const LaurentSymbol& sym, cplx lambda);

BasisPair basis_vandermonde(const LaurentSymbol& sym, cplx lambda, int rows);
BasisPair basis_frobenius(const WienerHopfFactors& factors, int rows);

struct PhiPair {
  DenseMatrix Phi;
  DenseMatrix Phi_prime;
};

/// Top `rows` rows of W V and W V'.
PhiPair phi(const NEPContext& ctx, const BasisPair& basis, int rows);

/// f/f' = 1 / trace(Phi^{-1} Phi'). Returns 0 when Phi is numerically
/// singular; throws DerivativeVanishes when the trace underflows.
cplx newton_correction(const DenseMatrix& Phi, const DenseMatrix& Phi_prime);

/// v_i = (row i+m of the basis) beta for i = 1..length; rows past the
/// stored basis are generated from the roots or from further powers of G.
std::vector<cplx> eigvec_prefix(const BasisPair& basis, std::span<const cplx> beta,
                                int length, int m);

}  // namespace qteig
