#include <gtest/gtest.h>

#include "qteig/errors.hpp"
#include "qteig/nep.hpp"
#include "support.hpp"

namespace qteig {
namespace {

using testing::corner;

PhiPair phi_at(const QTMatrix& a, const NEPContext& ctx, cplx l, BasisKind kind, int rows) {
  const BasisPair b = kind == BasisKind::Vandermonde
                          ? basis_vandermonde(a.symbol(), l, ctx.width)
                          : basis_frobenius(wiener_hopf(a.symbol(), l), ctx.width);
  return phi(ctx, b, rows);
}

// Largest residual of sum_j a_j V_{k+j} - lambda V_k over rows with full band.
double diffeq_residual(const LaurentSymbol& s, cplx l, const DenseMatrix& v) {
  double worst = 0.0;
  const int K = static_cast<int>(v.rows());
  for (std::size_t c = 0; c < v.cols(); ++c) {
    double norm = 0.0;
    for (int k = 0; k < K; ++k) norm = std::max(norm, std::abs(v(k, c)));
    for (int k = s.m(); k + s.n() < K; ++k) {
      cplx r = -l * v(k, c);
      for (int j = -s.m(); j <= s.n(); ++j) r += s.coeff(j) * v(k + j, c);
      worst = std::max(worst, std::abs(r) / norm);
    }
  }
  return worst;
}

TEST(NEP, BuildW) {
  const NEPContext a = build_w(corner());
  EXPECT_EQ(a.q, 1);
  EXPECT_EQ(a.r2, 0);
  EXPECT_EQ(a.width, 2);
  EXPECT_EQ(a.W(0, 0), cplx(2.0));
  EXPECT_EQ(a.W(0, 1), cplx(-4.0));

  const NEPContext c2 = build_w(testing::load("test1_case2.json"));
  EXPECT_EQ(c2.q, 3);
  EXPECT_EQ(c2.r2, 0);
  EXPECT_EQ(c2.width, 103);
  // -B is upper triangular with -a_{-m} on the diagonal
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(c2.W(i, i), cplx(1.0));
    for (int j = 0; j < i; ++j) EXPECT_EQ(c2.W(i, j), cplx(0.0));
  }

  const NEPContext c1 = build_w(testing::load("test1_case1.json"));
  EXPECT_EQ(c1.q, 4);
  EXPECT_EQ(c1.r2, 1);
  EXPECT_EQ(c1.width, 103);
}

TEST(NEP, VandermondeCorner) {
  const BasisPair b = basis_vandermonde(corner().symbol(), 0.0, 3);
  ASSERT_EQ(b.p(), 1);
  const cplx v[] = {1.0, 0.5, 0.25};
  const cplx d[] = {0.0, 1.0 / 6, 1.0 / 6};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::abs(b.V(i, 0) - v[i]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(b.V_prime(i, 0) - d[i]), 0.0, 1e-15);
  }
}

TEST(NEP, VandermondeEllipse) {
  const LaurentSymbol e({0.0, 1.0}, {0.0, 2.0});
  const BasisPair b = basis_vandermonde(e, 0.0, 2);
  ASSERT_EQ(b.p(), 2);
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<cplx> second{b.V(1, 0), b.V(1, 1)};
  EXPECT_LT(testing::match_error(second, {cplx(0, r), cplx(0, -r)}), 1e-15);
  EXPECT_EQ(b.V(0, 0), cplx(1.0));
  EXPECT_EQ(b.V(0, 1), cplx(1.0));
}

TEST(NEP, FrobeniusCorner) {
  const BasisPair b = basis_frobenius(wiener_hopf(corner().symbol(), 0.0), 3);
  const cplx v[] = {1.0, 0.5, 0.25};
  const cplx d[] = {0.0, 1.0 / 6, 1.0 / 6};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::abs(b.V(i, 0) - v[i]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(b.V_prime(i, 0) - d[i]), 0.0, 1e-15);
  }
}

TEST(NEP, FrobeniusBlockRows) {
  WienerHopfFactors f;
  f.s = Poly({-0.12, 0.1, 1.0});
  f.u = Poly({1.0});
  f.s_prime = {0.0, 0.0};
  const BasisPair b = basis_frobenius(f, 5);
  const DenseMatrix want(5, 2, {1.0, 0.0, 0.0, 1.0, 0.12, -0.1, -0.012, 0.13, 0.0156, -0.025});
  EXPECT_LT((b.V - want).max_abs(), 1e-15);
  EXPECT_EQ(b.V_prime.max_abs(), 0.0);
}

TEST(NEP, BasesSolveTheDifferenceEquation) {
  std::mt19937_64 rng(41);
  int checked = 0;
  while (checked < 30) {
    const LaurentSymbol s = testing::random_symbol(rng, 1 + checked % 3, 1 + checked % 4);
    const cplx l = testing::random_cplx(rng, -1.0, 1.0);
    try {
      const BasisPair v = basis_vandermonde(s, l, 20);
      const BasisPair f = basis_frobenius(wiener_hopf(s, l), 20);
      EXPECT_LT(diffeq_residual(s, l, v.V), 1e-8);
      EXPECT_LT(diffeq_residual(s, l, f.V), 1e-8);
      ++checked;
    } catch (const Error&) {
      // on the curve, clustered roots or p = 0
    }
  }
}

TEST(NEP, PhiCorner) {
  const QTMatrix a = corner();
  const NEPContext ctx = build_w(a);
  for (BasisKind k : {BasisKind::Vandermonde, BasisKind::Frobenius}) {
    const PhiPair ph = phi_at(a, ctx, 0.0, k, 1);
    EXPECT_NEAR(std::abs(ph.Phi(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(ph.Phi_prime(0, 0) - cplx(-2.0 / 3)), 0.0, 1e-15);
  }
}

TEST(NEP, DeterminantRelation) {
  const QTMatrix a = testing::load("test1_case1.json");
  const NEPContext ctx = build_w(a);
  for (cplx l : {cplx(-1.0, 0.5), cplx(-0.3, 1.2), cplx(0.2, -0.9)}) {
    const BasisPair v = basis_vandermonde(a.symbol(), l, ctx.width);
    const int p = v.p();
    const cplx fv = determinant(phi(ctx, v, p).Phi);
    const BasisPair f = basis_frobenius(wiener_hopf(a.symbol(), l), ctx.width);
    const cplx ff = determinant(phi(ctx, f, p).Phi);
    const cplx vp = determinant(v.V.block(0, 0, p, p));
    EXPECT_LT(std::abs(fv - ff * vp), 1e-8 * std::abs(fv)) << l;
  }
}

TEST(NEP, NewtonCorrectionExamples) {
  EXPECT_NEAR(std::abs(newton_correction(DenseMatrix(1, 1, {3.0}), DenseMatrix(1, 1, {4.0})) -
                       cplx(0.75)),
              0.0, 1e-16);
  EXPECT_EQ(newton_correction(DenseMatrix(1, 1, {0.0}), DenseMatrix(1, 1, {1.0})), cplx(0.0));
}

// Oracle: f = det Phi by LU; Newton step f / f' from central differences.
// Returns false when f' is too small relative to f for differences to resolve.
bool check_against_fd(const QTMatrix& a, cplx l, BasisKind kind) {
  constexpr double h = 1e-7;
  const NEPContext ctx = build_w(a);
  const PhiPair ph = phi_at(a, ctx, l, kind, std::min(ctx.q, a.m() + winding(a.symbol(), l)));
  const int p = static_cast<int>(ph.Phi.cols());
  const cplx f = determinant(ph.Phi);
  const cplx fp = (determinant(phi_at(a, ctx, l + h, kind, p).Phi) -
                   determinant(phi_at(a, ctx, l - h, kind, p).Phi)) /
                  (2 * h);
  if (std::abs(fp) * h < 1e-9 * std::abs(f)) return false;
  const cplx step = f / fp;
  EXPECT_LT(std::abs(newton_correction(ph.Phi, ph.Phi_prime) - step), 1e-5 * std::max(1.0, std::abs(step)))
      << l;
  return true;
}

TEST(NEP, NewtonCorrectionMatchesFiniteDifferences) {
  EXPECT_TRUE(check_against_fd(corner(), 0.1, BasisKind::Frobenius));
  EXPECT_TRUE(check_against_fd(corner(), 0.1, BasisKind::Vandermonde));

  std::mt19937_64 rng(42);
  for (const char* name : {"test1_case1.json", "test2_case1.json"}) {
    const QTMatrix a = testing::load(name);
    const int q = build_w(a).q;
    const auto curve = symbol_curve(a, 2048);
    int checked = 0, tries = 0;
    while (checked < 20 && ++tries < 2000) {
      const cplx l = testing::random_cplx(rng, -2.0, 2.0);
      if (testing::dist_to_set(l, curve) < 0.05) continue;
      const int p = a.m() + winding(a.symbol(), l);
      if (p == 0 || p > q) continue;
      checked += check_against_fd(a, l, BasisKind::Frobenius);
    }
    EXPECT_EQ(checked, 20) << name;
  }
}

TEST(NEP, TraceProductRule) {
  std::mt19937_64 rng(43);
  auto rnd = [&](int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = testing::random_cplx(rng, -1.0, 1.0);
    for (int i = 0; i < n; ++i) m(i, i) += 2.0 * n;
    return m;
  };
  for (int n = 1; n <= 6; ++n) {
    const DenseMatrix P = rnd(n), dP = rnd(n), Q = rnd(n), dQ = rnd(n);
    const cplx lhs = 1.0 / newton_correction(P * Q, dP * Q + P * dQ);
    const cplx rhs = 1.0 / newton_correction(P, dP) + 1.0 / newton_correction(Q, dQ);
    EXPECT_LT(std::abs(lhs - rhs), 1e-8 * std::abs(rhs));
  }
}

TEST(NEP, RowScalingLeavesCorrectionUnchanged) {
  const QTMatrix a = testing::load("test1_case1.json");
  NEPContext ctx = build_w(a);
  const cplx l(-0.35, 1.3);
  const BasisPair b = basis_frobenius(wiener_hopf(a.symbol(), l), ctx.width);
  const int p = b.p();
  const PhiPair ph = phi(ctx, b, p);
  for (int c = 0; c < ctx.width; ++c) ctx.W(0, c) *= 10.0;
  const PhiPair scaled = phi(ctx, b, p);
  EXPECT_LT(std::abs(determinant(scaled.Phi) - 10.0 * determinant(ph.Phi)),
            1e-10 * std::abs(determinant(scaled.Phi)));
  const cplx c0 = newton_correction(ph.Phi, ph.Phi_prime);
  EXPECT_LT(std::abs(newton_correction(scaled.Phi, scaled.Phi_prime) - c0), 1e-10 * std::abs(c0));
}

TEST(NEP, EigvecPrefix) {
  const auto s = corner().symbol();
  const BasisPair v = basis_vandermonde(s, 0.0, 2);
  const BasisPair f = basis_frobenius(wiener_hopf(s, 0.0), 2);
  const std::vector<cplx> one{1.0}, three{3.0};
  const auto pv = eigvec_prefix(v, one, 4, 1);
  const auto pf = eigvec_prefix(f, one, 4, 1);
  const auto p3 = eigvec_prefix(v, three, 4, 1);
  for (int i = 0; i < 4; ++i) {
    const double want = std::pow(0.5, i + 1);
    EXPECT_NEAR(std::abs(pv[i] - want), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(pf[i] - want), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p3[i] - 3.0 * want), 0.0, 1e-15);
  }
  const std::vector<cplx> zero{0.0};
  EXPECT_THROW(eigvec_prefix(v, zero, 4, 1), Error);
}

TEST(NEP, ClusteredRootsRejectVandermonde) {
  // z (a(z) - 0) = (z + 1/2)^2: a double root inside the disk
  const LaurentSymbol s({1.0, 0.25}, {1.0, 1.0});
  try {
    basis_vandermonde(s, 0.0, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ClusteredRoots);
  }
}

}  // namespace
}  // namespace qteig
