#include <gtest/gtest.h>

#include "qteig/errors.hpp"
#include "qteig/linalg.hpp"
#include "support.hpp"

namespace qteig {
namespace {

using testing::match_error;

DenseMatrix random_matrix(std::mt19937_64& rng, int r, int c) {
  DenseMatrix a(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a(i, j) = testing::random_cplx(rng, -1.0, 1.0);
  return a;
}

// H T H with H a Householder reflector: eigenvalues are diag(T) exactly.
DenseMatrix similar_to_triangular(std::mt19937_64& rng, const std::vector<cplx>& diag) {
  const int n = static_cast<int>(diag.size());
  DenseMatrix t(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = diag[i];
    for (int j = i + 1; j < n; ++j) t(i, j) = testing::random_cplx(rng, -1.0, 1.0);
  }
  std::vector<cplx> v(n);
  double vv = 0.0;
  for (auto& x : v) {
    x = testing::random_cplx(rng, -1.0, 1.0);
    vv += std::norm(x);
  }
  DenseMatrix h = DenseMatrix::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) -= 2.0 * v[i] * std::conj(v[j]) / vv;
  return h * t * h;
}

TEST(Linalg, LuSolveExamples) {
  std::mt19937_64 rng(1);
  const DenseMatrix b = random_matrix(rng, 3, 2);
  const DenseMatrix x = lu_solve(DenseMatrix::identity(3), b);
  EXPECT_LT((x - b).max_abs(), 1e-15);

  const DenseMatrix a(2, 2, {4.0, -0.5, -2.0, 1.0});
  const DenseMatrix y = lu_solve(a, DenseMatrix(2, 1, {0.0, -1.0}));
  EXPECT_NEAR(std::abs(y(0, 0) - cplx(-1.0 / 6)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(y(1, 0) - cplx(-4.0 / 3)), 0.0, 1e-15);

  try {
    lu_solve(DenseMatrix(2, 2), DenseMatrix(2, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Singular);
  }
}

TEST(Linalg, LuBackwardError) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + trial;
    DenseMatrix a = random_matrix(rng, n, n);
    for (int i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);  // well conditioned
    const DenseMatrix b = random_matrix(rng, n, 3);
    const DenseMatrix x = lu_solve(a, b);
    EXPECT_LE((a * x - b).norm_inf(), 1e-12 * a.norm_inf() * x.norm_inf());
  }
}

TEST(Linalg, DeterminantOfTriangularProduct) {
  const DenseMatrix a(2, 2, {2.0, 1.0, 0.0, cplx(0, 3)});
  EXPECT_NEAR(std::abs(determinant(a) - cplx(0, 6)), 0.0, 1e-14);
}

TEST(Linalg, QrRankExamples) {
  EXPECT_EQ(qr_rank_revealing(DenseMatrix(3, 3), 1e-12).rank, 0);

  const auto id = qr_rank_revealing(DenseMatrix::identity(2), 1e-12);
  EXPECT_EQ(id.rank, 2);
  EXPECT_NEAR(std::abs(id.R(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(id.R(1, 1)), 1.0, 1e-15);

  const DenseMatrix outer(2, 2, {3.0, 4.0, 6.0, 8.0});
  EXPECT_EQ(qr_rank_revealing(outer, 1e-12).rank, 1);
}

TEST(Linalg, QrReconstructsPermutedInput) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int r = 2 + trial % 7;
    const int c = 2 + (trial * 3) % 9;
    const DenseMatrix a = random_matrix(rng, r, c);
    const auto qr = qr_rank_revealing(a, 1e-12);
    const DenseMatrix qtq = qr.Q.adjoint() * qr.Q;
    EXPECT_LT((qtq - DenseMatrix::identity(r)).max_abs(), 1e-13);
    const DenseMatrix rec = qr.Q * qr.R;
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i)
        EXPECT_LT(std::abs(rec(i, j) - a(i, qr.permutation[j])), 1e-12 * a.norm_fro());
    for (int i = 1; i < std::min(r, c); ++i)
      EXPECT_LE(std::abs(qr.R(i, i)), std::abs(qr.R(i - 1, i - 1)) * (1 + 1e-12));
    for (int i = 1; i < r; ++i)
      for (int j = 0; j < std::min(i, c); ++j) EXPECT_EQ(qr.R(i, j), cplx(0.0));
    EXPECT_EQ(qr.rank, std::min(r, c));
  }
}

TEST(Linalg, EigExamples) {
  const DenseMatrix d(2, 2, {2.0, 0.0, 0.0, cplx(0, 3)});
  EXPECT_LT(match_error(eig_dense(d), {2.0, cplx(0, 3)}), 1e-14);

  const DenseMatrix tri(3, 3, {0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0});
  EXPECT_LT(match_error(eig_dense(tri), {std::sqrt(2.0), 0.0, -std::sqrt(2.0)}), 1e-14);

  const DenseMatrix comp(2, 2, {0.0, 1.0, 1.0, 0.0});
  EXPECT_LT(match_error(eig_dense(comp), {1.0, -1.0}), 1e-14);
}

TEST(Linalg, EigRecoversPlantedSpectrum) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial * 3;
    std::vector<cplx> diag(n);
    for (auto& x : diag) x = testing::random_cplx(rng, -3.0, 3.0);
    const DenseMatrix a = similar_to_triangular(rng, diag);
    EXPECT_LT(match_error(eig_dense(a), diag), 1e-9) << n;
  }
}

TEST(Linalg, EigCharacteristicResidual) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const DenseMatrix a = random_matrix(rng, 8, 8);
    const double scale = std::pow(a.norm_inf(), 8);
    const auto ev = eig_dense(a);
    ASSERT_EQ(ev.size(), 8u);
    for (const cplx& l : ev) {
      DenseMatrix s = a;
      for (int i = 0; i < 8; ++i) s(i, i) -= l;
      EXPECT_LE(std::abs(determinant(s)), 1e-8 * scale);
    }
  }
}

TEST(Linalg, EigLargeTridiagonalToeplitz) {
  // trid(1, 0, 1) of size n has eigenvalues 2 cos(k pi / (n + 1)).
  constexpr int n = 120;
  DenseMatrix a(n, n);
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = 1.0;
  std::vector<cplx> want(n);
  for (int k = 1; k <= n; ++k) want[k - 1] = 2.0 * std::cos(k * M_PI / (n + 1));
  EXPECT_LT(match_error(eig_dense(a), want), 1e-10);
}

TEST(Linalg, RootsCompanion) {
  EXPECT_LT(match_error(roots_companion(Poly({-2.0, 5.0, -2.0})), {0.5, 2.0}), 1e-12);
  EXPECT_LT(match_error(roots_companion(Poly({0.0, 0.0, 0.0, 1.0})), {0.0, 0.0, 0.0}), 1e-12);

  // z^3 (a(z) + 1) for the band symbol; compare the inside count with Graeffe.
  const LaurentSymbol band({0.0, -1.0, 1.0, -1.0}, {0.0, -1.0, -1.0});
  const Poly b = char_poly(band, -1.0);
  const auto r = roots_companion(b);
  ASSERT_EQ(r.size(), 5u);
  int inside = 0;
  for (const cplx& z : r) inside += std::abs(z) < 1.0;
  EXPECT_EQ(inside, count_inside(b).count);
}

TEST(Linalg, RootsOfProductAreUnion) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cplx> all;
    while (all.size() < static_cast<std::size_t>(2 + trial % 9)) {
      const cplx z = testing::random_cplx(rng, -2.0, 2.0);
      if (testing::dist_to_set(z, all) > 0.2) all.push_back(z);
    }
    const std::size_t half = all.size() / 2;
    const Poly p = testing::from_roots({all.begin(), all.begin() + half});
    const Poly q = testing::from_roots({all.begin() + half, all.end()});
    EXPECT_LT(match_error(roots_companion(convolve(p, q)), all), 1e-8);
  }
}

}  // namespace
}  // namespace qteig
