#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qteig/factor.hpp"
#include "qteig/nep.hpp"
#include "qteig/qt.hpp"

namespace qteig {

enum class EigStatus {
  IsolatedPQ,
  IsolatedPltQ,
  ContinuousSet,
  OutOfComponent,
  NoConvergencePltQ,
  MaxIterations,
  Diverged,
  OnCurve,
  EmptyComponent,  // p = 0: no decaying solutions, hence no eigenvalue
};

const char* to_string(EigStatus s);
inline bool is_isolated(EigStatus s) {
  return s == EigStatus::IsolatedPQ || s == EigStatus::IsolatedPltQ;
}

struct SolverConfig {
  double tol_step = 1e3 * std::numeric_limits<double>::epsilon();
  int maxit = 20;
  BasisKind method = BasisKind::Frobenius;
  FactorMethod factor_method = FactorMethod::Roots;
  double gamma = 3.0;
  double residual_tol = 1e-10;
  double dedupe_tol = 1e-8;
  int vec_len = 100;
  /// Worker threads for eig_all / basins; 0 picks hardware_concurrency.
  unsigned threads = 0;

  void validate() const;
};

struct EigRecord {
  cplx lambda{};
  std::vector<cplx> beta;
  std::vector<cplx> vec_prefix;
  double tail = 0.0;  // |v_L| for the last reported component
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  EigStatus status = EigStatus::MaxIterations;
  int p = 0;
  int q = 0;
  std::vector<double> steps;  // |lambda_{k+1} - lambda_k| per Newton step
};

/// Operator plus everything that stays fixed across Newton runs.
struct PreparedQT {
  explicit PreparedQT(QTMatrix a);

  QTMatrix A;
  NEPContext ctx;
  double norm = 0.0;
};

/// Newton's iteration on det Phi(lambda) from lambda0, with winding
/// tracking and classification of the outcome.
EigRecord eig_single(const PreparedQT& op, cplx lambda0, const SolverConfig& cfg);
EigRecord eig_single(const QTMatrix& a, cplx lambda0, const SolverConfig& cfg);

/// ||((A - lambda I) v)_{1..rows}|| / ||v_{1..rows}||; v must be long
/// enough for apply_prefix.
double eig_residual(const QTMatrix& a, cplx lambda, std::span<const cplx> v, int rows);

struct EigenSolveReport {
  std::vector<EigRecord> records;  // isolated, deduplicated, sorted by (re, im)
  int section_size = 0;
  int raw_starts = 0;
  int skipped_starts = 0;
  int converged = 0;
  bool continuous_detected = false;
};

/// Section size ceil(gamma * max(k1, k2, m + n)).
int section_size(const QTMatrix& a, double gamma);

EigenSolveReport eig_all(const QTMatrix& a, const SolverConfig& cfg);

struct Box {
  double re0, re1, im0, im1;
};

/// Row-major raster: value(ix, iy) at cell center (center_re(ix), center_im(iy)).
struct Grid {
  Box box{};
  int nx = 0;
  int ny = 0;
  std::vector<int> values;

  int& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * nx + ix]; }
  int at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
  double center_re(int ix) const { return box.re0 + (ix + 0.5) * (box.re1 - box.re0) / nx; }
  double center_im(int iy) const { return box.im0 + (iy + 0.5) * (box.im1 - box.im0) / ny; }
};

inline constexpr int kOnCurveSentinel = -128;
inline constexpr int kBasinNonconv = 0;
inline constexpr int kBasinContinuous = -1;

Grid winding_map(const QTMatrix& a, Box box, int nx, int ny);

struct BasinMap {
  Grid grid;  // labels: 1..K index into `limits`, or kBasinNonconv / kBasinContinuous
  std::vector<cplx> limits;
};

BasinMap basins(const QTMatrix& a, Box box, int nx, int ny, const SolverConfig& cfg);

}  // namespace qteig
