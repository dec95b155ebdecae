#include "qteig/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qteig/errors.hpp"

namespace qteig {

const char* to_string(EigStatus s) {
  switch (s) {
    case EigStatus::IsolatedPQ: return "isolated_pq";
    case EigStatus::IsolatedPltQ: return "isolated_pltq";
    case EigStatus::ContinuousSet: return "continuous_set";
    case EigStatus::OutOfComponent: return "out_of_component";
    case EigStatus::NoConvergencePltQ: return "no_convergence_pltq";
    case EigStatus::MaxIterations: return "max_iterations";
    case EigStatus::Diverged: return "diverged";
    case EigStatus::OnCurve: return "on_curve";
    case EigStatus::EmptyComponent: return "empty_component";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(tol_step > 0) || !(residual_tol > 0) || !(dedupe_tol > 0) || !(gamma > 0))
    throw Error(ErrorKind::InvalidInput, "solver tolerances and gamma must be positive");
  if (maxit < 1) throw Error(ErrorKind::InvalidInput, "maxit must be >= 1");
  if (vec_len < 0) throw Error(ErrorKind::InvalidInput, "vec_len must be >= 0");
}

PreparedQT::PreparedQT(QTMatrix a) : A(std::move(a)), ctx(build_w(A)), norm(norm_inf(A)) {}

double eig_residual(const QTMatrix& a, cplx lambda, std::span<const cplx> v, int rows) {
  const auto av = apply_prefix(a, v, rows);
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < rows; ++i) {
    num += std::norm(av[i] - lambda * v[i]);
    den += std::norm(v[i]);
  }
  return std::sqrt(num) / std::sqrt(den);
}

namespace {

constexpr double kPltQRankTol = 1e-8;

BasisPair make_basis(const PreparedQT& op, cplx lambda, const SolverConfig& cfg) {
  const auto& sym = op.A.symbol();
  if (cfg.method == BasisKind::Vandermonde) {
    try {
      return basis_vandermonde(sym, lambda, op.ctx.width);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ClusteredRoots) throw;
      // Confluent roots: the Frobenius basis spans the same space.
    }
  }
  return basis_frobenius(wiener_hopf(sym, lambda, cfg.factor_method), op.ctx.width);
}

// Newton correction on the leading p x p block of Phi.
cplx newton_delta(const PreparedQT& op, const BasisPair& basis, int p) {
  const auto ph = phi(op.ctx, basis, p);
  return newton_correction(ph.Phi, ph.Phi_prime);
}

// Null vector of the square p x p Phi: last column of Q in Phi^H P = Q R,
// polished by one inverse-iteration step so that no row of Phi beta is
// favoured over the others.
std::vector<cplx> null_vector(const DenseMatrix& Phi) {
  const auto qr = qr_rank_revealing(Phi.adjoint(), 0.0);
  auto beta = qr.Q.col(qr.Q.cols() - 1);
  try {
    const DenseMatrix x = LU(Phi).solve(DenseMatrix::column(beta));
    double nrm = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) nrm += std::norm(x(i, 0));
    nrm = std::sqrt(nrm);
    if (std::isfinite(nrm) && nrm > 0.0)
      for (std::size_t i = 0; i < x.rows(); ++i) beta[i] = x(i, 0) / nrm;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Singular) throw;
  }
  return beta;
}

// rank(W V) < p with unit-normalized columns.
bool rank_deficient(const PreparedQT& op, const BasisPair& basis) {
  DenseMatrix wv = op.ctx.W * basis.V;
  for (std::size_t j = 0; j < wv.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < wv.rows(); ++i) s += std::norm(wv(i, j));
    s = std::sqrt(s);
    if (s == 0.0) return true;
    for (std::size_t i = 0; i < wv.rows(); ++i) wv(i, j) /= s;
  }
  return qr_rank_revealing(wv, kPltQRankTol).rank < basis.p();
}

struct Finish {
  bool accepted = false;
  EigStatus status = EigStatus::MaxIterations;
};

// Steps (6) and (7): eigenvector, residual, rank test.
Finish classify(const PreparedQT& op, cplx lambda, int p, const SolverConfig& cfg,
                EigRecord& rec) {
  const int q = op.ctx.q;
  const BasisPair basis = make_basis(op, lambda, cfg);
  const auto ph = phi(op.ctx, basis, p);
  const auto beta = null_vector(ph.Phi);
  const int need = std::max(q + op.A.n(), op.A.k2());
  const int len = std::max(need, cfg.vec_len);
  auto v = eigvec_prefix(basis, beta, len, op.ctx.m);
  const double res_q = eig_residual(op.A, lambda, v, q);
  const double res_p = p < q ? eig_residual(op.A, lambda, v, p) : res_q;

  rec.beta = beta;
  rec.residual = res_q;
  const int keep = cfg.vec_len;
  rec.tail = keep > 0 ? std::abs(v[keep - 1]) : 0.0;
  v.resize(keep);
  rec.vec_prefix = std::move(v);

  if (p == q) {
    if (res_q <= cfg.residual_tol) return {true, EigStatus::IsolatedPQ};
    return {false, EigStatus::MaxIterations};
  }
  if (res_p > cfg.residual_tol) return {false, EigStatus::MaxIterations};
  if (rank_deficient(op, basis) && res_q <= cfg.residual_tol)
    return {true, EigStatus::IsolatedPltQ};
  return {true, EigStatus::NoConvergencePltQ};
}

EigRecord run(const PreparedQT& op, cplx lambda0, const SolverConfig& cfg) {
  EigRecord rec;
  rec.lambda = lambda0;
  rec.q = op.ctx.q;
  const auto& sym = op.A.symbol();
  const int m = op.ctx.m;
  const int q = op.ctx.q;

  int w0 = 0;
  try {
    w0 = winding(sym, lambda0);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OnCurve) throw;
    rec.status = EigStatus::OnCurve;
    return rec;
  }

  cplx lambda = lambda0;
  double prev_step = std::numeric_limits<double>::infinity();
  bool retried = false;

  for (int it = 0; it < cfg.maxit; ++it) {
    rec.lambda = lambda;
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
      rec.status = EigStatus::Diverged;
      return rec;
    }
    int w = 0;
    try {
      w = winding(sym, lambda);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OnCurve) throw;
      rec.status = EigStatus::OnCurve;
      return rec;
    }
    if (w != w0) {
      rec.status = EigStatus::OutOfComponent;
      return rec;
    }
    const int p = m + w;
    rec.p = p;
    if (p > q) {
      rec.status = EigStatus::ContinuousSet;
      return rec;
    }
    if (std::abs(lambda) > op.norm) {
      rec.status = EigStatus::Diverged;
      return rec;
    }
    if (p == 0) {
      rec.status = EigStatus::EmptyComponent;
      return rec;
    }

    cplx delta;
    try {
      const BasisPair basis = make_basis(op, lambda, cfg);
      if (basis.p() != p) {
        // Root partition disagrees with the winding count: lambda sits
        // numerically on the curve.
        rec.status = EigStatus::OnCurve;
        return rec;
      }
      delta = newton_delta(op, basis, p);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DerivativeVanishes && !retried) {
        retried = true;
        lambda = lambda * (1.0 + 1e-8) + cplx(0.0, 1e-8);
        continue;
      }
      if (e.kind() == ErrorKind::OnCurve) {
        rec.status = EigStatus::OnCurve;
        return rec;
      }
      rec.status = EigStatus::MaxIterations;
      return rec;
    }

    const double step = std::abs(delta);
    lambda -= delta;
    ++rec.iterations;
    rec.steps.push_back(step);
    const bool stagnated =
        step < cfg.tol_step * std::max(1.0, std::abs(lambda)) && step >= prev_step;
    prev_step = step;
    if (!stagnated) continue;

    // One refining step, then classify.
    try {
      const BasisPair basis = make_basis(op, lambda, cfg);
      const cplx d = basis.p() == p ? newton_delta(op, basis, p) : cplx{};
      lambda -= d;
      ++rec.iterations;
      rec.steps.push_back(std::abs(d));
      rec.lambda = lambda;
      const Finish fin = classify(op, lambda, p, cfg, rec);
      if (fin.accepted) {
        rec.status = fin.status;
        return rec;
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OnCurve) {
        rec.status = EigStatus::OnCurve;
        return rec;
      }
    }
  }
  rec.lambda = lambda;
  rec.status = EigStatus::MaxIterations;
  return rec;
}

unsigned worker_count(const SolverConfig& cfg, std::size_t jobs) {
  unsigned t = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

// Runs f(i) for i in [0, jobs); each index writes only its own slot.
template <class F>
void parallel_for(std::size_t jobs, unsigned threads, F&& f) {
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs; i = next++) f(i);
    });
}

bool less_re_im(cplx a, cplx b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

bool same_limit(cplx a, cplx b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

}  // namespace

EigRecord eig_single(const PreparedQT& op, cplx lambda0, const SolverConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(lambda0.real()) || !std::isfinite(lambda0.imag()))
    throw Error(ErrorKind::InvalidInput, "lambda0 must be finite");
  return run(op, lambda0, cfg);
}

EigRecord eig_single(const QTMatrix& a, cplx lambda0, const SolverConfig& cfg) {
  return eig_single(PreparedQT(a), lambda0, cfg);
}

int section_size(const QTMatrix& a, double gamma) {
  const int base = std::max({a.k1(), a.k2(), a.m() + a.n()});
  return static_cast<int>(std::ceil(gamma * base));
}

EigenSolveReport eig_all(const QTMatrix& a, const SolverConfig& cfg) {
  cfg.validate();
  const PreparedQT op(a);
  EigenSolveReport rep;
  rep.section_size = std::max(section_size(a, cfg.gamma),
                              std::max({a.m(), a.n(), a.k1(), a.k2()}));
  const auto starts = eig_dense(finite_section(a, rep.section_size));
  rep.raw_starts = static_cast<int>(starts.size());

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < starts.size(); ++i)
    if (std::abs(starts[i]) <= 1.1 * op.norm) active.push_back(i);
  rep.skipped_starts = rep.raw_starts - static_cast<int>(active.size());

  std::vector<EigRecord> results(active.size());
  parallel_for(active.size(), worker_count(cfg, active.size()),
               [&](std::size_t k) { results[k] = run(op, starts[active[k]], cfg); });

  for (auto& r : results) {
    if (r.status == EigStatus::ContinuousSet) rep.continuous_detected = true;
    if (!is_isolated(r.status)) continue;
    auto hit = std::find_if(rep.records.begin(), rep.records.end(), [&](const EigRecord& x) {
      return same_limit(x.lambda, r.lambda, cfg.dedupe_tol);
    });
    if (hit == rep.records.end())
      rep.records.push_back(std::move(r));
    else if (r.residual < hit->residual)
      *hit = std::move(r);
  }
  std::sort(rep.records.begin(), rep.records.end(),
            [](const EigRecord& x, const EigRecord& y) { return less_re_im(x.lambda, y.lambda); });
  rep.converged = static_cast<int>(rep.records.size());
  return rep;
}

namespace {

void check_grid(Box box, int nx, int ny) {
  if (nx < 2 || ny < 2) throw Error(ErrorKind::InvalidInput, "resolution must be >= 2");
  if (!(box.re0 < box.re1) || !(box.im0 < box.im1))
    throw Error(ErrorKind::InvalidInput, "box must satisfy re0 < re1 and im0 < im1");
}

}  // namespace

Grid winding_map(const QTMatrix& a, Box box, int nx, int ny) {
  check_grid(box, nx, ny);
  Grid g{box, nx, ny, std::vector<int>(static_cast<std::size_t>(nx) * ny)};
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      try {
        g.at(ix, iy) = winding(a.symbol(), {g.center_re(ix), g.center_im(iy)});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::OnCurve) throw;
        g.at(ix, iy) = kOnCurveSentinel;
      }
    }
  return g;
}

BasinMap basins(const QTMatrix& a, Box box, int nx, int ny, const SolverConfig& cfg) {
  check_grid(box, nx, ny);
  cfg.validate();
  const PreparedQT op(a);
  const std::size_t cells = static_cast<std::size_t>(nx) * ny;
  BasinMap out;
  out.grid = Grid{box, nx, ny, std::vector<int>(cells, kBasinNonconv)};

  std::vector<EigRecord> results(cells);
  parallel_for(cells, worker_count(cfg, cells), [&](std::size_t k) {
    const int ix = static_cast<int>(k % nx);
    const int iy = static_cast<int>(k / nx);
    results[k] = run(op, {out.grid.center_re(ix), out.grid.center_im(iy)}, cfg);
  });

  // Distinct limits in cell order, then relabel by (re, im).
  std::vector<cplx> limits;
  std::vector<int> raw(cells, -1);
  for (std::size_t k = 0; k < cells; ++k) {
    if (!is_isolated(results[k].status)) continue;
    const cplx l = results[k].lambda;
    auto hit = std::find_if(limits.begin(), limits.end(),
                            [&](cplx x) { return same_limit(x, l, cfg.dedupe_tol); });
    raw[k] = static_cast<int>(hit - limits.begin());
    if (hit == limits.end()) limits.push_back(l);
  }
  std::vector<int> order(limits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return less_re_im(limits[x], limits[y]); });
  std::vector<int> rank(limits.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank[order[i]] = static_cast<int>(i);
    out.limits.push_back(limits[order[i]]);
  }
  for (std::size_t k = 0; k < cells; ++k) {
    if (raw[k] >= 0)
      out.grid.values[k] = rank[raw[k]] + 1;
    else if (results[k].status == EigStatus::ContinuousSet)
      out.grid.values[k] = kBasinContinuous;
  }
  return out;
}

}  // namespace qteig
