#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "qteig/poly.hpp"
#include "qteig/problem_io.hpp"
#include "qteig/qt.hpp"

namespace qteig::testing {

inline std::string data_path(const std::string& name) {
  return std::string(QTEIG_DATA_DIR) + "/problems/" + name;
}

// trid(-2, 5, -2) with the corner shifted to 1; its only isolated
// eigenvalue is 0 with eigenvector v_i = 2^-i.
inline QTMatrix corner() {
  return qt_new({5.0, -2.0}, {5.0, -2.0}, Correction({{1, 1, -4.0}}));
}

inline QTMatrix load(const std::string& name) { return load_problem(data_path(name)).to_qt(); }

// Monic polynomial with the given roots, expanded by hand (not via convolve).
inline Poly from_roots(const std::vector<cplx>& roots, cplx lead = 1.0) {
  std::vector<cplx> c{lead};
  for (const cplx& r : roots) {
    std::vector<cplx> next(c.size() + 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return Poly(std::move(c));
}

inline cplx random_cplx(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng)};
}

// Root with modulus drawn from [0.05, 0.95] or [1.05, 3].
inline cplx random_root_off_circle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double mod = u(rng) < 0.5 ? 0.05 + 0.9 * u(rng) : 1.05 + 1.95 * u(rng);
  return std::polar(mod, 2.0 * M_PI * u(rng));
}

inline LaurentSymbol random_symbol(std::mt19937_64& rng, int m, int n) {
  std::vector<cplx> neg(m + 1), pos(n + 1);
  for (auto& c : neg) c = random_cplx(rng, -1.0, 1.0);
  for (auto& c : pos) c = random_cplx(rng, -1.0, 1.0);
  pos[0] = neg[0];
  return LaurentSymbol(neg, pos);
}

// Minimum distance between a complex value and a set.
inline double dist_to_set(cplx z, const std::vector<cplx>& set) {
  double d = INFINITY;
  for (const cplx& x : set) d = std::min(d, std::abs(z - x));
  return d;
}

// Greedy matching of two root multisets; returns the worst pairing error.
inline double match_error(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (const cplx& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](cplx p, cplx q) {
      return std::abs(p - x) < std::abs(q - x);
    });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

}  // namespace qteig::testing
