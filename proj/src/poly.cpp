#include "qteig/poly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qteig/errors.hpp"
#include "qteig/linalg.hpp"

namespace qteig {

Poly::Poly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
}

cplx Poly::operator()(cplx z) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Poly::norm1() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::abs(c);
  return s;
}

cplx LaurentPoly::operator()(cplx z) const {
  cplx acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc * std::pow(z, low);
}

cplx LaurentPoly::coeff(int power) const {
  const int k = power - low;
  return (k >= 0 && k < static_cast<int>(coeffs.size())) ? coeffs[k] : cplx{};
}

LaurentSymbol::LaurentSymbol(std::vector<cplx> neg, std::vector<cplx> pos)
    : neg_(std::move(neg)), pos_(std::move(pos)) {
  if (neg_.size() < 2 || pos_.size() < 2)
    throw Error(ErrorKind::InvalidSymbol, "symbol needs m >= 1 and n >= 1");
  if (neg_.front() != pos_.front())
    throw Error(ErrorKind::InconsistentConstant,
                "am[0]/ap[0] must both hold a_0");
  if (neg_.back() == cplx{})
    throw Error(ErrorKind::InvalidSymbol,
                "a_-m (last entry of am) must be nonzero");
  if (pos_.back() == cplx{})
    throw Error(ErrorKind::InvalidSymbol,
                "a_n (last entry of ap) must be nonzero");
}

cplx LaurentSymbol::coeff(int i) const {
  if (i >= 0) return i <= n() ? pos_[i] : cplx{};
  return -i <= m() ? neg_[-i] : cplx{};
}

double LaurentSymbol::norm1() const {
  double s = 0.0;
  for (int i = -m(); i <= n(); ++i) s += std::abs(coeff(i));
  return s;
}

cplx eval(const LaurentSymbol& sym, cplx z) {
  if (z == cplx{}) throw Error(ErrorKind::Domain, "a(z) evaluated at z = 0");
  cplx acc{};
  for (int i = sym.n(); i >= -sym.m(); --i) acc = acc * z + sym.coeff(i);
  return acc * std::pow(z, -sym.m());
}

LaurentPoly deriv(const LaurentSymbol& sym) {
  LaurentPoly d;
  d.low = -sym.m() - 1;
  d.coeffs.reserve(sym.m() + sym.n() + 1);
  for (int j = -sym.m(); j <= sym.n(); ++j)
    d.coeffs.push_back(static_cast<double>(j) * sym.coeff(j));
  return d;
}

Poly char_poly(const LaurentSymbol& sym, cplx lambda) {
  const int m = sym.m();
  std::vector<cplx> c(m + sym.n() + 1);
  for (int i = -m; i <= sym.n(); ++i) c[i + m] = sym.coeff(i);
  c[m] -= lambda;
  return Poly(std::move(c));
}

Poly convolve(const Poly& p, const Poly& q) {
  if (p.is_zero() || q.is_zero()) return Poly{};
  const auto a = p.coeffs();
  const auto b = q.coeffs();
  std::vector<cplx> c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return Poly(std::move(c));
}

namespace {

// Even part of b(z) b(-z), as coefficients of c with c(z^2) = b(z) b(-z).
std::vector<cplx> root_square(std::span<const cplx> b) {
  const std::size_t d = b.size() - 1;
  std::vector<cplx> c(d + 1);
  for (std::size_t k = 0; k <= d; ++k) {
    cplx s{};
    // coefficient of z^(2k) in b(z) b(-z): sum_i b_i b_{2k-i} (-1)^(2k-i)
    const std::size_t lo = 2 * k > d ? 2 * k - d : 0;
    const std::size_t hi = std::min(2 * k, d);
    for (std::size_t i = lo; i <= hi; ++i) {
      const cplx t = b[i] * b[2 * k - i];
      s += (i % 2 == 0) ? t : -t;
    }
    c[k] = s;
  }
  return c;
}

std::size_t first_max_index(std::span<const cplx> c) {
  std::size_t h = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double a = std::abs(c[i]);
    if (a > best) {
      best = a;
      h = i;
    }
  }
  return h;
}

}  // namespace

Poly graeffe_step(const Poly& b) {
  if (b.is_zero()) throw Error(ErrorKind::Domain, "graeffe_step of zero polynomial");
  auto c = root_square(b.coeffs());
  const cplx ch = c[first_max_index(c)];
  for (auto& x : c) x /= ch;
  return Poly(std::move(c));
}

RootCount count_inside(const Poly& b, int maxit) {
  if (b.is_zero()) throw Error(ErrorKind::Domain, "count_inside of zero polynomial");
  RootCount out;
  if (b.degree() == 0) return out;

  std::vector<cplx> cur(b.coeffs().begin(), b.coeffs().end());
  for (int it = 1; it <= maxit; ++it) {
    auto c = root_square(cur);
    const std::size_t h = first_max_index(c);
    const cplx ch = c[h];
    double norm = 0.0;
    for (auto& x : c) {
      x /= ch;
      norm += std::abs(x);
    }
    out.iterations_used = it;
    if (norm < 2.0) {
      out.count = static_cast<int>(h);
      return out;
    }
    cur = std::move(c);
  }

  out.fallback_used = true;
  try {
    const auto roots = roots_companion(b);
    double gap = std::numeric_limits<double>::infinity();
    int inside = 0;
    for (const auto& r : roots) {
      const double mod = std::abs(r);
      gap = std::min(gap, std::abs(mod - 1.0));
      if (mod < 1.0) ++inside;
    }
    out.count = inside;
    out.circle_gap = gap;
  } catch (const Error&) {
    out.failure = true;
    out.count = -1;
  }
  return out;
}

int winding(const LaurentSymbol& sym, cplx lambda, double tol_circle) {
  const auto rc = count_inside(char_poly(sym, lambda));
  if (rc.failure)
    throw Error(ErrorKind::ConvergenceFailure, "root count failed");
  if (rc.fallback_used && rc.circle_gap < tol_circle)
    throw Error(ErrorKind::OnCurve, "lambda lies on the symbol curve a(T)");
  return rc.count - sym.m();
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InvalidSymbol: return "invalid_symbol";
    case ErrorKind::InconsistentConstant: return "inconsistent_constant";
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::SectionTooSmall: return "section_too_small";
    case ErrorKind::PrefixTooShort: return "prefix_too_short";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::ConvergenceFailure: return "convergence_failure";
    case ErrorKind::OnCurve: return "on_curve";
    case ErrorKind::FactorizationUnstable: return "factorization_unstable";
    case ErrorKind::ClusteredRoots: return "clustered_roots";
    case ErrorKind::DerivativeVanishes: return "derivative_vanishes";
  }
  return "unknown";
}

}  // namespace qteig
