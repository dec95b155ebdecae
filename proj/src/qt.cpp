#include "qteig/qt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qteig/errors.hpp"

namespace qteig {

Correction::Correction(std::vector<Entry> entries) {
  for (const auto& e : entries) {
    if (e.i < 1 || e.j < 1)
      throw Error(ErrorKind::InvalidInput, "correction indices are 1-based");
    if (e.value != cplx{}) entries_.push_back(e);
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& x, const Entry& y) {
    return x.i != y.i ? x.i < y.i : x.j < y.j;
  });
  for (std::size_t k = 1; k < entries_.size(); ++k)
    if (entries_[k].i == entries_[k - 1].i && entries_[k].j == entries_[k - 1].j)
      throw Error(ErrorKind::InvalidInput,
                  "duplicate correction entry (" + std::to_string(entries_[k].i) +
                      "," + std::to_string(entries_[k].j) + ")");
  for (const auto& e : entries_) {
    k1_ = std::max(k1_, e.i);
    k2_ = std::max(k2_, e.j);
  }
}

Correction Correction::from_dense(const DenseMatrix& block) {
  std::vector<Entry> entries;
  for (std::size_t r = 0; r < block.rows(); ++r)
    for (std::size_t c = 0; c < block.cols(); ++c)
      if (block(r, c) != cplx{})
        entries.push_back({static_cast<int>(r) + 1, static_cast<int>(c) + 1, block(r, c)});
  return Correction(std::move(entries));
}

DenseMatrix Correction::dense() const {
  DenseMatrix d(k1_, k2_);
  for (const auto& e : entries_) d(e.i - 1, e.j - 1) = e.value;
  return d;
}

QTMatrix qt_new(std::vector<cplx> neg, std::vector<cplx> pos, Correction correction) {
  return QTMatrix(LaurentSymbol(std::move(neg), std::move(pos)), std::move(correction));
}

DenseMatrix finite_section(const QTMatrix& a, int n) {
  const int need = std::max({a.m(), a.n(), a.k1(), a.k2()});
  if (n < need || n < 1)
    throw Error(ErrorKind::SectionTooSmall,
                "finite section needs N >= " + std::to_string(need));
  DenseMatrix s(n, n);
  const auto& sym = a.symbol();
  for (int i = 0; i < n; ++i)
    for (int d = -a.m(); d <= a.n(); ++d) {
      const int j = i + d;
      if (j >= 0 && j < n) s(i, j) = sym.coeff(d);
    }
  for (const auto& e : a.correction().entries()) s(e.i - 1, e.j - 1) += e.value;
  return s;
}

std::vector<cplx> apply_prefix(const QTMatrix& a, std::span<const cplx> v, int out_len) {
  const int len = static_cast<int>(v.size());
  if (out_len < 0) throw Error(ErrorKind::InvalidInput, "negative output length");
  if (len < out_len + a.n())
    throw Error(ErrorKind::PrefixTooShort,
                "prefix length " + std::to_string(len) + " < out_len + n");
  const auto& sym = a.symbol();
  std::vector<cplx> out(out_len);
  for (int i = 1; i <= out_len; ++i) {
    cplx s{};
    for (int j = std::max(1, i - a.m()); j <= i + a.n(); ++j)
      s += sym.coeff(j - i) * v[j - 1];
    out[i - 1] = s;
  }
  for (const auto& e : a.correction().entries()) {
    if (e.i > out_len) break;
    if (e.j > len)
      throw Error(ErrorKind::PrefixTooShort,
                  "prefix does not reach correction column " + std::to_string(e.j));
    out[e.i - 1] += e.value * v[e.j - 1];
  }
  return out;
}

double norm_inf(const QTMatrix& a) {
  const auto& sym = a.symbol();
  double best = sym.norm1();
  const auto& entries = a.correction().entries();
  auto it = entries.begin();
  for (int i = 1; i <= a.k1(); ++i) {
    // row i: band entries at columns max(1, i-m)..i+n, plus corrections
    std::vector<std::pair<int, cplx>> row;
    for (int j = std::max(1, i - a.m()); j <= i + a.n(); ++j) row.emplace_back(j, sym.coeff(j - i));
    for (; it != entries.end() && it->i == i; ++it) {
      auto hit = std::find_if(row.begin(), row.end(),
                              [&](const auto& p) { return p.first == it->j; });
      if (hit != row.end())
        hit->second += it->value;
      else
        row.emplace_back(it->j, it->value);
    }
    double s = 0.0;
    for (const auto& [j, v] : row) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

std::vector<cplx> symbol_curve(const QTMatrix& a, int nsamples) {
  if (nsamples < 8) throw Error(ErrorKind::InvalidInput, "symbol_curve needs >= 8 samples");
  std::vector<cplx> out(nsamples);
  for (int k = 0; k < nsamples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / nsamples;
    out[k] = eval(a.symbol(), std::polar(1.0, t));
  }
  return out;
}

}  // namespace qteig
