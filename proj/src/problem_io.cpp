#include "qteig/problem_io.hpp"

#include <cmath>
#include <fstream>

#include "qteig/errors.hpp"

namespace qteig {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::InvalidInput, field + ": " + what);
}

double real_at(const json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(field, "must be finite");
  return x;
}

cplx complex_at(const json& j, const std::string& field) {
  if (j.is_number()) return real_at(j, field);
  if (j.is_array() && j.size() == 2)
    return {real_at(j[0], field + "[0]"), real_at(j[1], field + "[1]")};
  bad(field, "expected a number or an [re, im] pair");
}

std::vector<cplx> half_symbol(const json& root, const std::string& key) {
  if (!root.contains(key)) bad(key, "missing");
  const json& a = root.at(key);
  if (!a.is_array() || a.size() < 2) bad(key, "expected a list of at least two coefficients");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    out.push_back(complex_at(a[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

int index_at(const json& j, const std::string& field) {
  if (!j.is_number_integer()) bad(field, "expected an integer");
  const long long v = j.get<long long>();
  if (v < 1 || v > (1 << 24)) bad(field, "index out of range");
  return static_cast<int>(v);
}

Correction correction(const json& root) {
  if (!root.contains("E") || root.at("E").is_null()) return {};
  const json& e = root.at("E");
  std::vector<Correction::Entry> entries;
  if (e.is_object()) {
    const int rows = index_at(e.value("rows", json()), "E.rows");
    const int cols = index_at(e.value("cols", json()), "E.cols");
    if (!e.contains("values") || !e.at("values").is_array() ||
        static_cast<int>(e.at("values").size()) != rows)
      bad("E.values", "expected a list of `rows` rows");
    for (int i = 0; i < rows; ++i) {
      const json& row = e.at("values")[i];
      const std::string rf = "E.values[" + std::to_string(i) + "]";
      if (!row.is_array() || static_cast<int>(row.size()) != cols)
        bad(rf, "expected `cols` entries");
      for (int j = 0; j < cols; ++j) {
        const cplx v = complex_at(row[j], rf + "[" + std::to_string(j) + "]");
        if (v != cplx{}) entries.push_back({i + 1, j + 1, v});
      }
    }
  } else if (e.is_array()) {
    for (std::size_t k = 0; k < e.size(); ++k) {
      const std::string f = "E[" + std::to_string(k) + "]";
      const json& t = e[k];
      if (!t.is_object()) bad(f, "expected {i, j, re, im}");
      const int i = index_at(t.value("i", json()), f + ".i");
      const int j = index_at(t.value("j", json()), f + ".j");
      const double re = t.contains("re") ? real_at(t.at("re"), f + ".re") : 0.0;
      const double im = t.contains("im") ? real_at(t.at("im"), f + ".im") : 0.0;
      entries.push_back({i, j, {re, im}});
    }
  } else {
    bad("E", "expected a dense block object or a triplet list");
  }
  try {
    return Correction(std::move(entries));
  } catch (const Error& err) {
    bad("E", err.what());
  }
}

json pair(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

QTMatrix ProblemFile::to_qt() const { return qt_new(am, ap, E); }

bool operator==(const ProblemFile& x, const ProblemFile& y) {
  if (x.am != y.am || x.ap != y.ap) return false;
  const auto& ex = x.E.entries();
  const auto& ey = y.E.entries();
  if (ex.size() != ey.size()) return false;
  for (std::size_t k = 0; k < ex.size(); ++k)
    if (ex[k].i != ey[k].i || ex[k].j != ey[k].j || ex[k].value != ey[k].value) return false;
  return true;
}

ProblemFile parse_problem(const json& j) {
  if (!j.is_object()) bad("problem", "expected a JSON object");
  ProblemFile p;
  p.am = half_symbol(j, "am");
  p.ap = half_symbol(j, "ap");
  if (p.am[0] != p.ap[0]) bad("am[0]/ap[0]", "must both hold a_0");
  p.E = correction(j);
  try {
    (void)p.to_qt();
  } catch (const Error& err) {
    bad("am/ap", err.what());
  }
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open problem file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("problem file is not valid JSON: ") + e.what());
  }
  return parse_problem(j);
}

json serialize_problem(const ProblemFile& p) {
  json am = json::array();
  json ap = json::array();
  for (const auto& z : p.am) am.push_back(pair(z));
  for (const auto& z : p.ap) ap.push_back(pair(z));
  json e = json::array();
  for (const auto& t : p.E.entries())
    e.push_back({{"i", t.i}, {"j", t.j}, {"re", t.value.real()}, {"im", t.value.imag()}});
  return {{"am", am}, {"ap", ap}, {"E", e}};
}

}  // namespace qteig
