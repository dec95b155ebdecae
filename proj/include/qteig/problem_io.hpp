#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qteig/qt.hpp"

namespace qteig {

/// Problem file contents: half-symbols am = (a_0, a_-1, ...), ap = (a_0, a_1, ...)
/// and the correction E.
struct ProblemFile {
  std::vector<cplx> am;
  std::vector<cplx> ap;
  Correction E;

  QTMatrix to_qt() const;
  friend bool operator==(const ProblemFile& x, const ProblemFile& y);
};

/// Accepts complex values as [re, im] or plain reals; E as a dense block
/// {rows, cols, values} or as triplets [{i, j, re, im}]. Throws
/// Error(InvalidInput) naming the offending field.
ProblemFile parse_problem(const nlohmann::json& j);
ProblemFile load_problem(const std::string& path);

/// Canonical form: complex pairs everywhere, E as triplets.
nlohmann::json serialize_problem(const ProblemFile& p);

}  // namespace qteig
