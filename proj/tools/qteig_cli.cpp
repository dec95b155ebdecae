// qteig: eigenvalues of quasi-Toeplitz operators from the command line.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qteig/errors.hpp"
#include "qteig/problem_io.hpp"
#include "qteig/solver.hpp"

namespace {

using namespace qteig;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::string num(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> split_reals(const std::string& s, std::size_t want, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || !std::isfinite(v))
      throw Error(ErrorKind::InvalidInput, std::string(what) + ": bad number '" + tok + "'");
    out.push_back(v);
  }
  if (out.size() != want)
    throw Error(ErrorKind::InvalidInput,
                std::string(what) + ": expected " + std::to_string(want) + " comma-separated values");
  return out;
}

struct Common {
  std::string problem;
  std::string method = "frobenius";
  double gamma = 3.0;
  int maxit = 20;
  double tol = 1e-10;
  unsigned threads = 0;

  SolverConfig config() const {
    SolverConfig c;
    c.method = method == "vandermonde" ? BasisKind::Vandermonde : BasisKind::Frobenius;
    c.gamma = gamma;
    c.maxit = maxit;
    c.residual_tol = tol;
    c.threads = threads;
    return c;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("problem", c.problem, "problem file (JSON)")->required();
  sub->add_option("--method", c.method, "frobenius | vandermonde")
      ->check(CLI::IsMember({"frobenius", "vandermonde"}));
  sub->add_option("--gamma", c.gamma, "finite-section factor");
  sub->add_option("--maxit", c.maxit, "Newton iteration cap");
  sub->add_option("--tol", c.tol, "residual tolerance");
  sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
}

void record_fields(std::ostream& os, const EigRecord& r) {
  os << "\"re\": " << num(r.lambda.real()) << ", \"im\": " << num(r.lambda.imag())
     << ", \"residual\": " << num(r.residual) << ", \"iterations\": " << r.iterations
     << ", \"status\": \"" << to_string(r.status) << "\"";
}

int cmd_eig_all(const Common& c) {
  const auto a = load_problem(c.problem).to_qt();
  const auto rep = eig_all(a, c.config());
  std::ostringstream os;
  os << "{\"section_size\": " << rep.section_size << ", \"eigenvalues\": [";
  for (std::size_t k = 0; k < rep.records.size(); ++k) {
    os << (k ? ", " : "") << "{";
    record_fields(os, rep.records[k]);
    os << "}";
  }
  os << "], \"continuous_components_detected\": "
     << (rep.continuous_detected ? "true" : "false") << "}\n";
  std::cout << os.str();
  return 0;
}

int cmd_eig_single(const Common& c, const std::string& lambda0, int vec_len) {
  const auto a = load_problem(c.problem).to_qt();
  const auto l = split_reals(lambda0, 2, "--lambda0");
  auto cfg = c.config();
  cfg.vec_len = vec_len;
  const auto r = eig_single(a, {l[0], l[1]}, cfg);
  std::ostringstream os;
  os << "{";
  record_fields(os, r);
  os << ", \"p\": " << r.p << ", \"q\": " << r.q << ", \"eigenvector\": [";
  if (is_isolated(r.status))
    for (std::size_t k = 0; k < r.vec_prefix.size(); ++k)
      os << (k ? ", " : "") << "[" << num(r.vec_prefix[k].real()) << ", "
         << num(r.vec_prefix[k].imag()) << "]";
  os << "]}\n";
  std::cout << os.str();
  return 0;
}

void write_grid(const std::string& path, const Grid& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << "re,im,value\n";
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      out << num(g.center_re(ix)) << "," << num(g.center_im(iy)) << "," << g.at(ix, iy) << "\n";
}

struct MapArgs {
  std::string box;
  int res = 0;
  std::string kind = "winding";
  std::string out = "map.csv";
  std::string curve_out;
  int curve_samples = 1024;
};

int cmd_map(const Common& c, const MapArgs& m) {
  const auto a = load_problem(c.problem).to_qt();
  const auto b = split_reals(m.box, 4, "--box");
  const Box box{b[0], b[1], b[2], b[3]};
  if (m.res < 2) throw Error(ErrorKind::InvalidInput, "--res must be >= 2");
  if (!(box.re0 < box.re1) || !(box.im0 < box.im1))
    throw Error(ErrorKind::InvalidInput, "--box must satisfy re0 < re1 and im0 < im1");

  if (m.kind == "winding") {
    write_grid(m.out, winding_map(a, box, m.res, m.res));
  } else {
    const auto bm = basins(a, box, m.res, m.res, c.config());
    write_grid(m.out, bm.grid);
    std::ofstream side(m.out + ".labels.json");
    side << "{\"nonconv\": " << kBasinNonconv << ", \"continuous\": " << kBasinContinuous
         << ", \"labels\": [";
    for (std::size_t k = 0; k < bm.limits.size(); ++k)
      side << (k ? ", " : "") << "{\"label\": " << k + 1 << ", \"re\": "
           << num(bm.limits[k].real()) << ", \"im\": " << num(bm.limits[k].imag()) << "}";
    side << "]}\n";
  }

  const std::string curve_path =
      m.curve_out.empty()
          ? (std::filesystem::path(m.out).parent_path() / "curve.csv").string()
          : m.curve_out;
  std::ofstream curve(curve_path);
  curve << "re,im\n";
  for (const auto& z : symbol_curve(a, m.curve_samples))
    curve << num(z.real()) << "," << num(z.imag()) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isolated eigenvalues of quasi-Toeplitz operators"};
  app.require_subcommand(1);

  Common all_opts;
  auto* all = app.add_subcommand("eig-all", "all isolated eigenvalues from finite-section starts");
  add_common(all, all_opts);

  Common single_opts;
  std::string lambda0;
  int vec_len = 100;
  auto* single = app.add_subcommand("eig-single", "Newton's iteration from one start");
  add_common(single, single_opts);
  single->add_option("--lambda0", lambda0, "start as re,im")->required();
  single->add_option("--vec-len", vec_len, "eigenvector components to print")
      ->check(CLI::NonNegativeNumber);

  Common map_opts;
  MapArgs map_args;
  auto* map = app.add_subcommand("map", "winding-number or Newton-basin raster as CSV");
  add_common(map, map_opts);
  map->add_option("--box", map_args.box, "re0,re1,im0,im1")->required();
  map->add_option("--res", map_args.res, "cells per axis")->required();
  map->add_option("--kind", map_args.kind, "winding | basins")
      ->check(CLI::IsMember({"winding", "basins"}));
  map->add_option("--out", map_args.out, "output CSV");
  map->add_option("--curve-out", map_args.curve_out, "symbol curve CSV (default: curve.csv next to --out)");
  map->add_option("--curve-samples", map_args.curve_samples, "points on a(T)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*all) return cmd_eig_all(all_opts);
    if (*single) return cmd_eig_single(single_opts, lambda0, vec_len);
    return cmd_map(map_opts, map_args);
  } catch (const Error& e) {
    std::cerr << "qteig: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ConvergenceFailure:
      case ErrorKind::FactorizationUnstable:
      case ErrorKind::Singular:
        return kExitNumerical;
      default:
        return kExitInput;
    }
  } catch (const std::exception& e) {
    std::cerr << "qteig: " << e.what() << "\n";
    return kExitNumerical;
  }
}
