#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tracelab/diagram.hpp"
#include "tracelab/exprparse.hpp"
#include "tracelab/frfun.hpp"
#include "tracelab/geolen.hpp"
#include "tracelab/graphlab.hpp"
#include "tracelab/hypgeom.hpp"
#include "tracelab/pipoly.hpp"
#include "tracelab/quadrature.hpp"
#include "tracelab/volfun.hpp"

namespace {

namespace pipoly = tracelab::pipoly;
namespace quadrature = tracelab::quadrature;
namespace volfun = tracelab::volfun;
using nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Deterministic generator shared by the sampling commands; the stream depends
// only on the seed, never on call sites or platform distributions.
std::uint64_t splitmix_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform_in(std::uint64_t& state, double lo, double hi) {
  double u = static_cast<double>(splitmix_next(state) >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double parse_number(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": cannot parse '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + ": cannot parse '" + s + "'");
  }
  return v;
}

// Accepts a single value, a comma list, or an inclusive range "a..b:step".
std::vector<double> parse_ell_list(const std::string& s) {
  std::vector<double> out;
  auto range_pos = s.find("..");
  if (range_pos != std::string::npos) {
    auto colon = s.find(':', range_pos + 2);
    if (colon == std::string::npos) {
      throw std::invalid_argument("range needs a step: use a..b:step");
    }
    double a = parse_number(s.substr(0, range_pos), "range start");
    double b = parse_number(s.substr(range_pos + 2, colon - range_pos - 2), "range end");
    double step = parse_number(s.substr(colon + 1), "range step");
    if (step <= 0.0 || b < a) {
      throw std::invalid_argument("range needs step > 0 and end >= start");
    }
    auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9)) + 1;
    out.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) {
      out.push_back(a + static_cast<double>(i) * step);
    }
    return out;
  }
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    auto piece = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_number(piece, "ell"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty ell list");
  return out;
}

struct GlobalOpts {
  std::string table_path;
  std::uint64_t seed{0};
  double tol{std::nan("")};  // NaN = use the command's own default
  double grid_step{1e-3};
  std::string out_path;
  int jobs{1};
  std::string format;  // empty = command default
};

double tol_or(const GlobalOpts& g, double fallback) {
  return std::isnan(g.tol) ? fallback : g.tol;
}

std::string format_or(const GlobalOpts& g, const std::string& fallback) {
  return g.format.empty() ? fallback : g.format;
}

// Report-style commands are JSON-only; curves honor csv/json.
void require_json(const GlobalOpts& g, const char* cmd) {
  if (!g.format.empty() && g.format != "json") {
    throw std::invalid_argument(std::string(cmd) + " emits json only");
  }
}

int emit(const GlobalOpts& g, const std::string& text) {
  if (g.out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return 0;
  }
  std::ofstream os(g.out_path, std::ios::binary);
  if (!os) {
    std::fprintf(stderr, "error: cannot open '%s' for writing\n", g.out_path.c_str());
    return 2;
  }
  os << text;
  return os ? 0 : 2;
}

pipoly::VolumeTable load_table_checked(const GlobalOpts& g) {
  if (g.table_path.empty()) {
    throw std::invalid_argument("--table is required for this command");
  }
  return pipoly::load_table(g.table_path);
}

// ---------------------------------------------------------------------------
// volumes: load a table, report per-entry shape plus lint warnings.

int run_volumes(const GlobalOpts& g) {
  auto table = load_table_checked(g);
  auto keys = table.keys();
  if (format_or(g, "json") == "csv") {
    std::string text = "g,n,terms,total_degree\n";
    for (const auto& k : keys) {
      const auto& poly = table.at(k.g, k.n);
      text += std::to_string(k.g) + "," + std::to_string(k.n) + "," +
              std::to_string(poly.terms().size()) + "," +
              std::to_string(poly.total_degree()) + "\n";
    }
    return emit(g, text);
  }
  ordered_json doc;
  doc["entries"] = ordered_json::array();
  for (const auto& k : keys) {
    const auto& poly = table.at(k.g, k.n);
    ordered_json e;
    e["g"] = k.g;
    e["n"] = k.n;
    e["terms"] = poly.terms().size();
    e["total_degree"] = poly.total_degree();
    e["source"] = table.source(k.g, k.n);
    doc["entries"].push_back(e);
  }
  doc["warnings"] = table.warnings();
  return emit(g, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// vsimple: the one-curve volume profile, exact in the table entries.

struct VSimpleOpts {
  int genus{2};
  std::string ells;
};

int run_vsimple(const GlobalOpts& g, const VSimpleOpts& o) {
  auto table = load_table_checked(g);
  auto ells = parse_ell_list(o.ells);
  std::vector<volfun::VPopRow> rows;
  rows.reserve(ells.size());
  for (double ell : ells) {
    rows.push_back({ell, {volfun::v_simple(table, o.genus, ell), 0.0, 0}});
  }
  if (format_or(g, "csv") == "csv") {
    return emit(g, volfun::to_csv_text(rows, o.genus, "simple"));
  }
  ordered_json doc;
  doc["g"] = o.genus;
  doc["type"] = "simple";
  doc["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json e;
    e["ell"] = r.ell;
    e["value"] = r.res.value;
    e["err_estimate"] = r.res.err_estimate;
    doc["rows"].push_back(e);
  }
  return emit(g, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// vtype: quadrature over the non-simple level set (figure-eight type).

struct VTypeOpts {
  int genus{2};
  std::string ells;
  int n_t{1};
  bool n_t_set{false};
  std::string chart{"primary"};
  bool cross_check{false};
};

int run_vtype(const GlobalOpts& g, const VTypeOpts& o) {
  auto table = load_table_checked(g);
  auto ells = parse_ell_list(o.ells);
  if (!o.n_t_set) {
    std::fprintf(stderr,
                 "note: --nt left at its default of 1; it divides the level-set volume "
                 "by the symmetry count of the loop family, and the right value is an "
                 "open modeling choice, so set it explicitly when it matters\n");
  }
  quadrature::QuadSpec spec;
  spec.tol = tol_or(g, 1e-8);
  auto chart_of = [](const std::string& name) {
    return name == "alternate" ? volfun::Chart::alternate : volfun::Chart::primary;
  };
  // Below 2 arccosh(3) the level set is empty and the volume is exactly zero;
  // emit the zero row instead of the library's domain refusal.
  auto level_set_empty = [](double ell) { return 0.5 * (std::cosh(0.5 * ell) - 1.0) <= 1.0; };
  std::vector<volfun::VPopRow> rows;
  rows.reserve(ells.size());
  double max_cross_rel = 0.0;
  bool noted_empty = false;
  for (double ell : ells) {
    if (level_set_empty(ell)) {
      if (!noted_empty) {
        std::fprintf(stderr, "note: ell <= 2 arccosh(3) has an empty level set; value is 0\n");
        noted_empty = true;
      }
      rows.push_back({ell, {0.0, 0.0, 0}});
      continue;
    }
    auto res = volfun::v_pop_type(table, o.genus, volfun::PopType::figure_eight, ell, o.n_t,
                                  spec, chart_of(o.chart));
    if (o.cross_check) {
      auto other = o.chart == "alternate" ? volfun::Chart::primary : volfun::Chart::alternate;
      auto res2 = volfun::v_pop_type(table, o.genus, volfun::PopType::figure_eight, ell, o.n_t,
                                     spec, other);
      double rel = std::fabs(res.value - res2.value) / std::max(1.0, std::fabs(res.value));
      max_cross_rel = std::max(max_cross_rel, rel);
    }
    rows.push_back({ell, res});
  }
  const double cross_tol = 1e-6;
  bool cross_ok = !o.cross_check || max_cross_rel <= cross_tol;
  int status = cross_ok ? 0 : 1;
  if (format_or(g, "csv") == "csv") {
    int rc = emit(g, volfun::to_csv_text(rows, o.genus, "eight"));
    return rc != 0 ? rc : status;
  }
  ordered_json doc;
  doc["g"] = o.genus;
  doc["type"] = "eight";
  doc["n_t"] = o.n_t;
  doc["chart"] = o.chart;
  doc["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json e;
    e["ell"] = r.ell;
    e["value"] = r.res.value;
    e["err_estimate"] = r.res.err_estimate;
    e["evals"] = r.res.evals;
    doc["rows"].push_back(e);
  }
  if (o.cross_check) {
    doc["cross_check"] = {{"max_rel_err", max_cross_rel}, {"tol", cross_tol}, {"pass", cross_ok}};
  }
  int rc = emit(g, doc.dump(2) + "\n");
  return rc != 0 ? rc : status;
}

// ---------------------------------------------------------------------------
// length-check: expansion vs direct trace over random coordinate points.

struct LengthCheckOpts {
  int r{1};
  int samples{500};
  std::string diagram;  // empty = the default set for r
};

int run_length_check(const GlobalOpts& g, const LengthCheckOpts& o) {
  require_json(g, "length-check");
  double tol = tol_or(g, 1e-9);
  std::vector<std::pair<std::string, tracelab::diagram::Diagram>> picks;
  using tracelab::diagram::figure_eight;
  using tracelab::diagram::flower;
  using tracelab::diagram::once_holed_torus;
  using tracelab::diagram::three_bar_example;
  if (!o.diagram.empty()) {
    if (o.diagram == "eight") {
      picks.emplace_back("figure_eight", figure_eight());
    } else if (o.diagram == "torus") {
      picks.emplace_back("once_holed_torus", once_holed_torus());
    } else if (o.diagram == "threebar") {
      picks.emplace_back("three_bar", three_bar_example());
    } else if (o.diagram == "flower") {
      picks.emplace_back("flower_" + std::to_string(o.r), flower(o.r));
    } else {
      throw std::invalid_argument("unknown --diagram (use eight|torus|threebar|flower)");
    }
  } else if (o.r == 1) {
    picks.emplace_back("figure_eight", figure_eight());
    picks.emplace_back("once_holed_torus", once_holed_torus());
  } else {
    picks.emplace_back("flower_" + std::to_string(o.r), flower(o.r));
    if (o.r == 3) picks.emplace_back("three_bar", three_bar_example());
  }
  ordered_json doc;
  doc["r"] = o.r;
  doc["samples"] = o.samples;
  doc["seed"] = g.seed;
  doc["tol"] = tol;
  doc["reports"] = ordered_json::array();
  double overall = 0.0;
  for (const auto& [id, d] : picks) {
    auto rep = tracelab::geolen::oracle_suite(d, id, o.samples, g.seed);
    overall = std::max(overall, rep.max_rel_err);
    ordered_json e;
    e["diagram_id"] = rep.diagram_id;
    e["samples"] = rep.samples;
    e["seed"] = rep.seed;
    e["max_rel_err"] = rep.max_rel_err;
    doc["reports"].push_back(e);
  }
  doc["max_rel_err"] = overall;
  bool pass = overall <= tol;
  doc["pass"] = pass;
  int rc = emit(g, doc.dump(2) + "\n");
  return rc != 0 ? rc : (pass ? 0 : 1);
}

// ---------------------------------------------------------------------------
// jacobian-check: finite difference vs the closed-form chart derivative.

struct JacobianCheckOpts {
  int samples{50};
  double step{1e-4};
};

int run_jacobian_check(const GlobalOpts& g, const JacobianCheckOpts& o) {
  require_json(g, "jacobian-check");
  double tol = tol_or(g, 1e-6);
  std::uint64_t state = g.seed;
  double max_rel = 0.0;
  std::vector<double> worst_x{0.0, 0.0, 0.0};
  tracelab::geolen::JacobianReport worst{};
  for (int i = 0; i < o.samples; ++i) {
    double x1 = uniform_in(state, 0.5, 5.0);
    double x2 = uniform_in(state, 0.5, 5.0);
    double x3 = uniform_in(state, 0.5, 5.0);
    auto rep = tracelab::geolen::jacobian_fd_check_r1(x1, x2, x3, o.step);
    if (rep.rel_err >= max_rel) {
      max_rel = rep.rel_err;
      worst = rep;
      worst_x = {x1, x2, x3};
    }
  }
  bool pass = max_rel <= tol;
  ordered_json doc;
  doc["samples"] = o.samples;
  doc["seed"] = g.seed;
  doc["step"] = o.step;
  doc["tol"] = tol;
  doc["max_rel_err"] = max_rel;
  doc["worst"] = {{"x", worst_x},
                  {"fd", worst.fd},
                  {"analytic", worst.analytic},
                  {"rel_err", worst.rel_err}};
  doc["pass"] = pass;
  int rc = emit(g, doc.dump(2) + "\n");
  return rc != 0 ? rc : (pass ? 0 : 1);
}

// ---------------------------------------------------------------------------
// density-check: the pushforward density ratio across random chart points.
// ratio = lhs_factor * |dx/d(L, theta)| / rhs_density; the Jacobian reduces to
// dx3/dL1 because theta = (x2, x1) pins the other two coordinates.

struct DensityCheckOpts {
  int samples{100};
};

int run_density_check(const GlobalOpts& g, const DensityCheckOpts& o) {
  require_json(g, "density-check");
  double tol = tol_or(g, 1e-6);
  auto d = tracelab::diagram::figure_eight();
  std::uint64_t state = g.seed;
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < o.samples; ++i) {
    double x1 = uniform_in(state, 0.5, 5.0);
    double x2 = uniform_in(state, 0.5, 5.0);
    double x3 = uniform_in(state, 0.5, 5.0);
    tracelab::geolen::CoordPoint p;
    p.L = {tracelab::hypgeom::hexagon_ortho_length(x1, x2, x3)};
    p.theta = {x2, x1};
    auto dv = tracelab::geolen::wp_density(d, p, {x1, x2, x3});
    double h = 1e-5 * std::max(1.0, x3);
    double dL_dx3 = (tracelab::hypgeom::hexagon_ortho_length(x1, x2, x3 + h) -
                     tracelab::hypgeom::hexagon_ortho_length(x1, x2, x3 - h)) /
                    (2.0 * h);
    double ratio = dv.lhs_factor / (std::fabs(dL_dx3) * dv.rhs_density);
    sum += ratio;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  double mean = sum / o.samples;
  double spread = (hi - lo) / std::fabs(mean);
  double log2c = std::log2(mean);
  double nearest = std::pow(2.0, std::round(log2c));
  bool power_of_two = std::fabs(mean - nearest) <= tol * std::fabs(mean);
  bool pass = spread <= tol && power_of_two;
  ordered_json doc;
  doc["samples"] = o.samples;
  doc["seed"] = g.seed;
  doc["tol"] = tol;
  doc["constant"] = mean;
  doc["min"] = lo;
  doc["max"] = hi;
  doc["rel_spread"] = spread;
  doc["log2_constant"] = log2c;
  doc["nearest_power_of_two"] = nearest;
  doc["power_of_two"] = power_of_two;
  doc["pass"] = pass;
  int rc = emit(g, doc.dump(2) + "\n");
  return rc != 0 ? rc : (pass ? 0 : 1);
}

// ---------------------------------------------------------------------------
// fr group: functions are assembled from an exact polynomial principal part
// (--principal / --p1 / --p2, comma coefficients on e^x) plus an expression
// sampled onto the grid as the remainder (--f / --f1 / --f2).

struct FrBuildOpts {
  std::string principal;
  std::string expr;
};

std::vector<double> parse_coeff_list(const std::string& s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    auto piece = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_number(piece, "coefficient"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

tracelab::frfun::FRFunction build_fr(const FrBuildOpts& b, const tracelab::frfun::Grid& grid,
                                     int K, int N, const char* who) {
  using tracelab::frfun::FRFunction;
  if (b.principal.empty() && b.expr.empty()) {
    throw std::invalid_argument(std::string(who) +
                                ": provide a principal part and/or a sampled expression");
  }
  FRFunction f = FRFunction::zero(grid, K, N);
  if (!b.principal.empty()) {
    auto coeffs = parse_coeff_list(b.principal);
    f = tracelab::frfun::add(f, FRFunction::from_principal(coeffs, grid, N));
  }
  if (!b.expr.empty()) {
    auto parsed = tracelab::exprparse::parse(b.expr);
    if (parsed.arity > 1) {
      throw std::invalid_argument(std::string(who) + ": expression must use only x");
    }
    f = tracelab::frfun::add(
        f, FRFunction::from_samples([&parsed](double x) { return parsed(x); }, grid, K, N));
  }
  if (f.K < K) f.K = K;
  if (f.N < N) f.N = N;
  return f;
}

struct FrCommonOpts {
  int K{1};
  int N{1};
  double ell_max{40.0};
  int stride{100};
};

tracelab::frfun::Grid grid_of(const GlobalOpts& g, const FrCommonOpts& c) {
  return {g.grid_step, c.ell_max};
}

int emit_curve(const GlobalOpts& g, const tracelab::frfun::FRFunction& f, int stride,
               ordered_json header) {
  auto pts = f.grid.points();
  if (format_or(g, "csv") == "csv") {
    std::string text = "ell,value\n";
    for (std::size_t i = 0; i < pts; i += static_cast<std::size_t>(stride)) {
      double ell = f.grid.at(i);
      text += fmt17(ell) + "," + fmt17(f.eval(ell)) + "\n";
    }
    return emit(g, text);
  }
  ordered_json doc = std::move(header);
  doc["rows"] = ordered_json::array();
  for (std::size_t i = 0; i < pts; i += static_cast<std::size_t>(stride)) {
    double ell = f.grid.at(i);
    doc["rows"].push_back({{"ell", ell}, {"value", f.eval(ell)}});
  }
  return emit(g, doc.dump(2) + "\n");
}

struct FrApplyOpts {
  FrBuildOpts f;
  FrCommonOpts common;
  std::string op{"L"};
  int times{1};
};

int run_fr_apply(const GlobalOpts& g, const FrApplyOpts& o) {
  auto f = build_fr(o.f, grid_of(g, o.common), o.common.K, o.common.N, "--f/--principal");
  for (int i = 0; i < o.times; ++i) {
    f = o.op == "P" ? tracelab::frfun::apply_P(f) : tracelab::frfun::apply_L(f);
  }
  ordered_json header;
  header["op"] = o.op;
  header["times"] = o.times;
  header["K"] = f.K;
  header["N"] = f.N;
  return emit_curve(g, f, o.common.stride, std::move(header));
}

struct FrNormOpts {
  FrBuildOpts f;
  FrCommonOpts common;
};

int run_fr_norm(const GlobalOpts& g, const FrNormOpts& o) {
  require_json(g, "fr norm");
  auto f = build_fr(o.f, grid_of(g, o.common), o.common.K, o.common.N, "--f/--principal");
  ordered_json doc;
  doc["K"] = f.K;
  doc["N"] = f.N;
  doc["fr_norm"] = tracelab::frfun::fr_norm(f);
  doc["weak_fr_norm"] = tracelab::frfun::weak_fr_norm(f);
  return emit(g, doc.dump(2) + "\n");
}

struct FrConvolveOpts {
  FrBuildOpts f1, f2;
  FrCommonOpts common;
};

int run_fr_convolve(const GlobalOpts& g, const FrConvolveOpts& o) {
  auto grid = grid_of(g, o.common);
  auto f1 = build_fr(o.f1, grid, o.common.K, o.common.N, "--f1/--p1");
  auto f2 = build_fr(o.f2, grid, o.common.K, o.common.N, "--f2/--p2");
  auto conv = tracelab::frfun::convolve(f1, f2);
  ordered_json header;
  header["op"] = "convolve";
  header["K"] = conv.K;
  header["N"] = conv.N;
  return emit_curve(g, conv, o.common.stride, std::move(header));
}

struct FrPseudoOpts {
  FrBuildOpts f1, f2;
  FrCommonOpts common;
  std::string h_expr{"x1+x2"};
  std::string phi_expr{"1"};
  double a{1e-3};
  std::string ells;
};

int run_fr_pseudo(const GlobalOpts& g, const FrPseudoOpts& o) {
  auto grid = grid_of(g, o.common);
  auto f1 = build_fr(o.f1, grid, o.common.K, o.common.N, "--f1/--p1");
  auto f2 = build_fr(o.f2, grid, o.common.K, o.common.N, "--f2/--p2");
  auto h = tracelab::exprparse::parse(o.h_expr);
  auto phi = tracelab::exprparse::parse(o.phi_expr);
  if (h.arity > 2 || phi.arity > 2) {
    throw std::invalid_argument("fr pseudo: --h and --phi must use x1, x2 only");
  }
  tracelab::frfun::PseudoConvSpec spec;
  spec.n = 2;
  spec.h = [&h](const std::vector<double>& x) { return h(x); };
  spec.phi = [&phi](const std::vector<double>& x) { return phi(x); };
  spec.a = o.a;
  auto ells = parse_ell_list(o.ells);
  auto values = tracelab::frfun::pseudo_convolve({f1, f2}, spec, ells);
  if (format_or(g, "csv") == "csv") {
    std::string text = "ell,value\n";
    for (std::size_t i = 0; i < ells.size(); ++i) {
      text += fmt17(ells[i]) + "," + fmt17(values[i]) + "\n";
    }
    return emit(g, text);
  }
  ordered_json doc;
  doc["h"] = o.h_expr;
  doc["phi"] = o.phi_expr;
  doc["a"] = o.a;
  doc["rows"] = ordered_json::array();
  for (std::size_t i = 0; i < ells.size(); ++i) {
    doc["rows"].push_back({{"ell", ells[i]}, {"value", values[i]}});
  }
  return emit(g, doc.dump(2) + "\n");
}

struct FrCharOpts {
  FrBuildOpts f;
  FrCommonOpts common;
};

int run_fr_charfr(const GlobalOpts& g, const FrCharOpts& o) {
  require_json(g, "fr charfr");
  auto f = build_fr(o.f, grid_of(g, o.common), o.common.K, o.common.N, "--f/--principal");
  auto rep = tracelab::frfun::check_charFR(f, o.common.K, o.common.N);
  int rc = emit(g, tracelab::frfun::to_json_text(rep));
  return rc != 0 ? rc : (rep.member ? 0 : 1);
}

struct FrClassEOpts {
  std::string phi_expr;
  int n{0};  // 0 = take the parsed arity
  double a{1e-3};
  double bound{1e3};
};

int run_fr_class_e(const GlobalOpts& g, const FrClassEOpts& o) {
  require_json(g, "fr class-e");
  auto phi = tracelab::exprparse::parse(o.phi_expr);
  int n = o.n > 0 ? o.n : std::max(1, phi.arity);
  if (phi.arity > n) {
    throw std::invalid_argument("fr class-e: --n smaller than the variables used");
  }
  auto rep = tracelab::frfun::class_E_check(
      [&phi](const std::vector<double>& x) { return phi(x); }, n, o.a, o.bound);
  int rc = emit(g, tracelab::frfun::to_json_text(rep));
  return rc != 0 ? rc : (rep.pass ? 0 : 1);
}

// ---------------------------------------------------------------------------
// graph group.

struct GraphOpts {
  int n{50};
  int d{3};
  int ell_max{10};
  int trials{100};
  int degree{2};
  bool oracle{false};
};

int run_graph_spectrum(const GlobalOpts& g, const GraphOpts& o) {
  require_json(g, "graph spectrum");
  auto graph = tracelab::graphlab::random_regular(o.n, o.d, g.seed);
  auto rep = tracelab::graphlab::spectrum(graph);
  return emit(g, tracelab::graphlab::to_json_text(rep));
}

int run_graph_walks(const GlobalOpts& g, const GraphOpts& o) {
  auto graph = tracelab::graphlab::random_regular(o.n, o.d, g.seed);
  std::vector<std::pair<int, std::string>> rows;
  for (int ell = 1; ell <= o.ell_max; ++ell) {
    rows.emplace_back(ell, tracelab::graphlab::closed_walk_count(graph, ell).str());
  }
  if (format_or(g, "csv") == "csv") {
    std::string text = "ell,closed_walks\n";
    for (const auto& [ell, count] : rows) {
      text += std::to_string(ell) + "," + count + "\n";
    }
    return emit(g, text);
  }
  ordered_json doc;
  doc["n"] = o.n;
  doc["d"] = o.d;
  doc["seed"] = g.seed;
  doc["rows"] = ordered_json::array();
  for (const auto& [ell, count] : rows) {
    doc["rows"].push_back({{"ell", ell}, {"closed_walks", count}});
  }
  return emit(g, doc.dump(2) + "\n");
}

int run_graph_irreducible(const GlobalOpts& g, const GraphOpts& o) {
  if (o.oracle && (o.n > 12 || o.ell_max > 8)) {
    throw std::invalid_argument("--oracle needs n <= 12 and lmax <= 8");
  }
  auto graph = tracelab::graphlab::random_regular(o.n, o.d, g.seed);
  bool all_match = true;
  std::string text = o.oracle ? "ell,irreducible_loops,oracle\n" : "ell,irreducible_loops\n";
  ordered_json rows = ordered_json::array();
  for (int ell = 2; ell <= o.ell_max; ++ell) {
    auto fast = tracelab::graphlab::irreducible_loop_count(graph, ell);
    ordered_json e{{"ell", ell}, {"irreducible_loops", fast.str()}};
    text += std::to_string(ell) + "," + fast.str();
    if (o.oracle) {
      auto slow = tracelab::graphlab::irreducible_loop_count_oracle(graph, ell);
      all_match = all_match && fast == slow;
      text += "," + slow.str();
      e["oracle"] = slow.str();
    }
    text += "\n";
    rows.push_back(e);
  }
  int status = all_match ? 0 : 1;
  if (format_or(g, "csv") == "csv") {
    int rc = emit(g, text);
    return rc != 0 ? rc : status;
  }
  ordered_json doc;
  doc["n"] = o.n;
  doc["d"] = o.d;
  doc["seed"] = g.seed;
  doc["rows"] = rows;
  if (o.oracle) doc["oracle_match"] = all_match;
  int rc = emit(g, doc.dump(2) + "\n");
  return rc != 0 ? rc : status;
}

int run_graph_bound(const GlobalOpts& g, const GraphOpts& o) {
  std::vector<double> min_slack(static_cast<std::size_t>(o.ell_max) + 1,
                                std::numeric_limits<double>::infinity());
  std::vector<bool> holds(static_cast<std::size_t>(o.ell_max) + 1, true);
  long long failures = 0;
  for (int t = 0; t < o.trials; ++t) {
    std::uint64_t state = g.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(t + 1);
    auto graph = tracelab::graphlab::random_regular(o.n, o.d, splitmix_next(state));
    for (int ell = 2; ell <= o.ell_max; ++ell) {
      auto rep = tracelab::graphlab::spectral_bound_check(graph, ell);
      min_slack[static_cast<std::size_t>(ell)] =
          std::min(min_slack[static_cast<std::size_t>(ell)], rep.slack);
      if (!rep.holds) {
        holds[static_cast<std::size_t>(ell)] = false;
        ++failures;
      }
    }
  }
  bool all_hold = failures == 0;
  int status = all_hold ? 0 : 1;
  if (format_or(g, "json") == "csv") {
    std::string text = "ell,min_slack,holds\n";
    for (int ell = 2; ell <= o.ell_max; ++ell) {
      text += std::to_string(ell) + "," + fmt17(min_slack[static_cast<std::size_t>(ell)]) + "," +
              (holds[static_cast<std::size_t>(ell)] ? "1" : "0") + "\n";
    }
    int rc = emit(g, text);
    return rc != 0 ? rc : status;
  }
  ordered_json doc;
  doc["n"] = o.n;
  doc["d"] = o.d;
  doc["ell_max"] = o.ell_max;
  doc["trials"] = o.trials;
  doc["seed"] = g.seed;
  doc["failures"] = failures;
  doc["all_hold"] = all_hold;
  doc["rows"] = ordered_json::array();
  for (int ell = 2; ell <= o.ell_max; ++ell) {
    doc["rows"].push_back({{"ell", ell},
                           {"min_slack", min_slack[static_cast<std::size_t>(ell)]},
                           {"holds", static_cast<bool>(holds[static_cast<std::size_t>(ell)])}});
  }
  int rc = emit(g, doc.dump(2) + "\n");
  return rc != 0 ? rc : status;
}

int run_graph_mc(const GlobalOpts& g, const GraphOpts& o) {
  auto rep = tracelab::graphlab::mc_expected_irreducible(o.n, o.d, o.ell_max, o.trials, g.seed,
                                                         g.jobs);
  if (format_or(g, "csv") == "csv") {
    return emit(g, tracelab::graphlab::to_csv_text(rep));
  }
  return emit(g, tracelab::graphlab::to_json_text(rep));
}

int run_graph_fit(const GlobalOpts& g, const GraphOpts& o) {
  require_json(g, "graph fit");
  auto rep = tracelab::graphlab::mc_expected_irreducible(o.n, o.d, o.ell_max, o.trials, g.seed,
                                                         g.jobs);
  std::map<int, double> counts;
  for (const auto& row : rep.rows) counts[row.ell] = row.mean;
  auto fit = tracelab::graphlab::ramanujan_residual(counts, o.d, o.degree);
  return emit(g, tracelab::graphlab::to_json_text(fit));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry and spectral toolkit: volume tables, level-set volumes, "
               "length oracles, growth-class checks, and regular-graph experiments"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--table", g.table_path, "volume table JSON path");
  app.add_option("--seed", g.seed, "base seed for every randomized command")->capture_default_str();
  app.add_option("--tol", g.tol, "override the command's pass tolerance");
  app.add_option("--grid", g.grid_step, "sampling step for gridded functions")
      ->capture_default_str();
  app.add_option("--out", g.out_path, "write output to this file instead of stdout");
  app.add_option("--jobs", g.jobs, "worker count for trial-parallel commands")
      ->capture_default_str();
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::pair<CLI::App*, std::function<int()>>> runners;

  auto* volumes = app.add_subcommand("volumes", "validate a volume table and list its entries");
  runners.emplace_back(volumes, [&] { return run_volumes(g); });

  VSimpleOpts vs;
  auto* vsimple = app.add_subcommand("vsimple", "volume profile of the one-curve family");
  vsimple->add_option("--g", vs.genus, "genus of the ambient surface")->required()
      ->check(CLI::Range(2, 1000));
  vsimple->add_option("--ell", vs.ells, "length: value, comma list, or a..b:step")->required();
  runners.emplace_back(vsimple, [&] { return run_vsimple(g, vs); });

  VTypeOpts vt;
  auto* vtype =
      app.add_subcommand("vtype", "volume profile of the figure-eight family by quadrature");
  vtype->add_option("--g", vt.genus, "genus of the ambient surface")->required()
      ->check(CLI::Range(2, 1000));
  vtype->add_option("--ell", vt.ells, "length: value, comma list, or a..b:step")->required();
  auto* nt_opt = vtype->add_option("--nt", vt.n_t,
                                   "symmetry count dividing the level-set volume (see note)");
  vtype->add_option("--chart", vt.chart, "integration chart")
      ->check(CLI::IsMember({"primary", "alternate"}))->capture_default_str();
  vtype->add_flag("--cross-check", vt.cross_check,
                  "also integrate in the other chart; exit 1 if they disagree beyond 1e-6");
  runners.emplace_back(vtype, [&, nt_opt] {
    vt.n_t_set = nt_opt->count() > 0;
    return run_vtype(g, vt);
  });

  LengthCheckOpts lc;
  auto* length_check =
      app.add_subcommand("length-check", "length expansion vs direct trace on random points");
  length_check->add_option("--r", lc.r, "loop count of the diagram")->check(CLI::Range(1, 8))
      ->capture_default_str();
  length_check->add_option("--samples", lc.samples, "random points per diagram")
      ->check(CLI::PositiveNumber)->capture_default_str();
  length_check->add_option("--diagram", lc.diagram, "force one diagram: eight|torus|threebar|flower");
  runners.emplace_back(length_check, [&] { return run_length_check(g, lc); });

  JacobianCheckOpts jc;
  auto* jacobian_check =
      app.add_subcommand("jacobian-check", "finite-difference check of the chart Jacobian");
  jacobian_check->add_option("--samples", jc.samples, "random points")->check(CLI::PositiveNumber)
      ->capture_default_str();
  jacobian_check->add_option("--step", jc.step, "finite-difference step")->capture_default_str();
  runners.emplace_back(jacobian_check, [&] { return run_jacobian_check(g, jc); });

  DensityCheckOpts dc;
  auto* density_check = app.add_subcommand(
      "density-check", "measure the pushforward density ratio; it should be one constant");
  density_check->add_option("--samples", dc.samples, "random points")->check(CLI::PositiveNumber)
      ->capture_default_str();
  runners.emplace_back(density_check, [&] { return run_density_check(g, dc); });

  auto* fr = app.add_subcommand("fr", "operators, norms, and growth-class checks");
  fr->require_subcommand(1);
  auto add_build = [](CLI::App* cmd, FrBuildOpts& b, const char* pname, const char* fname) {
    cmd->add_option(pname, b.principal, "polynomial-on-e^x coefficients, constant first");
    cmd->add_option(fname, b.expr, "expression in x sampled onto the grid");
  };
  auto add_common = [](CLI::App* cmd, FrCommonOpts& c, bool with_stride = true) {
    cmd->add_option("--K", c.K, "declared principal degree bound")->capture_default_str();
    cmd->add_option("--N", c.N, "declared remainder envelope power")->capture_default_str();
    cmd->add_option("--ell-max", c.ell_max, "grid upper end")->capture_default_str();
    if (with_stride) {
      cmd->add_option("--stride", c.stride, "output every stride-th grid point")
          ->check(CLI::PositiveNumber)->capture_default_str();
    }
  };

  FrApplyOpts fa;
  auto* fr_apply = fr->add_subcommand("apply-op", "apply L or P repeatedly and print the curve");
  fr_apply->add_option("--op", fa.op, "operator")->check(CLI::IsMember({"L", "P"}))
      ->capture_default_str();
  fr_apply->add_option("--times", fa.times, "application count")->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_build(fr_apply, fa.f, "--principal", "--f");
  add_common(fr_apply, fa.common);
  runners.emplace_back(fr_apply, [&] { return run_fr_apply(g, fa); });

  FrNormOpts fn;
  auto* fr_norm = fr->add_subcommand("norm", "strong and weak norms of a function");
  add_build(fr_norm, fn.f, "--principal", "--f");
  add_common(fr_norm, fn.common, false);
  runners.emplace_back(fr_norm, [&] { return run_fr_norm(g, fn); });

  FrConvolveOpts fc;
  auto* fr_convolve = fr->add_subcommand("convolve", "convolve two functions and print the curve");
  add_build(fr_convolve, fc.f1, "--p1", "--f1");
  add_build(fr_convolve, fc.f2, "--p2", "--f2");
  add_common(fr_convolve, fc.common);
  runners.emplace_back(fr_convolve, [&] { return run_fr_convolve(g, fc); });

  FrPseudoOpts fp;
  auto* fr_pseudo =
      fr->add_subcommand("pseudo", "level-set integral sum_{h(x)=ell} phi(x) f1(x1) f2(x2)");
  add_build(fr_pseudo, fp.f1, "--p1", "--f1");
  add_build(fr_pseudo, fp.f2, "--p2", "--f2");
  add_common(fr_pseudo, fp.common, false);
  fr_pseudo->add_option("--h-expr", fp.h_expr, "level function of x1, x2")->capture_default_str();
  fr_pseudo->add_option("--phi", fp.phi_expr, "weight function of x1, x2")->capture_default_str();
  fr_pseudo->add_option("--a", fp.a, "domain anchor: x_i ranges over [a, ell]")
      ->capture_default_str();
  fr_pseudo->add_option("--ells", fp.ells, "levels: value, comma list, or a..b:step")->required();
  runners.emplace_back(fr_pseudo, [&] { return run_fr_pseudo(g, fp); });

  FrCharOpts fch;
  auto* fr_charfr = fr->add_subcommand("charfr", "membership probe: L^K f below e^{ell/2} growth");
  add_build(fr_charfr, fch.f, "--principal", "--f");
  add_common(fr_charfr, fch.common, false);
  runners.emplace_back(fr_charfr, [&] { return run_fr_charfr(g, fch); });

  FrClassEOpts fe;
  auto* fr_class_e = fr->add_subcommand("class-e", "derivative-decay check for a weight function");
  fr_class_e->add_option("--phi", fe.phi_expr, "weight function expression")->required();
  fr_class_e->add_option("--n", fe.n, "variable count (default: as used)");
  fr_class_e->add_option("--a", fe.a, "box anchor")->capture_default_str();
  fr_class_e->add_option("--bound", fe.bound, "pass threshold for every derivative sup")
      ->capture_default_str();
  runners.emplace_back(fr_class_e, [&] { return run_fr_class_e(g, fe); });

  auto* graph = app.add_subcommand("graph", "random regular graphs: spectra, walks, bounds");
  graph->require_subcommand(1);
  GraphOpts go;
  auto add_graph_nd = [&go](CLI::App* cmd) {
    cmd->add_option("--n", go.n, "vertex count")->capture_default_str();
    cmd->add_option("--d", go.d, "degree")->capture_default_str();
  };

  auto* graph_spectrum = graph->add_subcommand("spectrum", "eigenvalues of one random instance");
  add_graph_nd(graph_spectrum);
  runners.emplace_back(graph_spectrum, [&] { return run_graph_spectrum(g, go); });

  auto* graph_walks = graph->add_subcommand("walks", "closed walk counts of one random instance");
  add_graph_nd(graph_walks);
  graph_walks->add_option("--lmax", go.ell_max, "largest walk length")->capture_default_str();
  runners.emplace_back(graph_walks, [&] { return run_graph_walks(g, go); });

  auto* graph_irr =
      graph->add_subcommand("irreducible", "closed non-backtracking loop counts");
  add_graph_nd(graph_irr);
  graph_irr->add_option("--lmax", go.ell_max, "largest loop length")->capture_default_str();
  graph_irr->add_flag("--oracle", go.oracle,
                      "cross-check against exhaustive enumeration (n <= 12, lmax <= 8)");
  runners.emplace_back(graph_irr, [&] { return run_graph_irreducible(g, go); });

  auto* graph_bound =
      graph->add_subcommand("bound", "trace deviation against the spectral envelope over trials");
  add_graph_nd(graph_bound);
  graph_bound->add_option("--lmax", go.ell_max, "largest walk length")->capture_default_str();
  graph_bound->add_option("--trials", go.trials, "independent random instances")
      ->capture_default_str();
  runners.emplace_back(graph_bound, [&] { return run_graph_bound(g, go); });

  auto* graph_mc =
      graph->add_subcommand("mc", "mean irreducible loop counts over independent draws");
  add_graph_nd(graph_mc);
  graph_mc->add_option("--lmax", go.ell_max, "largest loop length")->capture_default_str();
  graph_mc->add_option("--trials", go.trials, "independent random instances")
      ->capture_default_str();
  runners.emplace_back(graph_mc, [&] { return run_graph_mc(g, go); });

  auto* graph_fit =
      graph->add_subcommand("fit", "polynomial-times-(d-1)^l fit of the mean loop counts");
  add_graph_nd(graph_fit);
  graph_fit->add_option("--lmax", go.ell_max, "largest loop length")->capture_default_str();
  graph_fit->add_option("--trials", go.trials, "independent random instances")
      ->capture_default_str();
  graph_fit->add_option("--degree", go.degree, "fitted polynomial degree")->capture_default_str();
  runners.emplace_back(graph_fit, [&] { return run_graph_fit(g, go); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto& [cmd, run] : runners) {
      if (cmd->parsed()) return run();
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
