#include "tracelab/geolen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "tracelab/hypgeom.hpp"

namespace tracelab::geolen {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Beyond this total length budget direct evaluation can overflow doubles, so
// both evaluators run in log space.
constexpr double kLogSwitch = 600.0;

std::size_t label_index(diagram::ThetaLabel q) {
  return 2 * static_cast<std::size_t>(q.bar - 1) + (q.sign > 0 ? 0 : 1);
}

void check_point(const diagram::Diagram& d, const CoordPoint& p) {
  if (p.L.size() != static_cast<std::size_t>(d.r))
    throw std::invalid_argument("coordinate point has " + std::to_string(p.L.size()) +
                                " bar lengths, diagram has r = " + std::to_string(d.r));
  if (p.theta.size() != 2 * static_cast<std::size_t>(d.r))
    throw std::invalid_argument("coordinate point needs 2r = " + std::to_string(2 * d.r) +
                                " theta entries, got " + std::to_string(p.theta.size()));
  for (std::size_t j = 0; j < p.L.size(); ++j)
    if (!(p.L[j] > 0.0) || !std::isfinite(p.L[j]))
      throw std::invalid_argument("bar length L_" + std::to_string(j + 1) +
                                  " must be positive and finite");
  for (double t : p.theta)
    if (!std::isfinite(t)) throw std::invalid_argument("theta entries must be finite");
}

struct Step {
  double theta;
  double L;
  int eps;
};

std::vector<Step> traversal_steps(const diagram::Diagram& d, const CoordPoint& p,
                                  diagram::ThetaLabel q0) {
  check_point(d, p);
  auto trav = diagram::relabel(d, q0);
  std::vector<Step> steps;
  steps.reserve(trav.size());
  for (const auto& e : trav) {
    diagram::ThetaLabel q{e.bar, e.sign};
    steps.push_back({p.theta_at(q), p.L[static_cast<std::size_t>(e.bar - 1)], e.sign});
  }
  return steps;
}

double log_cosh(double x) {
  double a = std::fabs(x);
  return a - std::log(2.0) + std::log1p(std::exp(-2.0 * a));
}

// log|sinh(x)| with the sign returned separately; sign 0 at x = 0.
std::pair<double, int> log_abs_sinh(double x) {
  if (x == 0.0) return {kNegInf, 0};
  double a = std::fabs(x);
  double lg = a - std::log(2.0) + std::log1p(-std::exp(-2.0 * a));
  return {lg, x > 0 ? +1 : -1};
}

SignedLog signed_log_sum(const std::vector<std::pair<double, int>>& terms) {
  double top = kNegInf;
  for (const auto& [lg, sg] : terms)
    if (sg != 0 && lg > top) top = lg;
  if (top == kNegInf) return {kNegInf, 0};
  double acc = 0.0;
  for (const auto& [lg, sg] : terms)
    if (sg != 0) acc += sg * std::exp(lg - top);
  if (acc == 0.0) return {kNegInf, 0};
  return {top + std::log(std::fabs(acc)), acc > 0 ? +1 : -1};
}

double length_budget(const std::vector<Step>& steps) {
  double s = 0.0;
  for (const Step& st : steps) s += std::fabs(st.theta) + st.L;
  return s;
}

SignedLog expansion_log_impl(const std::vector<Step>& steps) {
  const std::size_t m = steps.size();
  std::vector<std::pair<double, int>> terms;
  terms.reserve(std::size_t{1} << (m - 1));
  for (std::size_t mask = 0; mask < (std::size_t{1} << (m - 1)); ++mask) {
    double lg = 0.0;
    int sg = +1;
    int rho = +1;
    double arg = 0.0;
    int lead = +1;  // product of the m-1 free choices fixes the last delta
    bool zero = false;
    for (std::size_t k = 0; k < m; ++k) {
      int delta = (k + 1 < m) ? ((mask >> k) & 1 ? -1 : +1) : lead;
      arg += rho * steps[k].eps * steps[k].L;
      if (delta > 0) {
        lg += log_cosh(steps[k].theta / 2.0);
      } else {
        auto [l, s] = log_abs_sinh(steps[k].theta / 2.0);
        if (s == 0) {
          zero = true;
          break;
        }
        lg += l;
        sg *= s;
      }
      rho *= delta;
      if (k + 1 < m) lead *= delta;
    }
    if (zero) continue;
    terms.push_back({lg + log_cosh(arg / 2.0), sg});
  }
  return signed_log_sum(terms);
}

double expansion_direct_impl(const std::vector<Step>& steps) {
  // Terms of opposite sign can cancel several digits against the largest
  // term; extended precision keeps the residual within the oracle tolerance.
  const std::size_t m = steps.size();
  long double total = 0.0L;
  for (std::size_t mask = 0; mask < (std::size_t{1} << (m - 1)); ++mask) {
    long double coef = 1.0L;
    int rho = +1;
    long double arg = 0.0L;
    int lead = +1;
    for (std::size_t k = 0; k < m; ++k) {
      int delta = (k + 1 < m) ? ((mask >> k) & 1 ? -1 : +1) : lead;
      arg += rho * steps[k].eps * static_cast<long double>(steps[k].L);
      long double half = static_cast<long double>(steps[k].theta) / 2.0L;
      coef *= (delta > 0) ? std::cosh(half) : std::sinh(half);
      rho *= delta;
      if (k + 1 < m) lead *= delta;
    }
    total += coef * std::cosh(arg / 2.0L);
  }
  return static_cast<double>(total);
}

void check_expansion_size(const diagram::Diagram& d) {
  if (d.r > 8)
    throw std::invalid_argument(
        "cosh_half_expansion enumerates 2^(2r-1) sign patterns and supports r <= 8; "
        "use the trace oracle for larger diagrams");
}

hypgeom::ScaledMat2 traversal_product(const std::vector<Step>& steps) {
  hypgeom::ScaledMat2 acc{hypgeom::Mat2{}, 0.0};
  for (const Step& st : steps) {
    acc = hypgeom::scaled_mul(
        acc, hypgeom::move_matrix(hypgeom::MoveKind::geodesic_flow, st.eps * st.L));
    acc = hypgeom::scaled_mul(
        acc, hypgeom::move_matrix(hypgeom::MoveKind::perpendicular_flow, st.theta));
  }
  return acc;
}

}  // namespace

double CoordPoint::theta_at(diagram::ThetaLabel q) const {
  std::size_t i = label_index(q);
  if (i >= theta.size()) throw std::out_of_range("theta_at: label " + q.str() + " out of range");
  return theta[i];
}

double& CoordPoint::theta_at(diagram::ThetaLabel q) {
  std::size_t i = label_index(q);
  if (i >= theta.size()) throw std::out_of_range("theta_at: label " + q.str() + " out of range");
  return theta[i];
}

CoordPoint random_point(int r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uL(0.0, 5.0);
  std::uniform_real_distribution<double> uT(-5.0, 5.0);
  CoordPoint p;
  p.L.resize(static_cast<std::size_t>(r));
  p.theta.resize(2 * static_cast<std::size_t>(r));
  for (double& v : p.L) v = 5.0 - uL(rng);  // (0, 5]
  for (double& v : p.theta) v = uT(rng);
  return p;
}

std::map<std::string, double> y_lengths(const diagram::Diagram& d, const CoordPoint& p) {
  check_point(d, p);
  std::map<std::string, double> out;
  for (const auto& [id, labels] : diagram::theta_support(d)) {
    double y = 0.0;
    for (diagram::ThetaLabel q : labels) y += p.theta_at(q);
    out[id] = y;
  }
  return out;
}

double cosh_half_expansion(const diagram::Diagram& d, const CoordPoint& p,
                           diagram::ThetaLabel q0) {
  check_expansion_size(d);
  auto steps = traversal_steps(d, p, q0);
  if (length_budget(steps) > kLogSwitch) {
    SignedLog sl = expansion_log_impl(steps);
    return sl.sign * std::exp(sl.log_abs);
  }
  return expansion_direct_impl(steps);
}

SignedLog expansion_signed_log(const diagram::Diagram& d, const CoordPoint& p,
                               diagram::ThetaLabel q0) {
  check_expansion_size(d);
  return expansion_log_impl(traversal_steps(d, p, q0));
}

long long expansion_term_count(const diagram::Diagram& d, diagram::ThetaLabel q0) {
  check_expansion_size(d);
  std::size_t m = diagram::relabel(d, q0).size();
  return 1LL << (m - 1);
}

double cosh_half_trace(const diagram::Diagram& d, const CoordPoint& p, diagram::ThetaLabel q0) {
  SignedLog sl = trace_signed_log(d, p, q0);
  return sl.sign * std::exp(sl.log_abs);
}

SignedLog trace_signed_log(const diagram::Diagram& d, const CoordPoint& p,
                           diagram::ThetaLabel q0) {
  auto acc = traversal_product(traversal_steps(d, p, q0));
  int sg = acc.trace_sign();
  if (sg == 0) return {kNegInf, 0};
  return {acc.log_abs_trace() - std::log(2.0), sg};
}

double geodesic_length(const diagram::Diagram& d, const CoordPoint& p, diagram::ThetaLabel q0) {
  SignedLog sl = trace_signed_log(d, p, q0);
  if (sl.sign <= 0 || sl.log_abs < -1e-12)
    throw std::domain_error("geodesic_length: traversal is not a hyperbolic element "
                            "(half-trace below 1)");
  if (sl.log_abs > 30.0)
    return 2.0 * (sl.log_abs + std::log1p(std::sqrt(1.0 - std::exp(-2.0 * sl.log_abs))));
  double c = std::exp(sl.log_abs);
  return 2.0 * hypgeom::arccosh_stable(std::max(c, 1.0));
}

DensityValue wp_density(const diagram::Diagram& d, const CoordPoint& p,
                        const std::vector<double>& x) {
  auto ys = y_lengths(d, p);
  for (const auto& [id, y] : ys)
    if (!(y > 0.0))
      throw std::domain_error("wp_density: y(" + id + ") = " + std::to_string(y) +
                              " is not positive; point lies outside the geodesic-diagram "
                              "region of the chart");
  for (double xi : x)
    if (!(xi > 0.0) || !std::isfinite(xi))
      throw std::invalid_argument("wp_density: boundary lengths must be positive");

  auto sig = diagram::filling_signature(d);
  if (x.size() != static_cast<std::size_t>(sig.n))
    throw std::invalid_argument("wp_density: expected " + std::to_string(sig.n) +
                                " boundary lengths for this filling, got " +
                                std::to_string(x.size()));

  DensityValue out{1.0, 1.0};
  out.rhs_density = std::ldexp(1.0, static_cast<int>(d.components.size()));
  for (const auto& [id, y] : ys) {
    (void)id;
    double s = std::sinh(y / 2.0);
    out.rhs_density *= s * s;
  }
  for (double L : p.L) out.rhs_density *= std::sinh(L);

  out.lhs_factor = std::ldexp(1.0, sig.n);
  for (double xi : x) out.lhs_factor *= std::sinh(xi / 2.0);
  return out;
}

JacobianReport jacobian_fd_check_r1(double x1, double x2, double x3, double step) {
  if (!(x1 > 0.0) || !(x2 > 0.0) || !(x3 > 0.0))
    throw std::invalid_argument("jacobian_fd_check_r1: lengths must be positive");
  if (!(step > 0.0) || x3 - step <= 0.0)
    throw std::invalid_argument("jacobian_fd_check_r1: step underflows the hexagon domain");
  double Lp = hypgeom::hexagon_ortho_length(x1, x2, x3 + step);
  double Lm = hypgeom::hexagon_ortho_length(x1, x2, x3 - step);
  double L0 = hypgeom::hexagon_ortho_length(x1, x2, x3);
  JacobianReport rep{};
  rep.fd = (Lp - Lm) / (2.0 * step);
  rep.analytic = std::sinh(x3 / 2.0) /
                 (2.0 * std::sinh(L0) * std::sinh(x1 / 2.0) * std::sinh(x2 / 2.0));
  rep.rel_err = std::fabs(rep.fd - rep.analytic) / std::fabs(rep.analytic);
  return rep;
}

OracleReport oracle_suite(const diagram::Diagram& d, const std::string& diagram_id,
                          int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("oracle_suite: need samples >= 1");
  diagram::ensure_valid(d);
  auto cycles = diagram::loop_cycles(d);
  OracleReport rep{diagram_id, samples, 0.0, seed};
  for (int s = 0; s < samples; ++s) {
    CoordPoint p = random_point(d.r, seed + static_cast<std::uint64_t>(s));
    for (const auto& cyc : cycles) {
      double e = cosh_half_expansion(d, p, cyc.front());
      double t = cosh_half_trace(d, p, cyc.front());
      double rel = std::fabs(e - t) / std::max(std::fabs(t), 1.0);
      rep.max_rel_err = std::max(rep.max_rel_err, rel);
    }
  }
  return rep;
}

std::string to_json_text(const OracleReport& rep) {
  nlohmann::ordered_json j;
  j["diagram_id"] = rep.diagram_id;
  j["samples"] = rep.samples;
  j["max_rel_err"] = rep.max_rel_err;
  j["seed"] = rep.seed;
  return j.dump(2) + "\n";
}

}  // namespace tracelab::geolen
