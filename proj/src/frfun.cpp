#include "tracelab/frfun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace tracelab::frfun {

namespace {

std::vector<double> trim(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

double poly_eval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

// A p = p - p' + p'' - ...: the closed-form antiderivative of p e^x is
// (A p) e^x up to a constant.
std::vector<double> poly_A(std::vector<double> p) {
  std::vector<double> acc = p;
  std::vector<double> d = std::move(p);
  double sign = -1.0;
  while (d.size() > 1) {
    d = poly_derivative(d);
    for (std::size_t i = 0; i < d.size(); ++i) acc[i] += sign * d[i];
    sign = -sign;
  }
  return trim(std::move(acc));
}

double poly_max_abs(const std::vector<double>& c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::fabs(v));
  return m;
}

// Fourth-order cumulative integral on a uniform grid (exact for cubics).
std::vector<double> cumulative_integral(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> I(n, 0.0);
  if (n < 2) return I;
  if (n < 4) {  // tiny grids: trapezoid
    for (std::size_t k = 1; k < n; ++k) I[k] = I[k - 1] + h * 0.5 * (f[k - 1] + f[k]);
    return I;
  }
  const double c = h / 24.0;
  I[1] = c * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
  for (std::size_t k = 1; k + 2 < n; ++k)
    I[k + 1] = I[k] + c * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]);
  I[n - 1] = I[n - 2] + c * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
  return I;
}

double envelope_weight(double ell, int N) {
  return std::pow(ell + 1.0, N - 1) * std::exp(ell / 2.0);
}

// out[k] = h * trapezoid sum of u[i] v[k-i]; skipped entirely when either
// factor vanishes identically.
std::vector<double> disc_conv(const std::vector<double>& u, const std::vector<double>& v,
                              double h) {
  const std::size_t n = u.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.5 * (u[0] * v[k] + u[k] * v[0]);
    for (std::size_t i = 1; i < k; ++i) s += u[i] * v[k - i];
    out[k] = h * s;
  }
  return out;
}

std::vector<double> principal_samples(const FRFunction& f) {
  std::vector<double> s(f.grid.points());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double ell = f.grid.at(i);
    s[i] = poly_eval(f.principal, ell) * std::exp(ell);
  }
  return s;
}

double fact_table(int k) {
  static const std::vector<double> table = [] {
    std::vector<double> t(171, 1.0);
    for (int i = 1; i <= 170; ++i) t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i - 1)] * i;
    return t;
  }();
  return table[static_cast<std::size_t>(k)];
}

double fd_weight(const PseudoConvSpec& spec, double x1, double x2) {
  const double d = 1e-6;
  double hp = spec.h({x1 + d, x2});
  double hm = spec.h({x1 - d, x2});
  return (hp - hm) / (2.0 * d);
}

// Solve h(x1, x2) = ell for x1 in [a, hi]; monotone increasing in x1 is a
// precondition checked by the caller.  Bisection is safeguarded and
// deterministic; 64 halvings put the bracket far below the 1e-12 target.
double solve_x1(const PseudoConvSpec& spec, double ell, double x2, double hi) {
  double lo = spec.a;
  double flo = spec.h({lo, x2}) - ell;
  // The slice at the domain edge has its root pinned to x1 = a up to rounding;
  // rejecting it would drop a node from the composite rule.
  if (flo > 1e-10 * std::max(1.0, std::fabs(ell))) return -1.0;  // slice outside the level set
  if (flo >= 0.0) return lo;
  double fhi = spec.h({hi, x2}) - ell;
  if (fhi < 0.0)
    throw std::runtime_error("pseudo_convolve: root bracket [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] does not enclose the level set at ell = " +
                             std::to_string(ell));
  for (int it = 0; it < 64; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = spec.h({mid, x2}) - ell;
    if (fm <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::size_t Grid::points() const {
  return static_cast<std::size_t>(std::llround(ell_max / h)) + 1;
}

void check_valid(const FRFunction& f) {
  if (!(f.grid.h > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(f.grid.ell_max >= 10.0)) throw std::invalid_argument("grid must cover at least [0, 10]");
  if (f.K < 0 || f.N < 1) throw std::invalid_argument("declared degrees need K >= 0, N >= 1");
  auto p = trim(f.principal);
  if (!p.empty() && static_cast<int>(p.size()) > f.K)
    throw std::invalid_argument("principal degree " + std::to_string(p.size() - 1) +
                                " is not below the declared K = " + std::to_string(f.K));
  if (!f.remainder.empty() && f.remainder.size() != f.grid.points())
    throw std::invalid_argument("remainder sample count does not match the grid");
}

double FRFunction::principal_at(double ell) const {
  if (principal.empty()) return 0.0;
  return poly_eval(principal, ell) * std::exp(ell);
}

double FRFunction::remainder_at(double ell) const {
  if (remainder.empty()) return 0.0;
  if (ell < -1e-12 || ell > grid.ell_max + 1e-9)
    throw std::out_of_range("remainder_at: ell = " + std::to_string(ell) +
                            " outside the grid [0, " + std::to_string(grid.ell_max) + "]");
  double t = std::clamp(ell / grid.h, 0.0, static_cast<double>(remainder.size() - 1));
  std::size_t i = static_cast<std::size_t>(t);
  if (i + 1 >= remainder.size()) return remainder.back();
  double w = t - static_cast<double>(i);
  return (1.0 - w) * remainder[i] + w * remainder[i + 1];
}

double FRFunction::eval(double ell) const { return principal_at(ell) + remainder_at(ell); }

bool FRFunction::remainder_is_zero() const {
  return std::all_of(remainder.begin(), remainder.end(), [](double v) { return v == 0.0; });
}

FRFunction FRFunction::zero(Grid g, int K, int N) {
  FRFunction f;
  f.grid = g;
  f.K = K;
  f.N = N;
  check_valid(f);
  return f;
}

FRFunction FRFunction::from_principal(std::vector<double> coeffs, Grid g, int N) {
  FRFunction f;
  f.grid = g;
  f.principal = trim(std::move(coeffs));
  f.K = static_cast<int>(f.principal.size());
  if (f.K == 0) f.K = 1;
  f.N = N;
  check_valid(f);
  return f;
}

FRFunction FRFunction::from_samples(const std::function<double(double)>& fn, Grid g, int K,
                                    int N) {
  FRFunction f;
  f.grid = g;
  f.K = K;
  f.N = N;
  f.remainder.resize(g.points());
  for (std::size_t i = 0; i < f.remainder.size(); ++i) f.remainder[i] = fn(g.at(i));
  check_valid(f);
  return f;
}

FRFunction add(const FRFunction& a, const FRFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("add: grid mismatch");
  FRFunction out;
  out.grid = a.grid;
  out.K = std::max(a.K, b.K);
  out.N = std::max(a.N, b.N);
  out.principal.assign(std::max(a.principal.size(), b.principal.size()), 0.0);
  for (std::size_t i = 0; i < a.principal.size(); ++i) out.principal[i] += a.principal[i];
  for (std::size_t i = 0; i < b.principal.size(); ++i) out.principal[i] += b.principal[i];
  out.principal = trim(std::move(out.principal));
  if (!a.remainder.empty() || !b.remainder.empty()) {
    out.remainder.assign(out.grid.points(), 0.0);
    for (std::size_t i = 0; i < a.remainder.size(); ++i) out.remainder[i] += a.remainder[i];
    for (std::size_t i = 0; i < b.remainder.size(); ++i) out.remainder[i] += b.remainder[i];
  }
  return out;
}

FRFunction scale(const FRFunction& f, double c) {
  FRFunction out = f;
  for (double& v : out.principal) v *= c;
  for (double& v : out.remainder) v *= c;
  out.principal = trim(std::move(out.principal));
  return out;
}

FRFunction apply_P(const FRFunction& f) {
  check_valid(f);
  FRFunction out;
  out.grid = f.grid;
  out.K = f.K;
  out.N = f.N;
  double at0 = 0.0;
  if (!f.principal.empty()) {
    out.principal = poly_A(f.principal);
    at0 = out.principal.empty() ? 0.0 : out.principal[0];
  }
  std::vector<double> C;
  if (!f.remainder.empty()) C = cumulative_integral(f.remainder, f.grid.h);
  if (!C.empty() || at0 != 0.0) {
    out.remainder.assign(out.grid.points(), 0.0);
    for (std::size_t i = 0; i < out.remainder.size(); ++i)
      out.remainder[i] = (C.empty() ? 0.0 : C[i]) - at0;
  }
  return out;
}

FRFunction apply_L(const FRFunction& f) {
  check_valid(f);
  FRFunction out;
  out.grid = f.grid;
  out.K = f.K > 0 ? f.K - 1 : 0;
  out.N = f.N;
  double at0 = 0.0;
  if (!f.principal.empty()) {
    // p - A p telescopes to A(p'); evaluating it directly avoids the
    // subtraction of nearly equal polynomials.
    out.principal = poly_A(poly_derivative(f.principal));
    std::vector<double> Ap = poly_A(f.principal);
    at0 = Ap.empty() ? 0.0 : Ap[0];
  }
  if (out.K == 0 && !out.principal.empty()) out.K = static_cast<int>(out.principal.size());
  std::vector<double> C;
  if (!f.remainder.empty()) C = cumulative_integral(f.remainder, f.grid.h);
  if (!f.remainder.empty() || at0 != 0.0) {
    out.remainder.assign(out.grid.points(), 0.0);
    for (std::size_t i = 0; i < out.remainder.size(); ++i) {
      double r = f.remainder.empty() ? 0.0 : f.remainder[i];
      out.remainder[i] = r - (C.empty() ? 0.0 : C[i]) + at0;
    }
  }
  return out;
}

double fr_norm(const FRFunction& f, int K, int N) {
  auto p = trim(f.principal);
  if (static_cast<int>(p.size()) > std::max(K, 1))
    throw std::invalid_argument("fr_norm: principal degree not below K");
  double norm = poly_max_abs(p);
  double sup = 0.0;
  for (std::size_t i = 0; i < f.remainder.size(); ++i)
    sup = std::max(sup, std::fabs(f.remainder[i]) / envelope_weight(f.grid.at(i), N));
  return norm + sup;
}

double fr_norm(const FRFunction& f) { return fr_norm(f, f.K, f.N); }

double weak_fr_norm(const FRFunction& f, int K, int N) {
  auto p = trim(f.principal);
  if (static_cast<int>(p.size()) > std::max(K, 1))
    throw std::invalid_argument("weak_fr_norm: principal degree not below K");
  double norm = poly_max_abs(p);
  double sup = 0.0;
  if (!f.remainder.empty()) {
    auto C = cumulative_integral(f.remainder, f.grid.h);
    for (std::size_t i = 0; i < C.size(); ++i)
      sup = std::max(sup, std::fabs(C[i]) / envelope_weight(f.grid.at(i), N));
  }
  return norm + sup;
}

double weak_fr_norm(const FRFunction& f) { return weak_fr_norm(f, f.K, f.N); }

FRFunction convolve(const FRFunction& f1, const FRFunction& f2) {
  if (!(f1.grid == f2.grid)) throw std::invalid_argument("convolve: grid mismatch");
  check_valid(f1);
  check_valid(f2);
  FRFunction out;
  out.grid = f1.grid;
  out.K = f1.K + f2.K;
  out.N = f1.N + f2.N;

  // principal x principal: e^ell int_0^ell p1(s) p2(ell-s) ds via the Beta
  // integral s^i (ell-s)^j -> ell^{i+j+1} i! j! / (i+j+1)!
  if (!f1.principal.empty() && !f2.principal.empty()) {
    out.principal.assign(f1.principal.size() + f2.principal.size(), 0.0);
    for (std::size_t i = 0; i < f1.principal.size(); ++i)
      for (std::size_t j = 0; j < f2.principal.size(); ++j) {
        double w = fact_table(static_cast<int>(i)) * fact_table(static_cast<int>(j)) /
                   fact_table(static_cast<int>(i + j) + 1);
        out.principal[i + j + 1] += f1.principal[i] * f2.principal[j] * w;
      }
    out.principal = trim(std::move(out.principal));
  }

  const bool r1 = !f1.remainder.empty() && !f1.remainder_is_zero();
  const bool r2 = !f2.remainder.empty() && !f2.remainder_is_zero();
  const bool p1 = !f1.principal.empty();
  const bool p2 = !f2.principal.empty();
  std::vector<double> acc;
  auto accumulate = [&](std::vector<double> v) {
    if (acc.empty())
      acc = std::move(v);
    else
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
  };
  if (r1 && r2) accumulate(disc_conv(f1.remainder, f2.remainder, out.grid.h));
  if (r1 && p2) accumulate(disc_conv(f1.remainder, principal_samples(f2), out.grid.h));
  if (p1 && r2) accumulate(disc_conv(principal_samples(f1), f2.remainder, out.grid.h));
  out.remainder = std::move(acc);
  return out;
}

CharFRReport check_charFR(const FRFunction& f, int K, int N) {
  check_valid(f);
  if (K < 0) throw std::invalid_argument("check_charFR: K must be >= 0");
  FRFunction g = f;
  for (int k = 0; k < K; ++k) g = apply_L(g);

  CharFRReport rep;
  rep.K = K;
  rep.N = N;

  const std::size_t n = g.grid.points();
  double sup = 0.0;
  // per-unit-interval envelope of |L^K f| / ((ell+1)^{N-1} e^{ell/2}) from ell = 5 on
  const int nb = static_cast<int>(std::floor(g.grid.ell_max - 5.0));
  std::vector<double> env(static_cast<std::size_t>(std::max(nb, 0)), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double ell = g.grid.at(i);
    double v = std::fabs(g.principal_at(ell) + (g.remainder.empty() ? 0.0 : g.remainder[i]));
    double ratio = v / envelope_weight(ell, N);
    sup = std::max(sup, ratio);
    int b = static_cast<int>(std::floor(ell - 5.0));
    if (b >= 0 && b < nb)
      env[static_cast<std::size_t>(b)] = std::max(env[static_cast<std::size_t>(b)], ratio);
  }
  rep.sup_norm = sup;

  std::vector<double> ts, zs;
  for (int b = 0; b < nb; ++b)
    if (env[static_cast<std::size_t>(b)] > 1e-290) {
      ts.push_back(5.5 + b);
      zs.push_back(std::log(env[static_cast<std::size_t>(b)]));
    }
  if (ts.size() < 3) {
    rep.slope = 0.0;  // (near-)zero function: trivially sub-exponential
    rep.tail_slope = 0.0;
    rep.member = true;
    return rep;
  }
  auto fit = [](const std::vector<double>& t, const std::vector<double>& z, std::size_t lo) {
    double tm = 0.0, zm = 0.0;
    const double cnt = static_cast<double>(t.size() - lo);
    for (std::size_t i = lo; i < t.size(); ++i) tm += t[i], zm += z[i];
    tm /= cnt;
    zm /= cnt;
    double num = 0.0, den = 0.0;
    for (std::size_t i = lo; i < t.size(); ++i) {
      num += (t[i] - tm) * (z[i] - zm);
      den += (t[i] - tm) * (t[i] - tm);
    }
    return num / den;
  };
  rep.slope = fit(ts, zs, 0);
  // A bounded envelope still climbing out of its transient gives a small
  // positive full-window slope; the tail fit separates that from real growth.
  rep.tail_slope = ts.size() >= 6 ? fit(ts, zs, ts.size() / 2) : rep.slope;
  rep.member = std::min(rep.slope, rep.tail_slope) <= 0.01;
  return rep;
}

std::string to_json_text(const CharFRReport& rep) {
  nlohmann::ordered_json j;
  j["K"] = rep.K;
  j["N"] = rep.N;
  j["slope"] = rep.slope;
  j["tail_slope"] = rep.tail_slope;
  j["sup_norm"] = rep.sup_norm;
  j["member"] = rep.member;
  return j.dump(2) + "\n";
}

std::vector<double> pseudo_convolve(const std::vector<FRFunction>& fs, const PseudoConvSpec& spec,
                                    const std::vector<double>& ells) {
  if (spec.n != 2 || fs.size() != 2)
    throw std::invalid_argument(
        "pseudo_convolve supports arity 2 (one solved variable, one slice variable)");
  if (!(spec.a > 0.0)) throw std::invalid_argument("pseudo_convolve: cutoff a must be positive");
  if (!spec.h || !spec.phi) throw std::invalid_argument("pseudo_convolve: h and phi required");
  for (const auto& f : fs) check_valid(f);

  // the solved variable must move the level function
  for (double x1 : {spec.a, spec.a + 1.0, spec.a + 10.0})
    for (double x2 : {spec.a, spec.a + 5.0})
      if (fd_weight(spec, std::max(x1, spec.a + 1e-5), x2) < 1e-6)
        throw std::invalid_argument(
            "pseudo_convolve: level function is not increasing in x1 on the sampled domain");

  std::vector<double> out(ells.size(), 0.0);
  const double step_target = fs[0].grid.h;
  for (std::size_t e = 0; e < ells.size(); ++e) {
    double ell = ells[e];
    double hi = ell + 50.0;
    if (spec.h({spec.a, spec.a}) > ell) continue;  // empty level set: integral is 0

    // upper end of the slice range: h(a, x2max) = ell
    double lo2 = spec.a, hi2 = hi;
    for (int it = 0; it < 64; ++it) {
      double mid = 0.5 * (lo2 + hi2);
      if (spec.h({spec.a, mid}) <= ell)
        lo2 = mid;
      else
        hi2 = mid;
    }
    double upper = 0.5 * (lo2 + hi2);
    if (upper <= spec.a) continue;

    std::size_t m = static_cast<std::size_t>(std::ceil((upper - spec.a) / step_target));
    m = std::clamp<std::size_t>(m + (m % 2), 2, 400000);
    double step = (upper - spec.a) / static_cast<double>(m);
    double acc = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
      double x2 = spec.a + step * static_cast<double>(i);
      double x1 = solve_x1(spec, ell, x2, hi);
      if (x1 < 0.0) continue;  // slice fell outside (can happen at the very end)
      double w = fd_weight(spec, x1, x2);
      double val = spec.phi({x1, x2}) * fs[0].eval(x1) * fs[1].eval(x2) / std::max(w, 1e-9);
      double simp = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += simp * val;
    }
    out[e] = acc * step / 3.0;
  }
  return out;
}

FRFunction pseudo_convolve_fr(const std::vector<FRFunction>& fs, const PseudoConvSpec& spec,
                              int K, int N) {
  Grid g = fs.at(0).grid;
  std::vector<double> ells(g.points());
  for (std::size_t i = 0; i < ells.size(); ++i) ells[i] = g.at(i);
  FRFunction out;
  out.grid = g;
  out.K = K;
  out.N = N;
  out.remainder = pseudo_convolve(fs, spec, ells);
  return out;
}

double comparison_l0(const PseudoConvSpec& spec, int samples) {
  if (!spec.h) throw std::invalid_argument("comparison_l0: level function required");
  const int n = spec.n;
  if (n < 1 || n > 4) throw std::invalid_argument("comparison_l0: arity 1..4 supported");
  double sup = 0.0;
  auto defect = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s - spec.h(x);
  };
  // boundary-anchored tensor scan; endpoints included so boundary suprema
  // are hit exactly
  int per = std::max(2, static_cast<int>(std::floor(std::pow(double(samples), 1.0 / n))));
  per = std::min(per, 64);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> x(static_cast<std::size_t>(n));
  bool done = false;
  while (!done) {
    for (int d = 0; d < n; ++d)
      x[static_cast<std::size_t>(d)] =
          spec.a + 30.0 * idx[static_cast<std::size_t>(d)] / double(per - 1);
    sup = std::max(sup, defect(x));
    int d = 0;
    while (d < n && ++idx[static_cast<std::size_t>(d)] == per) {
      idx[static_cast<std::size_t>(d)] = 0;
      ++d;
    }
    done = (d == n);
  }
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  for (int s = 0; s < samples; ++s) {
    for (int d = 0; d < n; ++d) x[static_cast<std::size_t>(d)] = spec.a + u(rng);
    sup = std::max(sup, defect(x));
  }
  return std::max(sup, 0.0);
}

ClassEReport class_E_check(const std::function<double(const std::vector<double>&)>& phi, int n,
                           double a, double bound) {
  if (!phi) throw std::invalid_argument("class_E_check: phi required");
  if (n < 1 || n > 3) throw std::invalid_argument("class_E_check: arity 1..3 supported");
  ClassEReport rep;
  rep.bound = bound;

  auto fd = [&](const std::vector<int>& alpha, const std::vector<double>& x, double h) {
    // product of central differences over the set bits of alpha
    std::vector<int> dims;
    for (int d = 0; d < n; ++d)
      if (alpha[static_cast<std::size_t>(d)]) dims.push_back(d);
    double sum = 0.0;
    const std::size_t corners = std::size_t{1} << dims.size();
    for (std::size_t c = 0; c < corners; ++c) {
      std::vector<double> y = x;
      int sign = 1;
      for (std::size_t b = 0; b < dims.size(); ++b) {
        if ((c >> b) & 1) {
          y[static_cast<std::size_t>(dims[b])] -= h;
          sign = -sign;
        } else {
          y[static_cast<std::size_t>(dims[b])] += h;
        }
      }
      sum += sign * phi(y);
    }
    return sum / std::pow(2.0 * h, static_cast<double>(dims.size()));
  };

  const int per = (n == 1) ? 121 : (n == 2 ? 41 : 16);
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> alpha(static_cast<std::size_t>(n), 0);
    for (int d = 0; d < n; ++d) alpha[static_cast<std::size_t>(d)] = (mask >> d) & 1;
    double sup = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    bool done = false;
    while (!done) {
      for (int d = 0; d < n; ++d)
        x[static_cast<std::size_t>(d)] = a + 30.0 * idx[static_cast<std::size_t>(d)] / double(per - 1);
      // Richardson pairing of two central-difference steps
      double d1 = fd(alpha, x, 1e-2);
      double d2 = fd(alpha, x, 5e-3);
      double der = (4.0 * d2 - d1) / 3.0;
      double w = 0.0;
      for (int d = 0; d < n; ++d)
        w += alpha[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
      sup = std::max(sup, std::exp(w) * std::fabs(der));
      int d = 0;
      while (d < n && ++idx[static_cast<std::size_t>(d)] == per) {
        idx[static_cast<std::size_t>(d)] = 0;
        ++d;
      }
      done = (d == n);
    }
    rep.entries.push_back({alpha, sup});
  }
  rep.pass = std::all_of(rep.entries.begin(), rep.entries.end(),
                         [&](const ClassEReport::Entry& e) { return e.sup <= bound; });
  return rep;
}

std::string to_json_text(const ClassEReport& rep) {
  nlohmann::ordered_json j;
  j["bound"] = rep.bound;
  j["pass"] = rep.pass;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : rep.entries) {
    nlohmann::ordered_json je;
    je["alpha"] = e.alpha;
    je["sup"] = e.sup;
    j["entries"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

}  // namespace tracelab::frfun
