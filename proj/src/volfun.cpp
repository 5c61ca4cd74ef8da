#include "tracelab/volfun.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace tracelab::volfun {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

[[noreturn]] void throw_missing(const std::string& who,
                                const std::set<std::pair<int, int>>& missing) {
  std::string msg = who + ": volume table is missing entries:";
  for (const auto& [g, n] : missing)
    msg += " (" + std::to_string(g) + ", " + std::to_string(n) + ")";
  throw std::runtime_error(msg);
}

// Restricted-growth strings: block j collects the positions labelled j, and
// first occurrences are increasing, which is exactly the min-increasing
// block order the realization type demands.
std::vector<std::vector<std::vector<int>>> set_partitions(int n) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> rgs(n, 0);
  std::function<void(int, int)> rec = [&](int i, int maxv) {
    if (i == n) {
      std::vector<std::vector<int>> blocks(maxv + 1);
      for (int k = 0; k < n; ++k) blocks[rgs[k]].push_back(k + 1);
      out.push_back(std::move(blocks));
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      rgs[i] = v;
      rec(i + 1, std::max(maxv, v));
    }
  };
  if (n > 0) rec(1, 0);  // rgs[0] is pinned to 0
  return out;
}

bool block_admissible(int genus, int n) {
  return 2 * genus - 2 + n > 0 || (genus == 0 && n == 2);
}

}  // namespace

std::string to_string(const Realization& r) {
  std::string s;
  for (size_t b = 0; b < r.blocks.size(); ++b) {
    if (b > 0) s += "*";
    const Block& blk = r.blocks[b];
    s += "V(" + std::to_string(blk.genus) + "," + std::to_string(blk.n()) +
         ")[";
    for (size_t i = 0; i < blk.labels.size(); ++i) {
      if (i > 0) s += ",";
      s += std::to_string(blk.labels[i]);
    }
    s += "]";
  }
  return s;
}

std::vector<Realization> enumerate_realizations(const diagram::Signature& sig,
                                                int g) {
  if (g < 2)
    throw std::invalid_argument(
        "enumerate_realizations: ambient genus must be >= 2");
  if (sig.g < 0 || sig.n < 1)
    throw std::invalid_argument("enumerate_realizations: invalid signature");

  std::vector<Realization> out;
  const int budget = (2 * g - 2) - (2 * sig.g - 2 + sig.n);
  if (budget < 0) return out;

  for (const auto& blocks : set_partitions(sig.n)) {
    const int q = static_cast<int>(blocks.size());
    // sum of (2g_i - 2 + n_i) = budget fixes the total block genus
    const int twice_total = budget + 2 * q - sig.n;
    if (twice_total < 0 || twice_total % 2 != 0) continue;
    const int total_genus = twice_total / 2;

    std::vector<int> genera(q, 0);
    std::function<void(int, int)> assign = [&](int idx, int left) {
      if (idx == q - 1) {
        genera[idx] = left;
        Realization r;
        for (int b = 0; b < q; ++b) {
          if (!block_admissible(genera[b],
                                static_cast<int>(blocks[b].size())))
            return;
          r.blocks.push_back(Block{genera[b], blocks[b]});
        }
        out.push_back(std::move(r));
        return;
      }
      for (int v = 0; v <= left; ++v) {
        genera[idx] = v;
        if (block_admissible(v, static_cast<int>(blocks[idx].size())))
          assign(idx + 1, left - v);
      }
    };
    assign(0, total_genus);
  }
  return out;
}

PhiExpression phi_S(const pipoly::VolumeTable& table,
                    const diagram::Signature& sig, int g) {
  std::vector<Realization> reals = enumerate_realizations(sig, g);

  std::set<std::pair<int, int>> missing;
  for (const auto& r : reals)
    for (const auto& b : r.blocks) {
      if (b.genus == 0 && b.n() == 2) continue;
      if (pipoly::lookup(table, b.genus, b.n()).kind ==
          pipoly::Lookup::Kind::absent)
        missing.insert({b.genus, b.n()});
    }
  if (!missing.empty()) throw_missing("phi_S", missing);

  PhiExpression out;
  out.n_s = sig.n;
  out.genus = g;
  for (auto& r : reals) {
    PhiTerm t;
    t.poly =
        pipoly::PiPolynomial::constant(sig.n, pipoly::PiRational{1, 1, 0});
    for (const auto& b : r.blocks) {
      if (b.genus == 0 && b.n() == 2) {
        t.dirac_pairs.emplace_back(b.labels[0], b.labels[1]);
        continue;
      }
      std::vector<int> index_map;
      index_map.reserve(b.labels.size());
      for (int lab : b.labels) index_map.push_back(lab - 1);
      t.poly = t.poly * table.at(b.genus, b.n()).remap_vars(sig.n, index_map);
    }
    t.realization = std::move(r);
    out.terms.push_back(std::move(t));
  }
  return out;
}

double eval_term_density(const PhiTerm& t, const std::vector<double>& x) {
  double v = t.poly.eval(x);
  for (double xi : x) v *= xi;
  for (const auto& [i, j] : t.dirac_pairs) {
    (void)j;
    v /= x[static_cast<size_t>(i) - 1];
  }
  return v;
}

double v_simple(const pipoly::VolumeTable& table, int g, double ell) {
  if (g < 2) throw std::invalid_argument("v_simple: genus must be >= 2");
  if (!(ell > 0.0))
    throw std::invalid_argument("v_simple: ell must be positive");

  std::set<std::pair<int, int>> missing;
  if (!table.contains(g - 1, 2)) missing.insert({g - 1, 2});
  for (int i = 1; i <= g - 1; ++i)
    if (!table.contains(i, 1)) missing.insert({i, 1});
  if (!missing.empty()) throw_missing("v_simple", missing);

  double acc = table.at(g - 1, 2).eval({ell, ell});
  for (int i = 1; i <= g - 1; ++i)
    acc += table.at(i, 1).eval({ell}) * table.at(g - i, 1).eval({ell});
  return ell * acc;
}

double v_simple_via_phi(const pipoly::VolumeTable& table, int g, double ell) {
  if (!(ell > 0.0))
    throw std::invalid_argument("v_simple_via_phi: ell must be positive");
  PhiExpression phi = phi_S(table, diagram::Signature{0, 2}, g);
  // The level set of a simple curve is the single point x1 = x2 = ell; the
  // cylinder's 1/x weight leaves it with mass 1/ell.
  const std::vector<double> pt{ell, ell};
  double acc = 0.0;
  for (const auto& t : phi.terms) acc += eval_term_density(t, pt);
  return acc / ell;
}

namespace {

double acosh_clamped(double w) { return std::acosh(w < 1.0 ? 1.0 : w); }

// x / sinh(x/2), continued through x = 0 with limit 2; even and analytic in
// x^2, which keeps the level-set integrands smooth where a boundary factor
// vanishes.
double x_over_sinh_half(double x) {
  if (x < 1e-8) return 2.0 / (1.0 + x * x / 24.0);
  return x / std::sinh(0.5 * x);
}

// x / sinh(x), continued through x = 0 with limit 1.
double x_over_sinh(double x) {
  if (x < 1e-8) return 1.0 / (1.0 + x * x / 6.0);
  return x / std::sinh(x);
}

// Per-Dirac-pattern polynomial sums of a pair-of-pants distribution.  Only
// single cylinders can occur for n_S = 3.
struct Groups {
  pipoly::PiPolynomial p0{3};
  pipoly::PiPolynomial p12{3};
  pipoly::PiPolynomial p13{3};
  pipoly::PiPolynomial p23{3};
};

Groups split_groups(const PhiExpression& phi) {
  if (phi.n_s != 3)
    throw std::invalid_argument("v_pop_type: distribution is not on 3 labels");
  Groups g;
  for (const auto& t : phi.terms) {
    if (t.dirac_pairs.empty()) {
      g.p0 = g.p0 + t.poly;
      continue;
    }
    if (t.dirac_pairs.size() != 1)
      throw std::logic_error("v_pop_type: multi-cylinder term for n_S = 3");
    const auto& [a, b] = t.dirac_pairs[0];
    if (a == 1 && b == 2)
      g.p12 = g.p12 + t.poly;
    else if (a == 1 && b == 3)
      g.p13 = g.p13 + t.poly;
    else if (a == 2 && b == 3)
      g.p23 = g.p23 + t.poly;
    else
      throw std::logic_error("v_pop_type: malformed dirac pair");
  }
  return g;
}

// Iterated quadrature over 0 <= x2 <= upper2(x1), a <= x1 <= b.  The outer
// Richardson estimate cannot see inner-rule error (it is common to both
// halves of the comparison), so the supremum of the inner estimates times
// the outer range is added on top.
quadrature::QuadResult integrate_2d(
    const std::function<double(double, double)>& f, double a, double b,
    const std::function<double(double)>& upper2,
    const quadrature::QuadSpec& spec) {
  quadrature::QuadSpec inner = spec;
  if (inner.fixed_levels == 0) inner.tol = spec.tol * 0.1;
  long long inner_evals = 0;
  double sup_inner_err = 0.0;
  auto outer_f = [&](double x1) {
    quadrature::QuadResult r = quadrature::integrate(
        [&](double x2) { return f(x1, x2); }, 0.0, upper2(x1), inner);
    inner_evals += r.evals;
    sup_inner_err = std::max(sup_inner_err, r.err_estimate);
    return r.value;
  };
  quadrature::QuadResult out = quadrature::integrate(outer_f, a, b, spec);
  out.evals = inner_evals;
  out.err_estimate += sup_inner_err * (b - a);
  return out;
}

// Shared reduction for the (1,3) and (2,3) cylinders: on the level set the
// matched pair takes the value X with cosh(X/2) (1 + 2 cosh(u/2)) =
// cosh(l/2), u the free coordinate, and the collapse of the Dirac factor
// contributes 1 / (1 + 2 cosh(u/2)).  Both charts reduce these two terms to
// the same 1-D integral.
quadrature::QuadResult pair_with_x3_integral(const pipoly::PiPolynomial& p,
                                             bool free_is_x1, double K,
                                             double M,
                                             const quadrature::QuadSpec& spec) {
  if (p.is_zero()) return {};
  const double hi = 2.0 * acosh_clamped(M);
  auto f = [&](double u) {
    const double den = 1.0 + 2.0 * std::cosh(0.5 * u);
    const double X = 2.0 * acosh_clamped(K / den);
    const std::vector<double> pt =
        free_is_x1 ? std::vector<double>{u, X, X} : std::vector<double>{X, u, X};
    return u * x_over_sinh_half(X) * p.eval(pt) / den;
  };
  return quadrature::integrate(f, 0.0, hi, spec);
}

quadrature::QuadResult primary_d12(const pipoly::PiPolynomial& p, double K,
                                   double M,
                                   const quadrature::QuadSpec& spec) {
  if (p.is_zero()) return {};
  const double hi = 2.0 * acosh_clamped(std::sqrt(M));
  auto f = [&](double t) {
    const double c = std::cosh(0.5 * t);
    const double x3 = 2.0 * acosh_clamped(K - 2.0 * c * c);
    return t * x_over_sinh_half(x3) * p.eval({t, t, x3});
  };
  return quadrature::integrate(f, 0.0, hi, spec);
}

quadrature::QuadResult alternate_2d(const pipoly::PiPolynomial& p, double K,
                                    const quadrature::QuadSpec& spec) {
  if (p.is_zero()) return {};
  const double hi3 = 2.0 * acosh_clamped(K - 2.0);
  auto upper2 = [&](double x3) {
    return 2.0 * acosh_clamped(0.5 * (K - std::cosh(0.5 * x3)));
  };
  auto f = [&](double x3, double x2) {
    const double c2 = std::cosh(0.5 * x2);
    const double c3 = std::cosh(0.5 * x3);
    const double x1 = 2.0 * acosh_clamped((K - c3) / (2.0 * c2));
    return x_over_sinh_half(x1) / (2.0 * c2) * x2 * x3 *
           p.eval({x1, x2, x3});
  };
  return integrate_2d(f, 0.0, hi3, upper2, spec);
}

quadrature::QuadResult alternate_d12(const pipoly::PiPolynomial& p, double K,
                                     const quadrature::QuadSpec& spec) {
  if (p.is_zero()) return {};
  // Root of x1 = x2 on the slice at x3, reached with slope -1, so the Dirac
  // collapse contributes the factor 1/2.
  const double hi3 = 2.0 * acosh_clamped(K - 2.0);
  auto f = [&](double x3) {
    const double y = std::sqrt(std::max(0.0, 0.5 * (K - std::cosh(0.5 * x3))));
    const double t = 2.0 * acosh_clamped(y);
    return 0.5 * x_over_sinh(t) * x3 * p.eval({t, t, x3});
  };
  return quadrature::integrate(f, 0.0, hi3, spec);
}

quadrature::QuadResult alternate_d23(const pipoly::PiPolynomial& p, double K,
                                     const quadrature::QuadSpec& spec) {
  if (p.is_zero()) return {};
  // The (2,3) cylinder seen from the (x2, x3) chart: the line x2 = x3 = w
  // with x1 solved from the level relation.
  const double hi = 2.0 * acosh_clamped(K / 3.0);
  auto f = [&](double w) {
    const double cw = std::cosh(0.5 * w);
    const double x1 = 2.0 * acosh_clamped((K - cw) / (2.0 * cw));
    return x_over_sinh_half(x1) / (2.0 * cw) * w * p.eval({x1, w, w});
  };
  return quadrature::integrate(f, 0.0, hi, spec);
}

}  // namespace

namespace detail {

quadrature::QuadResult poly_part_primary(const PhiExpression& phi, double ell,
                                         const quadrature::QuadSpec& spec,
                                         bool half_doubled) {
  Groups gr = split_groups(phi);
  if (gr.p0.is_zero()) return {};
  const double K = std::cosh(0.5 * ell);
  const double M = 0.5 * (K - 1.0);
  const double A = 2.0 * acosh_clamped(M);
  auto f = [&](double x1, double x2) {
    const double c1 = std::cosh(0.5 * x1);
    const double c2 = std::cosh(0.5 * x2);
    const double x3 = 2.0 * acosh_clamped(K - 2.0 * c1 * c2);
    return x1 * x2 * x_over_sinh_half(x3) * gr.p0.eval({x1, x2, x3});
  };
  auto upper_full = [&](double x1) {
    return 2.0 * acosh_clamped(M / std::cosh(0.5 * x1));
  };
  if (!half_doubled) return integrate_2d(f, 0.0, A, upper_full, spec);

  // Lower half x2 <= x1, doubled.  Split the outer range where the diagonal
  // meets the domain boundary (cosh^2(x/2) = M) so each outer piece has a
  // smooth upper limit.
  const double split = 2.0 * acosh_clamped(std::sqrt(M));
  auto upper_diag = [](double x1) { return x1; };
  quadrature::QuadResult lo = integrate_2d(f, 0.0, split, upper_diag, spec);
  quadrature::QuadResult hiq = integrate_2d(f, split, A, upper_full, spec);
  quadrature::QuadResult out;
  out.value = 2.0 * (lo.value + hiq.value);
  out.err_estimate = 2.0 * (lo.err_estimate + hiq.err_estimate);
  out.evals = lo.evals + hiq.evals;
  out.levels = std::max(lo.levels, hiq.levels);
  out.converged = lo.converged && hiq.converged;
  return out;
}

}  // namespace detail

VPopResult v_pop_type(const pipoly::VolumeTable& table, int g, PopType which,
                      double ell, int n_t, const quadrature::QuadSpec& spec,
                      Chart chart) {
  if (which != PopType::figure_eight)
    throw std::invalid_argument("v_pop_type: unsupported type");
  if (n_t < 1)
    throw std::invalid_argument("v_pop_type: n_t must be positive");
  if (!(ell > 0.0))
    throw std::invalid_argument("v_pop_type: ell must be positive");

  const double K = std::cosh(0.5 * ell);
  const double M = 0.5 * (K - 1.0);
  if (!(M > 1.0))
    throw std::domain_error(
        "v_pop_type: empty level set; the figure-eight relation "
        "cosh(l/2) = 2 cosh(x1/2) cosh(x2/2) + cosh(x3/2) needs "
        "l > 2 arccosh(3)");

  const diagram::Signature sig =
      diagram::filling_signature(diagram::figure_eight());
  PhiExpression phi = phi_S(table, sig, g);
  Groups gr = split_groups(phi);

  std::vector<quadrature::QuadResult> parts;
  if (chart == Chart::primary) {
    parts.push_back(detail::poly_part_primary(phi, ell, spec, false));
    parts.push_back(primary_d12(gr.p12, K, M, spec));
    parts.push_back(pair_with_x3_integral(gr.p13, false, K, M, spec));
    parts.push_back(pair_with_x3_integral(gr.p23, true, K, M, spec));
  } else {
    parts.push_back(alternate_2d(gr.p0, K, spec));
    parts.push_back(alternate_d12(gr.p12, K, spec));
    parts.push_back(pair_with_x3_integral(gr.p13, false, K, M, spec));
    parts.push_back(alternate_d23(gr.p23, K, spec));
  }

  const double scale = std::sinh(0.5 * ell) / static_cast<double>(n_t);
  VPopResult out;
  for (const auto& p : parts) {
    out.value += p.value;
    out.err_estimate += p.err_estimate;
    out.evals += p.evals;
  }
  out.value *= scale;
  out.err_estimate *= scale;
  return out;
}

ExpansionFit expansion_fit(const std::map<int, std::vector<double>>& samples,
                           int K, int k_min) {
  if (K < k_min)
    throw std::invalid_argument("expansion_fit: K must be >= k_min");
  const int n_coef = K - k_min + 1;
  const int rows = static_cast<int>(samples.size());
  if (rows < n_coef + 1)
    throw std::invalid_argument(
        "expansion_fit: need at least K - k_min + 2 distinct genera");
  const size_t m = samples.begin()->second.size();
  if (m == 0)
    throw std::invalid_argument("expansion_fit: empty sample grid");
  for (const auto& [g, vals] : samples) {
    if (g < 1)
      throw std::invalid_argument("expansion_fit: genus must be positive");
    if (vals.size() != m)
      throw std::invalid_argument("expansion_fit: ragged sample grid");
  }

  Eigen::MatrixXd A(rows, n_coef);
  {
    int r = 0;
    for (const auto& [g, vals] : samples) {
      (void)vals;
      for (int c = 0; c < n_coef; ++c)
        A(r, c) = std::pow(static_cast<double>(g),
                           -static_cast<double>(k_min + c));
      ++r;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double cond = smin > 0.0
                          ? sv(0) / smin
                          : std::numeric_limits<double>::infinity();

  ExpansionFit fit;
  fit.K = K;
  fit.k_min = k_min;
  fit.condition = cond;
  fit.ill_conditioned = !(cond < 1e12);
  fit.coefficients.assign(static_cast<size_t>(n_coef),
                          std::vector<double>(m, 0.0));
  fit.residuals.assign(m, 0.0);

  Eigen::VectorXd b(rows);
  for (size_t j = 0; j < m; ++j) {
    int r = 0;
    for (const auto& [g, vals] : samples) {
      (void)g;
      b(r++) = vals[j];
    }
    Eigen::VectorXd coef = svd.solve(b);
    for (int c = 0; c < n_coef; ++c)
      fit.coefficients[static_cast<size_t>(c)][j] = coef(c);
    fit.residuals[j] = std::sqrt((A * coef - b).squaredNorm() /
                                 static_cast<double>(rows));
  }
  fit.residual =
      *std::max_element(fit.residuals.begin(), fit.residuals.end());
  return fit;
}

std::string to_csv_text(const std::vector<VPopRow>& rows, int g,
                        const std::string& type) {
  std::string out = "ell,value,err_estimate,g,type\n";
  for (const auto& r : rows) {
    out += fmt("%.17g", r.ell) + "," + fmt("%.17g", r.res.value) + "," +
           fmt("%.17g", r.res.err_estimate) + "," + std::to_string(g) + "," +
           type + "\n";
  }
  return out;
}

std::string to_json_text(const ExpansionFit& fit,
                         const std::vector<double>& ells) {
  nlohmann::ordered_json j;
  j["K"] = fit.K;
  j["k_min"] = fit.k_min;
  if (!ells.empty()) j["ell"] = ells;
  nlohmann::ordered_json co = nlohmann::ordered_json::object();
  for (size_t c = 0; c < fit.coefficients.size(); ++c)
    co["f_" + std::to_string(fit.k_min + static_cast<int>(c))] =
        fit.coefficients[c];
  j["coefficients"] = co;
  j["residuals"] = fit.residuals;
  j["residual"] = fit.residual;
  j["condition"] = fit.condition;
  j["ill_conditioned"] = fit.ill_conditioned;
  return j.dump(2) + "\n";
}

}  // namespace tracelab::volfun
