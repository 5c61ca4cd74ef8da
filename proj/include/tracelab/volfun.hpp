#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tracelab/diagram.hpp"
#include "tracelab/pipoly.hpp"
#include "tracelab/quadrature.hpp"

namespace tracelab::volfun {

// One block of a realization: a subsurface of genus `genus` whose boundary
// carries the listed labels (ascending, 1-based).  Every block is either
// stable (2g - 2 + n > 0) or the (0, 2) cylinder.
struct Block {
  int genus{0};
  std::vector<int> labels;

  int n() const { return static_cast<int>(labels.size()); }
  friend auto operator<=>(const Block&, const Block&) = default;
};

// Ordered decomposition of the complement: blocks partition {1..n_S} and are
// listed with min(labels) increasing.  The genus budget ties the blocks to
// the ambient surface: sum of (2g_i - 2 + n_i) over blocks equals
// (2g - 2) - (2g_S - 2 + n_S).
struct Realization {
  std::vector<Block> blocks;

  int q() const { return static_cast<int>(blocks.size()); }
  friend auto operator<=>(const Realization&, const Realization&) = default;
};

// Canonical rendering, e.g. "V(1,2)[1,3]*V(0,2)[2,4]"; equal strings iff
// equal realizations.
std::string to_string(const Realization& r);

// All realizations of the complement of a filling of signature `sig` inside
// a closed surface of genus g.  Exhaustive and duplicate-free; an infeasible
// genus budget yields an empty list.  Throws for g < 2 or a bad signature.
std::vector<Realization> enumerate_realizations(const diagram::Signature& sig,
                                                int g);

// One additive term of the boundary-length distribution: the product of the
// blocks' volume polynomials, with every cylinder block turned into a Dirac
// pair delta(x_i - x_j).  The global prefactor x_1...x_{n_S} stays implicit;
// per pair, the cylinder's 1/x weight cancels one of its two factors.
struct PhiTerm {
  std::vector<std::pair<int, int>> dirac_pairs;  // 1-based, first < second
  pipoly::PiPolynomial poly;                     // over all n_S variables
  Realization realization;
};

struct PhiExpression {
  int n_s{0};
  int genus{0};
  std::vector<PhiTerm> terms;
};

// Assembles the distribution over all realizations.  Throws with the exact
// list of absent (g, n) entries when the table cannot supply a block.
PhiExpression phi_S(const pipoly::VolumeTable& table,
                    const diagram::Signature& sig, int g);

// Density factor of one term at a point already satisfying its Dirac
// constraints: prefactor times polynomial, with one boundary factor per pair
// cancelled against the cylinder weight.  The delta mass itself is left for
// the caller's level-set reduction.
double eval_term_density(const PhiTerm& t, const std::vector<double>& x);

// Closed two-term expression for the simple-curve volume:
//   ell * V_{g-1,2}(ell, ell) + ell * sum_{i=1}^{g-1} V_{i,1}(ell) V_{g-i,1}(ell).
double v_simple(const pipoly::VolumeTable& table, int g, double ell);

// Same quantity through the realization pipeline: the cylinder level set is
// the point x_1 = x_2 = ell with weight 1/ell, so this path exercises
// enumerate_realizations and phi_S end to end.
double v_simple_via_phi(const pipoly::VolumeTable& table, int g, double ell);

enum class PopType { figure_eight };

// Which variables parametrize the level set of the figure-eight length
// relation cosh(l/2) = 2 cosh(x1/2) cosh(x2/2) + cosh(x3/2): the primary
// chart integrates over (x1, x2) and solves for x3, the alternate chart
// integrates over (x2, x3) and solves for x1.  Both evaluate the same
// measure; agreement is a consistency check on the whole reduction.
enum class Chart { primary, alternate };

struct VPopResult {
  double value{0.0};
  double err_estimate{0.0};
  long long evals{0};
};

// Volume of the set of surfaces whose shortest filling geodesic of the given
// type has length ell: level-set quadrature of the distribution against
// d x_3 / d ell = sinh(ell/2) / sinh(x3/2), Dirac terms reduced to 1-D
// sub-integrals symbolically.  n_t divides out the symmetry coefficient of
// the type (not computable here; supplied by the caller).  Throws
// std::domain_error when the level set is empty (ell <= 2 arccosh(3) for the
// figure eight).
VPopResult v_pop_type(const pipoly::VolumeTable& table, int g, PopType which,
                      double ell, int n_t,
                      const quadrature::QuadSpec& spec = {},
                      Chart chart = Chart::primary);

namespace detail {

// 2-D polynomial part of the primary chart, exposed for the symmetry
// property: with half_doubled the outer region is cut to x2 <= x1 and the
// result doubled, which matches the full integral whenever the polynomial
// sum is symmetric in (x1, x2).
quadrature::QuadResult poly_part_primary(const PhiExpression& phi, double ell,
                                         const quadrature::QuadSpec& spec,
                                         bool half_doubled = false);

}  // namespace detail

// Least-squares fit of samples[g][j] by sum_{k=k_min}^{K} f_k(ell_j) / g^k.
// coefficients[k - k_min][j] holds f_k at grid index j; residuals are rms
// per grid point, residual the worst of them.  Requires at least
// K - k_min + 2 distinct genera.
struct ExpansionFit {
  int K{0};
  int k_min{0};
  std::vector<std::vector<double>> coefficients;
  std::vector<double> residuals;
  double residual{0.0};
  double condition{0.0};
  bool ill_conditioned{false};
};

ExpansionFit expansion_fit(const std::map<int, std::vector<double>>& samples,
                           int K, int k_min);

// Emission.  CSV rows carry (ell, value, err_estimate, g, type); the JSON
// fit report lists the grid, per-k coefficient rows, and conditioning.
struct VPopRow {
  double ell{0.0};
  VPopResult res;
};

std::string to_csv_text(const std::vector<VPopRow>& rows, int g,
                        const std::string& type);
std::string to_json_text(const ExpansionFit& fit,
                         const std::vector<double>& ells = {});

}  // namespace tracelab::volfun
