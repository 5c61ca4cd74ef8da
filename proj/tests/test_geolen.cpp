#include "doctest.h"

#include <cmath>
#include <random>

#include "tracelab/diagram.hpp"
#include "tracelab/geolen.hpp"
#include "tracelab/hypgeom.hpp"

using namespace tracelab;
using geolen::CoordPoint;

namespace {

double r1_closed_form(double theta1, double theta2, double L) {
  return std::cosh(theta1 / 2) * std::cosh(theta2 / 2) +
         std::sinh(theta1 / 2) * std::sinh(theta2 / 2) * std::cosh(L);
}

CoordPoint fig8_point(double x1, double x2, double x3) {
  CoordPoint p;
  p.L = {hypgeom::hexagon_ortho_length(x1, x2, x3)};
  p.theta = {x2, x1};  // theta(1+) = x2, theta(1-) = x1
  return p;
}

}  // namespace

TEST_CASE("y lengths follow the terminating labels") {
  auto d = diagram::figure_eight();
  CoordPoint p;
  p.L = {1.0};
  p.theta = {2.5, 1.25};  // (1+), (1-)
  auto y = geolen::y_lengths(d, p);
  CHECK(y.at("lam1") == 1.25);  // lam1 holds the origin record: theta(1-)
  CHECK(y.at("lam2") == 2.5);

  p.theta = {0.0, 0.0};
  for (const auto& [id, v] : geolen::y_lengths(d, p)) {
    (void)id;
    CHECK(v == 0.0);
  }

  // permuting theta within one support leaves that y unchanged
  auto t = diagram::three_bar_example();
  CoordPoint q;
  q.L = {1.0, 1.0, 1.0};
  q.theta = {0.3, 0.1, 0.7, 0.2, 1.9, 0.4};
  double y1 = geolen::y_lengths(t, q).at("lam1");
  std::swap(q.theta[0], q.theta[2]);  // (1+) <-> (2+), both terminate on lam1
  CHECK(geolen::y_lengths(t, q).at("lam1") == doctest::Approx(y1).epsilon(1e-15));

  CoordPoint bad;
  bad.L = {1.0};
  bad.theta = {1.0};
  CHECK_THROWS_AS(geolen::y_lengths(d, bad), std::invalid_argument);
}

TEST_CASE("r=1 expansion reduces to the two-term formula") {
  auto d = diagram::figure_eight();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uT(-4.0, 4.0), uL(0.1, 4.0);
  for (int i = 0; i < 200; ++i) {
    CoordPoint p;
    p.L = {uL(rng)};
    p.theta = {uT(rng), uT(rng)};
    double want = r1_closed_form(p.theta[0], p.theta[1], p.L[0]);
    CHECK(geolen::cosh_half_expansion(d, p) == doctest::Approx(want).epsilon(1e-12));
    CHECK(geolen::cosh_half_trace(d, p) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("figure-eight chart matches the self-crossing loop length") {
  auto d = diagram::figure_eight();
  for (double x1 : {0.5, 1.7, 3.1, 6.0})
    for (double x2 : {0.5, 2.4, 6.0})
      for (double x3 : {0.5, 1.2, 4.8, 6.0}) {
        CoordPoint p = fig8_point(x1, x2, x3);
        double want = hypgeom::cosh_half(hypgeom::eight_length(x1, x2, x3));
        CHECK(geolen::cosh_half_expansion(d, p) == doctest::Approx(want).epsilon(1e-12));
      }
}

TEST_CASE("zero angles collapse the traversal to the identity") {
  auto d = diagram::figure_eight();
  CoordPoint p;
  p.L = {2.7};
  p.theta = {0.0, 0.0};
  CHECK(geolen::cosh_half_trace(d, p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(geolen::cosh_half_expansion(d, p) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("trace is invariant under cyclic restart") {
  auto d = diagram::three_bar_example();
  CoordPoint p = geolen::random_point(3, 99);
  double base_t = geolen::cosh_half_trace(d, p, {1, +1});
  double base_e = geolen::cosh_half_expansion(d, p, {1, +1});
  for (diagram::ThetaLabel q0 : {diagram::ThetaLabel{2, +1}, diagram::ThetaLabel{3, -1},
                                 diagram::ThetaLabel{1, -1}}) {
    CHECK(geolen::cosh_half_trace(d, p, q0) == doctest::Approx(base_t).epsilon(1e-11));
    CHECK(geolen::cosh_half_expansion(d, p, q0) == doctest::Approx(base_e).epsilon(1e-10));
  }
}

TEST_CASE("expansion and trace agree across the diagram family") {
  struct Named {
    diagram::Diagram d;
    const char* id;
  };
  for (const Named& nd : {Named{diagram::figure_eight(), "fig8"},
                          Named{diagram::once_holed_torus(), "torus"},
                          Named{diagram::flower(2), "flower2"},
                          Named{diagram::three_bar_example(), "threebar"},
                          Named{diagram::flower(4), "flower4"}}) {
    auto rep = geolen::oracle_suite(nd.d, nd.id, 100, 2026);
    INFO(nd.id);
    CHECK(rep.max_rel_err <= 1e-9);
    CHECK(rep.samples == 100);
  }
}

TEST_CASE("per-cycle lengths on the once-holed torus") {
  auto d = diagram::once_holed_torus();
  CoordPoint p;
  p.L = {1.3};
  p.theta = {0.8, 2.1};
  // each loop of the transverse pair crosses the bar once
  double plus = std::cosh(0.8 / 2) * std::cosh(1.3 / 2);
  double minus = std::cosh(2.1 / 2) * std::cosh(1.3 / 2);
  CHECK(geolen::cosh_half_trace(d, p, {1, +1}) == doctest::Approx(plus).epsilon(1e-13));
  CHECK(geolen::cosh_half_expansion(d, p, {1, +1}) == doctest::Approx(plus).epsilon(1e-13));
  CHECK(geolen::cosh_half_trace(d, p, {1, -1}) == doctest::Approx(minus).epsilon(1e-13));
  CHECK(geolen::cosh_half_expansion(d, p, {1, -1}) == doctest::Approx(minus).epsilon(1e-13));
}

TEST_CASE("term counts per traversal cycle") {
  CHECK(geolen::expansion_term_count(diagram::figure_eight()) == 2);
  CHECK(geolen::expansion_term_count(diagram::once_holed_torus(), {1, +1}) == 1);
  CHECK(geolen::expansion_term_count(diagram::flower(2)) == 8);
  CHECK(geolen::expansion_term_count(diagram::flower(3)) == 32);
  CHECK(geolen::expansion_term_count(diagram::flower(4)) == 128);
  CHECK_THROWS_AS(geolen::expansion_term_count(diagram::flower(9)), std::invalid_argument);
}

TEST_CASE("huge lengths stay finite in log space") {
  auto d = diagram::figure_eight();
  CoordPoint p;
  p.L = {400.0};
  p.theta = {600.0, 500.0};
  // direct doubles overflow; the signed-log paths must agree
  auto e = geolen::expansion_signed_log(d, p);
  auto t = geolen::trace_signed_log(d, p);
  CHECK(e.sign == +1);
  CHECK(t.sign == +1);
  CHECK(e.log_abs == doctest::Approx(t.log_abs).epsilon(1e-12));
  CHECK(std::isinf(geolen::cosh_half_expansion(d, p)));
  double ell = geolen::geodesic_length(d, p);
  CHECK(ell == doctest::Approx(2.0 * (t.log_abs + std::log(2.0))).epsilon(1e-12));

  // moderate regime: log path agrees with the direct path
  CoordPoint q;
  q.L = {2.0};
  q.theta = {1.5, -0.7};
  auto sl = geolen::expansion_signed_log(d, q);
  double direct = geolen::cosh_half_expansion(d, q);
  CHECK(sl.sign * std::exp(sl.log_abs) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("expansion at least one in the geodesic regime") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uT(0.01, 4.0), uL(0.1, 4.0);
  for (const auto& d : {diagram::figure_eight(), diagram::flower(2)}) {
    for (int i = 0; i < 50; ++i) {
      CoordPoint p;
      p.L.resize(static_cast<std::size_t>(d.r));
      p.theta.resize(2 * static_cast<std::size_t>(d.r));
      for (double& v : p.L) v = uL(rng);
      for (double& v : p.theta) v = uT(rng);
      for (const auto& [id, y] : geolen::y_lengths(d, p)) {
        (void)id;
        REQUIRE(y > 0);
      }
      CHECK(geolen::cosh_half_expansion(d, p) >= 1.0);
      CHECK(geolen::geodesic_length(d, p) > 0.0);
    }
  }
}

TEST_CASE("density factors on the figure-eight chart") {
  auto d = diagram::figure_eight();
  CoordPoint p = fig8_point(2.0, 2.0, 2.0);
  double L1 = p.L[0];
  CHECK(L1 == doctest::Approx(1.7048).epsilon(1e-4));
  auto dv = geolen::wp_density(d, p, {2.0, 2.0, 2.0});
  double s1 = std::sinh(1.0);
  CHECK(dv.rhs_density == doctest::Approx(4.0 * s1 * s1 * s1 * s1 * std::sinh(L1)).epsilon(1e-13));
  CHECK(dv.lhs_factor == doctest::Approx(8.0 * s1 * s1 * s1).epsilon(1e-13));

  // strictly increasing in the bar length
  CoordPoint p2 = p;
  p2.L[0] += 0.25;
  CHECK(geolen::wp_density(d, p2, {2.0, 2.0, 2.0}).rhs_density > dv.rhs_density);

  // outside the geodesic-diagram region
  CoordPoint bad = p;
  bad.theta[1] = -1.0;
  CHECK_THROWS_AS(geolen::wp_density(d, bad, {2.0, 2.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(geolen::wp_density(d, p, {2.0, -2.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(geolen::wp_density(d, p, {2.0, 2.0}), std::invalid_argument);
}

TEST_CASE("hexagon jacobian against the analytic ratio") {
  auto r1 = geolen::jacobian_fd_check_r1(2.0, 2.0, 2.0);
  CHECK(r1.rel_err <= 1e-6);
  auto r2 = geolen::jacobian_fd_check_r1(1.0, 3.0, 2.0);
  CHECK(r2.rel_err <= 1e-6);
  auto r3 = geolen::jacobian_fd_check_r1(3.0, 1.0, 2.0);
  CHECK(r3.fd == r2.fd);
  CHECK(r3.analytic == r2.analytic);
  CHECK_THROWS_AS(geolen::jacobian_fd_check_r1(1.0, 1.0, 1e-6), std::invalid_argument);
}

TEST_CASE("oracle report serialization and determinism") {
  auto d = diagram::figure_eight();
  auto a = geolen::oracle_suite(d, "fig8", 50, 7);
  auto b = geolen::oracle_suite(d, "fig8", 50, 7);
  CHECK(a.max_rel_err == b.max_rel_err);
  std::string js = geolen::to_json_text(a);
  CHECK(js.find("\"diagram_id\": \"fig8\"") != std::string::npos);
  CHECK(js.find("\"samples\": 50") != std::string::npos);
  CHECK(js.find("\"seed\": 7") != std::string::npos);

  auto p1 = geolen::random_point(2, 42);
  auto p2 = geolen::random_point(2, 42);
  CHECK(p1.L == p2.L);
  CHECK(p1.theta == p2.theta);
  for (double v : p1.L) CHECK((v > 0 && v <= 5.0));
}
