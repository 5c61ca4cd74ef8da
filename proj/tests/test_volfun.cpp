#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracelab/quadrature.hpp"
#include "tracelab/volfun.hpp"

using namespace tracelab;
using namespace tracelab::volfun;

namespace {

const pipoly::VolumeTable& shipped_table() {
  static pipoly::VolumeTable t = pipoly::load_table(
      std::string(TRACELAB_SOURCE_DATA_DIR) + "/volumes.json");
  return t;
}

// Oracle for the enumeration: every label-to-slot assignment (kept only in
// its first-occurrence-canonical form) crossed with every bounded genus
// vector, filtered by block admissibility and the genus budget.
std::set<std::string> brute_realization_strings(int sg, int sn, int g) {
  std::set<std::string> out;
  const int budget = (2 * g - 2) - (2 * sg - 2 + sn);
  if (budget < 0) return out;
  std::vector<int> slot(sn, 0);
  while (true) {
    std::map<int, int> first_seen;
    std::vector<int> canon(sn, 0);
    int next = 0;
    for (int i = 0; i < sn; ++i) {
      auto it = first_seen.find(slot[i]);
      if (it == first_seen.end()) {
        first_seen[slot[i]] = next;
        canon[i] = next++;
      } else {
        canon[i] = it->second;
      }
    }
    if (std::equal(slot.begin(), slot.end(), canon.begin())) {
      const int q = next;
      std::vector<std::vector<int>> blocks(q);
      for (int i = 0; i < sn; ++i) blocks[canon[i]].push_back(i + 1);
      const int cap = budget / 2 + 1;
      std::vector<int> gen(q, 0);
      while (true) {
        int acc = 0;
        bool admissible = true;
        for (int b = 0; b < q && admissible; ++b) {
          const int nb = static_cast<int>(blocks[b].size());
          if (!(2 * gen[b] - 2 + nb > 0 || (gen[b] == 0 && nb == 2)))
            admissible = false;
          else
            acc += 2 * gen[b] - 2 + nb;
        }
        if (admissible && acc == budget) {
          Realization r;
          for (int b = 0; b < q; ++b)
            r.blocks.push_back(Block{gen[b], blocks[b]});
          out.insert(to_string(r));
        }
        int k = 0;
        while (k < q && ++gen[k] > cap) {
          gen[k] = 0;
          ++k;
        }
        if (k == q) break;
      }
    }
    int k = 0;
    while (k < sn && ++slot[k] >= sn) {
      slot[k] = 0;
      ++k;
    }
    if (k == sn) break;
  }
  return out;
}

std::set<std::string> realization_strings(const diagram::Signature& sig,
                                          int g) {
  std::set<std::string> out;
  for (const auto& r : enumerate_realizations(sig, g)) out.insert(to_string(r));
  return out;
}

}  // namespace

TEST_CASE("step-halving simpson rule") {
  using quadrature::integrate;
  using quadrature::QuadSpec;

  auto cubic = [](double x) { return x * x * x - 2.0 * x + 1.0; };
  auto r = integrate(cubic, 0.0, 1.0, {});
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-14));

  auto e = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, {});
  CHECK(e.converged);
  CHECK(std::fabs(e.value - (std::exp(1.0) - 1.0)) <= 2e-8);
  CHECK(std::fabs(e.value - (std::exp(1.0) - 1.0)) <=
        e.err_estimate + 1e-14);

  CHECK(integrate(cubic, 2.0, 2.0, {}).value == 0.0);
  auto fwd = integrate(cubic, 0.0, 1.0, {});
  auto rev = integrate(cubic, 1.0, 0.0, {});
  CHECK(fwd.value == doctest::Approx(-rev.value).epsilon(1e-14));

  // fixed level count: exactly that many doublings, and the reported
  // estimate bounds the change under one more halving
  QuadSpec fixed3{1e-8, 22, 8, 3};
  QuadSpec fixed4{1e-8, 22, 8, 4};
  auto s3 = integrate([](double x) { return std::exp(std::sin(x)); }, 0.0,
                      3.0, fixed3);
  auto s4 = integrate([](double x) { return std::exp(std::sin(x)); }, 0.0,
                      3.0, fixed4);
  CHECK(s3.levels == 3);
  CHECK(s4.levels == 4);
  CHECK(std::fabs(s3.value - s4.value) <= s3.err_estimate + 1e-14);

  CHECK_THROWS_AS(
      integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, {}),
      std::domain_error);
}

TEST_CASE("realization enumeration matches the brute-force oracle") {
  for (int g = 2; g <= 6; ++g) {
    for (auto sig : {diagram::Signature{0, 2}, diagram::Signature{0, 3},
                     diagram::Signature{0, 4}, diagram::Signature{1, 1}}) {
      auto listed = enumerate_realizations(sig, g);
      std::set<std::string> got;
      for (const auto& r : listed) got.insert(to_string(r));
      CHECK(got.size() == listed.size());  // duplicate-free
      CHECK(got == brute_realization_strings(sig.g, sig.n, g));
    }
  }
}

TEST_CASE("cylinder realizations: one connected term plus genus splittings") {
  for (int g = 2; g <= 6; ++g) {
    auto got = realization_strings(diagram::Signature{0, 2}, g);
    std::set<std::string> expected;
    expected.insert("V(" + std::to_string(g - 1) + ",2)[1,2]");
    for (int i = 1; i <= g - 1; ++i)
      expected.insert("V(" + std::to_string(i) + ",1)[1]*V(" +
                      std::to_string(g - i) + ",1)[2]");
    CHECK(got.size() == static_cast<size_t>(g));
    CHECK(got == expected);
  }
}

TEST_CASE("pair-of-pants realizations: the three worked families") {
  for (int g = 2; g <= 5; ++g) {
    auto got = realization_strings(diagram::Signature{0, 3}, g);
    std::set<std::string> expected;
    expected.insert("V(" + std::to_string(g - 2) + ",3)[1,2,3]");
    for (int i = 0; i <= g - 2; ++i) {
      const std::string pair = "V(" + std::to_string(i) + ",2)";
      const std::string single = "V(" + std::to_string(g - 1 - i) + ",1)";
      expected.insert(pair + "[1,2]*" + single + "[3]");
      expected.insert(pair + "[1,3]*" + single + "[2]");
      expected.insert(single + "[1]*" + pair + "[2,3]");
    }
    for (int a = 1; a <= g - 2; ++a)
      for (int b = 1; a + b <= g - 1; ++b)
        expected.insert("V(" + std::to_string(a) + ",1)[1]*V(" +
                        std::to_string(b) + ",1)[2]*V(" +
                        std::to_string(g - a - b) + ",1)[3]");
    CHECK(got == expected);
    CHECK(got.size() ==
          static_cast<size_t>(1 + 3 * (g - 1) + (g - 1) * (g - 2) / 2));
  }
}

TEST_CASE("enumeration edge cases") {
  CHECK(enumerate_realizations(diagram::Signature{0, 5}, 2).empty());
  CHECK_THROWS_AS(enumerate_realizations(diagram::Signature{0, 2}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(enumerate_realizations(diagram::Signature{-1, 2}, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(enumerate_realizations(diagram::Signature{0, 0}, 3),
                  std::invalid_argument);
}

TEST_CASE("cylinder distribution matches the closed product form") {
  const auto& table = shipped_table();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> len(0.3, 9.0);
  for (int g = 2; g <= 5; ++g) {
    PhiExpression phi = phi_S(table, diagram::Signature{0, 2}, g);
    CHECK(phi.terms.size() == static_cast<size_t>(g));
    for (const auto& t : phi.terms) CHECK(t.dirac_pairs.empty());
    for (int rep = 0; rep < 5; ++rep) {
      const double x1 = len(rng);
      const double x2 = len(rng);
      double direct = table.at(g - 1, 2).eval({x1, x2});
      for (int i = 1; i <= g - 1; ++i)
        direct += table.at(i, 1).eval({x1}) * table.at(g - i, 1).eval({x2});
      direct *= x1 * x2;
      double via = 0.0;
      for (const auto& t : phi.terms)
        via += eval_term_density(t, {x1, x2});
      CHECK(via == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("missing table entries are listed exactly") {
  pipoly::VolumeTable small;
  {
    pipoly::PiPolynomial v11(1);
    v11.add_term({2}, 0, 1, 48);
    v11.add_term({0}, 2, 1, 12);
    small.insert(1, 1, v11, "test entry");
  }
  try {
    phi_S(small, diagram::Signature{0, 2}, 3);
    FAIL("expected a missing-entry error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("(2, 2)") != std::string::npos);
    CHECK(msg.find("(2, 1)") != std::string::npos);
    CHECK(msg.find("(1, 1)") == std::string::npos);  // present, not listed
  }
  CHECK_THROWS_AS(v_simple(small, 3, 2.0), std::runtime_error);
}

TEST_CASE("simple-curve volume: closed form against the dirac pipeline") {
  const auto& table = shipped_table();
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> genus(2, 5);
  std::uniform_real_distribution<double> len(0.1, 10.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int g = genus(rng);
    const double ell = len(rng);
    const double vs = v_simple(table, g, ell);
    const double vphi = v_simple_via_phi(table, g, ell);
    CHECK(std::fabs(vs - vphi) <= 1e-10 * std::max(1.0, std::fabs(vs)));
  }

  // prefactor forces the value to vanish with ell
  CHECK(v_simple(table, 2, 1e-8) <= 1e-6);
  CHECK(v_simple(table, 2, 1e-8) > 0.0);
  CHECK_THROWS_AS(v_simple(table, 1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(v_simple(table, 2, 0.0), std::invalid_argument);
}

TEST_CASE("figure-eight volume: domain threshold") {
  const auto& table = shipped_table();
  CHECK_THROWS_AS(v_pop_type(table, 2, PopType::figure_eight, 3.5, 1),
                  std::domain_error);
  CHECK_THROWS_AS(
      v_pop_type(table, 2, PopType::figure_eight,
                 2.0 * std::acosh(3.0) - 1e-9, 1),
      std::domain_error);
  CHECK_THROWS_AS(v_pop_type(table, 2, PopType::figure_eight, 6.0, 0),
                  std::invalid_argument);

  // the level set opens at 2 arccosh(3) and the volume climbs from zero
  quadrature::QuadSpec spec;
  auto v36 = v_pop_type(table, 2, PopType::figure_eight, 3.6, 1, spec);
  auto v45 = v_pop_type(table, 2, PopType::figure_eight, 4.5, 1, spec);
  auto v60 = v_pop_type(table, 2, PopType::figure_eight, 6.0, 1, spec);
  CHECK(v36.value > 0.0);
  CHECK(v36.value < v45.value);
  CHECK(v45.value < v60.value);
  CHECK(v36.value < 0.05 * v60.value);

  // the symmetry coefficient divides straight through
  auto half = v_pop_type(table, 2, PopType::figure_eight, 6.0, 2, spec);
  CHECK(half.value == doctest::Approx(0.5 * v60.value).epsilon(1e-14));
}

TEST_CASE("pair-of-pants distribution: dirac groups carry the right factors") {
  const auto& table = shipped_table();
  const diagram::Signature sig =
      diagram::filling_signature(diagram::figure_eight());
  CHECK(sig == diagram::Signature{0, 3});
  PhiExpression phi = phi_S(table, sig, 2);
  CHECK(phi.n_s == 3);
  CHECK(phi.terms.size() == 4);
  int n_poly = 0;
  int n_dirac = 0;
  const std::vector<double> x{1.5, 2.5, 3.5};
  for (const auto& t : phi.terms) {
    if (t.dirac_pairs.empty()) {
      ++n_poly;
      // the connected complement is V_{0,3} = 1
      CHECK(t.poly.eval(x) == doctest::Approx(1.0));
    } else {
      ++n_dirac;
      REQUIRE(t.dirac_pairs.size() == 1);
      const int single = 6 - t.dirac_pairs[0].first - t.dirac_pairs[0].second;
      const double expect = table.at(1, 1).eval({x[single - 1]});
      CHECK(t.poly.eval(x) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  CHECK(n_poly == 1);
  CHECK(n_dirac == 3);

  // density of a cylinder term: the pair's 1/x eats one prefactor copy
  PhiTerm cyl;
  cyl.poly = pipoly::PiPolynomial::constant(3, pipoly::PiRational{1, 1, 0});
  cyl.dirac_pairs = {{1, 3}};
  CHECK(eval_term_density(cyl, {2.0, 5.0, 2.0}) == doctest::Approx(10.0));
}

TEST_CASE("figure-eight volume: half-domain symmetry") {
  const auto& table = shipped_table();
  const diagram::Signature sig =
      diagram::filling_signature(diagram::figure_eight());
  quadrature::QuadSpec spec;
  spec.tol = 1e-10;

  // genus 2: the polynomial part is the constant V_{0,3}, symmetric for free
  {
    PhiExpression phi = phi_S(table, sig, 2);
    auto full = detail::poly_part_primary(phi, 6.0, spec, false);
    auto half = detail::poly_part_primary(phi, 6.0, spec, true);
    CHECK(std::fabs(full.value - half.value) <=
          1e-8 * std::max(1.0, std::fabs(full.value)));
  }

  // genus 3 with a hand-made symmetric (1,3) entry; the shipped demo entry
  // is not symmetric in its labels and the half-domain identity needs
  // symmetry of the distribution in (x1, x2)
  {
    pipoly::VolumeTable sym;
    sym.insert(1, 1, table.at(1, 1), "copied");
    sym.insert(1, 2, table.at(1, 2), "copied");
    sym.insert(2, 1, table.at(2, 1), "copied");
    pipoly::PiPolynomial v13(3);
    v13.add_term({0, 0, 0}, 6, 1, 5);
    v13.add_term({2, 0, 0}, 4, 1, 7);
    v13.add_term({0, 2, 0}, 4, 1, 7);
    v13.add_term({0, 0, 2}, 4, 1, 7);
    v13.add_term({2, 2, 2}, 0, 1, 11);
    sym.insert(1, 3, v13, "symmetric stand-in");

    PhiExpression phi = phi_S(sym, sig, 3);
    auto full = detail::poly_part_primary(phi, 7.0, spec, false);
    auto half = detail::poly_part_primary(phi, 7.0, spec, true);
    CHECK(std::fabs(full.value - half.value) <=
          1e-8 * std::max(1.0, std::fabs(full.value)));
  }
}

TEST_CASE("figure-eight volume: the two charts agree") {
  const auto& table = shipped_table();
  quadrature::QuadSpec spec;
  spec.tol = 1e-9;
  for (int g : {2, 3}) {
    for (double ell : {4.2, 6.0, 9.0}) {
      auto prim = v_pop_type(table, g, PopType::figure_eight, ell, 1, spec,
                             Chart::primary);
      auto alt = v_pop_type(table, g, PopType::figure_eight, ell, 1, spec,
                            Chart::alternate);
      CHECK(std::fabs(prim.value - alt.value) <=
            1e-6 * std::max(1.0, std::fabs(prim.value)));
    }
  }
}

TEST_CASE("figure-eight volume: halving the step stays inside the estimate") {
  const auto& table = shipped_table();
  for (int levels : {3, 4}) {
    quadrature::QuadSpec coarse;
    coarse.fixed_levels = levels;
    quadrature::QuadSpec fine;
    fine.fixed_levels = levels + 1;
    auto v1 = v_pop_type(table, 2, PopType::figure_eight, 6.0, 1, coarse);
    auto v2 = v_pop_type(table, 2, PopType::figure_eight, 6.0, 1, fine);
    CHECK(std::fabs(v1.value - v2.value) <=
          v1.err_estimate + 1e-12 * std::fabs(v1.value));
  }

  // adaptive error reporting is honest against a much finer run
  quadrature::QuadSpec loose;
  loose.tol = 1e-6;
  quadrature::QuadSpec tight;
  tight.tol = 1e-10;
  auto vl = v_pop_type(table, 2, PopType::figure_eight, 6.0, 1, loose);
  auto vt = v_pop_type(table, 2, PopType::figure_eight, 6.0, 1, tight);
  CHECK(std::fabs(vl.value - vt.value) <=
        vl.err_estimate + 1e-10 * std::fabs(vl.value));
}

TEST_CASE("expansion fit: synthetic model recovery") {
  std::map<int, std::vector<double>> samples;
  const std::vector<double> f0{2.0, 3.0, 5.5};
  const std::vector<double> f1{-1.0, 0.5, 2.0};
  const std::vector<double> f2{3.0, -2.0, 0.25};
  for (int g : {2, 3, 5, 8, 13}) {
    std::vector<double> row(3);
    for (size_t j = 0; j < 3; ++j)
      row[j] = f0[j] + f1[j] / g + f2[j] / (g * g);
    samples[g] = row;
  }
  auto fit = expansion_fit(samples, 2, 0);
  CHECK(fit.K == 2);
  CHECK(fit.k_min == 0);
  CHECK_FALSE(fit.ill_conditioned);
  for (size_t j = 0; j < 3; ++j) {
    CHECK(fit.coefficients[0][j] == doctest::Approx(f0[j]).epsilon(1e-8));
    CHECK(fit.coefficients[1][j] == doctest::Approx(f1[j]).epsilon(1e-8));
    CHECK(fit.coefficients[2][j] == doctest::Approx(f2[j]).epsilon(1e-8));
  }
  CHECK(fit.residual <= 1e-10);

  // constant input: everything lands in f_0
  std::map<int, std::vector<double>> flat;
  for (int g : {2, 3, 4, 7}) flat[g] = {3.5};
  auto cfit = expansion_fit(flat, 2, 0);
  CHECK(cfit.coefficients[0][0] == doctest::Approx(3.5).epsilon(1e-10));
  CHECK(std::fabs(cfit.coefficients[1][0]) <= 1e-8);
  CHECK(std::fabs(cfit.coefficients[2][0]) <= 1e-8);

  // a negative leading power (growing mode) is fitted the same way
  std::map<int, std::vector<double>> grow;
  for (int g : {2, 3, 4, 6}) grow[g] = {1.5 * g + 0.25};
  auto gfit = expansion_fit(grow, 0, -1);
  CHECK(gfit.coefficients[0][0] == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(gfit.coefficients[1][0] == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("expansion fit: input validation") {
  std::map<int, std::vector<double>> three;
  for (int g : {2, 3, 4}) three[g] = {1.0};
  CHECK_THROWS_AS(expansion_fit(three, 2, 0), std::invalid_argument);

  std::map<int, std::vector<double>> ragged;
  ragged[2] = {1.0, 2.0};
  ragged[3] = {1.0};
  ragged[4] = {1.0, 2.0};
  ragged[5] = {1.0, 2.0};
  CHECK_THROWS_AS(expansion_fit(ragged, 2, 0), std::invalid_argument);

  std::map<int, std::vector<double>> bad_genus;
  for (int g : {0, 1, 2, 3}) bad_genus[g] = {1.0};
  CHECK_THROWS_AS(expansion_fit(bad_genus, 2, 0), std::invalid_argument);

  CHECK_THROWS_AS(expansion_fit(three, 0, 2), std::invalid_argument);
}

TEST_CASE("expansion fit: table-driven demonstration") {
  const auto& table = shipped_table();
  const std::vector<double> ells{2.0, 4.0, 6.0};
  std::map<int, std::vector<double>> samples;
  for (int g = 2; g <= 5; ++g) {
    std::vector<double> row;
    for (double ell : ells)
      row.push_back(v_simple(table, g, ell) / v_simple(table, g, 1.0));
    samples[g] = row;
  }
  auto fit = expansion_fit(samples, 2, 0);
  for (size_t j = 0; j < ells.size(); ++j) CHECK(fit.coefficients[0][j] > 0.0);
  CHECK(fit.coefficients[0][2] > fit.coefficients[0][0]);

  const std::string js = to_json_text(fit, ells);
  CHECK(js.find("\"f_0\"") != std::string::npos);
  CHECK(js.find("\"condition\"") != std::string::npos);
  CHECK(js.find("\"ell\"") != std::string::npos);
}

TEST_CASE("volume csv rows") {
  std::vector<VPopRow> rows;
  rows.push_back(VPopRow{2.0, VPopResult{1.5, 0.25, 100}});
  const std::string csv = to_csv_text(rows, 3, "eight");
  CHECK(csv == "ell,value,err_estimate,g,type\n2,1.5,0.25,3,eight\n");
}
