#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "ylab/functional.hpp"
#include "ylab/product.hpp"

using namespace ylab;
using namespace ylab::testing;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

ProductSpace space22(double t, int l_max = 4) {
  return ProductSpace::build(ProductFamily::spheres(2, 2, t), l_max);
}

std::vector<double> unit_coef(const ProductSpace& S) {
  std::vector<double> c(S.size(), 0.0);
  for (std::size_t e = 0; e < S.size(); ++e)
    if (S.basis[e].degree_a == 0 && S.basis[e].degree_b == 0) c[e] = 1.0;
  return c;
}
}  // namespace

TEST_CASE("eh_energy: reference constants") {
  // h_2: 12 sqrt(2) pi
  CHECK(eh_energy(ProductFamily::spheres(2, 2, 2.0)) ==
        doctest::Approx(12 * std::sqrt(2.0) * kPi).epsilon(1e-13));
  // t = 1: s = 4, V = 16 pi^2, energy = 16 pi
  CHECK(eh_energy(ProductFamily::spheres(2, 2, 1.0)) ==
        doctest::Approx(16 * kPi).epsilon(1e-13));
}

TEST_CASE("aubin_constant") {
  CHECK(aubin_constant(4) == doctest::Approx(8 * kPi * std::sqrt(6.0)).epsilon(1e-13));
  // n = 3 evaluated independently as s V^{2/3} of the unit 3-sphere
  CHECK(aubin_constant(3) ==
        doctest::Approx(6.0 * std::pow(2 * kPi * kPi, 2.0 / 3.0)).epsilon(1e-13));
  CHECK(aubin_constant(3) == doctest::Approx(43.823).epsilon(1e-4));
  // coincides with s V^{2/n} of the round unit n-sphere for n in 3..8
  for (int n = 3; n <= 8; ++n) {
    const double s = n * (n - 1.0);
    const double V = sphere_volume(n);
    CHECK(aubin_constant(n) == doctest::Approx(s * std::pow(V, 2.0 / n)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(aubin_constant(2), std::invalid_argument);
  // the strict ordering from the introduction constants
  CHECK(12 * kPi * std::sqrt(2.0) < 8 * kPi * std::sqrt(6.0));
}

TEST_CASE("yamabe_quotient: constant factor reproduces the energy") {
  for (double t : {1.0, 1.7, 2.5}) {
    const ProductSpace S = space22(t);
    const ConformalFactor u = make_conformal_factor(S, unit_coef(S));
    CHECK(yamabe_quotient(u, S) ==
          doctest::Approx(eh_energy(S.fam)).epsilon(1e-12));
  }
}

TEST_CASE("yamabe_quotient: scale invariance") {
  const ProductSpace S = space22(1.5);
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> c = unit_coef(S);
    for (std::size_t e = 0; e < S.size(); ++e)
      if (c[e] == 0.0) c[e] = 0.05 * rng.normal() / (1.0 + S.basis[e].eigenvalue);
    const ConformalFactor u = make_conformal_factor(S, c);
    const double q = yamabe_quotient(u, S);
    const double scale = rng.uniform(0.2, 5.0);
    std::vector<double> cs = c;
    for (double& x : cs) x *= scale;
    const ConformalFactor us = make_conformal_factor(S, cs);
    CHECK(yamabe_quotient(us, S) == doctest::Approx(q).epsilon(1e-10));
  }
}

TEST_CASE("yamabe_quotient: positivity and preconditions") {
  const ProductSpace S = space22(1.0);
  std::vector<double> c = unit_coef(S);
  c[first_sphere_coordinate_index(S)] = 1.5;  // 1 + 1.5 x1 dips negative
  CHECK_THROWS_AS(make_conformal_factor(S, c), std::invalid_argument);
}

TEST_CASE("second variation at t=1: the +1 coefficient") {
  // FD of the quotient against the analytic coefficient
  // -(4/(n-2)) (1 - lambda1 (n-1)/s) = -2 (1 - 6/4) = +1 at t = 1.
  const ProductSpace S = space22(1.0);
  const std::size_t fi = first_sphere_coordinate_index(S);
  const double coef = expansion_coefficient(S, fi);
  const double expected = eh_energy(S.fam) * 1.0 * (1.0 / 3.0);  // sV^{2/n} · 1 · ∮f²
  CHECK(coef == doctest::Approx(expected).epsilon(1e-12));
  CHECK(coef == doctest::Approx(16 * kPi / 3).epsilon(1e-12));

  const double tau = 1e-3;
  const double e0 = eh_energy(S.fam);
  const double fd = (perturbation_energy(S, fi, tau) + perturbation_energy(S, fi, -tau) -
                     2 * e0) /
                    (tau * tau);
  CHECK(fd == doctest::Approx(2.0 * coef).epsilon(1e-4));

  // the quotient of u = 1 + 0.1 x1 exceeds the energy by the predicted
  // quadratic term up to the odd-free quartic remainder
  const double q01 = perturbation_energy(S, fi, 0.1);
  CHECK(q01 > e0);
  CHECK(q01 == doctest::Approx(e0 + 0.01 * coef).epsilon(2e-4));
}

TEST_CASE("quotient drops below the energy past the threshold") {
  const ProductSpace S = space22(2.5);
  const std::size_t fi = first_sphere_coordinate_index(S);
  CHECK(perturbation_energy(S, fi, 0.05) < eh_energy(S.fam));
}

TEST_CASE("yamabe_residual") {
  const ProductSpace S = space22(1.5);
  const double s = scalar_curvature(S.fam);

  const ConformalFactor one = make_conformal_factor(S, unit_coef(S));
  CHECK(yamabe_residual(one, s, S) < 1e-12);

  // homothety: u ≡ c solves with target s c^{2-p}
  const double c = 1.7;
  std::vector<double> cc = unit_coef(S);
  for (double& x : cc) x *= c;
  const ConformalFactor uc = make_conformal_factor(S, cc);
  CHECK(yamabe_residual(uc, s * std::pow(c, 2.0 - S.p), S) < 1e-12);
  CHECK(yamabe_residual(uc, s, S) > 1e-3);

  // linearization oracle: residual of u = 1 + tau x1 at target s is
  // tau |(p+2) lambda1 + s - (p-1) s| max|x1| + O(tau^2)
  const std::size_t fi = first_sphere_coordinate_index(S);
  const double tau = 1e-5;
  std::vector<double> cp = unit_coef(S);
  cp[fi] = tau;
  const ConformalFactor up = make_conformal_factor(S, cp);
  double max_f = 0.0;
  {
    std::vector<double> fc(S.size(), 0.0);
    fc[fi] = 1.0;
    for (double v : S.node_values(fc)) max_f = std::max(max_f, std::abs(v));
  }
  const double lam = S.basis[fi].eigenvalue;
  const double predicted = tau * std::abs((S.p + 2.0) * lam + s - (S.p - 1.0) * s) * max_f;
  CHECK(yamabe_residual(up, s, S) == doctest::Approx(predicted).epsilon(1e-3));
}

TEST_CASE("perturbation energy: signs and symmetry across the threshold") {
  // tau = 0 reproduces the energy
  const ProductSpace S1 = space22(1.0);
  CHECK(perturbation_energy(S1, first_sphere_coordinate_index(S1), 0.0) ==
        doctest::Approx(eh_energy(S1.fam)).epsilon(1e-12));

  // t = 2.5: descent on both signs, symmetric to O(tau^3)
  const ProductSpace S25 = space22(2.5);
  const std::size_t fi25 = first_sphere_coordinate_index(S25);
  const double e25 = eh_energy(S25.fam);
  const double ep = perturbation_energy(S25, fi25, 0.05);
  const double em = perturbation_energy(S25, fi25, -0.05);
  CHECK(ep < e25);
  CHECK(em < e25);
  CHECK(std::abs(ep - em) < 10.0 * 0.05 * 0.05 * 0.05 * e25);

  // t = 2: vanishing second variation, |E(g_tau) - E| <= C tau^3
  const ProductSpace S2 = space22(2.0);
  const std::size_t fi2 = first_sphere_coordinate_index(S2);
  const double e2 = eh_energy(S2.fam);
  for (double tau : {0.05, 0.025, 0.0125}) {
    const double diff = std::abs(perturbation_energy(S2, fi2, tau) - e2);
    CHECK(diff <= 1.0 * tau * tau * tau * e2);
  }

  // positivity violation is an error
  CHECK_THROWS_AS(perturbation_energy(S2, fi2, 1.5), std::invalid_argument);
}

TEST_CASE("expansion coefficient: exact values and signs") {
  // equality case t = k/(k-1): coefficient vanishes
  const ProductSpace S2 = space22(2.0);
  const std::size_t fi2 = first_sphere_coordinate_index(S2);
  CHECK(std::abs(expansion_coefficient(S2, fi2)) < 1e-12 * eh_energy(S2.fam));

  // t = 1: positive, + (1/3) s V^{1/2}
  const ProductSpace S1 = space22(1.0);
  CHECK(expansion_coefficient(S1, first_sphere_coordinate_index(S1)) ==
        doctest::Approx(16 * kPi / 3).epsilon(1e-12));

  // t = 2.5: negative, -(2/21) s V^{1/2} = -(2/3) pi sqrt(6.4)
  const ProductSpace S25 = space22(2.5);
  const double c25 = expansion_coefficient(S25, first_sphere_coordinate_index(S25));
  CHECK(c25 == doctest::Approx(-(2.0 / 3.0) * kPi * std::sqrt(6.4)).epsilon(1e-12));
  CHECK(c25 < 0.0);
}

TEST_CASE("second-variation match across the family") {
  const double tau = 1e-3;
  for (double t : {1.0, 1.5, 2.0, 2.5}) {
    const ProductSpace S = space22(t);
    const std::size_t fi = first_sphere_coordinate_index(S);
    const double e0 = eh_energy(S.fam);
    const double fd = (perturbation_energy(S, fi, tau) + perturbation_energy(S, fi, -tau) -
                       2 * e0) /
                      (tau * tau);
    const double analytic = 2.0 * expansion_coefficient(S, fi);
    if (t == 2.0) {
      CHECK(std::abs(fd) <= 1e-6 * e0);  // zero coefficient at the critical value
    } else {
      CHECK(fd == doctest::Approx(analytic).epsilon(1e-4));
    }
  }
}

TEST_CASE("optimizer gradient matches finite differences of the quotient") {
  const ProductSpace S = space22(1.8);
  Rng rng(41);
  std::vector<double> c = unit_coef(S);
  for (std::size_t e = 0; e < S.size(); ++e)
    if (c[e] == 0.0) c[e] = 0.08 * rng.normal() / (1.0 + S.basis[e].eigenvalue);

  // consistency of the two quotient routes at the base point
  const ConformalFactor u = make_conformal_factor(S, c);
  CHECK(quotient_value(S, c) == doctest::Approx(yamabe_quotient(u, S)).epsilon(1e-11));

  const auto grad = quotient_gradient(S, c);
  const double h = 1e-6;
  for (int dir = 0; dir < 20; ++dir) {
    std::vector<double> d(S.size());
    double dn = 0.0;
    for (std::size_t e = 0; e < S.size(); ++e) {
      d[e] = rng.normal();
      dn += d[e] * d[e];
    }
    dn = std::sqrt(dn);
    for (double& x : d) x /= dn;

    std::vector<double> cp = c, cm = c;
    for (std::size_t e = 0; e < S.size(); ++e) {
      cp[e] += h * d[e];
      cm[e] -= h * d[e];
    }
    const double fd = (yamabe_quotient(make_conformal_factor(S, cp), S) -
                       yamabe_quotient(make_conformal_factor(S, cm), S)) /
                      (2 * h);
    double an = 0.0;
    for (std::size_t e = 0; e < S.size(); ++e) an += grad[e] * d[e];
    CHECK(fd == doctest::Approx(an).epsilon(1e-6));
  }
}

TEST_CASE("minimize_quotient: Einstein point is already minimal") {
  MinimizeOptions mo;
  mo.l_max = 4;
  mo.restarts = 4;
  mo.seed = 42;
  const ProductFamily fam = ProductFamily::spheres(2, 2, 1.0);
  const MinimizeResult res = minimize_quotient(fam, mo);
  const double e = eh_energy(fam);
  CHECK(res.estimate >= e - 1e-4 * e);
  CHECK(res.estimate <= e + 1e-9 * e);
  CHECK(res.minimizer.min_node_value > 0.0);
  CHECK(res.quadrature_exact);
}

TEST_CASE("minimize_quotient: descends past the threshold") {
  MinimizeOptions mo;
  mo.l_max = 4;
  mo.restarts = 4;
  mo.seed = 42;
  const ProductFamily fam = ProductFamily::spheres(2, 2, 2.5);
  const MinimizeResult res = minimize_quotient(fam, mo);
  const double e = eh_energy(fam);
  CHECK(res.estimate < e - 0.1);               // a reported positive gap
  CHECK(res.estimate <= aubin_constant(4) * (1 + 1e-8));
  // estimate is the smallest value seen anywhere in the trace
  for (const TraceRow& row : res.trace) CHECK(res.estimate <= row.quotient + 1e-12);
}

TEST_CASE("minimize_quotient: zero iterations reproduce the energy") {
  MinimizeOptions mo;
  mo.l_max = 4;
  mo.restarts = 1;  // only the u ≡ 1 start
  mo.max_iters = 0;
  const ProductFamily fam = ProductFamily::spheres(2, 2, 2.5);
  const MinimizeResult res = minimize_quotient(fam, mo);
  CHECK(res.estimate == doctest::Approx(eh_energy(fam)).epsilon(1e-12));
}

TEST_CASE("minimize_quotient: monotone trace per restart") {
  MinimizeOptions mo;
  mo.l_max = 4;
  mo.restarts = 5;
  mo.seed = 7;
  const MinimizeResult res =
      minimize_quotient(ProductFamily::spheres(2, 2, 2.2), mo);
  int prev_restart = -1;
  double prev_q = 0.0;
  for (const TraceRow& row : res.trace) {
    if (row.restart != prev_restart) {
      prev_restart = row.restart;
      prev_q = row.quotient;
      continue;
    }
    CHECK(row.quotient <= prev_q + 1e-14);
    prev_q = row.quotient;
  }
}

TEST_CASE("minimize_quotient: deterministic for a fixed seed") {
  MinimizeOptions mo;
  mo.l_max = 4;
  mo.restarts = 5;
  mo.seed = 1234;
  const ProductFamily fam = ProductFamily::spheres(2, 2, 2.4);
  const MinimizeResult a = minimize_quotient(fam, mo);
  const MinimizeResult b = minimize_quotient(fam, mo);
  CHECK(a.estimate == b.estimate);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].quotient == b.trace[i].quotient);
    CHECK(a.trace[i].step == b.trace[i].step);
    CHECK(a.trace[i].min_u == b.trace[i].min_u);
  }
}

TEST_CASE("minimize_quotient: all restarts breaching positivity is an error") {
  const ProductSpace S = space22(1.5);
  MinimizeOptions mo;
  mo.l_max = 4;
  std::vector<double> bad = unit_coef(S);
  bad[first_sphere_coordinate_index(S)] = 5.0;  // wildly sign-changing start
  mo.custom_starts = {bad, bad};
  CHECK_THROWS_AS(minimize_quotient(S, mo), std::runtime_error);
}

TEST_CASE("n = 5 products: non-integer exponent path") {
  // k=3, l=2 gives p = 10/3; u^p is no longer polynomial, so quadrature is
  // flagged inexact, but the smooth integrands still converge spectrally.
  const ProductFamily fam = ProductFamily::spheres(3, 2, 1.4);
  const ProductSpace S = ProductSpace::build(fam, 3);
  CHECK(!S.p_integer);
  CHECK(!S.quadrature_exact);
  CHECK(S.p == doctest::Approx(10.0 / 3.0).epsilon(1e-14));

  // u = 1 keeps every integrand exact: quotient reproduces the energy
  std::vector<double> c = unit_coef(S);
  CHECK(yamabe_quotient(make_conformal_factor(S, c), S) ==
        doctest::Approx(eh_energy(fam)).epsilon(1e-11));

  // second variation against the analytic coefficient, general-n formula
  const std::size_t fi = first_sphere_coordinate_index(S);
  const double tau = 1e-3;
  const double fd = (perturbation_energy(S, fi, tau) + perturbation_energy(S, fi, -tau) -
                     2 * eh_energy(fam)) /
                    (tau * tau);
  CHECK(fd == doctest::Approx(2.0 * expansion_coefficient(S, fi)).epsilon(1e-4));

  // minimizer runs end to end and respects its bounds
  MinimizeOptions mo;
  mo.l_max = 2;
  mo.restarts = 2;
  mo.max_iters = 60;
  const MinimizeResult res = minimize_quotient(fam, mo);
  CHECK(res.estimate <= eh_energy(fam) + mo.tol);
  CHECK(!res.quadrature_exact);
}

TEST_CASE("full harmonic basis contains the zonal trial space") {
  const ProductFamily fam = ProductFamily::spheres(2, 2, 2.5);
  const ProductSpace Sz = ProductSpace::build(fam, 2, 0, true);
  const ProductSpace Sf = ProductSpace::build(fam, 2, 0, false);
  CHECK(Sf.size() > Sz.size());

  // x1 is the same function under both bases
  CHECK(perturbation_energy(Sf, first_sphere_coordinate_index(Sf), 0.05) ==
        doctest::Approx(perturbation_energy(Sz, first_sphere_coordinate_index(Sz), 0.05))
            .epsilon(1e-11));

  MinimizeOptions zo;
  zo.l_max = 2;
  zo.restarts = 2;
  zo.max_iters = 100;
  MinimizeOptions fo = zo;
  fo.full_basis = true;
  const double ez = minimize_quotient(fam, zo).estimate;
  const double ef = minimize_quotient(fam, fo).estimate;
  CHECK(ef <= ez + 1e-6);  // the larger space can only do at least as well
}

TEST_CASE("ProductSpace rejects grids below the integrand degree") {
  const ProductFamily fam = ProductFamily::spheres(2, 2, 1.5);
  CHECK_THROWS_AS(ProductSpace::build(fam, 4, 8), std::invalid_argument);
  CHECK_NOTHROW(ProductSpace::build(fam, 4, 16));
}

TEST_CASE("minimize estimates respect the Aubin bound on the tested range") {
  MinimizeOptions mo;
  mo.l_max = 4;
  mo.restarts = 3;
  mo.max_iters = 120;
  for (double t : {1.0, 1.8, 2.5, 3.0}) {
    const ProductFamily fam = ProductFamily::spheres(2, 2, t);
    const MinimizeResult res = minimize_quotient(fam, mo);
    CHECK(res.estimate <= aubin_constant(4) * (1 + 1e-8));
    CHECK(res.estimate <= eh_energy(fam) + mo.tol);
  }
}
