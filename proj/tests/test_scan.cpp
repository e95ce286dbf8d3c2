#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ylab/scan.hpp"

using namespace ylab;

TEST_CASE("yamabe_necessary_test on the worked family") {
  CHECK(yamabe_necessary_test(ProductFamily::spheres(2, 2, 1.5)) == NecessaryTest::Holds);
  CHECK(yamabe_necessary_test(ProductFamily::spheres(2, 2, 2.0)) == NecessaryTest::Equality);
  CHECK(yamabe_necessary_test(ProductFamily::spheres(2, 2, 2.5)) == NecessaryTest::Violated);
}

TEST_CASE("critical_parameter") {
  CHECK(critical_parameter(2) == 2.0);
  CHECK(critical_parameter(3) == 1.5);
  CHECK_THROWS_AS(critical_parameter(1), std::invalid_argument);
  double prev = critical_parameter(2);
  for (int k = 3; k <= 40; ++k) {
    const double cur = critical_parameter(k);
    CHECK(cur < prev);
    CHECK(cur > 1.0);
    prev = cur;
  }
}

TEST_CASE("boundary exactness: the flip happens precisely across k/(k-1)") {
  for (int k : {2, 3}) {
    const int l = 2;
    const double tc = critical_parameter(k);
    for (int j = -20; j <= 20; ++j) {
      const double t = tc + j * 1e-3;
      if (t < 1.0) continue;
      const NecessaryTest r = yamabe_necessary_test(ProductFamily::spheres(k, l, t));
      if (j < 0)
        CHECK(r == NecessaryTest::Holds);
      else if (j == 0)
        CHECK(r == NecessaryTest::Equality);
      else
        CHECK(r == NecessaryTest::Violated);
    }
  }
}

TEST_CASE("equality calibration at the critical parameter") {
  for (int k : {2, 3}) {
    for (int l : {2, 3}) {
      const ProductFamily fam = ProductFamily::spheres(k, l, critical_parameter(k));
      const double lam = product_lambda1(fam);
      const double thr = scalar_curvature(fam) / (fam.n() - 1);
      CHECK(std::abs(lam - thr) <= 1e-12);
    }
  }
}

TEST_CASE("destabilizing_direction: certificate against the analytic prediction") {
  const ProductFamily fam = ProductFamily::spheres(2, 2, 2.5);
  const Certificate cert = destabilizing_direction(fam, 0.05);
  CHECK(cert.direction == "x1");
  CHECK(cert.energy_drop > 0.0);
  CHECK(cert.perturbed_energy < cert.reference_energy);
  // drop within 20% of |expansion coefficient| tau^2
  CHECK(std::abs(cert.energy_drop - cert.predicted_drop) <= 0.2 * cert.predicted_drop);
  // mean-zero eigenfunction
  CHECK(std::abs(cert.f_mean) <= 1e-10);

  // reproducible bit-for-bit
  const Certificate again = destabilizing_direction(fam, 0.05);
  CHECK(cert.energy_drop == again.energy_drop);
  CHECK(cert.perturbed_energy == again.perturbed_energy);

  CHECK_THROWS_AS(destabilizing_direction(ProductFamily::spheres(2, 2, 2.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(destabilizing_direction(ProductFamily::spheres(2, 2, 1.5)),
                  std::invalid_argument);
}

TEST_CASE("destabilizing_direction stays sound just past the threshold") {
  // here the quadratic descent is so shallow that tau = 0.05 overshoots into
  // the quartic regime; the certificate must still report a positive drop
  for (double t : {2.002, 2.0005}) {
    const Certificate cert = destabilizing_direction(ProductFamily::spheres(2, 2, t), 0.05);
    CHECK(cert.energy_drop > 0.0);
    CHECK(cert.tau < 0.05);  // the step was halved at least once
    CHECK(cert.tau > 0.0);
  }
}

TEST_CASE("scan: classification sweep straddles the critical value") {
  const auto records = scan(2, 2, 1.0, 2.5, 16);
  REQUIRE(records.size() == 16);
  CHECK(records.front().classification == Classification::Einstein);
  // t grid: 1.0, 1.1, ..., 2.5; the flip is between 2.0 and 2.1
  for (const ScanRecord& r : records) {
    if (r.t < 2.0 - 1e-9 && r.t > 1.0 + 1e-9)
      CHECK(r.classification == Classification::NecessaryHolds);
    if (std::abs(r.t - 2.0) < 1e-9) CHECK(r.classification == Classification::Equality);
    if (r.t > 2.0 + 1e-9) CHECK(r.classification == Classification::Violated);
    // the record invariant: violated iff lambda1 < threshold - 1e-12
    CHECK((r.classification == Classification::Violated) ==
          (r.lambda1 < r.threshold - 1e-12));
    if (r.certificate) {
      CHECK(r.classification == Classification::Violated);
      CHECK(r.certificate->energy_drop > 0.0);
    }
  }
  // records arrive in t order
  for (std::size_t i = 1; i < records.size(); ++i) CHECK(records[i].t > records[i - 1].t);
}

TEST_CASE("scan: single point at t=1 is Einstein") {
  const auto records = scan(2, 2, 1.0, 1.0, 1);
  REQUIRE(records.size() == 1);
  CHECK(records[0].classification == Classification::Einstein);
}

TEST_CASE("scan: k=3 boundary straddles 1.5") {
  const auto records = scan(3, 2, 1.0, 2.0, 21);
  REQUIRE(records.size() == 21);
  for (const ScanRecord& r : records) {
    if (r.t < 1.5 - 1e-9 && r.t > 1.0 + 1e-9)
      CHECK(r.classification == Classification::NecessaryHolds);
    if (std::abs(r.t - 1.5) < 1e-9) CHECK(r.classification == Classification::Equality);
    if (r.t > 1.5 + 1e-9) CHECK(r.classification == Classification::Violated);
  }
}

TEST_CASE("scan: contract checks") {
  CHECK_THROWS_AS(scan(2, 2, 2.0, 1.5, 4), std::invalid_argument);  // empty range
  CHECK_THROWS_AS(scan(2, 2, 0.5, 2.0, 4), std::invalid_argument);  // t_min < 1
  CHECK_THROWS_AS(scan(2, 2, 1.0, 2.0, 0), std::invalid_argument);
}

namespace {
std::vector<ScanRecord> synthetic_records(double t_min, double t_max, int steps,
                                          double drop_after) {
  std::vector<ScanRecord> records;
  for (int i = 0; i < steps; ++i) {
    ScanRecord r;
    r.t = t_min + (t_max - t_min) * i / (steps - 1);
    r.eh_energy = 50.0 + r.t;
    r.minimizer_estimate =
        r.t <= drop_after ? r.eh_energy : r.eh_energy - 1.0;  // ideal synthetic input
    records.push_back(r);
  }
  return records;
}
}  // namespace

TEST_CASE("bracket_maximal_T") {
  // ideal data: estimates equal the energy up to t = 2, strictly less after
  const auto ideal = synthetic_records(1.0, 2.5, 16, 2.0);
  const Bracket br = bracket_maximal_T(ideal, 1e-6);
  CHECK(!br.degenerate);
  CHECK(br.heuristic);
  CHECK(br.t_low <= 2.0 + 1e-12);
  CHECK(br.t_high > 2.0);
  CHECK(br.t_high - br.t_low <= 0.1 + 1e-12);  // one grid step

  // all estimates below the energy: degenerate bracket at t_min
  const auto all_below = synthetic_records(1.0, 2.5, 16, 0.0);
  const Bracket bad = bracket_maximal_T(all_below, 1e-6);
  CHECK(bad.degenerate);
  CHECK(bad.t_low == 1.0);
  CHECK(bad.t_high == 1.0);

  // infinite tolerance accepts everything
  const Bracket all = bracket_maximal_T(ideal, 1e300);
  CHECK(all.t_low == 2.5);
  CHECK(all.t_high == 2.5);

  // records without estimates are rejected
  std::vector<ScanRecord> no_est = ideal;
  no_est[3].minimizer_estimate.reset();
  CHECK_THROWS_AS(bracket_maximal_T(no_est, 1e-6), std::invalid_argument);
}

TEST_CASE("scan with minimizer feeds the bracket") {
  ScanOptions so;
  so.with_minimizer = true;
  so.minimize.l_max = 3;
  so.minimize.restarts = 2;
  so.minimize.max_iters = 80;
  const auto records = scan(2, 2, 1.0, 2.5, 7, so);
  for (const ScanRecord& r : records) REQUIRE(r.minimizer_estimate.has_value());
  const Bracket br = bracket_maximal_T(records, 1e-3);
  CHECK(!br.degenerate);
  // no descent is found below the critical parameter, so the bracket sits
  // at or beyond it; beyond t = 2 the certificate guarantees descent
  CHECK(br.t_low >= 2.0 - 0.25 - 1e-9);
  CHECK(br.t_high <= 2.5 + 1e-9);
}
