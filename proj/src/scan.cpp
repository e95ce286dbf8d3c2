#include "ylab/scan.hpp"

#include <cmath>
#include <stdexcept>

#include "ylab/util.hpp"

namespace ylab {

namespace {
constexpr double kEqualityTol = 1e-10;
constexpr double kEinsteinTol = 1e-12;
}  // namespace

NecessaryTest yamabe_necessary_test(const ProductFamily& fam) {
  const double lam = product_lambda1(fam);
  const double thr = scalar_curvature(fam) / (fam.n() - 1);
  if (std::abs(lam - thr) <= kEqualityTol) return NecessaryTest::Equality;
  return lam > thr ? NecessaryTest::Holds : NecessaryTest::Violated;
}

double critical_parameter(int k) {
  if (k < 2) throw std::invalid_argument("critical_parameter: k must be >= 2");
  return k / (k - 1.0);
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Einstein: return "einstein";
    case Classification::NecessaryHolds: return "necessary_holds";
    case Classification::Equality: return "equality";
    case Classification::Violated: return "violated";
  }
  return "unknown";
}

std::string to_string(NecessaryTest t) {
  switch (t) {
    case NecessaryTest::Holds: return "holds";
    case NecessaryTest::Equality: return "equality";
    case NecessaryTest::Violated: return "violated";
  }
  return "unknown";
}

Classification classify_family(const ProductFamily& fam) {
  if (std::abs(fam.t - 1.0) <= kEinsteinTol) return Classification::Einstein;
  switch (yamabe_necessary_test(fam)) {
    case NecessaryTest::Holds: return Classification::NecessaryHolds;
    case NecessaryTest::Equality: return Classification::Equality;
    case NecessaryTest::Violated: return Classification::Violated;
  }
  return Classification::NecessaryHolds;
}

Certificate destabilizing_direction(const ProductFamily& fam, double tau, int l_max) {
  if (yamabe_necessary_test(fam) != NecessaryTest::Violated)
    throw std::invalid_argument(
        "destabilizing_direction: family does not violate the eigenvalue test");
  const ProductSpace space = ProductSpace::build(fam, l_max);
  const std::size_t f_idx = first_sphere_coordinate_index(space);

  Certificate cert;
  cert.direction = "x1";
  cert.reference_energy = eh_energy(fam);
  // Just past the threshold the quadratic descent is tiny and the quartic
  // term can dominate at the requested step; halve tau until the measured
  // drop is genuinely positive.
  for (int halving = 0; halving < 30; ++halving) {
    cert.tau = tau;
    cert.perturbed_energy = perturbation_energy(space, f_idx, tau);
    cert.energy_drop = cert.reference_energy - cert.perturbed_energy;
    cert.predicted_drop = std::abs(expansion_coefficient(space, f_idx)) * tau * tau;
    if (cert.energy_drop > 0.0) break;
    tau *= 0.5;
  }
  if (!(cert.energy_drop > 0.0))
    throw std::runtime_error("destabilizing_direction: no measurable energy drop");

  // mean-zero eigenfunction check, by quadrature
  std::vector<double> coef(space.size(), 0.0);
  coef[f_idx] = 1.0;
  cert.f_mean = space.integrate(space.node_values(coef)) / volume(fam);
  return cert;
}

std::vector<ScanRecord> scan(int k, int l, double t_min, double t_max, int steps,
                             const ScanOptions& opts) {
  if (!(t_min >= 1.0)) throw std::invalid_argument("scan: t_min must be >= 1");
  if (steps < 1) throw std::invalid_argument("scan: steps must be >= 1");
  if (steps > 1 && !(t_min < t_max))
    throw std::invalid_argument("scan: need t_min < t_max");

  std::vector<double> ts(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i)
    ts[static_cast<std::size_t>(i)] =
        steps == 1 ? t_min : t_min + (t_max - t_min) * i / (steps - 1);

  std::vector<ScanRecord> records(ts.size());
  std::uint64_t seed_stream = opts.minimize.seed;
  std::vector<std::uint64_t> seeds(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) seeds[i] = splitmix64(seed_stream);

  parallel_for(ts.size(), [&](std::size_t i) {
    const ProductFamily fam = ProductFamily::spheres(k, l, ts[i]);
    ScanRecord rec;
    rec.t = ts[i];
    rec.scalar = scalar_curvature(fam);
    rec.lambda1 = product_lambda1(fam);
    rec.threshold = rec.scalar / (fam.n() - 1);
    rec.classification = classify_family(fam);
    rec.eh_energy = eh_energy(fam);
    if (opts.with_minimizer) {
      MinimizeOptions mo = opts.minimize;
      mo.seed = seeds[i];
      rec.minimizer_estimate = minimize_quotient(fam, mo).estimate;
    }
    if (opts.with_certificates && rec.classification == Classification::Violated)
      rec.certificate = destabilizing_direction(fam);
    records[i] = std::move(rec);
  });
  return records;
}

Bracket bracket_maximal_T(std::span<const ScanRecord> records, double tol) {
  if (records.empty()) throw std::invalid_argument("bracket_maximal_T: no records");
  for (const ScanRecord& r : records)
    if (!r.minimizer_estimate)
      throw std::invalid_argument("bracket_maximal_T: records lack minimizer estimates");

  Bracket br;
  std::size_t last_ok = records.size();  // one past the prefix
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (*records[i].minimizer_estimate >= records[i].eh_energy - tol) continue;
    last_ok = i;
    break;
  }
  if (last_ok == 0) {
    br.degenerate = true;
    br.t_low = records.front().t;
    br.t_high = records.front().t;
    return br;
  }
  if (last_ok == records.size()) {
    br.t_low = records.back().t;
    br.t_high = records.back().t;
    return br;
  }
  br.t_low = records[last_ok - 1].t;
  br.t_high = records[last_ok].t;
  return br;
}

}  // namespace ylab
