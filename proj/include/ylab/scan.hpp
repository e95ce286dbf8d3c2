// Decision layer: the eigenvalue obstruction test, the critical parameter,
// t-sweeps with classification and certificates, and the heuristic bracket of
// the largest parameter where no lower quotient was found.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ylab/functional.hpp"
#include "ylab/product.hpp"

namespace ylab {

enum class NecessaryTest { Holds, Equality, Violated };

// Compares λ1 with s/(n-1); equality declared within 1e-10.
NecessaryTest yamabe_necessary_test(const ProductFamily& fam);

// k/(k-1), the parameter where λ1 = s/(n-1) for the sphere-normalized family.
double critical_parameter(int k);

enum class Classification { Einstein, NecessaryHolds, Equality, Violated };
std::string to_string(Classification c);
std::string to_string(NecessaryTest t);

// einstein at t = 1 (within 1e-12), otherwise the necessary-test outcome.
Classification classify_family(const ProductFamily& fam);

struct Certificate {
  std::string direction;  // "x1", the first-sphere linear functional
  double tau = 0.0;
  double reference_energy = 0.0;
  double perturbed_energy = 0.0;
  double energy_drop = 0.0;     // reference - perturbed, > 0
  double predicted_drop = 0.0;  // |expansion coefficient| * tau^2
  double f_mean = 0.0;          // quadrature check of ∮ f dμ = 0
};

// Measured energy drop along u = 1 + tau x1. Requires a family that violates
// the necessary test; drop matches the analytic tau^2 prediction within 20%
// at tau = 0.05.
Certificate destabilizing_direction(const ProductFamily& fam, double tau = 0.05,
                                    int l_max = 4);

struct ScanRecord {
  double t = 0.0;
  double scalar = 0.0;
  double lambda1 = 0.0;
  double threshold = 0.0;  // s/(n-1)
  Classification classification = Classification::NecessaryHolds;
  double eh_energy = 0.0;
  std::optional<double> minimizer_estimate;
  std::optional<Certificate> certificate;
};

struct ScanOptions {
  bool with_minimizer = false;
  bool with_certificates = true;  // attached to violated records
  MinimizeOptions minimize;
};

// Uniformly spaced records over [t_min, t_max]; embarrassingly parallel,
// emitted in t-order.
std::vector<ScanRecord> scan(int k, int l, double t_min, double t_max, int steps,
                             const ScanOptions& opts = {});

struct Bracket {
  double t_low = 0.0;
  double t_high = 0.0;
  bool degenerate = false;  // no prefix at all: every estimate fell below
  bool heuristic = true;    // a failed search is evidence, not proof
};

// Largest contiguous prefix of the t-grid with estimate >= energy - tol.
// Requires minimizer estimates on every record.
Bracket bracket_maximal_T(std::span<const ScanRecord> records, double tol);

}  // namespace ylab
