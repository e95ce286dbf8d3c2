// Normalized Einstein-Hilbert energy, the Yamabe quotient of a conformal
// factor, the second-variation expansion, and a spectral Galerkin minimizer
// estimating the conformal Yamabe constant from above.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ylab/product.hpp"
#include "ylab/sphere.hpp"

namespace ylab {

// s V^{2/n} for the constant-scalar-curvature product metric.
double eh_energy(const ProductFamily& fam);

// Energy of the round unit n-sphere, n(n-1) pi [2 sqrt(pi) / Gamma((n+1)/2)]^{2/n};
// a universal upper bound for conformal Yamabe constants.
double aubin_constant(int n);

struct EnergyReport {
  double energy = 0.0;
  double volume = 0.0;
  double scalar = 0.0;
  double aubin_bound = 0.0;
  std::optional<double> yamabe_quotient;
};
EnergyReport energy_report(const ProductFamily& fam);

struct ProductBasisEntry {
  std::size_t ia = 0, ib = 0;  // indices into the per-factor bases
  int degree_a = 0, degree_b = 0;
  double eigenvalue = 0.0;  // w.r.t. h_t
  double sq_norm = 0.0;     // ∫ φ² dμ_{h_t}, exact
};

// Quadrature, per-factor spectral bases, and h_t metric scales for one family.
// Grids live on unit spheres; the metric enters through the three scale
// factors below. Immutable after build; safe to share across threads.
struct ProductSpace {
  ProductFamily fam;
  QuadratureGrid grid1, grid2;
  SpectralBasis basis1, basis2;
  double metric_scale = 1.0;  // h_t factor block = metric_scale * g_unit(S^l)
  double weight_scale = 1.0;  // node weight multiplier, metric_scale^{l/2}
  double grad_scale = 1.0;    // |∇u|² factor-block multiplier, 1/metric_scale
  std::vector<ProductBasisEntry> basis;
  std::size_t n1 = 0, n2 = 0;
  std::vector<double> weights;  // flattened node weights [i*n2 + j]
  double quad_volume = 0.0;
  double p = 0.0;  // 2n/(n-2)
  bool p_integer = false;
  bool quadrature_exact = false;  // integer p and grid degree >= p*l_max
  int l_max = 0;

  // degree == 0 picks ceil(p)*l_max (the u^p integrand); zonal restricts the
  // trial space to functions of the two polar cosines.
  static ProductSpace build(const ProductFamily& fam, int l_max, int degree = 0,
                            bool zonal = true);

  std::vector<double> node_values(std::span<const double> coef) const;
  double integrate(const std::vector<double>& node_field) const;  // ∫ dμ_{h_t}
  std::size_t size() const { return basis.size(); }
};

// Index of the pulled-back first-sphere coordinate x¹ in the product basis.
std::size_t first_sphere_coordinate_index(const ProductSpace& space);

// Positive conformal factor stored as basis coefficients plus node values.
struct ConformalFactor {
  std::vector<double> coef;
  std::vector<double> node_values;
  double p = 0.0;
  double min_node_value = 0.0;
};

// Throws if the expansion is not strictly positive at every node.
ConformalFactor make_conformal_factor(const ProductSpace& space, std::span<const double> coef);

// ∫ [(p+2)|∇u|² + s u²] dμ / (∫ u^p dμ)^{2/p}, all by quadrature.
double yamabe_quotient(const ConformalFactor& u, const ProductSpace& space);

// max over nodes of |(p+2)Δu + s u − s̃ u^{p-1}|, Δu evaluated spectrally.
double yamabe_residual(const ConformalFactor& u, double target_scalar,
                       const ProductSpace& space);

// Quotient of u = 1 + tau * f for a basis eigenfunction f.
double perturbation_energy(const ProductSpace& space, std::size_t fn_index, double tau);

// Analytic tau² coefficient of perturbation_energy:
// s V^{2/n} · (−4/(n−2)) · (1 − λ_f (n−1)/s) · ∮ f² dμ.
double expansion_coefficient(const ProductSpace& space, std::size_t fn_index);

// The optimizer's analytic route: quotient and its coefficient gradient via
// the diagonal Dirichlet form. Coefficients need not satisfy positivity at
// every node here; the finite-difference cross-check against yamabe_quotient
// is a module invariant.
double quotient_value(const ProductSpace& space, std::span<const double> coef);
std::vector<double> quotient_gradient(const ProductSpace& space, std::span<const double> coef);

struct TraceRow {
  int restart = 0;
  int iter = 0;
  double quotient = 0.0;
  double step = 0.0;
  double min_u = 0.0;
};

struct MinimizeOptions {
  int l_max = 6;
  int degree = 0;  // 0 -> ProductSpace default
  int restarts = 8;
  std::uint64_t seed = 42;
  double tol = 1e-6;
  int max_iters = 300;
  bool full_basis = false;
  // Test hook: explicit start coefficients replacing the built-in schedule.
  std::vector<std::vector<double>> custom_starts;
};

struct MinimizeResult {
  double estimate = 0.0;
  ConformalFactor minimizer;
  int best_restart = 0;
  int basis_size = 0;
  bool quadrature_exact = false;
  std::vector<TraceRow> trace;
};

// Projected gradient descent with backtracking over the Galerkin trial space;
// multi-start, deterministic for a fixed seed. The estimate is an upper bound
// of the conformal Yamabe constant, never a certified infimum. Throws if
// every restart's initial point violates positivity.
MinimizeResult minimize_quotient(const ProductSpace& space, const MinimizeOptions& opts);
MinimizeResult minimize_quotient(const ProductFamily& fam, const MinimizeOptions& opts);

}  // namespace ylab
