// Static-potential verification on the explicit product examples: the static
// equation, its trace and Hessian forms, the geodesic ODE, zero-set structure,
// the co-kernel pairing, and the one-dimension-up Einstein identification.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ylab/product.hpp"
#include "ylab/sphere.hpp"

namespace ylab {

struct ProductPoint {
  std::array<double, 4> x{0, 0, 0, 0};  // on S^k
  std::array<double, 4> y{0, 0, 0, 0};  // on the factor sphere (unit coords)
};

struct ProductVector {
  std::array<double, 4> x{0, 0, 0, 0};
  std::array<double, 4> y{0, 0, 0, 0};
};

// Candidate potential f = linear * x1 + constant, pulled back from the sphere
// factor. The genuine static potential is x1 on the critical family
// t = k/(k-1); other (t, shift, const) combinations are diagnostics.
struct StaticCandidate {
  ProductFamily fam;
  QuadratureGrid grid1, grid2;  // unit S^k, unit S^l
  double metric_scale = 1.0;    // factor block of h_t over g_unit(S^l)
  double weight_scale = 1.0;
  double f_linear = 1.0;  // coefficient of x1
  double f_const = 0.0;
  Poly f_poly;            // f_linear * x1 + f_const

  double f_at(const std::array<double, 4>& x) const { return f_poly.eval(x); }
  double critical_t() const { return fam.k / (fam.k - 1.0); }
  bool is_critical() const;
};

// t <= 0 selects the critical parameter k/(k-1).
StaticCandidate make_static_candidate(int k, int l, double t = 0.0, double f_linear = 1.0,
                                      double f_const = 0.0, int grid_degree = 16);

// sup-node operator norm of (Δf) g + ∇∇f − f r, frames and Hessians assembled
// at every node (product quadrature nodes plus the two pole fibers).
double static_residual(const StaticCandidate& cand);

// sup-node |Δf − s/(n−1) f| with Δf exact (Δ x1 = k x1).
double trace_identity(const StaticCandidate& cand);

// sup-node norm of ∇∇f − ρ f.
double hessian_identity(const StaticCandidate& cand);

// Second-difference of f along random product geodesics against the assembled
// Hessian form; returns the worst disagreement.
double hessian_fd_check(const StaticCandidate& cand, int n_geodesics, std::uint64_t seed);

// RK4-integrates f'' = ρ(v,v) f along the (constant-coefficient) geodesic ODE
// and compares with the closed-form solution; returns the max deviation.
// Throws unless |v|_{h_t} = 1.
double geodesic_transport(const StaticCandidate& cand, const ProductPoint& start,
                          const ProductVector& velocity, double T, int steps);

// Quadrature value of ∫|∇f|² dμ / ∫ f² dμ; equals s/(n−1) for the genuine
// candidate.
double rayleigh_quotient(const StaticCandidate& cand);

// ∮ f dμ by quadrature.
double mean_value(const StaticCandidate& cand);

struct ZeroSetReport {
  bool nonempty = false;
  int samples = 0;
  double max_abs_f = 0.0;     // |f| on the sampled zero set
  double grad_min = 0.0;      // |∇f|_{h_t} over the samples
  double grad_max = 0.0;
  double tangent_drift = 0.0;  // max |f∘γ| along an RK4 geodesic tangent to Z
};
ZeroSetReport zero_set_diagnostics(const StaticCandidate& cand, int samples);

struct PairingEntry {
  int degree_a = 0, degree_b = 0;
  std::size_t ia = 0, ib = 0;
  double value = 0.0;  // ∫ f ((n−1)Δφ − sφ) dμ
};
std::vector<PairingEntry> cokernel_pairings(const StaticCandidate& cand, int l_max);
double max_cokernel_pairing(const StaticCandidate& cand, int l_max);

// Compares g + f² dθ² (polar form about the pole, f = cos r) with the metric
// induced by the join embedding of the round S^{k+1}; returns the component
// mismatch at one (r, θ) sample / the max over a sample grid.
double upstairs_identification(int k, double r, double theta);
double upstairs_max_mismatch(int k, int nr, int ntheta);

// Orthonormal tangent frame at x in S^dim.
std::vector<std::array<double, 4>> tangent_frame(int dim, const std::array<double, 4>& x);

// ∇∇(P|_S)(u, v) = Hess P (u, v) − (x·∇P)⟨u, v⟩ for ambient tangent u, v.
double sphere_hessian(const Poly& P, int dim, const std::array<double, 4>& x,
                      const std::array<double, 4>& u, const std::array<double, 4>& v);

struct StaticReport {
  int k = 0, l = 0;
  double t = 0.0;
  double critical_t = 0.0;
  bool is_critical = false;
  double scalar = 0.0;
  double threshold = 0.0;  // s/(n-1)
  double static_residual = 0.0;
  double trace_residual = 0.0;
  double hessian_residual = 0.0;
  double hessian_fd_deviation = 0.0;
  double rayleigh = 0.0;
  double mean_f = 0.0;
  double geodesic_deviation = 0.0;
  ZeroSetReport zero_set;
  double cokernel_max = 0.0;
  int cokernel_l_max = 0;
  double upstairs_mismatch = 0.0;
  double positive_lobe_integral = 0.0;  // ∫_{f>0} f dμ, sign normalization
};
StaticReport static_check(int k, int l, double t = 0.0, int l_max = 4);

}  // namespace ylab
