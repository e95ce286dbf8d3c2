// Round-sphere geometry: volumes, Laplace spectra, quadrature grids, and
// orthogonal harmonic bases with exact gradient evaluators.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "ylab/polynomial.hpp"

namespace ylab {

// k-volume of the unit sphere S^k, 2 pi^{(k+1)/2} / Gamma((k+1)/2).
double sphere_volume(int k);

// Eigenvalue j(j+k-1) of the positive Laplacian d*d on S^k.
double sphere_eigenvalue(int k, int j);

// Dimension of the degree-j spherical-harmonic space on S^k.
int sphere_multiplicity(int k, int j);

struct QuadratureGrid {
  int dim = 0;               // the k of S^k
  int exactness_degree = 0;  // exact for ambient polynomials up to this total degree
  std::vector<std::array<double, 4>> nodes;  // unit vectors; entries past k+1 are 0
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// Tensor-product grid on S^k, k in {1,2,3}: Gauss nodes along the polar
// cosines (Gauss-Legendre where the reduced weight is flat, Gauss-Gegenbauer
// where the sphere measure leaves a sqrt(1-c^2) factor), uniform azimuth.
// Node order: outermost polar index first, azimuth innermost.
QuadratureGrid gauss_grid(int k, int degree);

// Weighted node sum with deterministic pairwise reduction.
double grid_integral(const QuadratureGrid& grid, const std::vector<double>& node_values);

// Text cache, header `sphgrid v1 k=<k> degree=<d>`, one node per row
// (k+1 coordinates then the weight, 17 significant digits).
void save_grid(const QuadratureGrid& grid, const std::string& path);
QuadratureGrid load_grid(const std::string& path);

struct BasisFunction {
  int degree = 0;
  double eigenvalue = 0.0;  // degree (degree + k - 1)
  double sq_norm = 0.0;     // exact ∫ f^2 dσ on the unit sphere
  Poly poly;                // harmonic ambient polynomial restricting to f
  std::array<Poly, 4> grad;

  double value(const std::array<double, 4>& x) const { return poly.eval(x); }
  // Ambient gradient projected to the tangent space at x.
  std::array<double, 4> tangent_gradient(int dim, const std::array<double, 4>& x) const;
};

struct SpectralEntry {
  double eigenvalue = 0.0;
  int multiplicity = 0;
};

// Eigenfunction list with cached node evaluations. Convention: Δ = d*d is the
// positive Laplacian; eigenvalues are nondecreasing and fns[0] is constant 1.
struct SpectralBasis {
  static constexpr bool positive_laplacian = true;
  int dim = 0;
  int l_max = 0;
  bool zonal_only = false;
  std::vector<BasisFunction> fns;
  std::size_t nnodes = 0;
  std::vector<double> values;                   // [fn * nnodes + node]
  std::vector<std::array<double, 4>> gradients;  // tangential, same layout

  std::vector<SpectralEntry> entries() const;
  double value_at(std::size_t fn, std::size_t node) const { return values[fn * nnodes + node]; }
  const std::array<double, 4>& gradient_at(std::size_t fn, std::size_t node) const {
    return gradients[fn * nnodes + node];
  }
};

// All harmonics of degree <= l_max, Gram-orthogonal under dσ. Requires grid
// exactness >= 2 l_max.
SpectralBasis harmonic_basis(int k, int l_max, const QuadratureGrid& grid);

// Zonal-only subset: one function per degree, normalized to 1 at the pole e1
// (Legendre / Gegenbauer profiles in x1).
SpectralBasis zonal_basis(int k, int l_max, const QuadratureGrid& grid);

// L^2(dσ)-orthogonal basis of the degree-l harmonic polynomials in k+1
// variables (unit norm for degree >= 2; {1} and the raw coordinates below).
std::vector<Poly> harmonic_polynomials(int k, int degree);

// Solid zonal harmonic about e1, value 1 at the pole.
Poly zonal_harmonic(int k, int degree);

}  // namespace ylab
