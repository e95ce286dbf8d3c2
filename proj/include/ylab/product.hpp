// The squeezed product family h_t = g_unit ⊕ t^{-1} h on S^k × X^l and its
// closed-form curvature and spectral quantities.
#pragma once

#include <utility>

namespace ylab {

struct EinsteinFactor {
  enum class Kind { Sphere, Abstract };

  int dim = 0;                    // l
  double einstein_constant = 0.0;  // Ricci = einstein_constant * metric
  double volume = 0.0;
  double lambda1 = 0.0;  // first positive Laplace eigenvalue of (X, h)
  Kind kind = Kind::Abstract;
  double radius = 0.0;  // Sphere only

  // Round S^l of the given radius: Ricci (l-1)/rho^2, lambda1 = l/rho^2.
  static EinsteinFactor sphere(int dim, double radius);
  // Round sphere with the radius solved from Ricci = ricci (needs dim >= 2).
  static EinsteinFactor sphere_with_ricci(int dim, double ricci);
  static EinsteinFactor abstract(int dim, double ricci, double volume, double lambda1);
};

struct ProductFamily {
  int k = 0;
  double t = 1.0;
  EinsteinFactor factor;

  // Validates n >= 3, t >= 1, and the normalization Ricci(factor) = k-1.
  ProductFamily(int k, EinsteinFactor factor, double t);

  int n() const { return k + factor.dim; }

  // Sphere factor normalized to Ricci = k-1.
  static ProductFamily spheres(int k, int l, double t);
};

// (k-1)(k + t l).
double scalar_curvature(const ProductFamily& fam);

// Ricci eigenvalues measured against h_t: (k-1) on the sphere block,
// t(k-1) on the factor block.
std::pair<double, double> ricci_block_eigenvalues(const ProductFamily& fam);

// Ricci blocks minus s/(n-1); equals (-1, 0) exactly at t = k/(k-1).
std::pair<double, double> rho_block_eigenvalues(const ProductFamily& fam);

// Vol(S^k) * factor.volume * t^{-l/2}.
double volume(const ProductFamily& fam);

// min(k, t * factor.lambda1), the bottom of the nonzero product spectrum.
double product_lambda1(const ProductFamily& fam);

// n (k-1) / (n-1), the textbook bound from Ric >= (k-1) g.
double lichnerowicz_lower_bound(const ProductFamily& fam);

}  // namespace ylab
