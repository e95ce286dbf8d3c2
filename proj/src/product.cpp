#include "ylab/product.hpp"

#include <cmath>
#include <stdexcept>

#include "ylab/sphere.hpp"

namespace ylab {

EinsteinFactor EinsteinFactor::sphere(int dim, double radius) {
  if (dim < 1) throw std::invalid_argument("EinsteinFactor::sphere: dim must be >= 1");
  if (radius <= 0.0) throw std::invalid_argument("EinsteinFactor::sphere: radius must be > 0");
  EinsteinFactor f;
  f.dim = dim;
  f.kind = Kind::Sphere;
  f.radius = radius;
  f.einstein_constant = (dim - 1) / (radius * radius);
  f.volume = std::pow(radius, dim) * sphere_volume(dim);
  f.lambda1 = dim / (radius * radius);
  return f;
}

EinsteinFactor EinsteinFactor::sphere_with_ricci(int dim, double ricci) {
  if (dim < 2)
    throw std::invalid_argument("EinsteinFactor::sphere_with_ricci: dim must be >= 2");
  if (ricci <= 0.0)
    throw std::invalid_argument("EinsteinFactor::sphere_with_ricci: ricci must be > 0");
  return sphere(dim, std::sqrt((dim - 1) / ricci));
}

EinsteinFactor EinsteinFactor::abstract(int dim, double ricci, double volume, double lambda1) {
  if (dim < 1) throw std::invalid_argument("EinsteinFactor::abstract: dim must be >= 1");
  if (volume <= 0.0 || lambda1 <= 0.0)
    throw std::invalid_argument("EinsteinFactor::abstract: volume and lambda1 must be > 0");
  EinsteinFactor f;
  f.dim = dim;
  f.kind = Kind::Abstract;
  f.einstein_constant = ricci;
  f.volume = volume;
  f.lambda1 = lambda1;
  return f;
}

ProductFamily::ProductFamily(int k_, EinsteinFactor factor_, double t_)
    : k(k_), t(t_), factor(factor_) {
  if (k < 2) throw std::invalid_argument("ProductFamily: k must be >= 2");
  if (n() < 3) throw std::invalid_argument("ProductFamily: total dimension must be >= 3");
  if (!(t >= 1.0)) throw std::invalid_argument("ProductFamily: t must be >= 1");
  if (std::abs(factor.einstein_constant - (k - 1)) > 1e-12)
    throw std::invalid_argument("ProductFamily: factor must have Ricci = k-1");
}

ProductFamily ProductFamily::spheres(int k, int l, double t) {
  return ProductFamily(k, EinsteinFactor::sphere_with_ricci(l, static_cast<double>(k - 1)), t);
}

double scalar_curvature(const ProductFamily& fam) {
  return (fam.k - 1) * (fam.k + fam.t * fam.factor.dim);
}

std::pair<double, double> ricci_block_eigenvalues(const ProductFamily& fam) {
  return {static_cast<double>(fam.k - 1), fam.t * (fam.k - 1)};
}

std::pair<double, double> rho_block_eigenvalues(const ProductFamily& fam) {
  const double thr = scalar_curvature(fam) / (fam.n() - 1);
  auto [a, b] = ricci_block_eigenvalues(fam);
  return {a - thr, b - thr};
}

double volume(const ProductFamily& fam) {
  return sphere_volume(fam.k) * fam.factor.volume * std::pow(fam.t, -fam.factor.dim / 2.0);
}

double product_lambda1(const ProductFamily& fam) {
  return std::min(static_cast<double>(fam.k), fam.t * fam.factor.lambda1);
}

double lichnerowicz_lower_bound(const ProductFamily& fam) {
  return fam.n() * (fam.k - 1.0) / (fam.n() - 1.0);
}

}  // namespace ylab
