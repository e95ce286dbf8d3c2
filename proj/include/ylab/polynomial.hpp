// Sparse polynomials in up to four ambient variables, with exact integrals
// over the unit sphere. These back every harmonic-basis evaluator.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ylab {

class Poly {
 public:
  using Expo = std::array<std::uint8_t, 4>;
  using Term = std::pair<Expo, double>;

  Poly() = default;
  static Poly constant(double c);
  static Poly variable(int i);  // x_i, 0-based

  void add_term(const Expo& e, double coef);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(double c) const;

  double eval(const std::array<double, 4>& x) const;
  Poly partial(int i) const;
  Poly laplacian(int dim) const;

  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  double max_abs_coef() const;
  const std::vector<Term>& terms() const { return terms_; }

  // Exact value of ∫_{S^{dim-1}} p dσ (Gamma-function closed form; zero for
  // monomials with any odd exponent among the first `dim` variables).
  double sphere_integral(int dim) const;
  static double monomial_sphere_integral(const Expo& e, int dim);

 private:
  std::vector<Term> terms_;  // sorted by exponent tuple, no zero coefficients
  void normalize();
};

// ∫_{S^{dim-1}} a·b dσ, exact.
double sphere_inner(const Poly& a, const Poly& b, int dim);

}  // namespace ylab
