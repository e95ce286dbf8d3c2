#include "ylab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ylab {

Poly Poly::constant(double c) {
  Poly p;
  p.add_term({0, 0, 0, 0}, c);
  return p;
}

Poly Poly::variable(int i) {
  if (i < 0 || i > 3) throw std::invalid_argument("Poly::variable: index out of range");
  Poly p;
  Expo e{0, 0, 0, 0};
  e[static_cast<std::size_t>(i)] = 1;
  p.add_term(e, 1.0);
  return p;
}

void Poly::add_term(const Expo& e, double coef) {
  if (coef == 0.0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Term& t, const Expo& key) { return t.first < key; });
  if (it != terms_.end() && it->first == e) {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  } else {
    terms_.insert(it, {e, coef});
  }
}

void Poly::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
      if (out.back().second == 0.0) out.pop_back();
    } else if (t.second != 0.0) {
      out.push_back(t);
    }
  }
  terms_ = std::move(out);
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const Term& t : o.terms_) r.add_term(t.first, t.second);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o.scaled(-1.0); }

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  r.terms_.reserve(terms_.size() * o.terms_.size());
  for (const Term& a : terms_) {
    for (const Term& b : o.terms_) {
      Expo e;
      for (int i = 0; i < 4; ++i)
        e[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(a.first[static_cast<std::size_t>(i)] +
                                      b.first[static_cast<std::size_t>(i)]);
      r.terms_.push_back({e, a.second * b.second});
    }
  }
  r.normalize();
  return r;
}

Poly Poly::scaled(double c) const {
  if (c == 0.0) return {};
  Poly r = *this;
  for (Term& t : r.terms_) t.second *= c;
  return r;
}

double Poly::eval(const std::array<double, 4>& x) const {
  double sum = 0.0;
  for (const Term& t : terms_) {
    double m = t.second;
    for (int i = 0; i < 4; ++i) {
      const int e = t.first[static_cast<std::size_t>(i)];
      for (int j = 0; j < e; ++j) m *= x[static_cast<std::size_t>(i)];
    }
    sum += m;
  }
  return sum;
}

Poly Poly::partial(int i) const {
  Poly r;
  const auto idx = static_cast<std::size_t>(i);
  for (const Term& t : terms_) {
    if (t.first[idx] == 0) continue;
    Expo e = t.first;
    e[idx] = static_cast<std::uint8_t>(e[idx] - 1);
    r.add_term(e, t.second * static_cast<double>(t.first[idx]));
  }
  return r;
}

Poly Poly::laplacian(int dim) const {
  Poly r;
  for (int i = 0; i < dim; ++i) r = r + partial(i).partial(i);
  return r;
}

int Poly::degree() const {
  int d = 0;
  for (const Term& t : terms_) {
    int s = t.first[0] + t.first[1] + t.first[2] + t.first[3];
    d = std::max(d, s);
  }
  return d;
}

double Poly::max_abs_coef() const {
  double m = 0.0;
  for (const Term& t : terms_) m = std::max(m, std::abs(t.second));
  return m;
}

double Poly::monomial_sphere_integral(const Expo& e, int dim) {
  // ∫ x^e dσ = 2 Γ(b0)…Γ(b_{dim-1}) / Γ(b0+…+b_{dim-1}), b_i = (e_i+1)/2,
  // provided every exponent is even; otherwise zero by symmetry.
  for (int i = dim; i < 4; ++i)
    if (e[static_cast<std::size_t>(i)] != 0)
      throw std::invalid_argument("monomial_sphere_integral: exponent beyond dimension");
  double log_num = 0.0;
  double bsum = 0.0;
  for (int i = 0; i < dim; ++i) {
    const int ei = e[static_cast<std::size_t>(i)];
    if (ei % 2 != 0) return 0.0;
    const double b = (ei + 1) / 2.0;
    log_num += std::lgamma(b);
    bsum += b;
  }
  return 2.0 * std::exp(log_num - std::lgamma(bsum));
}

double Poly::sphere_integral(int dim) const {
  double sum = 0.0;
  for (const Term& t : terms_) sum += t.second * monomial_sphere_integral(t.first, dim);
  return sum;
}

double sphere_inner(const Poly& a, const Poly& b, int dim) {
  return (a * b).sphere_integral(dim);
}

}  // namespace ylab
