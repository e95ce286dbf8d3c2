#include "ylab/functional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ylab/util.hpp"

namespace ylab {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kPositivityFloor = 1e-6;
}  // namespace

double eh_energy(const ProductFamily& fam) {
  return scalar_curvature(fam) * std::pow(volume(fam), 2.0 / fam.n());
}

double aubin_constant(int n) {
  if (n < 3) throw std::invalid_argument("aubin_constant: n must be >= 3");
  const double bracket = 2.0 * std::sqrt(kPi) / std::tgamma((n + 1) / 2.0);
  return n * (n - 1.0) * kPi * std::pow(bracket, 2.0 / n);
}

EnergyReport energy_report(const ProductFamily& fam) {
  EnergyReport r;
  r.scalar = scalar_curvature(fam);
  r.volume = volume(fam);
  r.energy = eh_energy(fam);
  r.aubin_bound = aubin_constant(fam.n());
  return r;
}

// ---------------------------------------------------------------------------
// ProductSpace
// ---------------------------------------------------------------------------

ProductSpace ProductSpace::build(const ProductFamily& fam, int l_max, int degree, bool zonal) {
  if (fam.factor.kind != EinsteinFactor::Kind::Sphere)
    throw std::invalid_argument("ProductSpace: grid numerics need a sphere factor");
  if (l_max < 1) throw std::invalid_argument("ProductSpace: l_max must be >= 1");
  const int n = fam.n();
  const double p = 2.0 * n / (n - 2.0);
  if (degree == 0) degree = static_cast<int>(std::ceil(p)) * l_max;
  if (degree < 2 * l_max + 2)
    throw std::invalid_argument("ProductSpace: grid degree below quotient integrand degree");

  ProductSpace S{.fam = fam,
                 .grid1 = gauss_grid(fam.k, degree),
                 .grid2 = gauss_grid(fam.factor.dim, degree)};
  S.p = p;
  S.l_max = l_max;
  S.basis1 = zonal ? zonal_basis(fam.k, l_max, S.grid1) : harmonic_basis(fam.k, l_max, S.grid1);
  S.basis2 = zonal ? zonal_basis(fam.factor.dim, l_max, S.grid2)
                   : harmonic_basis(fam.factor.dim, l_max, S.grid2);

  const double rho2 = fam.factor.radius * fam.factor.radius;
  S.metric_scale = rho2 / fam.t;
  S.weight_scale = std::pow(S.metric_scale, fam.factor.dim / 2.0);
  S.grad_scale = 1.0 / S.metric_scale;
  S.n1 = S.grid1.size();
  S.n2 = S.grid2.size();

  S.weights.resize(S.n1 * S.n2);
  for (std::size_t i = 0; i < S.n1; ++i)
    for (std::size_t j = 0; j < S.n2; ++j)
      S.weights[i * S.n2 + j] = S.grid1.weights[i] * S.grid2.weights[j] * S.weight_scale;
  S.quad_volume = pairwise_sum(S.weights);

  for (std::size_t ia = 0; ia < S.basis1.fns.size(); ++ia) {
    for (std::size_t ib = 0; ib < S.basis2.fns.size(); ++ib) {
      ProductBasisEntry e;
      e.ia = ia;
      e.ib = ib;
      e.degree_a = S.basis1.fns[ia].degree;
      e.degree_b = S.basis2.fns[ib].degree;
      e.eigenvalue = S.basis1.fns[ia].eigenvalue + S.grad_scale * S.basis2.fns[ib].eigenvalue;
      e.sq_norm = S.basis1.fns[ia].sq_norm * S.basis2.fns[ib].sq_norm * S.weight_scale;
      S.basis.push_back(e);
    }
  }
  std::stable_sort(S.basis.begin(), S.basis.end(),
                   [](const ProductBasisEntry& a, const ProductBasisEntry& b) {
                     return a.eigenvalue < b.eigenvalue;
                   });

  S.p_integer = std::abs(p - std::round(p)) < 1e-12;
  S.quadrature_exact = S.p_integer && degree >= static_cast<int>(std::round(p)) * l_max;
  return S;
}

namespace {

// coef -> dense coefficient matrix over (fn1, fn2)
std::vector<double> coef_matrix(const ProductSpace& S, std::span<const double> coef) {
  const std::size_t nf1 = S.basis1.fns.size();
  const std::size_t nf2 = S.basis2.fns.size();
  std::vector<double> C(nf1 * nf2, 0.0);
  for (std::size_t e = 0; e < S.basis.size(); ++e)
    C[S.basis[e].ia * nf2 + S.basis[e].ib] += coef[e];
  return C;
}

// U = V1^T C V2 over the product nodes, via T = C V2.
std::vector<double> expand_values(const ProductSpace& S, const std::vector<double>& C) {
  const std::size_t nf1 = S.basis1.fns.size();
  const std::size_t nf2 = S.basis2.fns.size();
  std::vector<double> T(nf1 * S.n2, 0.0);
  for (std::size_t a = 0; a < nf1; ++a)
    for (std::size_t b = 0; b < nf2; ++b) {
      const double c = C[a * nf2 + b];
      if (c == 0.0) continue;
      const double* v2 = &S.basis2.values[b * S.n2];
      double* trow = &T[a * S.n2];
      for (std::size_t j = 0; j < S.n2; ++j) trow[j] += c * v2[j];
    }
  std::vector<double> U(S.n1 * S.n2, 0.0);
  for (std::size_t a = 0; a < nf1; ++a) {
    const double* v1 = &S.basis1.values[a * S.n1];
    const double* trow = &T[a * S.n2];
    for (std::size_t i = 0; i < S.n1; ++i) {
      const double s = v1[i];
      if (s == 0.0) continue;
      double* urow = &U[i * S.n2];
      for (std::size_t j = 0; j < S.n2; ++j) urow[j] += s * trow[j];
    }
  }
  return U;
}

// Pointwise |∇u|²_{h_t} over the product nodes.
std::vector<double> expand_grad_sq(const ProductSpace& S, const std::vector<double>& C) {
  const std::size_t nf1 = S.basis1.fns.size();
  const std::size_t nf2 = S.basis2.fns.size();
  std::vector<double> out(S.n1 * S.n2, 0.0);

  // sphere-block gradient: Σ_a ∇Y_a(x_i) [Σ_b C_ab Z_b(y_j)]
  std::vector<double> T(nf1 * S.n2, 0.0);
  for (std::size_t a = 0; a < nf1; ++a)
    for (std::size_t b = 0; b < nf2; ++b) {
      const double c = C[a * nf2 + b];
      if (c == 0.0) continue;
      const double* v2 = &S.basis2.values[b * S.n2];
      double* trow = &T[a * S.n2];
      for (std::size_t j = 0; j < S.n2; ++j) trow[j] += c * v2[j];
    }
  for (int comp = 0; comp < S.fam.k + 1; ++comp) {
    for (std::size_t i = 0; i < S.n1; ++i) {
      for (std::size_t j = 0; j < S.n2; ++j) {
        double g = 0.0;
        for (std::size_t a = 0; a < nf1; ++a)
          g += S.basis1.gradients[a * S.n1 + i][static_cast<std::size_t>(comp)] * T[a * S.n2 + j];
        out[i * S.n2 + j] += g * g;
      }
    }
  }

  // factor-block gradient: Σ_b ∇Z_b(y_j) [Σ_a C_ab Y_a(x_i)], scaled by 1/metric_scale
  std::vector<double> T2(nf2 * S.n1, 0.0);
  for (std::size_t a = 0; a < nf1; ++a)
    for (std::size_t b = 0; b < nf2; ++b) {
      const double c = C[a * nf2 + b];
      if (c == 0.0) continue;
      const double* v1 = &S.basis1.values[a * S.n1];
      double* trow = &T2[b * S.n1];
      for (std::size_t i = 0; i < S.n1; ++i) trow[i] += c * v1[i];
    }
  for (int comp = 0; comp < S.fam.factor.dim + 1; ++comp) {
    for (std::size_t j = 0; j < S.n2; ++j) {
      for (std::size_t i = 0; i < S.n1; ++i) {
        double g = 0.0;
        for (std::size_t b = 0; b < nf2; ++b)
          g += S.basis2.gradients[b * S.n2 + j][static_cast<std::size_t>(comp)] * T2[b * S.n1 + i];
        out[i * S.n2 + j] += S.grad_scale * g * g;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<double> ProductSpace::node_values(std::span<const double> coef) const {
  if (coef.size() != basis.size())
    throw std::invalid_argument("ProductSpace::node_values: coefficient size mismatch");
  return expand_values(*this, coef_matrix(*this, coef));
}

double ProductSpace::integrate(const std::vector<double>& node_field) const {
  if (node_field.size() != weights.size())
    throw std::invalid_argument("ProductSpace::integrate: node field size mismatch");
  std::vector<double> terms(node_field.size());
  for (std::size_t i = 0; i < node_field.size(); ++i) terms[i] = weights[i] * node_field[i];
  return pairwise_sum(terms);
}

std::size_t first_sphere_coordinate_index(const ProductSpace& space) {
  for (std::size_t e = 0; e < space.basis.size(); ++e) {
    const ProductBasisEntry& be = space.basis[e];
    if (be.degree_a == 1 && be.degree_b == 0 && be.ia == 1) return e;
  }
  throw std::logic_error("first_sphere_coordinate_index: basis has no degree-1 entry");
}

ConformalFactor make_conformal_factor(const ProductSpace& space, std::span<const double> coef) {
  ConformalFactor u;
  u.coef.assign(coef.begin(), coef.end());
  u.node_values = space.node_values(coef);
  u.p = space.p;
  u.min_node_value = *std::min_element(u.node_values.begin(), u.node_values.end());
  if (!(u.min_node_value > 0.0))
    throw std::invalid_argument("ConformalFactor: nonpositive value at a quadrature node");
  return u;
}

namespace {

double quotient_impl(const ProductSpace& S, const std::vector<double>& coef,
                     const std::vector<double>& uvals) {
  const double s = scalar_curvature(S.fam);
  const auto C = coef_matrix(S, coef);
  const auto grad_sq = expand_grad_sq(S, C);
  std::vector<double> num_field(uvals.size());
  const double pp2 = S.p + 2.0;
  for (std::size_t i = 0; i < uvals.size(); ++i)
    num_field[i] = pp2 * grad_sq[i] + s * uvals[i] * uvals[i];
  const double num = S.integrate(num_field);
  std::vector<double> up(uvals.size());
  for (std::size_t i = 0; i < uvals.size(); ++i) up[i] = std::pow(uvals[i], S.p);
  const double ip = S.integrate(up);
  return num / std::pow(ip, 2.0 / S.p);
}

}  // namespace

double yamabe_quotient(const ConformalFactor& u, const ProductSpace& space) {
  if (!(u.min_node_value > 0.0))
    throw std::invalid_argument("yamabe_quotient: conformal factor must be positive");
  if (u.coef.size() != space.size())
    throw std::invalid_argument("yamabe_quotient: coefficient size mismatch");
  return quotient_impl(space, u.coef, u.node_values);
}

double yamabe_residual(const ConformalFactor& u, double target_scalar,
                       const ProductSpace& space) {
  if (!(u.min_node_value > 0.0))
    throw std::invalid_argument("yamabe_residual: conformal factor must be positive");
  const double s = scalar_curvature(space.fam);
  std::vector<double> lam_coef(u.coef.size());
  for (std::size_t e = 0; e < u.coef.size(); ++e)
    lam_coef[e] = u.coef[e] * space.basis[e].eigenvalue;
  const auto lap = space.node_values(lam_coef);
  double worst = 0.0;
  const double pp2 = space.p + 2.0;
  for (std::size_t i = 0; i < lap.size(); ++i) {
    const double r = pp2 * lap[i] + s * u.node_values[i] -
                     target_scalar * std::pow(u.node_values[i], space.p - 1.0);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double perturbation_energy(const ProductSpace& space, std::size_t fn_index, double tau) {
  if (fn_index >= space.size())
    throw std::invalid_argument("perturbation_energy: basis index out of range");
  std::vector<double> coef(space.size(), 0.0);
  for (std::size_t e = 0; e < space.size(); ++e)
    if (space.basis[e].degree_a == 0 && space.basis[e].degree_b == 0) coef[e] = 1.0;
  coef[fn_index] += tau;
  const auto u = make_conformal_factor(space, coef);  // throws on positivity breach
  return yamabe_quotient(u, space);
}

double expansion_coefficient(const ProductSpace& space, std::size_t fn_index) {
  if (fn_index >= space.size())
    throw std::invalid_argument("expansion_coefficient: basis index out of range");
  const ProductFamily& fam = space.fam;
  const int n = fam.n();
  const double s = scalar_curvature(fam);
  const double V = volume(fam);
  const double lam = space.basis[fn_index].eigenvalue;
  const double mean_f_sq = space.basis[fn_index].sq_norm / V;
  return s * std::pow(V, 2.0 / n) * (-4.0 / (n - 2.0)) * (1.0 - lam * (n - 1.0) / s) *
         mean_f_sq;
}

// ---------------------------------------------------------------------------
// Galerkin minimizer
// ---------------------------------------------------------------------------

namespace {

struct RestartOutcome {
  bool admissible = false;
  double quotient = 0.0;
  std::vector<double> coef;
  std::vector<TraceRow> trace;
};

struct Objective {
  const ProductSpace& S;
  double s;
  double V;
  std::vector<double> A;  // ((p+2) λ_i + s) ‖φ_i‖²

  explicit Objective(const ProductSpace& space)
      : S(space), s(scalar_curvature(space.fam)), V(space.quad_volume) {
    A.resize(S.size());
    for (std::size_t e = 0; e < S.size(); ++e)
      A[e] = ((S.p + 2.0) * S.basis[e].eigenvalue + s) * S.basis[e].sq_norm;
  }

  double ip(const std::vector<double>& uvals) const {
    std::vector<double> up(uvals.size());
    for (std::size_t i = 0; i < uvals.size(); ++i) up[i] = std::pow(uvals[i], S.p);
    return S.integrate(up);
  }

  // Q = N/D via the diagonal Dirichlet form; gradient optional.
  double eval(const std::vector<double>& coef, const std::vector<double>& uvals,
              std::vector<double>* grad) const {
    std::vector<double> nterm(coef.size());
    for (std::size_t e = 0; e < coef.size(); ++e) nterm[e] = coef[e] * coef[e] * A[e];
    const double N = pairwise_sum(nterm);
    const double Ip = ip(uvals);
    const double D = std::pow(Ip, 2.0 / S.p);
    const double Q = N / D;
    if (grad) {
      // dQ/dc_i = [2 c_i A_i − Q · 2 Ip^{2/p−1} J_i · ... ] / D with
      // J_i = ∫ u^{p−1} φ_i dμ; assembled in factored form.
      const std::size_t nf1 = S.basis1.fns.size();
      const std::size_t nf2 = S.basis2.fns.size();
      std::vector<double> R(uvals.size());
      for (std::size_t i = 0; i < uvals.size(); ++i)
        R[i] = S.weights[i] * std::pow(uvals[i], S.p - 1.0);
      // Sij = Σ_j R[i][j] V2_b[j]  -> (n1 x nf2), then J = V1 · S
      std::vector<double> SR(S.n1 * nf2, 0.0);
      for (std::size_t i = 0; i < S.n1; ++i) {
        const double* rrow = &R[i * S.n2];
        for (std::size_t b = 0; b < nf2; ++b) {
          const double* v2 = &S.basis2.values[b * S.n2];
          double acc = 0.0;
          for (std::size_t j = 0; j < S.n2; ++j) acc += rrow[j] * v2[j];
          SR[i * nf2 + b] = acc;
        }
      }
      std::vector<double> J(nf1 * nf2, 0.0);
      for (std::size_t a = 0; a < nf1; ++a) {
        const double* v1 = &S.basis1.values[a * S.n1];
        for (std::size_t i = 0; i < S.n1; ++i) {
          const double w = v1[i];
          if (w == 0.0) continue;
          const double* srow = &SR[i * nf2];
          double* jrow = &J[a * nf2];
          for (std::size_t b = 0; b < nf2; ++b) jrow[b] += w * srow[b];
        }
      }
      grad->assign(coef.size(), 0.0);
      const double dfac = 2.0 * std::pow(Ip, 2.0 / S.p - 1.0);
      for (std::size_t e = 0; e < coef.size(); ++e) {
        const double Je = J[S.basis[e].ia * nf2 + S.basis[e].ib];
        (*grad)[e] = (2.0 * coef[e] * A[e] - Q * dfac * Je) / D;
      }
    }
    return Q;
  }

  // Projective gauge: rescale so that ∫ u^p dμ = V.
  void renormalize(std::vector<double>& coef, std::vector<double>& uvals) const {
    const double Ip = ip(uvals);
    const double c = std::pow(V / Ip, 1.0 / S.p);
    for (double& x : coef) x *= c;
    for (double& x : uvals) x *= c;
  }
};

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

RestartOutcome run_restart(const ProductSpace& S, const Objective& obj, int restart,
                           std::vector<double> coef, const MinimizeOptions& opts) {
  RestartOutcome out;
  std::vector<double> uvals = S.node_values(coef);
  if (!(min_of(uvals) > kPositivityFloor)) return out;  // inadmissible start
  out.admissible = true;
  obj.renormalize(coef, uvals);

  std::vector<double> grad;
  double Q = obj.eval(coef, uvals, &grad);
  out.trace.push_back({restart, 0, Q, 0.0, min_of(uvals)});

  double step = 0.0;
  {
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    step = gmax > 0.0 ? 0.1 / gmax : 1.0;
  }
  int stall = 0;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    double gnorm_sq = 0.0;
    for (double g : grad) gnorm_sq += g * g;
    if (gnorm_sq == 0.0) break;

    bool accepted = false;
    std::vector<double> cand(coef.size());
    std::vector<double> cand_vals;
    double Qc = 0.0;
    for (int bt = 0; bt < 40 && !accepted; ++bt) {
      for (std::size_t e = 0; e < coef.size(); ++e) cand[e] = coef[e] - step * grad[e];
      cand_vals = S.node_values(cand);
      if (min_of(cand_vals) > kPositivityFloor) {
        obj.renormalize(cand, cand_vals);
        Qc = obj.eval(cand, cand_vals, nullptr);
        if (Qc <= Q - 1e-4 * step * gnorm_sq) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const double drop = Q - Qc;
    coef.swap(cand);
    uvals.swap(cand_vals);
    Q = obj.eval(coef, uvals, &grad);
    out.trace.push_back({restart, iter, Q, step, min_of(uvals)});
    step *= 1.5;

    if (drop < opts.tol * std::max(1.0, std::abs(Q))) {
      if (++stall >= 3) break;
    } else {
      stall = 0;
    }
  }
  out.quotient = Q;
  out.coef = std::move(coef);
  return out;
}

std::vector<std::vector<double>> start_schedule(const ProductSpace& S,
                                                const MinimizeOptions& opts) {
  if (!opts.custom_starts.empty()) return opts.custom_starts;
  std::vector<std::vector<double>> starts;
  const std::size_t nb = S.size();
  std::size_t const_idx = 0;
  for (std::size_t e = 0; e < nb; ++e)
    if (S.basis[e].degree_a == 0 && S.basis[e].degree_b == 0) const_idx = e;

  std::vector<double> c(nb, 0.0);
  c[const_idx] = 1.0;
  starts.push_back(c);  // u ≡ 1

  if (opts.restarts >= 2) {
    std::vector<double> c2(nb, 0.0);
    c2[const_idx] = 1.0;
    c2[first_sphere_coordinate_index(S)] = 0.3;  // the known destabilizing direction
    starts.push_back(c2);
  }
  std::uint64_t stream = opts.seed;
  for (int r = 2; r < opts.restarts; ++r) {
    Rng rng(splitmix64(stream));
    std::vector<double> cr(nb, 0.0);
    cr[const_idx] = 1.0;
    for (std::size_t e = 0; e < nb; ++e) {
      if (e == const_idx) continue;
      cr[e] = 0.1 * rng.normal() / (1.0 + S.basis[e].eigenvalue);
    }
    // deterministic positivity repair: halve the perturbation until admissible
    for (int guard = 0; guard < 60; ++guard) {
      const auto vals = S.node_values(cr);
      if (min_of(vals) > kPositivityFloor) break;
      for (std::size_t e = 0; e < nb; ++e)
        if (e != const_idx) cr[e] *= 0.5;
    }
    starts.push_back(cr);
  }
  return starts;
}

}  // namespace

double quotient_value(const ProductSpace& space, std::span<const double> coef) {
  const Objective obj(space);
  std::vector<double> c(coef.begin(), coef.end());
  return obj.eval(c, space.node_values(coef), nullptr);
}

std::vector<double> quotient_gradient(const ProductSpace& space, std::span<const double> coef) {
  const Objective obj(space);
  std::vector<double> c(coef.begin(), coef.end());
  std::vector<double> grad;
  obj.eval(c, space.node_values(coef), &grad);
  return grad;
}

MinimizeResult minimize_quotient(const ProductSpace& space, const MinimizeOptions& opts) {
  if (opts.restarts < 1) throw std::invalid_argument("minimize_quotient: restarts must be >= 1");
  const Objective obj(space);
  const auto starts = start_schedule(space, opts);

  std::vector<RestartOutcome> outcomes(starts.size());
  parallel_for(starts.size(), [&](std::size_t r) {
    outcomes[r] = run_restart(space, obj, static_cast<int>(r), starts[r], opts);
  });

  MinimizeResult res;
  res.basis_size = static_cast<int>(space.size());
  res.quadrature_exact = space.quadrature_exact;
  int best = -1;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const RestartOutcome& oc = outcomes[r];
    if (!oc.admissible) continue;
    for (const TraceRow& row : oc.trace) res.trace.push_back(row);
    if (best < 0 || oc.quotient < outcomes[static_cast<std::size_t>(best)].quotient)
      best = static_cast<int>(r);
  }
  if (best < 0)
    throw std::runtime_error("minimize_quotient: every restart breached positivity");
  res.best_restart = best;
  res.estimate = outcomes[static_cast<std::size_t>(best)].quotient;
  res.minimizer = make_conformal_factor(space, outcomes[static_cast<std::size_t>(best)].coef);
  return res;
}

MinimizeResult minimize_quotient(const ProductFamily& fam, const MinimizeOptions& opts) {
  const ProductSpace space =
      ProductSpace::build(fam, opts.l_max, opts.degree, !opts.full_basis);
  return minimize_quotient(space, opts);
}

}  // namespace ylab
