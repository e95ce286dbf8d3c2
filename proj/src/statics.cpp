#include "ylab/statics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ylab/util.hpp"

namespace ylab {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

double dot(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

std::array<double, 4> axpy(double a, const std::array<double, 4>& x,
                           const std::array<double, 4>& y) {
  return {a * x[0] + y[0], a * x[1] + y[1], a * x[2] + y[2], a * x[3] + y[3]};
}

}  // namespace

bool StaticCandidate::is_critical() const { return std::abs(fam.t - critical_t()) < 1e-12; }

StaticCandidate make_static_candidate(int k, int l, double t, double f_linear, double f_const,
                                      int grid_degree) {
  const double tc = k / (k - 1.0);
  const double tt = t <= 0.0 ? tc : t;
  ProductFamily fam = ProductFamily::spheres(k, l, tt);
  StaticCandidate cand{.fam = fam,
                       .grid1 = gauss_grid(k, grid_degree),
                       .grid2 = gauss_grid(l, grid_degree),
                       .f_linear = f_linear,
                       .f_const = f_const};
  const double rho2 = fam.factor.radius * fam.factor.radius;
  cand.metric_scale = rho2 / fam.t;
  cand.weight_scale = std::pow(cand.metric_scale, l / 2.0);
  cand.f_poly = Poly::variable(0).scaled(f_linear) + Poly::constant(f_const);
  return cand;
}

std::vector<std::array<double, 4>> tangent_frame(int dim, const std::array<double, 4>& x) {
  std::vector<std::array<double, 4>> frame;
  for (int j = 0; j <= dim && static_cast<int>(frame.size()) < dim; ++j) {
    std::array<double, 4> w{0, 0, 0, 0};
    w[static_cast<std::size_t>(j)] = 1.0;
    w = axpy(-dot(w, x), x, w);
    for (const auto& e : frame) w = axpy(-dot(w, e), e, w);
    const double nrm = std::sqrt(dot(w, w));
    if (nrm < 1e-6) continue;
    for (double& c : w) c /= nrm;
    frame.push_back(w);
  }
  if (static_cast<int>(frame.size()) != dim)
    throw std::logic_error("tangent_frame: failed to complete a frame");
  return frame;
}

double sphere_hessian(const Poly& P, int dim, const std::array<double, 4>& x,
                      const std::array<double, 4>& u, const std::array<double, 4>& v) {
  double hess = 0.0;
  double radial = 0.0;
  for (int i = 0; i <= dim; ++i) {
    const Poly pi = P.partial(i);
    radial += pi.eval(x) * x[static_cast<std::size_t>(i)];
    for (int j = 0; j <= dim; ++j) {
      const double pij = pi.partial(j).eval(x);
      if (pij != 0.0)
        hess += pij * u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    }
  }
  return hess - radial * dot(u, v);
}

namespace {

// Sphere-1 sample set: quadrature nodes plus the two poles along x1 (so the
// sup-norms see max |f| = 1 exactly).
std::vector<std::array<double, 4>> sphere_samples(const StaticCandidate& cand) {
  std::vector<std::array<double, 4>> pts = cand.grid1.nodes;
  pts.push_back({1.0, 0.0, 0.0, 0.0});
  pts.push_back({-1.0, 0.0, 0.0, 0.0});
  return pts;
}

}  // namespace

double static_residual(const StaticCandidate& cand) {
  const int k = cand.fam.k;
  const int l = cand.fam.factor.dim;
  const auto [ric_a, ric_b] = ricci_block_eigenvalues(cand.fam);
  double worst = 0.0;
  for (const auto& x : sphere_samples(cand)) {
    const double f = cand.f_at(x);
    const auto frame = tangent_frame(k, x);
    // sphere-block Hessian in the frame
    std::vector<double> H(static_cast<std::size_t>(k) * k);
    double trace = 0.0;
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        const double h = sphere_hessian(cand.f_poly, k, x, frame[static_cast<std::size_t>(i)],
                                        frame[static_cast<std::size_t>(j)]);
        H[static_cast<std::size_t>(i * k + j)] = h;
        H[static_cast<std::size_t>(j * k + i)] = h;
      }
      trace += H[static_cast<std::size_t>(i * k + i)];
    }
    const double lap = -trace;  // positive Laplacian; factor block adds nothing
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const double g_ij = (i == j) ? 1.0 : 0.0;
        const double T = lap * g_ij + H[static_cast<std::size_t>(i * k + j)] - f * ric_a * g_ij;
        worst = std::max(worst, std::abs(T));
      }
    // factor block: Hessian vanishes, metric diagonal; l equal entries
    for (int j = 0; j < l; ++j) worst = std::max(worst, std::abs(lap - f * ric_b));
  }
  return worst;
}

double trace_identity(const StaticCandidate& cand) {
  const double thr = scalar_curvature(cand.fam) / (cand.fam.n() - 1);
  double worst = 0.0;
  for (const auto& x : sphere_samples(cand)) {
    const double lap = cand.fam.k * cand.f_linear * x[0];  // Δ(x1) = k x1, Δ(const) = 0
    worst = std::max(worst, std::abs(lap - thr * cand.f_at(x)));
  }
  return worst;
}

double hessian_identity(const StaticCandidate& cand) {
  const int k = cand.fam.k;
  const int l = cand.fam.factor.dim;
  const auto [rho_a, rho_b] = rho_block_eigenvalues(cand.fam);
  double worst = 0.0;
  for (const auto& x : sphere_samples(cand)) {
    const double f = cand.f_at(x);
    const auto frame = tangent_frame(k, x);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        const double h = sphere_hessian(cand.f_poly, k, x, frame[static_cast<std::size_t>(i)],
                                        frame[static_cast<std::size_t>(j)]);
        const double g_ij = (i == j) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(h - rho_a * f * g_ij));
      }
    for (int j = 0; j < l; ++j) worst = std::max(worst, std::abs(0.0 - rho_b * f));
  }
  return worst;
}

double hessian_fd_check(const StaticCandidate& cand, int n_geodesics, std::uint64_t seed) {
  const int k = cand.fam.k;
  Rng rng(seed);
  double worst = 0.0;
  const double eps = 1e-4;
  for (int g = 0; g < n_geodesics; ++g) {
    std::array<double, 4> x{0, 0, 0, 0}, vx{0, 0, 0, 0};
    for (int i = 0; i <= k; ++i) x[static_cast<std::size_t>(i)] = rng.normal();
    double nx = std::sqrt(dot(x, x));
    for (double& c : x) c /= nx;
    for (int i = 0; i <= k; ++i) vx[static_cast<std::size_t>(i)] = rng.normal();
    vx = axpy(-dot(vx, x), x, vx);
    // mixed-direction product geodesic; the factor leg leaves f unchanged,
    // so only the sphere angular speed matters for f∘γ.
    const double w1 = std::sqrt(dot(vx, vx));
    if (w1 < 1e-8) continue;
    // exact great circle: γ(τ) = cos(w1 τ) x + sin(w1 τ) vx/w1
    auto f_along = [&](double tau) {
      std::array<double, 4> p = axpy(std::sin(w1 * tau) / w1, vx,
                                     {std::cos(w1 * tau) * x[0], std::cos(w1 * tau) * x[1],
                                      std::cos(w1 * tau) * x[2], std::cos(w1 * tau) * x[3]});
      return cand.f_at(p);
    };
    const double fd = (f_along(eps) - 2.0 * f_along(0.0) + f_along(-eps)) / (eps * eps);
    const double hvv = sphere_hessian(cand.f_poly, k, x, vx, vx);  // factor block adds 0
    worst = std::max(worst, std::abs(fd - hvv));
  }
  return worst;
}

double geodesic_transport(const StaticCandidate& cand, const ProductPoint& start,
                          const ProductVector& velocity, double T, int steps) {
  if (steps < 1) throw std::invalid_argument("geodesic_transport: steps must be >= 1");
  const double sp_sq = dot(velocity.x, velocity.x);
  const double fa_sq = dot(velocity.y, velocity.y);
  const double speed_sq = sp_sq + cand.metric_scale * fa_sq;
  if (std::abs(speed_sq - 1.0) > 1e-9)
    throw std::invalid_argument("geodesic_transport: velocity must be unit-speed in h_t");

  const auto [rho_a, rho_b] = rho_block_eigenvalues(cand.fam);
  const double rho_vv = rho_a * sp_sq + rho_b * cand.metric_scale * fa_sq;

  double f = cand.f_at(start.x);
  double fp = cand.f_linear * velocity.x[0];
  const double f0 = f, fp0 = fp;

  auto exact = [&](double tau) {
    if (rho_vv < -1e-14) {
      const double c = std::sqrt(-rho_vv);
      return f0 * std::cos(c * tau) + fp0 / c * std::sin(c * tau);
    }
    if (rho_vv > 1e-14) {
      const double c = std::sqrt(rho_vv);
      return f0 * std::cosh(c * tau) + fp0 / c * std::sinh(c * tau);
    }
    return f0 + fp0 * tau;
  };

  const double h = T / steps;
  double worst = 0.0;
  double tau = 0.0;
  for (int sstep = 0; sstep < steps; ++sstep) {
    // classical RK4 on (f, f')' = (f', rho_vv f)
    const double k1f = fp, k1p = rho_vv * f;
    const double k2f = fp + 0.5 * h * k1p, k2p = rho_vv * (f + 0.5 * h * k1f);
    const double k3f = fp + 0.5 * h * k2p, k3p = rho_vv * (f + 0.5 * h * k2f);
    const double k4f = fp + h * k3p, k4p = rho_vv * (f + h * k3f);
    f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
    fp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    tau += h;
    worst = std::max(worst, std::abs(f - exact(tau)));
  }
  return worst;
}

namespace {

// Factored product integral of a function of the sphere-1 point:
// ∫_M F dμ = (Σ_i w1_i F(x_i)) · Vol(S^l) · weight_scale.
double factored_integral(const StaticCandidate& cand,
                         const std::vector<double>& sphere_values) {
  std::vector<double> terms(sphere_values.size());
  for (std::size_t i = 0; i < sphere_values.size(); ++i)
    terms[i] = cand.grid1.weights[i] * sphere_values[i];
  return pairwise_sum(terms) * sphere_volume(cand.fam.factor.dim) * cand.weight_scale;
}

}  // namespace

double rayleigh_quotient(const StaticCandidate& cand) {
  const int k = cand.fam.k;
  std::vector<double> grad_sq(cand.grid1.size()), f_sq(cand.grid1.size());
  std::array<Poly, 4> parts;
  for (int i = 0; i <= k; ++i) parts[static_cast<std::size_t>(i)] = cand.f_poly.partial(i);
  for (std::size_t ni = 0; ni < cand.grid1.size(); ++ni) {
    const auto& x = cand.grid1.nodes[ni];
    std::array<double, 4> g{0, 0, 0, 0};
    for (int i = 0; i <= k; ++i) g[static_cast<std::size_t>(i)] = parts[static_cast<std::size_t>(i)].eval(x);
    g = axpy(-dot(g, x), x, g);
    grad_sq[ni] = dot(g, g);  // factor gradient vanishes
    const double f = cand.f_at(x);
    f_sq[ni] = f * f;
  }
  return factored_integral(cand, grad_sq) / factored_integral(cand, f_sq);
}

double mean_value(const StaticCandidate& cand) {
  std::vector<double> f(cand.grid1.size());
  for (std::size_t i = 0; i < cand.grid1.size(); ++i) f[i] = cand.f_at(cand.grid1.nodes[i]);
  return factored_integral(cand, f) / volume(cand.fam);
}

ZeroSetReport zero_set_diagnostics(const StaticCandidate& cand, int samples) {
  if (samples < 1) throw std::invalid_argument("zero_set_diagnostics: samples must be >= 1");
  const int k = cand.fam.k;
  ZeroSetReport rep;
  rep.samples = samples;
  // Z = {f = 0} is the latitude x1 = -f_const/f_linear crossed with the factor.
  const double c0 = -cand.f_const / cand.f_linear;
  if (std::abs(c0) >= 1.0) return rep;  // empty in this chart
  rep.nonempty = true;
  const double r = std::sqrt(1.0 - c0 * c0);

  rep.grad_min = 1e300;
  Rng rng(7);
  for (int s = 0; s < samples; ++s) {
    std::array<double, 4> x{c0, 0, 0, 0};
    std::array<double, 4> dir{0, 0, 0, 0};
    double nrm = 0.0;
    while (nrm < 1e-8) {
      for (int i = 1; i <= k; ++i) dir[static_cast<std::size_t>(i)] = rng.normal();
      nrm = std::sqrt(dot(dir, dir));
    }
    for (int i = 1; i <= k; ++i) x[static_cast<std::size_t>(i)] = r * dir[static_cast<std::size_t>(i)] / nrm;
    rep.max_abs_f = std::max(rep.max_abs_f, std::abs(cand.f_at(x)));
    // |∇f|_{h_t}: the factor block contributes nothing
    std::array<double, 4> g{0, 0, 0, 0};
    g[0] = cand.f_linear;
    g = axpy(-dot(g, x), x, g);
    const double gn = std::sqrt(dot(g, g));
    rep.grad_min = std::min(rep.grad_min, gn);
    rep.grad_max = std::max(rep.grad_max, gn);
  }

  // Geodesic with initial data tangent to Z: confined to Z, so f∘γ stays 0.
  // Integrate the ambient great-circle ODE γ'' = -|γ'|² γ on each factor.
  {
    std::array<double, 4> x{c0, r, 0, 0};
    std::array<double, 4> vx{0, 0, 0, 0};
    vx[2] = 1.0;  // tangent to the latitude: orthogonal to x and e1
    std::array<double, 4> y{1, 0, 0, 0};
    std::array<double, 4> vy{0, 0, 0, 0};
    // split speed between the two factors so the product structure is exercised
    const double sphere_speed_sq = 0.5;
    const double fa_speed_sq = (1.0 - sphere_speed_sq) / cand.metric_scale;
    for (double& c : vx) c *= std::sqrt(sphere_speed_sq);
    vy[1] = std::sqrt(fa_speed_sq);

    const int steps = 1000;
    const double h = 2.0 * kPi / steps;
    auto step_pair = [&](std::array<double, 4>& q, std::array<double, 4>& v) {
      // RK4 for q'' = -|q'|^2 q
      auto acc = [](const std::array<double, 4>& qq, const std::array<double, 4>& vv) {
        const double s2 = vv[0] * vv[0] + vv[1] * vv[1] + vv[2] * vv[2] + vv[3] * vv[3];
        return std::array<double, 4>{-s2 * qq[0], -s2 * qq[1], -s2 * qq[2], -s2 * qq[3]};
      };
      const auto a1 = acc(q, v);
      const auto q2 = axpy(0.5 * h, v, q);
      const auto v2 = axpy(0.5 * h, a1, v);
      const auto a2 = acc(q2, v2);
      const auto q3 = axpy(0.5 * h, v2, q);
      const auto v3 = axpy(0.5 * h, a2, v);
      const auto a3 = acc(q3, v3);
      const auto q4 = axpy(h, v3, q);
      const auto v4 = axpy(h, a3, v);
      const auto a4 = acc(q4, v4);
      for (int i = 0; i < 4; ++i) {
        q[static_cast<std::size_t>(i)] += h / 6.0 *
            (v[static_cast<std::size_t>(i)] + 2 * v2[static_cast<std::size_t>(i)] +
             2 * v3[static_cast<std::size_t>(i)] + v4[static_cast<std::size_t>(i)]);
        v[static_cast<std::size_t>(i)] += h / 6.0 *
            (a1[static_cast<std::size_t>(i)] + 2 * a2[static_cast<std::size_t>(i)] +
             2 * a3[static_cast<std::size_t>(i)] + a4[static_cast<std::size_t>(i)]);
      }
    };
    for (int s = 0; s < steps; ++s) {
      step_pair(x, vx);
      step_pair(y, vy);
      rep.tangent_drift = std::max(rep.tangent_drift, std::abs(cand.f_at(x)));
    }
  }
  return rep;
}

std::vector<PairingEntry> cokernel_pairings(const StaticCandidate& cand, int l_max) {
  const int k = cand.fam.k;
  const int l = cand.fam.factor.dim;
  const double s = scalar_curvature(cand.fam);
  const int n = cand.fam.n();
  const double grad_scale = 1.0 / cand.metric_scale;

  const SpectralBasis b1 = harmonic_basis(k, l_max, cand.grid1);
  const SpectralBasis b2 = harmonic_basis(l, l_max, cand.grid2);

  // per-factor quadratures of f·Y_a and Z_b
  std::vector<double> I1(b1.fns.size()), I2(b2.fns.size());
  for (std::size_t a = 0; a < b1.fns.size(); ++a) {
    std::vector<double> vals(cand.grid1.size());
    for (std::size_t i = 0; i < cand.grid1.size(); ++i)
      vals[i] = cand.f_at(cand.grid1.nodes[i]) * b1.value_at(a, i);
    I1[a] = grid_integral(cand.grid1, vals);
  }
  for (std::size_t b = 0; b < b2.fns.size(); ++b) {
    std::vector<double> vals(cand.grid2.size());
    for (std::size_t j = 0; j < cand.grid2.size(); ++j) vals[j] = b2.value_at(b, j);
    I2[b] = grid_integral(cand.grid2, vals);
  }

  std::vector<PairingEntry> out;
  out.reserve(b1.fns.size() * b2.fns.size());
  for (std::size_t a = 0; a < b1.fns.size(); ++a) {
    for (std::size_t b = 0; b < b2.fns.size(); ++b) {
      const double lam = b1.fns[a].eigenvalue + grad_scale * b2.fns[b].eigenvalue;
      PairingEntry e;
      e.degree_a = b1.fns[a].degree;
      e.degree_b = b2.fns[b].degree;
      e.ia = a;
      e.ib = b;
      e.value = ((n - 1) * lam - s) * I1[a] * I2[b] * cand.weight_scale;
      out.push_back(e);
    }
  }
  return out;
}

double max_cokernel_pairing(const StaticCandidate& cand, int l_max) {
  double worst = 0.0;
  for (const PairingEntry& e : cokernel_pairings(cand, l_max))
    worst = std::max(worst, std::abs(e.value));
  return worst;
}

// ---------------------------------------------------------------------------
// Upstairs identification
// ---------------------------------------------------------------------------

namespace {

// Metric components (order: r, θ, then S^{k-1} frame directions) of the join
// embedding of S^{k+1}: point = (cos r cosθ, cos r sinθ, sin r ω).
// Returns the full symmetric matrix, assembled from exact tangent vectors.
std::vector<double> upstairs_components(int k, double r, double theta,
                                        const std::array<double, 4>& omega,
                                        const std::vector<std::array<double, 4>>& omega_frame) {
  const int dim = k + 1;  // coordinate count
  const double cr = std::cos(r), sr = std::sin(r);
  const double ct = std::cos(theta), st = std::sin(theta);
  // ambient R^{k+2}: components [cosr cosθ, cosr sinθ, sr*ω_0..ω_{k-1}]
  std::vector<std::vector<double>> tang;
  {
    std::vector<double> dr(static_cast<std::size_t>(k) + 2, 0.0);
    dr[0] = -sr * ct;
    dr[1] = -sr * st;
    for (int i = 0; i < k; ++i) dr[static_cast<std::size_t>(i) + 2] = cr * omega[static_cast<std::size_t>(i)];
    tang.push_back(dr);
    std::vector<double> dt(static_cast<std::size_t>(k) + 2, 0.0);
    dt[0] = -cr * st;
    dt[1] = cr * ct;
    tang.push_back(dt);
    for (const auto& e : omega_frame) {
      std::vector<double> dw(static_cast<std::size_t>(k) + 2, 0.0);
      for (int i = 0; i < k; ++i) dw[static_cast<std::size_t>(i) + 2] = sr * e[static_cast<std::size_t>(i)];
      tang.push_back(dw);
    }
  }
  std::vector<double> gmat(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      double acc = 0.0;
      for (std::size_t c = 0; c < tang[static_cast<std::size_t>(a)].size(); ++c)
        acc += tang[static_cast<std::size_t>(a)][c] * tang[static_cast<std::size_t>(b)][c];
      gmat[static_cast<std::size_t>(a * dim + b)] = acc;
    }
  return gmat;
}

}  // namespace

double upstairs_identification(int k, double r, double theta) {
  if (k < 2) throw std::invalid_argument("upstairs_identification: k must be >= 2");
  const int dim = k + 1;
  // a fixed S^{k-1} sample with frame; by symmetry any choice is equivalent
  std::array<double, 4> omega{0, 0, 0, 0};
  omega[0] = std::sqrt(0.5);
  omega[1] = -std::sqrt(0.5);
  if (k == 2) omega = {std::sqrt(0.5), std::sqrt(0.5), 0, 0};
  double nrm = std::sqrt(dot(omega, omega));
  for (double& c : omega) c /= nrm;
  const auto frame = tangent_frame(k - 1, omega);

  const auto up = upstairs_components(k, r, theta, omega, frame);
  // downstairs: g_{S^k} in polar form about the pole plus f² dθ², f = cos r
  const double f = std::cos(r);
  double worst = 0.0;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      double want = 0.0;
      if (a == b) {
        if (a == 0)
          want = 1.0;  // dr²
        else if (a == 1)
          want = f * f;  // f² dθ²
        else
          want = std::sin(r) * std::sin(r);  // sin²r g_{S^{k-1}}
      }
      worst = std::max(worst, std::abs(up[static_cast<std::size_t>(a * dim + b)] - want));
    }
  return worst;
}

double upstairs_max_mismatch(int k, int nr, int ntheta) {
  double worst = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 1) * (kPi / 2.0) / nr;  // (0, π/2]
    for (int j = 0; j < ntheta; ++j) {
      const double theta = 2.0 * kPi * j / ntheta;
      worst = std::max(worst, upstairs_identification(k, r, theta));
    }
  }
  return worst;
}

StaticReport static_check(int k, int l, double t, int l_max) {
  const StaticCandidate cand = make_static_candidate(k, l, t);
  StaticReport rep;
  rep.k = k;
  rep.l = l;
  rep.t = cand.fam.t;
  rep.critical_t = cand.critical_t();
  rep.is_critical = cand.is_critical();
  rep.scalar = scalar_curvature(cand.fam);
  rep.threshold = rep.scalar / (cand.fam.n() - 1);
  rep.static_residual = static_residual(cand);
  rep.trace_residual = trace_identity(cand);
  rep.hessian_residual = hessian_identity(cand);
  rep.hessian_fd_deviation = hessian_fd_check(cand, 20, 2024);
  rep.rayleigh = rayleigh_quotient(cand);
  rep.mean_f = mean_value(cand);
  {
    ProductPoint p;
    p.x = {1, 0, 0, 0};
    ProductVector v;
    v.x = {0, 1, 0, 0};  // pure sphere direction, unit speed
    rep.geodesic_deviation = geodesic_transport(cand, p, v, 2.0 * kPi, 1000);
  }
  rep.zero_set = zero_set_diagnostics(cand, 100);
  rep.cokernel_l_max = l_max;
  rep.cokernel_max = max_cokernel_pairing(cand, l_max);
  rep.upstairs_mismatch = upstairs_max_mismatch(k, 10, 10);
  {
    // ∫_{f>0} f dμ > 0 pins the sign convention
    std::vector<double> pos(cand.grid1.size());
    for (std::size_t i = 0; i < cand.grid1.size(); ++i) {
      const double f = cand.f_at(cand.grid1.nodes[i]);
      pos[i] = f > 0.0 ? f : 0.0;
    }
    std::vector<double> terms(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) terms[i] = cand.grid1.weights[i] * pos[i];
    rep.positive_lobe_integral =
        pairwise_sum(terms) * sphere_volume(l) * cand.weight_scale;
  }
  return rep;
}

}  // namespace ylab
