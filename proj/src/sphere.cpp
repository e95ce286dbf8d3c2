#include "ylab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ylab/util.hpp"

namespace ylab {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

double sphere_volume(int k) {
  if (k < 1) throw std::invalid_argument("sphere_volume: k must be >= 1");
  return 2.0 * std::pow(kPi, (k + 1) / 2.0) / std::tgamma((k + 1) / 2.0);
}

double sphere_eigenvalue(int k, int j) {
  if (k < 1) throw std::invalid_argument("sphere_eigenvalue: k must be >= 1");
  if (j < 0) throw std::invalid_argument("sphere_eigenvalue: j must be >= 0");
  return static_cast<double>(j) * (j + k - 1);
}

namespace {
long long binom(int n, int r) {
  if (r < 0 || r > n) return 0;
  long long num = 1;
  for (int i = 0; i < r; ++i) num = num * (n - i) / (i + 1);
  return num;
}
}  // namespace

int sphere_multiplicity(int k, int j) {
  if (k < 1) throw std::invalid_argument("sphere_multiplicity: k must be >= 1");
  if (j < 0) throw std::invalid_argument("sphere_multiplicity: j must be >= 0");
  // dim of degree-j homogeneous polys minus those divisible by |x|^2
  return static_cast<int>(binom(j + k, k) - binom(j - 2 + k, k));
}

// ---------------------------------------------------------------------------
// 1D Gauss rules
// ---------------------------------------------------------------------------

namespace {

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1);
      }
      pp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[n - 1 - i] = t;
    w[n - 1 - i] = 2.0 / ((1.0 - t * t) * pp * pp);
  }
}

// Gauss-Gegenbauer for weight sqrt(1-c^2) (Chebyshev second kind):
// exact for integrands of polynomial degree <= 2n-1.
void gauss_chebyshev2(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int j = 1; j <= n; ++j) {
    const double a = static_cast<double>(j) * kPi / (n + 1);
    x[n - j] = std::cos(a);
    w[n - j] = kPi / (n + 1) * std::sin(a) * std::sin(a);
  }
}

}  // namespace

QuadratureGrid gauss_grid(int k, int degree) {
  if (k < 1 || k > 3) throw std::invalid_argument("gauss_grid: k must be in {1,2,3}");
  if (degree < 2) throw std::invalid_argument("gauss_grid: degree must be >= 2");

  QuadratureGrid g;
  g.dim = k;
  g.exactness_degree = degree;

  const int n_az = degree + 1;  // uniform rule, exact for trig degree <= n_az-1
  if (k == 1) {
    g.nodes.reserve(n_az);
    for (int j = 0; j < n_az; ++j) {
      const double a = 2.0 * kPi * j / n_az;
      g.nodes.push_back({std::cos(a), std::sin(a), 0.0, 0.0});
      g.weights.push_back(2.0 * kPi / n_az);
    }
    return g;
  }

  const int n_gl = degree / 2 + 1;  // 2 n_gl - 1 >= degree
  std::vector<double> cgl, wgl;
  gauss_legendre(n_gl, cgl, wgl);

  if (k == 2) {
    g.nodes.reserve(static_cast<std::size_t>(n_gl) * n_az);
    for (int i = 0; i < n_gl; ++i) {
      const double c = cgl[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < n_az; ++j) {
        const double a = 2.0 * kPi * j / n_az;
        g.nodes.push_back({c, s * std::cos(a), s * std::sin(a), 0.0});
        g.weights.push_back(wgl[i] * 2.0 * kPi / n_az);
      }
    }
    return g;
  }

  // k == 3: first polar cosine carries the sqrt(1-c^2) reduced measure.
  std::vector<double> cch, wch;
  gauss_chebyshev2(n_gl, cch, wch);
  g.nodes.reserve(static_cast<std::size_t>(n_gl) * n_gl * n_az);
  for (int i1 = 0; i1 < n_gl; ++i1) {
    const double c1 = cch[i1];
    const double s1 = std::sqrt(std::max(0.0, 1.0 - c1 * c1));
    for (int i2 = 0; i2 < n_gl; ++i2) {
      const double c2 = cgl[i2];
      const double s2 = std::sqrt(std::max(0.0, 1.0 - c2 * c2));
      for (int j = 0; j < n_az; ++j) {
        const double a = 2.0 * kPi * j / n_az;
        g.nodes.push_back({c1, s1 * c2, s1 * s2 * std::cos(a), s1 * s2 * std::sin(a)});
        g.weights.push_back(wch[i1] * wgl[i2] * 2.0 * kPi / n_az);
      }
    }
  }
  return g;
}

double grid_integral(const QuadratureGrid& grid, const std::vector<double>& node_values) {
  if (node_values.size() != grid.size())
    throw std::invalid_argument("grid_integral: value count does not match grid");
  std::vector<double> terms(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) terms[i] = grid.weights[i] * node_values[i];
  return pairwise_sum(terms);
}

void save_grid(const QuadratureGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_grid: cannot open " + path);
  out << "sphgrid v1 k=" << grid.dim << " degree=" << grid.exactness_degree << "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int c = 0; c <= grid.dim; ++c) {
      out << fmt_g17(grid.nodes[i][static_cast<std::size_t>(c)]) << ' ';
    }
    out << fmt_g17(grid.weights[i]) << "\n";
  }
}

QuadratureGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_grid: cannot open " + path);
  std::string header;
  std::getline(in, header);
  int k = 0, degree = 0;
  if (std::sscanf(header.c_str(), "sphgrid v1 k=%d degree=%d", &k, &degree) != 2)
    throw std::runtime_error("load_grid: bad header: " + header);
  QuadratureGrid g;
  g.dim = k;
  g.exactness_degree = degree;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::array<double, 4> node{0.0, 0.0, 0.0, 0.0};
    for (int c = 0; c <= k; ++c) row >> node[static_cast<std::size_t>(c)];
    double w = 0.0;
    row >> w;
    if (!row) throw std::runtime_error("load_grid: short row: " + line);
    g.nodes.push_back(node);
    g.weights.push_back(w);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Harmonic polynomial spaces
// ---------------------------------------------------------------------------

namespace {

std::vector<Poly::Expo> monomials_of_degree(int dim, int degree) {
  std::vector<Poly::Expo> out;
  std::function<void(int, int, Poly::Expo&)> rec = [&](int var, int left, Poly::Expo& e) {
    if (var == dim - 1) {
      e[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(left);
      out.push_back(e);
      return;
    }
    for (int v = left; v >= 0; --v) {
      e[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(v);
      rec(var + 1, left - v, e);
    }
  };
  Poly::Expo e{0, 0, 0, 0};
  rec(0, degree, e);
  return out;
}

// Nullspace basis of a dense matrix (rows x cols), Gaussian elimination with
// partial pivoting. Entries here are small integers, so doubles are exact.
std::vector<std::vector<double>> nullspace(std::vector<std::vector<double>> m, int cols) {
  const int rows = static_cast<int>(m.size());
  std::vector<int> pivot_col_of_row(static_cast<std::size_t>(rows), -1);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int best = -1;
    double best_abs = 1e-9;
    for (int i = r; i < rows; ++i) {
      const double a = std::abs(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (best < 0) continue;
    std::swap(m[static_cast<std::size_t>(r)], m[static_cast<std::size_t>(best)]);
    const double piv = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    for (int j = c; j < cols; ++j) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double f = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      if (f == 0.0) continue;
      for (int j = c; j < cols; ++j)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
            f * m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    }
    pivot_col_of_row[static_cast<std::size_t>(r)] = c;
    is_pivot[static_cast<std::size_t>(c)] = true;
    ++r;
  }
  std::vector<std::vector<double>> basis;
  for (int c = 0; c < cols; ++c) {
    if (is_pivot[static_cast<std::size_t>(c)]) continue;
    std::vector<double> v(static_cast<std::size_t>(cols), 0.0);
    v[static_cast<std::size_t>(c)] = 1.0;
    for (int i = 0; i < r; ++i) {
      const int pc = pivot_col_of_row[static_cast<std::size_t>(i)];
      v[static_cast<std::size_t>(pc)] = -m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

std::vector<Poly> harmonic_polynomials(int k, int degree) {
  if (k < 1) throw std::invalid_argument("harmonic_polynomials: k must be >= 1");
  if (degree < 0) throw std::invalid_argument("harmonic_polynomials: degree must be >= 0");
  const int dim = k + 1;
  if (degree == 0) return {Poly::constant(1.0)};
  if (degree == 1) {
    std::vector<Poly> out;
    for (int i = 0; i < dim; ++i) out.push_back(Poly::variable(i));
    return out;
  }

  const auto mono = monomials_of_degree(dim, degree);
  const auto mono_low = monomials_of_degree(dim, degree - 2);
  const int cols = static_cast<int>(mono.size());
  const int rows = static_cast<int>(mono_low.size());

  std::map<Poly::Expo, std::size_t> row_of;
  for (std::size_t r = 0; r < mono_low.size(); ++r) row_of[mono_low[r]] = r;

  std::vector<std::vector<double>> lap(static_cast<std::size_t>(rows),
                                       std::vector<double>(static_cast<std::size_t>(cols), 0.0));
  for (int c = 0; c < cols; ++c) {
    for (int i = 0; i < dim; ++i) {
      const int ei = mono[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
      if (ei < 2) continue;
      Poly::Expo target = mono[static_cast<std::size_t>(c)];
      target[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(ei - 2);
      lap[row_of.at(target)][static_cast<std::size_t>(c)] += static_cast<double>(ei) * (ei - 1);
    }
  }

  auto null_vecs = nullspace(std::move(lap), cols);
  std::vector<Poly> harmonics;
  harmonics.reserve(null_vecs.size());
  for (const auto& v : null_vecs) {
    Poly p;
    for (int c = 0; c < cols; ++c)
      if (v[static_cast<std::size_t>(c)] != 0.0)
        p.add_term(mono[static_cast<std::size_t>(c)], v[static_cast<std::size_t>(c)]);
    harmonics.push_back(std::move(p));
  }

  // Gram-Schmidt under the exact sphere inner product, two passes for
  // orthogonality near machine precision; unit L^2(dσ) normalization.
  std::vector<Poly> ortho;
  for (Poly p : harmonics) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const Poly& q : ortho) {
        const double proj = sphere_inner(p, q, dim);
        p = p - q.scaled(proj);
      }
    }
    const double nrm = std::sqrt(sphere_inner(p, p, dim));
    if (nrm < 1e-12) continue;
    ortho.push_back(p.scaled(1.0 / nrm));
  }
  if (static_cast<int>(ortho.size()) != sphere_multiplicity(k, degree))
    throw std::logic_error("harmonic_polynomials: dimension mismatch");
  return ortho;
}

Poly zonal_harmonic(int k, int degree) {
  if (k < 1) throw std::invalid_argument("zonal_harmonic: k must be >= 1");
  if (degree < 0) throw std::invalid_argument("zonal_harmonic: degree must be >= 0");
  // Gegenbauer profile C_l^{(k-1)/2}(c) (Chebyshev T_l at k=1), scaled to 1
  // at c=1, then homogenized with powers of |x|^2.
  std::vector<std::vector<double>> c(static_cast<std::size_t>(degree) + 1);
  c[0] = {1.0};
  if (degree >= 1) {
    if (k == 1)
      c[1] = {0.0, 1.0};
    else
      c[1] = {0.0, static_cast<double>(k - 1)};
  }
  const double lam = (k - 1) / 2.0;
  for (int l = 2; l <= degree; ++l) {
    std::vector<double> cur(static_cast<std::size_t>(l) + 1, 0.0);
    const double a = (k == 1) ? 2.0 : 2.0 * (l + lam - 1) / l;
    const double b = (k == 1) ? 1.0 : (l + 2 * lam - 2) / l;
    for (std::size_t j = 0; j < c[static_cast<std::size_t>(l - 1)].size(); ++j)
      cur[j + 1] += a * c[static_cast<std::size_t>(l - 1)][j];
    for (std::size_t j = 0; j < c[static_cast<std::size_t>(l - 2)].size(); ++j)
      cur[j] -= b * c[static_cast<std::size_t>(l - 2)][j];
    c[static_cast<std::size_t>(l)] = std::move(cur);
  }
  const auto& prof = c[static_cast<std::size_t>(degree)];
  double at_one = 0.0;
  for (double v : prof) at_one += v;

  Poly rsq;
  for (int i = 0; i <= k; ++i) {
    Poly::Expo e{0, 0, 0, 0};
    e[static_cast<std::size_t>(i)] = 2;
    rsq.add_term(e, 1.0);
  }
  Poly out;
  Poly rsq_pow = Poly::constant(1.0);
  // iterate j = degree, degree-2, ... pairing x1^j with rsq^{(degree-j)/2}
  for (int j = degree; j >= 0; j -= 2) {
    const double coef = (static_cast<std::size_t>(j) < prof.size() ? prof[static_cast<std::size_t>(j)] : 0.0) / at_one;
    if (coef != 0.0) {
      Poly x1j = Poly::constant(1.0);
      for (int q = 0; q < j; ++q) x1j = x1j * Poly::variable(0);
      out = out + (x1j * rsq_pow).scaled(coef);
    }
    rsq_pow = rsq_pow * rsq;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral bases
// ---------------------------------------------------------------------------

std::array<double, 4> BasisFunction::tangent_gradient(int dim,
                                                      const std::array<double, 4>& x) const {
  std::array<double, 4> g{0.0, 0.0, 0.0, 0.0};
  double radial = 0.0;
  for (int i = 0; i <= dim; ++i) {
    g[static_cast<std::size_t>(i)] = grad[static_cast<std::size_t>(i)].eval(x);
    radial += g[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i <= dim; ++i) g[static_cast<std::size_t>(i)] -= radial * x[static_cast<std::size_t>(i)];
  return g;
}

std::vector<SpectralEntry> SpectralBasis::entries() const {
  std::vector<SpectralEntry> out;
  for (const BasisFunction& f : fns) {
    if (!out.empty() && std::abs(out.back().eigenvalue - f.eigenvalue) < 1e-12) {
      ++out.back().multiplicity;
    } else {
      out.push_back({f.eigenvalue, 1});
    }
  }
  return out;
}

namespace {

SpectralBasis build_basis(int k, int l_max, const QuadratureGrid& grid, bool zonal) {
  if (grid.dim != k) throw std::invalid_argument("basis: grid dimension mismatch");
  if (grid.exactness_degree < 2 * l_max)
    throw std::invalid_argument("basis: grid exactness must cover products (>= 2 l_max)");
  SpectralBasis basis;
  basis.dim = k;
  basis.l_max = l_max;
  basis.zonal_only = zonal;
  for (int l = 0; l <= l_max; ++l) {
    std::vector<Poly> polys;
    if (zonal)
      polys.push_back(zonal_harmonic(k, l));
    else
      polys = harmonic_polynomials(k, l);
    for (Poly& p : polys) {
      BasisFunction f;
      f.degree = l;
      f.eigenvalue = sphere_eigenvalue(k, l);
      f.sq_norm = sphere_inner(p, p, k + 1);
      f.poly = std::move(p);
      for (int i = 0; i <= k; ++i)
        f.grad[static_cast<std::size_t>(i)] = f.poly.partial(i);
      basis.fns.push_back(std::move(f));
    }
  }
  basis.nnodes = grid.size();
  basis.values.resize(basis.fns.size() * basis.nnodes);
  basis.gradients.resize(basis.fns.size() * basis.nnodes);
  for (std::size_t fi = 0; fi < basis.fns.size(); ++fi) {
    const BasisFunction& f = basis.fns[fi];
    for (std::size_t ni = 0; ni < basis.nnodes; ++ni) {
      basis.values[fi * basis.nnodes + ni] = f.value(grid.nodes[ni]);
      basis.gradients[fi * basis.nnodes + ni] = f.tangent_gradient(k, grid.nodes[ni]);
    }
  }
  return basis;
}

}  // namespace

SpectralBasis harmonic_basis(int k, int l_max, const QuadratureGrid& grid) {
  return build_basis(k, l_max, grid, false);
}

SpectralBasis zonal_basis(int k, int l_max, const QuadratureGrid& grid) {
  return build_basis(k, l_max, grid, true);
}

}  // namespace ylab
