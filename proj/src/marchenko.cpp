#include "regge/marchenko.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regge/errors.hpp"
#include "regge/jost.hpp"
#include "regge/parallel.hpp"
#include "regge/poles.hpp"

namespace regge::marchenko {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Dense LU with partial pivoting; small systems, no external dependency.
struct Lu {
  std::vector<double> a;  // n x n, row major
  std::vector<int> piv;
  int n = 0;

  void factor(std::vector<double> m, int n_) {
    a = std::move(m);
    n = n_;
    piv.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) piv[static_cast<std::size_t>(i)] = i;
    for (int col = 0; col < n; ++col) {
      int best = col;
      double mx = std::abs(a[static_cast<std::size_t>(col) * n + col]);
      for (int r = col + 1; r < n; ++r) {
        const double v = std::abs(a[static_cast<std::size_t>(r) * n + col]);
        if (v > mx) {
          mx = v;
          best = r;
        }
      }
      if (mx == 0.0) throw ResolutionError("GLM system singular");
      if (best != col) {
        for (int c = 0; c < n; ++c)
          std::swap(a[static_cast<std::size_t>(col) * n + c],
                    a[static_cast<std::size_t>(best) * n + c]);
        std::swap(piv[static_cast<std::size_t>(col)], piv[static_cast<std::size_t>(best)]);
      }
      const double d = a[static_cast<std::size_t>(col) * n + col];
      for (int r = col + 1; r < n; ++r) {
        const double f = a[static_cast<std::size_t>(r) * n + col] / d;
        a[static_cast<std::size_t>(r) * n + col] = f;
        if (f != 0.0)
          for (int c = col + 1; c < n; ++c)
            a[static_cast<std::size_t>(r) * n + c] -=
                f * a[static_cast<std::size_t>(col) * n + c];
      }
    }
  }

  std::vector<double> solve(const std::vector<double>& b) const {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(piv[static_cast<std::size_t>(i)])];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j)
        x[static_cast<std::size_t>(i)] -=
            a[static_cast<std::size_t>(i) * n + j] * x[static_cast<std::size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j)
        x[static_cast<std::size_t>(i)] -=
            a[static_cast<std::size_t>(i) * n + j] * x[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(i)] /= a[static_cast<std::size_t>(i) * n + i];
    }
    return x;
  }

  // A^T x = b via U^T y = b, L^T z = y, x = P^T z.
  std::vector<double> solve_transpose(const std::vector<double>& b) const {
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double s = b[static_cast<std::size_t>(i)];
      for (int j = 0; j < i; ++j)
        s -= a[static_cast<std::size_t>(j) * n + i] * y[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i) * n + i];
    }
    std::vector<double> z(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      double s = y[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n; ++j)
        s -= a[static_cast<std::size_t>(j) * n + i] * z[static_cast<std::size_t>(j)];
      z[static_cast<std::size_t>(i)] = s;
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      x[static_cast<std::size_t>(piv[static_cast<std::size_t>(i)])] =
          z[static_cast<std::size_t>(i)];
    return x;
  }
};

double one_norm(const std::vector<double>& m, int n) {
  double best = 0.0;
  for (int c = 0; c < n; ++c) {
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += std::abs(m[static_cast<std::size_t>(r) * n + c]);
    best = std::max(best, s);
  }
  return best;
}

// Hager's estimate of ||A^{-1}||_1 from an LU factorization.
double inverse_one_norm_estimate(const Lu& lu) {
  const int n = lu.n;
  std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n);
  double est = 0.0;
  for (int it = 0; it < 5; ++it) {
    std::vector<double> y = lu.solve(x);
    double norm1 = 0.0;
    for (double v : y) norm1 += std::abs(v);
    est = std::max(est, norm1);
    std::vector<double> sgn(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      sgn[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] >= 0.0 ? 1.0 : -1.0;
    std::vector<double> zvec = lu.solve_transpose(sgn);
    int jmax = 0;
    double zmax = 0.0, zdotx = 0.0;
    for (int i = 0; i < n; ++i) {
      zdotx += zvec[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      if (std::abs(zvec[static_cast<std::size_t>(i)]) > zmax) {
        zmax = std::abs(zvec[static_cast<std::size_t>(i)]);
        jmax = i;
      }
    }
    if (zmax <= zdotx) break;
    std::fill(x.begin(), x.end(), 0.0);
    x[static_cast<std::size_t>(jmax)] = 1.0;
  }
  return est;
}

// Composite quadrature weights on j = 0..n (n intervals, spacing h):
// Simpson when n is even, Simpson + 3/8 tail when n is odd.
std::vector<double> quad_weights(int n, double h) {
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
  if (n == 0) return w;
  if (n == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  int simpson_end = n;  // index up to which plain Simpson runs
  if (n % 2 == 1) simpson_end = n - 3;
  for (int j = 0; j + 2 <= simpson_end; j += 2) {
    w[static_cast<std::size_t>(j)] += h / 3.0;
    w[static_cast<std::size_t>(j + 1)] += 4.0 * h / 3.0;
    w[static_cast<std::size_t>(j + 2)] += h / 3.0;
  }
  if (n % 2 == 1) {
    if (n == 3) {
      w[0] += 3.0 * h / 8.0;
      w[1] += 9.0 * h / 8.0;
      w[2] += 9.0 * h / 8.0;
      w[3] += 3.0 * h / 8.0;
    } else {
      w[static_cast<std::size_t>(n - 3)] += 3.0 * h / 8.0;
      w[static_cast<std::size_t>(n - 2)] += 9.0 * h / 8.0;
      w[static_cast<std::size_t>(n - 1)] += 9.0 * h / 8.0;
      w[static_cast<std::size_t>(n)] += 3.0 * h / 8.0;
    }
  }
  return w;
}

}  // namespace

std::vector<cplx> s_function(const std::vector<double>& k_grid,
                             const kernel::KernelSolution& ker, double lambda) {
  std::vector<cplx> out(k_grid.size());
  parallel_for(k_grid.size(), [&](std::size_t i) {
    const double k = k_grid[i];
    const cplx num = jost::psi_tilde_imag_axis(k, ker, lambda);
    const cplx den = jost::psi_tilde_imag_axis(-k, ker, lambda);
    if (std::abs(den) < 1e-12 * (1.0 + std::abs(num)))
      throw DataError("s_function: psi~(0,-ik) vanishes at k = " + std::to_string(k));
    out[i] = num / den;
  });
  return out;
}

double norming_constant(double alpha, const kernel::KernelSolution& ker,
                        double lambda) {
  // m_k = int |phi_k|^2 = psi~'(0,alpha) psi~.(0,alpha) / (2 alpha): from
  // w(x) = u' u. - u u.' with w' = -2 z u^2 and u(0) = 0 at a bound state.
  const cplx a(alpha, 0.0);
  const cplx n = jost::classical_normalization(a, lambda);
  const cplx psi_x = n * jost::psi_prime(a, ker, lambda);
  auto psit = [&](cplx z) {
    return jost::classical_normalization(z, lambda) * jost::psi(z, ker, lambda);
  };
  const cplx psi_dot = jost::cauchy_derivative(psit, a, 0.05, 1, 32);
  const cplx mk = psi_x * psi_dot / (2.0 * alpha);
  if (!(mk.real() > 0.0))
    throw DataError("norming_constant: nonpositive m_k (not a bound state?)");
  return mk.real();
}

std::vector<double> find_bound_states(const kernel::KernelSolution& ker,
                                      double lambda) {
  // Bound states are real zeros of psi(0,.) with Re z > 0; for our class the
  // Jost function cannot vanish off the real axis in the right half-plane.
  const double zmax = std::max(3.0, 2.0 * std::sqrt(std::max(lambda, 1.0)));
  poles::Rect rect{1e-3, zmax, -0.4, 0.4};
  poles::SearchOptions opts;
  opts.attach_residues = false;
  auto f = [&](cplx z) { return jost::psi(z, ker, lambda); };
  auto res = poles::locate_zeros(f, rect, opts);
  std::vector<double> out;
  for (const auto& p : res.poles)
    if (std::abs(p.location.imag()) < 1e-7) out.push_back(p.location.real());
  std::sort(out.begin(), out.end());
  return out;
}

ScatteringData assemble_F(const kernel::KernelSolution& ker, double lambda,
                          const AssembleOptions& opts) {
  const double a = ker.grid.a;
  ScatteringData data;
  data.k_max = opts.k_max > 0.0 ? opts.k_max : 200.0 / a;
  data.lattice_h = opts.lattice_h;

  for (double alpha : find_bound_states(ker, lambda))
    data.bound_states.push_back({alpha, norming_constant(alpha, ker, lambda)});

  double alpha_min = 1.0;
  for (const auto& b : data.bound_states) alpha_min = std::min(alpha_min, b.alpha);
  data.x_max = opts.x_max > 0.0 ? opts.x_max : 4.0 * a + 5.0 / alpha_min;
  // Keep x_max on the lattice.
  const int half_nodes = static_cast<int>(std::ceil(data.x_max / data.lattice_h));
  data.x_max = half_nodes * data.lattice_h;

  // Symmetric k-grid; ensure an even number of Filon panels per half.
  int mk = static_cast<int>(std::ceil(data.k_max / opts.k_step));
  if (mk % 2 != 0) ++mk;
  const double hk = data.k_max / mk;
  data.k_grid.resize(2 * static_cast<std::size_t>(mk) + 1);
  for (int i = -mk; i <= mk; ++i)
    data.k_grid[static_cast<std::size_t>(i + mk)] = i * hk;
  data.S = s_function(data.k_grid, ker, lambda);

  // The integrand has a non-oscillatory tail
  //   1 - S(k) = 2iA/k + 2A^2/k^2 + (oscillatory)/k^2 + ...,  A = K_q(0,0):
  // the 1/k part transforms to a step at x = 0 and the real 1/k^2 part to an
  // |x|-kink there, neither of which a truncated lattice transform resolves.
  // Subtract the regularized tail 2A(ik + A)/(k^2+1) and add its exact
  // transform (A^2 - A) e^{-x} back in closed form.
  double a_tail = 0.0;
  {
    int cnt = 0;
    for (std::size_t i = 0; i < data.k_grid.size(); ++i) {
      const double k = data.k_grid[i];
      if (k > 0.85 * data.k_max) {
        a_tail += 0.5 * k * (1.0 - data.S[i]).imag();
        ++cnt;
      }
    }
    a_tail /= std::max(cnt, 1);
  }

  const int nodes = 2 * half_nodes + 1;
  data.F.assign(static_cast<std::size_t>(nodes), 0.0);
  std::vector<cplx> g(data.S.size());
  double gamma2 = 0.0;  // residual tail coefficient, |g_rem| ~ gamma2 / k^2
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k = data.k_grid[i];
    const cplx rem = (1.0 - data.S[i]) -
                     2.0 * a_tail * cplx(a_tail, k) / (k * k + 1.0);
    // Cosine taper over the outer half: the remaining tail is O(k^{-2})
    // and oscillatory, so the taper bias is negligible while truncation
    // ringing at frequency k_max is suppressed. A wide taper band keeps the
    // smearing of the recovered jump at x = a narrow.
    double w = 1.0;
    const double akf = std::abs(k) / data.k_max;
    if (akf > 0.5) {
      const double t = (akf - 0.5) / 0.5;
      w = 0.5 * (1.0 + std::cos(kPi * std::min(t, 1.0)));
    }
    g[i] = w * rem;
    if (std::abs(k) > 0.85 * data.k_max)
      gamma2 = std::max(gamma2, std::abs(rem) * k * k);
  }
  data.tail_estimate = gamma2 / (kPi * data.k_max);

  parallel_for(static_cast<std::size_t>(nodes), [&](std::size_t jx) {
    const double x = jx * data.lattice_h;
    const double theta = x * hk;
    cplx m0, m1, m2;
    if (std::abs(theta) < 0.05) {
      const double t2 = theta * theta;
      m0 = cplx(2.0 * (1.0 - t2 / 6.0 + t2 * t2 / 120.0), 0.0);
      m1 = cplx(0.0, 2.0 * theta * (1.0 / 3.0 - t2 / 30.0 + t2 * t2 / 840.0));
      m2 = cplx(2.0 / 3.0 - t2 / 5.0 + t2 * t2 / 84.0, 0.0);
    } else {
      const double st = std::sin(theta), ct = std::cos(theta);
      m0 = cplx(2.0 * st / theta, 0.0);
      m1 = cplx(0.0, 2.0 * (st - theta * ct) / (theta * theta));
      m2 = cplx(2.0 * ((theta * theta - 2.0) * st + 2.0 * theta * ct) /
                    (theta * theta * theta),
                0.0);
    }
    const cplx A = 0.5 * (m2 - m1), B = m0 - m2, C = 0.5 * (m2 + m1);
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i + 2 < g.size(); i += 2) {
      const double kmid = data.k_grid[i + 1];
      const cplx phase = std::exp(cplx(0.0, kmid * x));
      acc += phase * (A * g[i] + B * g[i + 1] + C * g[i + 2]);
    }
    double F = (acc * hk).real() / (2.0 * kPi);
    // transform of the subtracted tail, valid for x >= 0+
    F += (a_tail * a_tail - a_tail) * std::exp(-x);
    for (const auto& b : data.bound_states) F += std::exp(-b.alpha * x) / b.m;
    data.F[jx] = F;
  });
  return data;
}

ScatteringData synthetic_data(const std::vector<BoundState>& bound,
                              double lattice_h, double x_max) {
  ScatteringData data;
  data.bound_states = bound;
  data.lattice_h = lattice_h;
  const int half_nodes = static_cast<int>(std::ceil(x_max / lattice_h));
  data.x_max = half_nodes * lattice_h;
  data.F.assign(2 * static_cast<std::size_t>(half_nodes) + 1, 0.0);
  for (std::size_t j = 0; j < data.F.size(); ++j) {
    const double x = j * lattice_h;
    for (const auto& b : bound) data.F[j] += std::exp(-b.alpha * x) / b.m;
  }
  return data;
}

namespace {

std::vector<double> glm_row_impl(const ScatteringData& data, int ix,
                                 const GlmOptions& opts, double* cond_out) {
  const double h = data.lattice_h;
  const int top = static_cast<int>(data.F.size()) / 2;  // index of x_max
  const int n = top - ix;                               // intervals in [x, x_max]
  if (n < 4) throw ValidationError("solve_glm: x too close to x_max");
  const auto w = quad_weights(n, h);

  const int dim = n + 1;
  std::vector<double> mat(static_cast<std::size_t>(dim) * dim, 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(dim), 0.0);
  for (int j = 0; j <= n; ++j) {
    rhs[static_cast<std::size_t>(j)] = -data.F[static_cast<std::size_t>(2 * ix + j)];
    for (int i = 0; i <= n; ++i) {
      double v = w[static_cast<std::size_t>(i)] *
                 data.F[static_cast<std::size_t>(2 * ix + i + j)];
      if (i == j) v += 1.0;
      mat[static_cast<std::size_t>(j) * dim + i] = v;
    }
  }
  const double norm_a = one_norm(mat, dim);
  Lu lu;
  lu.factor(std::move(mat), dim);
  const double cond = norm_a * inverse_one_norm_estimate(lu);
  if (cond_out) *cond_out = cond;
  if (cond > opts.cond_limit)
    throw ResolutionError("solve_glm: system condition estimate " +
                          std::to_string(cond) + " exceeds limit");
  return lu.solve(rhs);
}

}  // namespace

std::vector<double> solve_glm_row(const ScatteringData& data, double x,
                                  const GlmOptions& opts) {
  const int ix = static_cast<int>(std::llround(x / data.lattice_h));
  return glm_row_impl(data, ix, opts, nullptr);
}

GlmResult solve_glm(const ScatteringData& data, double lambda,
                    double recover_x_max, const GlmOptions& opts) {
  const double h = data.lattice_h;
  const int nx = static_cast<int>(std::floor(recover_x_max / h)) + 1;
  if (nx < 3) throw ValidationError("solve_glm: recover range too small");
  GlmResult res;
  res.x.resize(static_cast<std::size_t>(nx));
  res.K_diag.resize(static_cast<std::size_t>(nx));
  std::vector<double> conds(static_cast<std::size_t>(nx), 0.0);

  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    res.x[i] = static_cast<double>(i) * h;
    const auto row = glm_row_impl(data, static_cast<int>(i), opts, &conds[i]);
    res.K_diag[i] = row.front();  // y = x entry
  });

  res.q.assign(static_cast<std::size_t>(nx), 0.0);
  for (int i = 0; i < nx; ++i) {
    double d;
    if (i == 0)
      d = (-3.0 * res.K_diag[0] + 4.0 * res.K_diag[1] - res.K_diag[2]) / (2.0 * h);
    else if (i == nx - 1)
      d = (3.0 * res.K_diag[static_cast<std::size_t>(i)] -
           4.0 * res.K_diag[static_cast<std::size_t>(i - 1)] +
           res.K_diag[static_cast<std::size_t>(i - 2)]) /
          (2.0 * h);
    else
      d = (res.K_diag[static_cast<std::size_t>(i + 1)] -
           res.K_diag[static_cast<std::size_t>(i - 1)]) /
          (2.0 * h);
    res.q[static_cast<std::size_t>(i)] = -2.0 * d;
  }
  res.qf.resize(res.q.size());
  for (int i = 0; i < nx; ++i) {
    const double q0 = -lambda * std::exp(-2.0 * res.x[static_cast<std::size_t>(i)]);
    res.qf[static_cast<std::size_t>(i)] = res.q[static_cast<std::size_t>(i)] - q0;
  }
  res.max_condition = *std::max_element(conds.begin(), conds.end());
  return res;
}

RoundtripReport marchenko_roundtrip(const model::PotentialTable& pot,
                                    const kernel::KernelSolution& ker,
                                    double lambda,
                                    const RoundtripOptions& opts) {
  RoundtripReport rep;
  ScatteringData data = assemble_F(ker, lambda, opts.assemble);
  const double cmp = opts.compare_x_max > 0.0 ? opts.compare_x_max : pot.a + 0.5;
  GlmResult glm = solve_glm(data, lambda, cmp, opts.glm);

  rep.x = glm.x;
  rep.qf_recovered = glm.qf;
  rep.qf_true.resize(rep.x.size());
  for (std::size_t i = 0; i < rep.x.size(); ++i)
    rep.qf_true[i] = rep.x[i] >= pot.a ? 0.0 : pot.qf(rep.x[i]);

  double num = 0.0, den = 0.0, linf = 0.0;
  for (std::size_t i = 0; i < rep.x.size(); ++i) {
    const double d = rep.qf_recovered[i] - rep.qf_true[i];
    num += d * d;
    den += rep.qf_true[i] * rep.qf_true[i];
    linf = std::max(linf, std::abs(d));
  }
  rep.l2_rel = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  rep.linf = linf;
  rep.k_max = data.k_max;
  rep.lattice_h = data.lattice_h;
  rep.tail_estimate = data.tail_estimate;
  rep.bound_states = data.bound_states;
  return rep;
}

}  // namespace regge::marchenko
