#include "regge/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "regge/errors.hpp"
#include "regge/parallel.hpp"

namespace regge::kernel {

namespace {

// Cumulative composite Simpson: out[j] = int_{x0}^{x0 + j h} f.
// Even j: pure composite Simpson. Odd j: previous even value plus a
// quadratic end panel (error O(h^4), same order as Simpson).
void cumulative_simpson(const double* f, int n, double h, double* out) {
  out[0] = 0.0;
  if (n >= 1) {
    if (n >= 2)
      out[1] = h * (5.0 * f[0] + 8.0 * f[1] - f[2]) / 12.0;
    else
      out[1] = h * 0.5 * (f[0] + f[1]);
  }
  for (int j = 2; j <= n; ++j) {
    if (j % 2 == 0)
      out[j] = out[j - 2] + h / 3.0 * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
    else
      out[j] = out[j - 1] + h * (5.0 * f[j] + 8.0 * f[j - 1] - f[j - 2]) / 12.0;
  }
}

// W(alpha, beta) = q(alpha-beta) - q0(alpha+beta)
//               = Q_f(alpha-beta) - lambda (e^{-2(alpha-beta)} - e^{-2(alpha+beta)}).
// On the grid all arguments are lattice multiples of a/N.
struct Weight {
  std::vector<double> qv;   // Q_f(d h), d = 0..N
  std::vector<double> e2;   // e^{-2 d h},  d = 0..2N
  double lambda;

  double operator()(int i, int j) const {
    const int d = i - j;
    return qv[static_cast<std::size_t>(d)] -
           lambda * (e2[static_cast<std::size_t>(d)] -
                     e2[static_cast<std::size_t>(i + j)]);
  }
};

Weight make_weight(const model::PotentialTable& pot, double lambda,
                   const TriGrid& g) {
  Weight w;
  w.lambda = lambda;
  const double h = g.hu();
  w.qv.resize(static_cast<std::size_t>(g.N) + 1);
  for (int d = 0; d <= g.N; ++d) {
    const double x = d * h;
    w.qv[static_cast<std::size_t>(d)] = (d == g.N) ? 0.0 : pot.qf(x);
  }
  w.e2.resize(2 * static_cast<std::size_t>(g.N) + 1);
  for (int d = 0; d <= 2 * g.N; ++d)
    w.e2[static_cast<std::size_t>(d)] = std::exp(-2.0 * d * h);
  return w;
}

// inner(i, j) = int_0^{v_j} W(u_i, beta) L(u_i, beta) dbeta for j <= i.
void inner_integrals(const TriField& L, const Weight& W, const TriGrid& g,
                     TriField& inner) {
  const double h = g.hu();
  parallel_for(static_cast<std::size_t>(g.N) + 1, [&](std::size_t iu) {
    const int i = static_cast<int>(iu);
    std::vector<double> f(static_cast<std::size_t>(i) + 1);
    std::vector<double> c(static_cast<std::size_t>(i) + 1);
    for (int j = 0; j <= i; ++j)
      f[static_cast<std::size_t>(j)] = W(i, j) * L[g.idx(i, j)];
    cumulative_simpson(f.data(), i, h, c.data());
    for (int j = 0; j <= i; ++j) inner[g.idx(i, j)] = c[static_cast<std::size_t>(j)];
  });
}

}  // namespace

TriField picard_term(const TriField& prev, const model::PotentialTable& pot,
                     double lambda, const TriGrid& g) {
  const Weight W = make_weight(pot, lambda, g);
  TriField inner(g.nodes(), 0.0);
  inner_integrals(prev, W, g, inner);

  // out(i, j) = int_{u_i}^{a} inner(alpha, v_j) dalpha. The alpha integral is
  // truncated exactly at a: the integrand carries L(alpha-beta, alpha+beta)
  // with supp L in Omega_0, which vanishes for alpha >= a, and Q_f is
  // supported in [0, a] as well.
  TriField out(g.nodes(), 0.0);
  const double h = g.hu();
  parallel_for(static_cast<std::size_t>(g.N) + 1, [&](std::size_t ju) {
    const int j = static_cast<int>(ju);
    const int n = g.N - j;  // alpha nodes j..N, reversed
    std::vector<double> f(static_cast<std::size_t>(n) + 1);
    std::vector<double> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
      f[static_cast<std::size_t>(k)] = inner[g.idx(g.N - k, j)];
    cumulative_simpson(f.data(), n, h, c.data());
    for (int i = j; i <= g.N; ++i)
      out[g.idx(i, j)] = c[static_cast<std::size_t>(g.N - i)];
  });
  return out;
}

KernelSolution solve_kernel(const model::PotentialTable& pot, double lambda,
                            int N, double tol) {
  if (N < 128) throw ValidationError("kernel N must be >= 128", "numerics.kernel_n");
  if (N % 2 != 0) throw ValidationError("kernel N must be even", "numerics.kernel_n");
  if (!(tol > 0.0)) throw ValidationError("kernel tol must be positive", "numerics.kernel_tol");

  KernelSolution sol;
  sol.grid = TriGrid{N, pot.a};
  sol.lambda = lambda;
  sol.p = pot.jump_order;
  sol.qf_jump = pot.jump_value;
  sol.jump_s_p = -std::pow(2.0, -(pot.jump_order + 1)) * pot.jump_value;

  const TriGrid& g = sol.grid;
  const Weight W = make_weight(pot, lambda, g);

  // M_{q,q0} = sup over v <= alpha <= a of int_0^v |W(alpha, beta)| dbeta.
  {
    double M = 0.0;
    const double h = g.hu();
    std::vector<double> f, c;
    for (int i = 0; i <= g.N; ++i) {
      f.resize(static_cast<std::size_t>(i) + 1);
      c.resize(static_cast<std::size_t>(i) + 1);
      for (int j = 0; j <= i; ++j) f[static_cast<std::size_t>(j)] = std::abs(W(i, j));
      cumulative_simpson(f.data(), i, h, c.data());
      for (int j = 0; j <= i; ++j) M = std::max(M, c[static_cast<std::size_t>(j)]);
    }
    sol.contraction_M = M;
  }

  // First Picard term, exactly: K1(u) = (1/2) int_u^a Q_f.
  sol.K1.assign(g.nodes(), 0.0);
  {
    std::vector<double> half_tail(static_cast<std::size_t>(g.N) + 1);
    for (int i = 0; i <= g.N; ++i)
      half_tail[static_cast<std::size_t>(i)] = 0.5 * pot.integral_tail(g.u(i));
    for (int i = 0; i <= g.N; ++i)
      for (int j = 0; j <= i; ++j) sol.K1[g.idx(i, j)] = half_tail[static_cast<std::size_t>(i)];
  }

  sol.K = sol.K1;
  double norm1 = 0.0;
  for (double v : sol.K1) norm1 = std::max(norm1, std::abs(v));
  sol.increment_sup.push_back(norm1);
  sol.iterations = 1;
  sol.residual = norm1;

  if (norm1 > 0.0) {
    const int guard =
        static_cast<int>(std::ceil(2.718281828 * sol.contraction_M * pot.a)) + 2;
    TriField term = sol.K1;
    double prev_sup = norm1;
    for (int n = 2; n <= 400; ++n) {
      term = picard_term(term, pot, lambda, g);
      double sup = 0.0;
      for (double v : term) sup = std::max(sup, std::abs(v));
      for (std::size_t k = 0; k < term.size(); ++k) sol.K[k] += term[k];
      sol.increment_sup.push_back(sup);
      sol.iterations = n;
      sol.residual = sup;
      if (sup < tol * std::max(1.0, norm1)) break;
      if (n > guard && sup > 0.5 * prev_sup)
        throw NumericError(
            "solve_kernel: Picard increments stopped contracting; the "
            "factorial bound is violated (quadrature failure)");
      prev_sup = sup;
      if (n == 400)
        throw NumericError("solve_kernel: Picard series did not reach tol");
    }
  }

  // Derivative fields from the fixed-point identities:
  //   d_u K = -Q_f(u)/2 - int_0^v W(u,beta) K dbeta
  //   d_v K =  int_u^a W(alpha,v) K dalpha
  sol.dKu.assign(g.nodes(), 0.0);
  sol.dKv.assign(g.nodes(), 0.0);
  {
    TriField inner(g.nodes(), 0.0);
    inner_integrals(sol.K, W, g, inner);
    const double h = g.hu();
    for (int i = 0; i <= g.N; ++i) {
      // at u = a the one-sided limit Q_f(a^-) is the value seen from inside
      const double qfu = (i == g.N) ? pot.qf_left_a : pot.qf(g.u(i));
      for (int j = 0; j <= i; ++j)
        sol.dKu[g.idx(i, j)] = -0.5 * qfu - inner[g.idx(i, j)];
    }
    parallel_for(static_cast<std::size_t>(g.N) + 1, [&](std::size_t ju) {
      const int j = static_cast<int>(ju);
      const int n = g.N - j;
      std::vector<double> f(static_cast<std::size_t>(n) + 1);
      std::vector<double> c(static_cast<std::size_t>(n) + 1);
      for (int k = 0; k <= n; ++k)
        f[static_cast<std::size_t>(k)] = W(g.N - k, j) * sol.K[g.idx(g.N - k, j)];
      cumulative_simpson(f.data(), n, h, c.data());
      for (int i = j; i <= g.N; ++i)
        sol.dKv[g.idx(i, j)] = c[static_cast<std::size_t>(g.N - i)];
    });
  }

  // x = 0 trace along the diagonal i = j.
  sol.trace_s.resize(static_cast<std::size_t>(g.N) + 1);
  sol.trace_K.resize(sol.trace_s.size());
  sol.trace_dKx.resize(sol.trace_s.size());
  for (int i = 0; i <= g.N; ++i) {
    sol.trace_s[static_cast<std::size_t>(i)] = 2.0 * g.u(i);
    sol.trace_K[static_cast<std::size_t>(i)] = sol.K[g.idx(i, i)];
    sol.trace_dKx[static_cast<std::size_t>(i)] =
        0.5 * (sol.dKu[g.idx(i, i)] - sol.dKv[g.idx(i, i)]);
  }
  return sol;
}

JumpEstimate jump_estimate_detail(const KernelSolution& sol, int p) {
  JumpEstimate est;
  est.analytic = -std::pow(2.0, -(p + 1)) * sol.qf_jump;

  const int N = sol.grid.N;
  const double hs = 2.0 * sol.grid.a / N;  // trace spacing in s
  // One-sided p-th difference quotients at s = 2a^- over steps H, 2H, 4H,
  // Richardson-extrapolated twice.
  const int base = std::max(1, N / 128);
  auto diff = [&](int step) -> double {
    double acc = 0.0;
    double binom = 1.0;
    for (int m = 0; m <= p; ++m) {
      const int node = N - m * step;
      if (node < 0) throw ResolutionError("jump_estimate: grid too coarse");
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      acc += sign * binom * sol.trace_K[static_cast<std::size_t>(node)];
      binom = binom * (p - m) / (m + 1);
    }
    const double H = step * hs;
    return acc / std::pow(H, p);
  };
  const double d1 = diff(base), d2 = diff(2 * base), d4 = diff(4 * base);
  const double r1 = 2.0 * d1 - d2;  // kills the O(H) term
  const double r2 = 2.0 * d2 - d4;
  est.numeric = (4.0 * r1 - r2) / 3.0;  // kills the O(H^2) term
  const double scale = std::max(std::abs(est.analytic), 1e-14);
  est.rel_dev = std::abs(est.numeric - est.analytic) / scale;
  return est;
}

double jump_estimate(const KernelSolution& sol, int p) {
  JumpEstimate est = jump_estimate_detail(sol, p);
  if (std::abs(est.analytic) < 1e-14 && std::abs(est.numeric) < 1e-6) {
    return 0.0;  // degenerate potential
  }
  if (est.rel_dev > 0.10)
    throw ResolutionError(
        "jump_estimate: numeric and analytic estimates disagree by " +
        std::to_string(est.rel_dev * 100.0) + "% — increase kernel N");
  return est.analytic;
}

namespace {
constexpr char kMagic[8] = {'W', 'R', 'K', 'C', '1', 0, 0, 0};
}

void save_kernel(const KernelSolution& sol, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_kernel: cannot open " + path);
  out.write(kMagic, 8);
  const std::int32_t N = sol.grid.N, p = sol.p, iters = sol.iterations;
  const double a = sol.grid.a;
  out.write(reinterpret_cast<const char*>(&N), 4);
  out.write(reinterpret_cast<const char*>(&a), 8);
  out.write(reinterpret_cast<const char*>(&sol.lambda), 8);
  out.write(reinterpret_cast<const char*>(&p), 4);
  out.write(reinterpret_cast<const char*>(&sol.qf_jump), 8);
  out.write(reinterpret_cast<const char*>(&iters), 4);
  out.write(reinterpret_cast<const char*>(&sol.residual), 8);
  out.write(reinterpret_cast<const char*>(&sol.contraction_M), 8);
  auto dump = [&](const std::vector<double>& v) {
    const std::uint64_t n = v.size();
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(n * 8));
  };
  dump(sol.K);
  dump(sol.K1);
  dump(sol.dKu);
  dump(sol.dKv);
  dump(sol.increment_sup);
}

bool load_kernel(KernelSolution& sol, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) return false;
  std::int32_t N = 0, p = 0, iters = 0;
  double a = 0.0;
  in.read(reinterpret_cast<char*>(&N), 4);
  in.read(reinterpret_cast<char*>(&a), 8);
  in.read(reinterpret_cast<char*>(&sol.lambda), 8);
  in.read(reinterpret_cast<char*>(&p), 4);
  in.read(reinterpret_cast<char*>(&sol.qf_jump), 8);
  in.read(reinterpret_cast<char*>(&iters), 4);
  in.read(reinterpret_cast<char*>(&sol.residual), 8);
  in.read(reinterpret_cast<char*>(&sol.contraction_M), 8);
  if (!in || N < 2) return false;
  sol.grid = TriGrid{N, a};
  sol.p = p;
  sol.iterations = iters;
  sol.jump_s_p = -std::pow(2.0, -(p + 1)) * sol.qf_jump;
  auto slurp = [&](std::vector<double>& v) -> bool {
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    if (!in || n > (1ull << 32)) return false;
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * 8));
    return static_cast<bool>(in);
  };
  if (!slurp(sol.K) || !slurp(sol.K1) || !slurp(sol.dKu) || !slurp(sol.dKv) ||
      !slurp(sol.increment_sup))
    return false;
  if (sol.K.size() != sol.grid.nodes()) return false;
  const TriGrid& g = sol.grid;
  sol.trace_s.resize(static_cast<std::size_t>(g.N) + 1);
  sol.trace_K.resize(sol.trace_s.size());
  sol.trace_dKx.resize(sol.trace_s.size());
  for (int i = 0; i <= g.N; ++i) {
    sol.trace_s[static_cast<std::size_t>(i)] = 2.0 * g.u(i);
    sol.trace_K[static_cast<std::size_t>(i)] = sol.K[g.idx(i, i)];
    sol.trace_dKx[static_cast<std::size_t>(i)] =
        0.5 * (sol.dKu[g.idx(i, i)] - sol.dKv[g.idx(i, i)]);
  }
  return true;
}

}  // namespace regge::kernel
