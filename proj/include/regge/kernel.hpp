#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "regge/model.hpp"

namespace regge::kernel {

// Triangular grid over Omega_0 = {0 <= x <= t, x+t <= 2a} in characteristic
// coordinates u = (t+x)/2, v = (t-x)/2: nodes (u_i, v_j) = (i,j) a/N with
// j <= i. Node spacing along x (and t) is h = 2a/N.
struct TriGrid {
  int N = 0;
  double a = 1.0;

  double hu() const { return a / N; }                 // spacing in u and v
  double h_xt() const { return 2.0 * a / N; }         // spacing in x and t
  std::size_t nodes() const {
    return static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(N + 2) / 2;
  }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(i + 1) / 2 +
           static_cast<std::size_t>(j);
  }
  double u(int i) const { return a * i / N; }
  double v(int j) const { return a * j / N; }
  double x(int i, int j) const { return u(i) - v(j); }
  double t(int i, int j) const { return u(i) + v(j); }
};

// Node field on a TriGrid (triangular packed storage).
using TriField = std::vector<double>;

struct KernelSolution {
  TriGrid grid;
  double lambda = 0.0;
  int p = 1;
  double qf_jump = 0.0;   // d^{p-1} Q_f(a^-)
  double jump_s_p = 0.0;  // analytic d^p_s K(0, 2a^-) = -2^{-(p+1)} qf_jump

  TriField K;    // fixed-point kernel
  TriField K1;   // first Picard term (1/2) int_u^a Q_f
  TriField dKu;  // d/d((t+x)/2) K
  TriField dKv;  // d/d((t-x)/2) K

  // x = 0 trace (nodes i=j): s_i = 2 u_i, values K(0,s) and d_x K(0,s).
  std::vector<double> trace_s, trace_K, trace_dKx;

  int iterations = 0;
  double residual = 0.0;
  double contraction_M = 0.0;             // numerical M_{q,q0}
  std::vector<double> increment_sup;      // sup-norm of each Picard term

  double K00() const { return trace_K.empty() ? 0.0 : trace_K.front(); }
};

// One application of the Volterra step G_{Q,1} to a node field, by composite
// Simpson quadrature in characteristic coordinates.
TriField picard_term(const TriField& prev, const model::PotentialTable& pot,
                     double lambda, const TriGrid& grid);

// Sum the Picard series K = sum K_{Q,n} to sup-norm increment < tol;
// derivative fields from the integral formulas (never from differencing K).
KernelSolution solve_kernel(const model::PotentialTable& pot, double lambda,
                            int N, double tol);

struct JumpEstimate {
  double analytic = 0.0;  // authoritative value
  double numeric = 0.0;   // one-sided difference with Richardson extrapolation
  double rel_dev = 0.0;
};

// d^p_s K(0, 2a^-): analytic candidate cross-validated by a grid estimate;
// throws ResolutionError when they disagree by more than 10%.
double jump_estimate(const KernelSolution& sol, int p);
JumpEstimate jump_estimate_detail(const KernelSolution& sol, int p);

// Binary cache (layout documented in README).
void save_kernel(const KernelSolution& sol, const std::string& path);
bool load_kernel(KernelSolution& sol, const std::string& path);

}  // namespace regge::kernel
