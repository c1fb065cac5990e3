#pragma once

#include <complex>
#include <vector>

#include "regge/kernel.hpp"
#include "regge/model.hpp"

namespace regge::marchenko {

using cplx = std::complex<double>;

struct BoundState {
  double alpha = 0.0;  // Jost zero on the positive real axis
  double m = 0.0;      // norming constant, int |phi|^2 > 0
};

struct ScatteringData {
  std::vector<double> k_grid;
  std::vector<cplx> S;              // S(k) = psi~(0,ik)/psi~(0,-ik), |S| = 1
  std::vector<BoundState> bound_states;
  double lattice_h = 0.0;           // spacing of the F lattice
  std::vector<double> F;            // F(j h), j = 0..size-1
  double x_max = 0.0;               // F covers [0, 2 x_max]
  double k_max = 0.0;
  double tail_estimate = 0.0;       // reported bound on the omitted k-tail
};

// S(k) on a grid of real frequencies. Throws DataError when the
// denominator psi~(0,-ik) vanishes (real resonance on the axis).
std::vector<cplx> s_function(const std::vector<double>& k_grid,
                             const kernel::KernelSolution& ker, double lambda);

// Norming constant m_k = -psi~'(0,alpha) psi~.(0,alpha) / (2 alpha).
double norming_constant(double alpha, const kernel::KernelSolution& ker,
                        double lambda);

// Jost zeros on the positive real axis (negative Dirichlet eigenvalues).
std::vector<double> find_bound_states(const kernel::KernelSolution& ker,
                                      double lambda);

struct AssembleOptions {
  double k_max = 0.0;      // 0: default 200/a
  double k_step = 0.05;    // S-grid spacing (halved into Filon panels)
  double lattice_h = 0.02; // F lattice spacing
  double x_max = 0.0;      // 0: default 4a + 5/min(alpha, 1)
};

// F(x) = sum_k e^{-alpha_k x}/m_k + (1/2 pi) int_R (1 - S(k)) e^{ikx} dk on a
// uniform lattice over [0, 2 x_max]; the oscillatory integral uses a
// Filon-Simpson rule over the full symmetric k-range.
ScatteringData assemble_F(const kernel::KernelSolution& ker, double lambda,
                          const AssembleOptions& opts = {});

// Synthetic data: bound states plus S == 1 (tests).
ScatteringData synthetic_data(const std::vector<BoundState>& bound,
                              double lattice_h, double x_max);

struct GlmOptions {
  double cond_limit = 1e10;
  double x_solve_max = 0.0;  // 0: x_max of the data
};

struct GlmResult {
  std::vector<double> x;        // lattice points where K(x,.) was solved
  std::vector<double> K_diag;   // K(x,x)
  std::vector<double> q;        // -2 d/dx K(x,x), centered differences
  std::vector<double> qf;       // q - q0, q0 = -lambda e^{-2x}
  double max_condition = 0.0;
};

// Solve the basic integral equation F(x+y) + K(x,y) + int_x^X K(x,t) F(t+y) dt = 0
// on the lattice, one dense solve per x (standard Marchenko form).
GlmResult solve_glm(const ScatteringData& data, double lambda,
                    double recover_x_max, const GlmOptions& opts = {});

// One GLM row K(x, .) on the t-lattice (exposed for tests).
std::vector<double> solve_glm_row(const ScatteringData& data, double x,
                                  const GlmOptions& opts = {});

struct RoundtripReport {
  std::vector<double> x;
  std::vector<double> qf_true;
  std::vector<double> qf_recovered;
  double l2_rel = 0.0;
  double linf = 0.0;
  double k_max = 0.0;
  double lattice_h = 0.0;
  double tail_estimate = 0.0;
  std::vector<BoundState> bound_states;
};

struct RoundtripOptions {
  AssembleOptions assemble;
  GlmOptions glm;
  double compare_x_max = 0.0;  // 0: a + 0.5
};

RoundtripReport marchenko_roundtrip(const model::PotentialTable& pot,
                                    const kernel::KernelSolution& ker,
                                    double lambda,
                                    const RoundtripOptions& opts = {});

}  // namespace regge::marchenko
