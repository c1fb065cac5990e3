#pragma once

#include <functional>
#include <vector>

namespace regge::model {

// Piecewise polynomial on [0, a]: piece i lives on
// [breakpoints[i], breakpoints[i+1]) with coefficients in powers of
// (x - breakpoints[i]). Identically zero for x >= breakpoints.back().
struct PiecewisePoly {
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> coeff;

  double eval(double x, int deriv = 0) const;
  // One-sided value of the d-th derivative at the right end of piece i.
  double eval_left_at(double x_right, int piece, int deriv) const;
  bool is_zero() const;
  double support_end() const { return breakpoints.empty() ? 0.0 : breakpoints.back(); }
};

// Geometric/analytic input: dimension, energy, perturbation V of the
// conformal factor f = e^{-x} + V with supp V = [0, a].
struct WarpSpec {
  int n = 3;
  double lambda = 1.0;
  double a = 1.0;
  int p = 1;
  PiecewisePoly V;

  void validate(bool allow_lambda_zero = false) const;
};

// Sampled Q_f on [0, a] plus the jump data at a and an exact evaluator.
struct PotentialTable {
  std::vector<double> grid;
  std::vector<double> qf_values;
  int jump_order = 1;        // p
  double jump_value = 0.0;   // d^{p-1} Q_f (a^-); Q_f == 0 beyond a
  double qf_left_a = 0.0;    // one-sided limit Q_f(a^-)
  double f0 = 1.0;
  double f0_prime = -1.0;
  double a = 1.0;
  bool degenerate = false;   // V == 0 (unperturbed)
  std::function<double(double)> qf;   // exact pointwise evaluator
  std::vector<double> pieces;         // smoothness breakpoints incl. 0 and a

  // integral of Q_f over [x, a] by per-piece Gauss-Legendre quadrature.
  double integral_tail(double x) const;
};

PotentialTable build_potential(const WarpSpec& spec, int grid_size);

// Table backed by an arbitrary evaluator (debug/test potentials). The jump
// metadata is supplied by the caller.
PotentialTable potential_from_function(std::function<double(double)> qf, double a,
                                       int p, double jump_value, int grid_size,
                                       double f0 = 1.0, double f0_prime = -1.0,
                                       std::vector<double> pieces = {});

// Transversal spectrum: eigenvalues mu_k^2 of -Delta_K and shifted momenta
// z_k = sqrt(mu_k^2 + (n-2)^2/4).
struct TransversalSpectrum {
  std::vector<double> mu_sq;
  std::vector<int> multiplicity;
  std::vector<double> z;
};

TransversalSpectrum shifted_momenta(const std::vector<double>& mu_sq, int n);
TransversalSpectrum shifted_momenta(const std::vector<double>& mu_sq,
                                    const std::vector<int>& multiplicity, int n);

// Round sphere S^{n-1}: mu_k^2 = k(k+n-2) with harmonic multiplicities.
std::vector<std::pair<double, int>> sphere_spectrum(int n, int kmax);

}  // namespace regge::model
