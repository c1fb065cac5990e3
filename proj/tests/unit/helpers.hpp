#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "regge/kernel.hpp"
#include "regge/model.hpp"

namespace testutil {

using cplx = std::complex<double>;

// V = c x (a-x)^2: the C^1 template with a jump in V'' at a (p = 1).
inline regge::model::WarpSpec jump_potential_p1(double c, double a = 1.0, int n = 3,
                                     double lambda = 1.0) {
  regge::model::WarpSpec spec;
  spec.n = n;
  spec.lambda = lambda;
  spec.a = a;
  spec.p = 1;
  spec.V.breakpoints = {0.0, a};
  spec.V.coeff = {{0.0, c * a * a, -2.0 * c * a, c}};
  return spec;
}

// V = c x^2 (a-x)^3: C^2 with a jump in V''' at a (p = 2).
inline regge::model::WarpSpec jump_potential_p2(double c, double a = 1.0, int n = 3,
                                     double lambda = 1.0) {
  regge::model::WarpSpec spec;
  spec.n = n;
  spec.lambda = lambda;
  spec.a = a;
  spec.p = 2;
  spec.V.breakpoints = {0.0, a};
  spec.V.coeff = {{0.0, 0.0, c * a * a * a, -3.0 * c * a * a, 3.0 * c * a, -c}};
  return spec;
}

inline regge::model::WarpSpec unperturbed(double a = 1.0, int n = 3,
                                          double lambda = 1.0) {
  regge::model::WarpSpec spec;
  spec.n = n;
  spec.lambda = lambda;
  spec.a = a;
  spec.p = 1;
  spec.V.breakpoints = {0.0, a};
  spec.V.coeff = {{0.0}};
  return spec;
}

// Closed-form Q_f for the p=1 template (independent hand-derived oracle).
inline double qf_oracle_p1(double x, double c, double a, int n, double lambda) {
  const double w = 0.5 * (n - 2);
  const double e = std::exp(-x);
  const double f = e + c * x * (a - x) * (a - x);
  const double f1 = -e + c * (a - x) * (a - 3.0 * x);
  const double f2 = e + c * (6.0 * x - 4.0 * a);
  const double qf = w * f2 / f + w * (w - 1.0) * (f1 / f) * (f1 / f);
  return qf - w * w - lambda * (f * f - e * e);
}

// Adaptive Simpson oracle, independent of the library quadratures.
inline double adaptive_simpson(const std::function<double(double)>& f, double lo,
                               double hi, double tol = 1e-12, int depth = 24) {
  std::function<double(double, double, double, double, double, int)> rec =
      [&](double a, double b, double fa, double fm, double fb, int d) -> double {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(a, m, fa, flm, fm, d - 1) + rec(m, b, fm, frm, fb, d - 1);
  };
  const double m = 0.5 * (lo + hi);
  return rec(lo, hi, f(lo), f(m), f(hi), depth);
}

// Constant well, lambda = 0: psi(0,z) and psi'(0,z) in closed form.
inline cplx const_well_psi(cplx z, double c, double a) {
  const cplx mu = std::sqrt(z * z + c);
  return std::exp(-a * z) * (std::cosh(a * mu) + (z / mu) * std::sinh(a * mu));
}
inline cplx const_well_psi_prime(cplx z, double c, double a) {
  const cplx mu = std::sqrt(z * z + c);
  return std::exp(-a * z) * (-mu * std::sinh(a * mu) - z * std::cosh(a * mu));
}

inline std::mt19937& rng() {
  static std::mt19937 gen(0x5eed5eedu);
  return gen;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng());
}

}  // namespace testutil
