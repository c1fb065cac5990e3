#include "regge/jost.hpp"

#include <cmath>
#include <vector>

#include "regge/errors.hpp"
#include "regge/special.hpp"

namespace regge::jost {

namespace {

constexpr double kPi = 3.14159265358979323846;

// J_z(sqrt(lambda) e^{-s}) at every trace node, one coefficient setup per z.
void base_on_trace(cplx z, const kernel::KernelSolution& ker, double lambda,
                   std::vector<cplx>& out) {
  const auto& s = ker.trace_s;
  out.resize(s.size());
  if (lambda == 0.0) {
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = std::exp(-s[i] * z);
    return;
  }
  const double rl = std::sqrt(lambda);
  special::BesselOrder jz(z, rl);
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = jz(rl * std::exp(-s[i]));
}

cplx weighted_trace_integral(const std::vector<double>& weights,
                             const std::vector<cplx>& base, double h) {
  // weights holds K(0,s_i) or d_x K(0,s_i); Simpson row weights applied here.
  cplx acc(0.0, 0.0);
  const std::size_t n = base.size() - 1;
  for (std::size_t i = 0; i + 2 <= n; i += 2) {
    acc += weights[i] * base[i] + 4.0 * weights[i + 1] * base[i + 1] +
           weights[i + 2] * base[i + 2];
  }
  return acc * (h / 3.0);
}

}  // namespace

cplx psi_unperturbed(double x, cplx z, double lambda) {
  if (lambda == 0.0) return std::exp(-x * z);
  return special::bessel_j(z, std::sqrt(lambda) * std::exp(-x));
}

cplx psi(cplx z, const kernel::KernelSolution& ker, double lambda) {
  const double h = ker.trace_s[1] - ker.trace_s[0];
  std::vector<cplx> base;
  base_on_trace(z, ker, lambda, base);
  const cplx integral = weighted_trace_integral(ker.trace_K, base, h);
  return base.front() + integral;
}

cplx psi_prime(cplx z, const kernel::KernelSolution& ker, double lambda) {
  const double h = ker.trace_s[1] - ker.trace_s[0];
  std::vector<cplx> base;
  base_on_trace(z, ker, lambda, base);
  cplx boundary;
  if (lambda == 0.0) {
    boundary = -z;  // d/dx e^{-xz} at 0
  } else {
    const double rl = std::sqrt(lambda);
    boundary = -rl * special::bessel_j_dt(z, rl);
  }
  const cplx integral = weighted_trace_integral(ker.trace_dKx, base, h);
  return boundary - ker.K00() * base.front() + integral;
}

WeylValue weyl_m(cplx z, const kernel::KernelSolution& ker, double lambda) {
  const double h = ker.trace_s[1] - ker.trace_s[0];
  std::vector<cplx> base;
  base_on_trace(z, ker, lambda, base);
  const cplx p = base.front() + weighted_trace_integral(ker.trace_K, base, h);
  // Local scale: the terms that assembled psi, before cancellation. The
  // maximum of |J_z| over the whole trace cannot vanish at a zero of psi.
  double kmax = 0.0, bmax = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    kmax = std::max(kmax, std::abs(ker.trace_K[i]));
    bmax = std::max(bmax, std::abs(base[i]));
  }
  const double scale = bmax * (1.0 + 2.0 * ker.grid.a * kmax);
  WeylValue out;
  if (std::abs(p) < 1e-12 * scale) {
    out.pole = true;
    return out;
  }
  out.value = psi_prime(z, ker, lambda) / p;
  return out;
}

IdentityResiduals identity_checks(cplx z, const kernel::KernelSolution& ker,
                                  double lambda) {
  const cplx pz = psi(z, ker, lambda);
  const cplx pmz = psi(-z, ker, lambda);
  const cplx dz = psi_prime(z, ker, lambda);
  const cplx dmz = psi_prime(-z, ker, lambda);

  IdentityResiduals res;
  const cplx target = 2.0 * std::sin(kPi * z) / kPi;
  const cplx t1 = pz * dmz, t2 = dz * pmz;
  res.wronskian = std::abs(t1 - t2 - target);
  res.wronskian_scale = std::max({std::abs(t1), std::abs(t2), std::abs(target), 1.0});

  const cplx mz = dz / pz, mmz = dmz / pmz;
  const cplx corr = 2.0 * std::sin(kPi * z) / (kPi * pz * pmz);
  res.reflection = std::abs(mz - mmz + corr);
  res.reflection_scale = std::max({std::abs(mz), std::abs(mmz), std::abs(corr), 1.0});
  return res;
}

cplx classical_normalization(cplx z, double lambda) {
  if (lambda == 0.0) return cplx(1.0, 0.0);
  return special::gamma(z + 1.0) * std::exp(z * std::log(2.0)) *
         std::exp(-0.5 * z * std::log(lambda));
}

cplx psi_tilde_imag_axis(double k, const kernel::KernelSolution& ker,
                         double lambda) {
  // psi~(0,ik) = (1 + R(0,ik)) + int_0^{2a} K(0,s)(1 + R(s,ik)) e^{-iks} ds,
  // with R == 0 when lambda = 0. The e^{-iks} factor is handled by a Filon
  // rule (quadratic interpolation of the slow factor, exact moments), so the
  // error does not grow with k.
  const cplx z(0.0, k);
  const auto& s = ker.trace_s;
  const std::size_t n = s.size() - 1;  // even number of panels
  const double h = s[1] - s[0];

  std::vector<cplx> g(s.size());
  if (lambda == 0.0) {
    for (std::size_t i = 0; i < s.size(); ++i) g[i] = ker.trace_K[i];
  } else {
    for (std::size_t i = 0; i < s.size(); ++i)
      g[i] = ker.trace_K[i] * (1.0 + special::remainder_r(s[i], z, 0, lambda));
  }

  // Filon-Simpson moments for int_{-1}^{1} s^j e^{i theta s} ds with
  // theta = -k h (phase e^{-iks}).
  const double theta = -k * h;
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
  for (std::size_t i = 0; i + 2 <= n; i += 2) {
    const double smid = s[i + 1];
    const cplx phase = std::exp(cplx(0.0, -k * smid));
    acc += phase * (A * g[i] + B * g[i + 1] + C * g[i + 2]);
  }
  acc *= h;

  cplx head(1.0, 0.0);
  if (lambda != 0.0) head += special::remainder_r(0.0, z, 0, lambda);
  return head + acc;
}

cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx z0, double radius,
                       int order, int points) {
  // f^{(n)}(z0) = n! / (2 pi r^n) int_0^{2pi} f(z0 + r e^{i t}) e^{-i n t} dt
  cplx acc(0.0, 0.0);
  for (int k = 0; k < points; ++k) {
    const double t = 2.0 * kPi * k / points;
    const cplx w = z0 + radius * std::exp(cplx(0.0, t));
    acc += f(w) * std::exp(cplx(0.0, -order * t));
  }
  double factorial = 1.0;
  for (int m = 2; m <= order; ++m) factorial *= m;
  return acc * factorial / (static_cast<double>(points) * std::pow(radius, order));
}

}  // namespace regge::jost
