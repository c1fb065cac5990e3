#include "regge/wt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regge/errors.hpp"
#include "regge/jost.hpp"

namespace regge::wt {

namespace {

constexpr double kPi = 3.14159265358979323846;

cplx m_direct(cplx z, const kernel::KernelSolution& ker, double lambda) {
  return jost::psi_prime(z, ker, lambda) / jost::psi(z, ker, lambda);
}

// Derivatives of h_z(mu) = z^2 mu^{-2} (z-mu)^{-1} in mu at mu0, orders 0..n.
std::vector<cplx> hz_derivatives(cplx z, cplx mu0, int n) {
  // d^k/dmu^k mu^{-2}    = (-1)^k (k+1)! mu^{-2-k}
  // d^k/dmu^k (z-mu)^{-1} =        k!  (z-mu)^{-1-k}
  std::vector<cplx> out(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    cplx acc(0.0, 0.0);
    double binom = 1.0;
    for (int i = 0; i <= k; ++i) {
      double f1 = 1.0;  // (i+1)!
      for (int m = 2; m <= i + 1; ++m) f1 *= m;
      double f2 = 1.0;  // (k-i)!
      for (int m = 2; m <= k - i; ++m) f2 *= m;
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      acc += binom * sign * f1 * std::pow(mu0, cplx(-2.0 - i)) * f2 *
             std::pow(z - mu0, cplx(-1.0 - (k - i)));
      binom = binom * (k - i) / (i + 1);
    }
    out[static_cast<std::size_t>(k)] = z * z * acc;
  }
  return out;
}

}  // namespace

WeylModel build_weyl_model(const std::vector<poles::ReggePole>& all_poles,
                           const kernel::KernelSolution& ker, double lambda,
                           double truncation_radius) {
  WeylModel model;
  model.truncation_radius = truncation_radius;
  for (const auto& p : all_poles)
    if (std::abs(p.location) <= truncation_radius) model.poles.push_back(p);
  std::sort(model.poles.begin(), model.poles.end(),
            [](const poles::ReggePole& a, const poles::ReggePole& b) {
              if (std::abs(a.location) != std::abs(b.location))
                return std::abs(a.location) < std::abs(b.location);
              return a.location.imag() < b.location.imag();
            });

  // Radius for the Cauchy circles at 0: clear of the nearest pole.
  double nearest = std::numeric_limits<double>::max();
  for (const auto& p : model.poles)
    nearest = std::min(nearest, std::abs(p.location));
  const double r0 = std::max(1e-3, std::min(0.2, 0.5 * nearest));

  const cplx psi00 = jost::psi(cplx(0.0, 0.0), ker, lambda);
  double scale = std::abs(jost::psi(cplx(r0, 0.0), ker, lambda)) +
                 std::abs(jost::psi(cplx(-r0, 0.0), ker, lambda));
  model.zero_pole_mode = std::abs(psi00) < 1e-10 * std::max(scale, 1e-30);

  auto m_fun = [&](cplx w) { return m_direct(w, ker, lambda); };
  if (!model.zero_pole_mode) {
    model.m0 = m_fun(cplx(0.0, 0.0));
    model.m0_prime = jost::cauchy_derivative(m_fun, cplx(0.0, 0.0), r0, 1, 64);
  } else {
    // g(mu) = mu m(mu) is analytic at 0; res_0(m) = g(0).
    auto g_fun = [&](cplx w) { return w * m_direct(w, ker, lambda); };
    // trapezoid means on the circle
    const int M = 64;
    cplx g0(0.0, 0.0);
    for (int k = 0; k < M; ++k) {
      const double t = 2.0 * kPi * k / M;
      g0 += g_fun(r0 * std::exp(cplx(0.0, t)));
    }
    model.res0 = g0 / static_cast<double>(M);
    model.g1 = jost::cauchy_derivative(g_fun, cplx(0.0, 0.0), r0, 1, 64);
    model.g2 = 0.5 * jost::cauchy_derivative(g_fun, cplx(0.0, 0.0), r0, 2, 64);
  }
  return model;
}

cplx reconstruct_m(cplx z, const WeylModel& model) {
  for (const auto& p : model.poles)
    if (std::abs(z - p.location) < 1e-6)
      throw DomainError("reconstruct_m: z within 1e-6 of a stored pole");

  cplx acc = model.zero_pole_mode
                 ? model.g1 + z * model.g2 + model.res0 / z
                 : model.m0 + z * model.m0_prime;
  for (const auto& p : model.poles) {
    const cplx zi = p.location;
    if (model.zero_pole_mode && std::abs(zi) < 1e-12) continue;
    if (p.multiplicity <= 1 || p.laurent.empty()) {
      acc += p.residue * (z / zi) * (z / zi) / (z - zi);
    } else {
      // res_{z_i}(h_z m) = sum_k c_{-k} h_z^{(k-1)}(z_i) / (k-1)!
      const int j = static_cast<int>(p.laurent.size());
      const auto hk = hz_derivatives(z, zi, j - 1);
      double fact = 1.0;
      for (int k = 1; k <= j; ++k) {
        acc += p.laurent[static_cast<std::size_t>(k - 1)] *
               hk[static_cast<std::size_t>(k - 1)] / fact;
        fact *= k;
      }
    }
  }
  return acc;
}

SyntheticExpansion synthetic_expansion(const WeylModel& model) {
  SyntheticExpansion s;
  for (const auto& p : model.poles) {
    if (p.multiplicity > 1) s.laurent_fallback = true;
    s.terms.emplace_back(p.location, p.residue);
  }
  return s;
}

cplx evaluate_synthetic(cplx z, const SyntheticExpansion& s) {
  cplx acc = -z;
  for (const auto& [zi, ai] : s.terms) acc += ai / (z - zi);
  return acc;
}

double truncation_budget(cplx z, const WeylModel& model) {
  // Tail estimate: residues on the outermost ring, continued at the same
  // magnitude, summed against |h_z| ~ |z|^2/(R^2 (R - |z|)).
  const double R = model.truncation_radius;
  double ring_max = 0.0;
  int ring_count = 0;
  for (const auto& p : model.poles) {
    if (std::abs(p.location) > 0.75 * R) {
      ring_max = std::max(ring_max, std::abs(p.residue));
      ++ring_count;
    }
  }
  const double dist = std::max(R - std::abs(z), 0.5 * R);
  const double tail = ring_max * (std::norm(z) / (R * R)) / dist *
                      std::max(3, ring_count) * 3.0;
  // Numerical floor of the stored residues and affine data.
  double floor = 1e-7 * (1.0 + std::abs(model.m0) + std::abs(z) * std::abs(model.m0_prime));
  return tail + floor;
}

std::vector<DtnEntry> dtn_multipliers(const WeylModel& model,
                                      const model::TransversalSpectrum& spectrum,
                                      double f0, double f0_prime, int n,
                                      const kernel::KernelSolution& ker,
                                      double lambda, bool use_reconstruction) {
  std::vector<DtnEntry> out;
  const double geo = (0.5 * n - 1.0) * f0_prime / f0;
  for (double zk : spectrum.z) {
    DtnEntry e;
    e.z_k = zk;
    double nearest = std::numeric_limits<double>::max();
    for (const auto& p : model.poles)
      nearest = std::min(nearest, std::abs(cplx(zk, 0.0) - p.location));
    if (nearest < 1e-6) {
      e.pole_collision = true;  // lambda in the Dirichlet spectrum for this mode
      out.push_back(e);
      continue;
    }
    const cplx m = use_reconstruction ? reconstruct_m(cplx(zk, 0.0), model)
                                      : m_direct(cplx(zk, 0.0), ker, lambda);
    e.value = -(m - geo);
    out.push_back(e);
  }
  return out;
}

namespace {

// Piecewise contour gamma_n: arc of radius r1 inside the sector
// {Re z < -eps |Im z|}, arc of radius r2 outside it, joined by radial
// segments on the rays Re z = -eps |Im z|.
struct ContourPiece {
  cplx at(double t) const {  // t in [0,1]
    if (is_arc) {
      const double th = th0 + t * (th1 - th0);
      return radius * std::exp(cplx(0.0, th));
    }
    return z0 + t * (z1 - z0);
  }
  cplx dt(double t) const {
    if (is_arc) {
      const double th = th0 + t * (th1 - th0);
      return radius * (th1 - th0) * cplx(0.0, 1.0) * std::exp(cplx(0.0, th));
    }
    (void)t;
    return z1 - z0;
  }
  bool is_arc = true;
  double radius = 1.0, th0 = 0.0, th1 = 0.0;
  cplx z0{0.0, 0.0}, z1{0.0, 0.0};
};

double half_integer_near(double x) {
  // closest half-integer; ties at integers resolved upward
  const double k = std::floor(x);
  const double lo = k + 0.5, hi = k + 1.5, lo2 = k - 0.5;
  double best = lo;
  for (double c : {lo2, lo, hi})
    if (std::abs(c - x) < std::abs(best - x)) best = c;
  if (std::abs(best - x) == 0.5 && std::floor(x) == x) best = x + 0.5;
  return best;
}

}  // namespace

double choose_arc_tau(int n_index, double eps,
                      const kernel::KernelSolution& ker, double lambda) {
  const double a = ker.grid.a;
  double best_tau = 0.0, best_min = -1.0;
  const double th_star = std::atan2(1.0, -eps);  // boundary angle in (pi/2, pi)
  for (int it = 0; it < 48; ++it) {
    const double tau = 2.0 * kPi * it / 48.0;
    const double r = (2.0 * kPi * n_index + tau) / (2.0 * a);
    double mn = std::numeric_limits<double>::max();
    for (int s = 0; s <= 24; ++s) {
      // upper near-axis arc between th_star and pi/2, plus mirror
      const double th = th_star + (0.5 * kPi - th_star) * s / 24.0;
      const cplx z = r * std::exp(cplx(0.0, th));
      const cplx pref = 1.0 / jost::classical_normalization(z, lambda);
      const double g = std::abs(jost::psi(z, ker, lambda) / pref);
      mn = std::min(mn, g);
      const cplx zc = std::conj(z);
      const double gc =
          std::abs(jost::psi(zc, ker, lambda) /
                   (1.0 / jost::classical_normalization(zc, lambda)));
      mn = std::min(mn, gc);
    }
    if (mn > best_min) {
      best_min = mn;
      best_tau = tau;
    }
  }
  return best_tau;
}

cplx contour_residue_integral(int n_index, double eps, double tau, cplx z,
                              const kernel::KernelSolution& ker, double lambda,
                              int samples_per_arc) {
  const double a = ker.grid.a;
  const double r2 = (2.0 * kPi * n_index + tau) / (2.0 * a);
  const double r1 = half_integer_near(r2);
  const double th_b = std::atan2(1.0, -eps);  // in (pi/2, pi): Re = -eps|Im| ray

  std::vector<ContourPiece> pieces;
  // sector arc (radius r1) from th_b to 2 pi - th_b, through the negative axis
  pieces.push_back({true, r1, th_b, 2.0 * kPi - th_b, {}, {}});
  // radial joins and the outer arc through the positive axis
  ContourPiece seg1;
  seg1.is_arc = false;
  seg1.z0 = r1 * std::exp(cplx(0.0, 2.0 * kPi - th_b));
  seg1.z1 = r2 * std::exp(cplx(0.0, 2.0 * kPi - th_b));
  pieces.push_back(seg1);
  pieces.push_back({true, r2, 2.0 * kPi - th_b, 2.0 * kPi + th_b, {}, {}});
  ContourPiece seg2;
  seg2.is_arc = false;
  seg2.z0 = r2 * std::exp(cplx(0.0, th_b));
  seg2.z1 = r1 * std::exp(cplx(0.0, th_b));
  pieces.push_back(seg2);

  auto h = [z](cplx mu) { return (z / mu) * (z / mu) / (z - mu); };
  cplx acc(0.0, 0.0);
  for (const auto& piece : pieces) {
    const int M = piece.is_arc ? samples_per_arc : samples_per_arc / 4;
    for (int k = 0; k < M; ++k) {
      const double t = (k + 0.5) / M;  // midpoint rule, avoids the corners
      const cplx mu = piece.at(t);
      const cplx m = m_direct(mu, ker, lambda);
      acc += h(mu) * m * piece.dt(t) / static_cast<double>(M);
    }
  }
  return acc / cplx(0.0, 2.0 * kPi);
}

}  // namespace regge::wt
