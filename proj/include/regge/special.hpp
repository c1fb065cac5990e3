#pragma once

#include <complex>
#include <vector>

namespace regge::special {

using cplx = std::complex<double>;

// Complex gamma function (Lanczos rational approximation, reflection for
// Re z < 1/2). Relative error below 1e-12 for |z| <= 100 away from poles.
// Throws GammaPoleError at nonpositive integers.
cplx gamma(cplx z);

// 1/Gamma(z). Entire; never throws.
cplx recip_gamma(cplx z);

// Power-series coefficients 1/Gamma(z+m+1) of J_z, anchored near
// round(-Re z) so the recurrence never divides by a small z+m.
// Reusable across many arguments t with the same order z.
class BesselOrder {
 public:
  BesselOrder(cplx z, double t_max);
  cplx operator()(double t) const;  // J_z(t), principal branch of (t/2)^z
  cplx order() const { return z_; }

 private:
  cplx z_;
  std::vector<cplx> c_;  // c_[m] = 1/Gamma(z+m+1)
  int anchor_ = 0;       // index the recurrence was seeded at
};

// J_z(t) for t in (0, t_max]; series truncated at 1e-16 relative term size.
cplx bessel_j(cplx z, double t);

// dJ_z/dt via the recurrence J'_z(t) = (z/t) J_z(t) - J_{z+1}(t).
cplx bessel_j_dt(cplx z, double t);

// J_z(t) Gamma(z+1) (2/t)^z = 1 + O(1/|z|) for z in U_delta
// (complement of delta-disks around the negative integers).
cplx normalized_ratio(cplx z, double t, double delta = 0.25);

// d^p/ds^p of R(s,z), where J_z(sqrt(lambda) e^{-s}) =
// lambda^{z/2} e^{-sz} / (2^z Gamma(z+1)) * (1 + R(s,z)). Requires z in
// U_delta.
cplx remainder_r(double s, cplx z, int deriv_order, double lambda,
                 double delta = 0.25);

// Distance from z to the set of negative integers {-1,-2,...}.
double dist_to_negative_integers(cplx z);

}  // namespace regge::special
