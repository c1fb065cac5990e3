#include "regge/special.hpp"

#include <cmath>
#include <limits>

#include "regge/errors.hpp"

namespace regge::special {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos coefficients, g = 607/128 (15-term set).
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

// Core Lanczos evaluation, valid for Re z >= 1/2.
cplx gamma_core(cplx z) {
  const cplx x = z - 1.0;
  cplx acc = kLanczos[0];
  for (int k = 1; k < 15; ++k) acc += kLanczos[k] / (x + static_cast<double>(k));
  const cplx t = x + (kLanczosG + 0.5);
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

}  // namespace

double dist_to_negative_integers(cplx z) {
  double re = z.real();
  if (re > -0.5) return std::abs(z + 1.0);
  double k = std::round(-re);
  if (k < 1) k = 1;
  return std::abs(z + k);
}

cplx gamma(cplx z) {
  if (z.real() < 0.5) {
    // Pole check before reflecting.
    const double k = std::round(z.real());
    if (k <= 0.0 && std::abs(z - k) < 1e-13) {
      throw GammaPoleError("gamma: pole at nonpositive integer",
                           static_cast<long>(k));
    }
    // Gamma(z) = pi / (sin(pi z) Gamma(1-z))
    return kPi / (std::sin(kPi * z) * gamma_core(1.0 - z));
  }
  return gamma_core(z);
}

cplx recip_gamma(cplx z) {
  if (z.real() < 0.5) return std::sin(kPi * z) * gamma_core(1.0 - z) / kPi;
  return 1.0 / gamma_core(z);
}

BesselOrder::BesselOrder(cplx z, double t_max) : z_(z) {
  if (!(t_max > 0.0)) t_max = 1.0;
  // Anchor the coefficient recurrence where z+m+1 is O(1): m0 = round(-Re z).
  int m0 = 0;
  if (z.real() < -0.5) m0 = static_cast<int>(std::round(-z.real()));
  // Enough terms that (t^2/4)^m / m! has dropped below 1e-22 past the anchor.
  const double q = t_max * t_max / 4.0;
  int extra = 8;
  double term = 1.0;
  for (int m = 1; m <= 192; ++m) {
    term *= q / m;
    if (term < 1e-22) {
      extra = m + 4;
      break;
    }
    extra = m + 4;
  }
  const int mmax = m0 + extra;
  if (mmax > 200)
    throw NumericError("bessel_j: series would exceed 200 terms");
  c_.assign(static_cast<std::size_t>(mmax) + 1, cplx(0.0, 0.0));
  anchor_ = m0;
  c_[static_cast<std::size_t>(m0)] = recip_gamma(z + static_cast<double>(m0 + 1));
  // Downward: c_{m-1} = c_m * (z+m); upward: c_{m+1} = c_m / (z+m+1).
  for (int m = m0; m >= 1; --m)
    c_[static_cast<std::size_t>(m - 1)] =
        c_[static_cast<std::size_t>(m)] * (z + static_cast<double>(m));
  for (int m = m0; m < mmax; ++m)
    c_[static_cast<std::size_t>(m + 1)] =
        c_[static_cast<std::size_t>(m)] / (z + static_cast<double>(m + 1));
}

cplx BesselOrder::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("bessel_j: argument t must be positive");
  const double q = -t * t / 4.0;
  cplx sum(0.0, 0.0);
  double pw = 1.0;
  const int n = static_cast<int>(c_.size());
  for (int m = 0; m < n; ++m) {
    const cplx term = c_[static_cast<std::size_t>(m)] * pw;
    sum += term;
    if (m >= anchor_ + 2 && std::abs(term) <= 1e-16 * std::abs(sum)) break;
    pw *= q / (m + 1);
  }
  // (t/2)^z with the real branch of log(t/2).
  return std::exp(z_ * std::log(t / 2.0)) * sum;
}

cplx bessel_j(cplx z, double t) { return BesselOrder(z, t)(t); }

cplx bessel_j_dt(cplx z, double t) {
  return (z / t) * bessel_j(z, t) - bessel_j(z + 1.0, t);
}

cplx normalized_ratio(cplx z, double t, double delta) {
  if (dist_to_negative_integers(z) <= delta)
    throw DomainError("normalized_ratio: z within delta of a negative integer");
  // 1 + sum_{m>=1} (-1)^m (t/2)^{2m} / (m! (z+1)_m)
  const double q = -t * t / 4.0;
  cplx sum(1.0, 0.0);
  cplx poch(1.0, 0.0);
  double fact = 1.0;
  double pw = 1.0;
  for (int m = 1; m <= 200; ++m) {
    poch *= z + static_cast<double>(m);
    fact *= m;
    pw *= q;
    const cplx term = pw / (fact * poch);
    sum += term;
    if (m >= 3 && std::abs(term) <= 1e-16 * std::abs(sum)) return sum;
  }
  throw NumericError("normalized_ratio: series did not converge in 200 terms");
}

cplx remainder_r(double s, cplx z, int deriv_order, double lambda,
                 double delta) {
  if (deriv_order < 0) throw DomainError("remainder_r: deriv_order < 0");
  if (dist_to_negative_integers(z) <= delta)
    throw DomainError("remainder_r: z within delta of a negative integer");
  // d^p/ds^p sum_{m>=1} (-1)^m (lambda e^{-2s}/4)^m / (m! (z+1)_m)
  //   = sum_{m>=1} (-1)^m (-2m)^p (lambda e^{-2s}/4)^m / (m! (z+1)_m).
  const double tau = lambda * std::exp(-2.0 * s) / 4.0;
  cplx sum(0.0, 0.0);
  cplx poch(1.0, 0.0);
  double fact = 1.0;
  double pw = 1.0;  // tau^m, sign handled explicitly
  for (int m = 1; m <= 200; ++m) {
    poch *= z + static_cast<double>(m);
    fact *= m;
    pw *= tau;
    double deriv_factor = 1.0;
    if (deriv_order > 0)
      deriv_factor = std::pow(-2.0 * m, static_cast<double>(deriv_order));
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    const cplx term = sign * deriv_factor * pw / (fact * poch);
    sum += term;
    if (m >= 3 && std::abs(term) <= 1e-16 * (std::abs(sum) + 1e-300)) return sum;
  }
  throw NumericError("remainder_r: series did not converge in 200 terms");
}

}  // namespace regge::special
