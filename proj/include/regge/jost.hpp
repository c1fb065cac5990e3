#pragma once

#include <complex>
#include <functional>

#include "regge/kernel.hpp"

namespace regge::jost {

using cplx = std::complex<double>;

// Modified Jost solution of the unperturbed operator: J_z(sqrt(lambda) e^{-x}).
// In lambda = 0 debug mode this is e^{-x z}.
cplx psi_unperturbed(double x, cplx z, double lambda);

// psi(0,z) = J_z(sqrt(lambda)) + int_0^{2a} K(0,s) J_z(sqrt(lambda) e^{-s}) ds,
// the s-integral truncated exactly at 2a (kernel support) and evaluated by
// composite Simpson on the kernel trace.
cplx psi(cplx z, const kernel::KernelSolution& ker, double lambda);

// psi'(0,z) = -sqrt(lambda) J'_z(sqrt(lambda)) - K(0,0) J_z(sqrt(lambda))
//             + int_0^{2a} d_x K(0,s) J_z(sqrt(lambda) e^{-s}) ds.
cplx psi_prime(cplx z, const kernel::KernelSolution& ker, double lambda);

struct WeylValue {
  cplx value{0.0, 0.0};
  bool pole = false;  // |psi(0,z)| below 1e-12 x local scale
};

// m(z) = psi'(0,z) / psi(0,z), or a pole flag.
WeylValue weyl_m(cplx z, const kernel::KernelSolution& ker, double lambda);

struct IdentityResiduals {
  double wronskian = 0.0;        // |W(psi(0,z), psi(0,-z)) - 2 sin(pi z)/pi|
  double reflection = 0.0;       // residual of m(z) = m(-z) - 2sin(pi z)/(pi psi psi)
  double wronskian_scale = 1.0;  // magnitude of the cancelling terms
  double reflection_scale = 1.0;
};

IdentityResiduals identity_checks(cplx z, const kernel::KernelSolution& ker,
                                  double lambda);

// Classical Jost normalization factor Gamma(z+1) 2^z lambda^{-z/2} (1 when
// lambda = 0: the classical and modified solutions coincide).
cplx classical_normalization(cplx z, double lambda);

// psi~(0, ik) in the classical normalization, evaluated with a Filon rule so
// accuracy is uniform in k (used by the S-function sweep).
cplx psi_tilde_imag_axis(double k, const kernel::KernelSolution& ker,
                         double lambda);

// n-th z-derivative by trapezoid on a Cauchy circle (spectrally accurate).
cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx z0, double radius,
                       int order = 1, int points = 32);

}  // namespace regge::jost
