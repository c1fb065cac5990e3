#pragma once

#include <complex>
#include <vector>

#include "regge/kernel.hpp"
#include "regge/model.hpp"
#include "regge/poles.hpp"

namespace regge::wt {

using cplx = std::complex<double>;

// Pole/residue model of the meromorphically extended Weyl-Titchmarsh
// function, with the affine data at z = 0 needed by the residue formula.
struct WeylModel {
  std::vector<poles::ReggePole> poles;  // |z_i| <= truncation_radius
  cplx m0{0.0, 0.0};
  cplx m0_prime{0.0, 0.0};
  bool zero_pole_mode = false;  // psi(0,0) = 0 variant
  cplx g1{0.0, 0.0};            // g'(0) with g(mu) = mu m(mu)
  cplx g2{0.0, 0.0};            // g''(0)/2
  cplx res0{0.0, 0.0};          // res_0(m)
  double truncation_radius = 0.0;
};

WeylModel build_weyl_model(const std::vector<poles::ReggePole>& all_poles,
                           const kernel::KernelSolution& ker, double lambda,
                           double truncation_radius);

// m(z) = m(0) + z m'(0) + sum_i res_{z_i}(h_z m), h_z(mu) = (z/mu)^2/(z-mu),
// truncated to the stored poles. Throws DomainError within 1e-6 of a pole.
cplx reconstruct_m(cplx z, const WeylModel& model);

struct SyntheticExpansion {
  std::vector<std::pair<cplx, cplx>> terms;  // (z_i, a_i)
  bool laurent_fallback = false;             // a non-simple pole was present
};

// Coefficients of M(-z^2) = -z + sum a_i / (z - z_i).
SyntheticExpansion synthetic_expansion(const WeylModel& model);
cplx evaluate_synthetic(cplx z, const SyntheticExpansion& s);

// Reported error budget for a truncated evaluation at z: estimated omitted
// tail plus the numerical floor of the stored residues.
double truncation_budget(cplx z, const WeylModel& model);

struct DtnEntry {
  double z_k = 0.0;
  cplx value{0.0, 0.0};
  bool pole_collision = false;  // z_k within 1e-6 of a Regge pole
};

// Lambda(lambda, z_k) = -[ m(z_k) - (n/2 - 1) f'(0)/f(0) ] per transversal
// mode. use_reconstruction selects the pole-sum evaluation; otherwise m is
// evaluated directly from the kernel.
std::vector<DtnEntry> dtn_multipliers(const WeylModel& model,
                                      const model::TransversalSpectrum& spectrum,
                                      double f0, double f0_prime, int n,
                                      const kernel::KernelSolution& ker,
                                      double lambda,
                                      bool use_reconstruction = true);

// (1/2 pi i) oint_{gamma_n} h_z(mu) m(mu) dmu on the two-arc contour with
// radii E~((2 pi n + tau)/2a) and (2 pi n + tau)/2a joined along
// Re z = -eps |Im z|. Used by the contour-vanishing property test.
cplx contour_residue_integral(int n_index, double eps, double tau, cplx z,
                              const kernel::KernelSolution& ker, double lambda,
                              int samples_per_arc = 600);

// tau maximizing min |psi| over the near-imaginary-axis arc of radius
// (2 pi n + tau)/2a (coarse 1-D scan).
double choose_arc_tau(int n_index, double eps,
                      const kernel::KernelSolution& ker, double lambda);

}  // namespace regge::wt
