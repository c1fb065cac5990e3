#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "regge/kernel.hpp"

namespace regge::poles {

using cplx = std::complex<double>;

struct Rect {
  double re0 = 0, re1 = 0, im0 = 0, im1 = 0;
  double width() const { return re1 - re0; }
  double height() const { return im1 - im0; }
  bool contains(cplx z, double slack = 0.0) const {
    return z.real() >= re0 - slack && z.real() <= re1 + slack &&
           z.imag() >= im0 - slack && z.imag() <= im1 + slack;
  }
};

// Number of zeros of f inside the rectangle, by the argument principle:
// adaptive boundary sampling of d arg f (trapezoid of Im f'/f dz). Throws
// NumericError("boundary-too-close...") when a zero sits on the boundary and
// NumericError("non-integer winding...") when refinement cannot certify an
// integer within 0.25.
int count_zeros(const std::function<cplx(cplx)>& f, const Rect& rect);

enum class Family { alpha, beta, unclassified };

struct ReggePole {
  cplx location{0.0, 0.0};
  int multiplicity = 1;
  Family family = Family::unclassified;
  cplx residue{0.0, 0.0};     // residue of m at the pole
  std::vector<cplx> laurent;  // [c_{-1},...,c_{-mult}] of m, filled when mult >= 2
  int winding = 0;            // argument-principle certificate on an isolating box
};

struct PoleSearchResult {
  std::vector<ReggePole> poles;      // sorted by (Re, Im)
  std::vector<Rect> uncovered;       // nonempty when the cell budget ran out
  int cells_processed = 0;
};

struct SearchOptions {
  double tol = 1e-10;          // Newton refinement target |dz|
  double refine_size = 0.25;   // cells at most this wide go to Newton
  int cell_budget = 20000;
  bool attach_residues = true;
};

// Recursive quadtree subdivision by count_zeros until each cell isolates one
// zero, then Newton refinement with a Cauchy-circle derivative.
PoleSearchResult locate_poles(const Rect& region,
                              const kernel::KernelSolution& ker, double lambda,
                              const SearchOptions& opts = {});

// Same engine on an arbitrary analytic map (used by tests and the
// bound-state scan).
PoleSearchResult locate_zeros(const std::function<cplx(cplx)>& f,
                              const Rect& region, const SearchOptions& opts = {});

// Residue of m at a confirmed pole: psi'(0,z*) / (d/dz psi)(0,z*) for simple
// poles, contour integral of m for higher multiplicity.
cplx residue_at(cplx pole, int multiplicity, const kernel::KernelSolution& ker,
                double lambda);

// Laurent coefficients [c_{-1},...,c_{-mult}] of m at a pole, by contour moments.
std::vector<cplx> laurent_coefficients(cplx pole, int multiplicity,
                                       const kernel::KernelSolution& ker,
                                       double lambda);

// Asymptotic-family predictors. A = (-1)^p d_s^p K(0,2a^-) / (p-1)! drives
// the beta ladder; the alpha family tracks the negative integers.
double beta_constant_A(const kernel::KernelSolution& ker);
std::vector<cplx> predict_beta(int j_min, int j_max, double A, double a, int p);
std::vector<double> predict_alpha(int k_min, int k_max);

std::string family_name(Family f);

}  // namespace regge::poles
