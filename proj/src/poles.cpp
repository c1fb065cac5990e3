#include "regge/poles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "regge/errors.hpp"
#include "regge/jost.hpp"

namespace regge::poles {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct BoundarySample {
  cplx z;
  cplx f;
};

// Walk one edge adaptively, accumulating arg increments of f. Segments are
// bisected until each phase step is below pi/2.
// Accumulate arg increments of f along one edge, bisecting segments until
// every phase step is below 1.5 rad. A zero on (or hugging) the contour shows
// up as a phase step that never resolves at depth 40; |f| can legitimately
// span hundreds of orders of magnitude here, so smallness of |f| alone is not
// an error. Evaluations per edge are capped.
double edge_arg_sum(const std::function<cplx(cplx)>& f, cplx za, cplx zb) {
  struct Seg {
    BoundarySample a, b;
    int depth;
  };
  // Initial density scales with edge length; every accepted step is verified
  // by its midpoint, so a hidden 2 pi jump would need the midpoint to alias
  // consistently as well.
  const int initial =
      std::clamp(static_cast<int>(std::abs(zb - za) * 8.0) + 8, 16, 4096);
  std::vector<BoundarySample> samples;
  samples.reserve(static_cast<std::size_t>(initial) + 1);
  for (int k = 0; k <= initial; ++k) {
    const double t = static_cast<double>(k) / initial;
    const cplx z = za + t * (zb - za);
    samples.push_back({z, f(z)});
  }
  double total = 0.0;
  long evals = initial + 1;
  std::vector<Seg> stack;
  for (std::size_t k = samples.size() - 1; k >= 1; --k)
    stack.push_back({samples[k - 1], samples[k], 0});
  while (!stack.empty()) {
    const Seg s = stack.back();
    stack.pop_back();
    if (std::abs(s.a.f) == 0.0 || std::abs(s.b.f) == 0.0)
      throw NumericError("boundary-too-close: |f| vanishes on the contour");
    if (s.depth >= 40)
      throw NumericError(
          "boundary-too-close: phase step unresolved after 40 bisections");
    if (++evals > 400000)
      throw NumericError("boundary-too-close: edge refinement budget exceeded");
    const cplx zm = 0.5 * (s.a.z + s.b.z);
    const BoundarySample mid{zm, f(zm)};
    if (std::abs(mid.f) == 0.0)
      throw NumericError("boundary-too-close: |f| vanishes on the contour");
    const double dl = std::arg(mid.f / s.a.f);
    const double dr = std::arg(s.b.f / mid.f);
    const double dphi = std::arg(s.b.f / s.a.f);
    if (std::abs(dl) < 1.5 && std::abs(dr) < 1.5 &&
        std::abs(dl + dr - dphi) < 1e-9) {
      total += dphi;
      continue;
    }
    stack.push_back({s.a, mid, s.depth + 1});
    stack.push_back({mid, s.b, s.depth + 1});
  }
  return total;
}

int winding_number(const std::function<cplx(cplx)>& f, const Rect& r) {
  const cplx c00(r.re0, r.im0), c10(r.re1, r.im0), c11(r.re1, r.im1),
      c01(r.re0, r.im1);
  double total = 0.0;
  total += edge_arg_sum(f, c00, c10);
  total += edge_arg_sum(f, c10, c11);
  total += edge_arg_sum(f, c11, c01);
  total += edge_arg_sum(f, c01, c00);
  const double w = total / (2.0 * kPi);
  const double rounded = std::round(w);
  if (std::abs(w - rounded) > 0.25)
    throw NumericError("non-integer winding: got " + std::to_string(w));
  return static_cast<int>(rounded);
}

// Split fractions tried when a child boundary lands on a zero.
constexpr double kSplitFractions[5] = {0.5, 0.46, 0.54, 0.42, 0.58};

struct Cell {
  Rect r;
  int count = -1;
};

cplx newton_refine(const std::function<cplx(cplx)>& f, cplx z0, double tol,
                   double circle_radius, bool& converged) {
  cplx z = z0;
  double best_abs = std::numeric_limits<double>::max();
  cplx best = z0;
  converged = false;
  // local scale at the cell, for the stagnation acceptance below
  const double scale =
      std::max({std::abs(f(z0 + circle_radius)), std::abs(f(z0 - circle_radius)),
                std::abs(f(z0 + cplx(0.0, circle_radius))), 1e-300});
  for (int it = 0; it < 60; ++it) {
    const cplx fz = f(z);
    const double a = std::abs(fz);
    if (a < best_abs) {
      best_abs = a;
      best = z;
    }
    const cplx df = jost::cauchy_derivative(f, z, circle_radius, 1, 16);
    if (std::abs(df) == 0.0) break;
    const cplx step = fz / df;
    z -= step;
    if (std::abs(step) < tol) {
      converged = true;
      const double fa = std::abs(f(z));
      return fa <= best_abs ? z : best;
    }
    if (std::abs(step) > 10.0 * circle_radius && it > 4) break;  // runaway
  }
  // Stagnation at the numerical floor still counts if |f| collapsed.
  converged = best_abs < 1e-7 * scale;
  return best;
}

PoleSearchResult search(const std::function<cplx(cplx)>& f, const Rect& region,
                        const SearchOptions& opts) {
  PoleSearchResult out;
  std::deque<Cell> queue;

  // Count on the outer region; jitter outward slightly if a zero sits on it.
  {
    Rect r = region;
    int count = -1;
    for (int attempt = 0; attempt < 6; ++attempt) {
      try {
        count = winding_number(f, r);
        break;
      } catch (const NumericError&) {
        const double jx = (attempt + 1) * 1e-3 * std::max(r.width(), 1e-6);
        const double jy = (attempt + 1) * 1e-3 * std::max(r.height(), 1e-6);
        r = Rect{region.re0 - jx, region.re1 + jx, region.im0 - jy,
                 region.im1 + jy};
      }
    }
    if (count < 0)
      throw NumericError("locate_poles: region boundary passes through zeros; "
                         "jitter failed");
    if (count == 0) return out;
    queue.push_back({r, count});
  }

  std::vector<cplx> found;
  std::vector<int> found_winding;

  while (!queue.empty()) {
    if (++out.cells_processed > opts.cell_budget) {
      for (const Cell& c : queue) out.uncovered.push_back(c.r);
      break;
    }
    Cell cell = queue.front();
    queue.pop_front();
    if (cell.count == 0) continue;

    const double w = cell.r.width(), h = cell.r.height();
    if (cell.count == 1 && std::max(w, h) <= opts.refine_size) {
      const cplx center(0.5 * (cell.r.re0 + cell.r.re1),
                        0.5 * (cell.r.im0 + cell.r.im1));
      const double rad = std::max(1e-4, 0.35 * std::max(w, h));
      bool ok = false;
      cplx z = newton_refine(f, center, opts.tol, rad, ok);
      if (!ok || !cell.r.contains(z, 0.25 * std::max(w, h))) {
        // The zero hugs an edge: subdivide further, or report the cell
        // honestly if we are already at the resolution floor.
        if (std::max(w, h) > 64.0 * opts.tol) goto subdivide;
        out.uncovered.push_back(cell.r);
        continue;
      }
      found.push_back(z);
      found_winding.push_back(1);
      continue;
    }

  subdivide: {
    // Split along the longer side, avoiding zeros on the new boundary.
    const bool split_x = w >= h;
    bool done = false;
    for (double frac : kSplitFractions) {
      Rect a = cell.r, b = cell.r;
      if (split_x) {
        const double xm = cell.r.re0 + frac * w;
        a.re1 = xm;
        b.re0 = xm;
      } else {
        const double ym = cell.r.im0 + frac * h;
        a.im1 = ym;
        b.im0 = ym;
      }
      try {
        const int ca = winding_number(f, a);
        const int cb = cell.count - ca;  // partition: counts add up
        if (cb < 0) continue;
        if (ca > 0) queue.push_back({a, ca});
        if (cb > 0) queue.push_back({b, cb});
        done = true;
        break;
      } catch (const NumericError&) {
        continue;
      }
    }
    if (!done) {
      out.uncovered.push_back(cell.r);
    }
  }
  }

  // Deduplicate (Newton can land on the same zero from sibling cells).
  std::vector<std::pair<cplx, int>> unique;
  for (std::size_t i = 0; i < found.size(); ++i) {
    bool dup = false;
    for (auto& u : unique) {
      if (std::abs(u.first - found[i]) < 1e-8 * (1.0 + std::abs(found[i]))) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.emplace_back(found[i], found_winding[i]);
  }

  for (auto& [z, wnd] : unique) {
    ReggePole p;
    p.location = z;
    p.winding = wnd;
    p.multiplicity = wnd;
    out.poles.push_back(p);
  }
  std::sort(out.poles.begin(), out.poles.end(), [](const ReggePole& a,
                                                   const ReggePole& b) {
    if (a.location.real() != b.location.real())
      return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return out;
}

void classify_and_certify(PoleSearchResult& res,
                          const std::function<cplx(cplx)>& f) {
  // Isolating winding certificate around each refined zero.
  for (std::size_t i = 0; i < res.poles.size(); ++i) {
    ReggePole& p = res.poles[i];
    double nearest = std::numeric_limits<double>::max();
    for (std::size_t j = 0; j < res.poles.size(); ++j)
      if (j != i)
        nearest = std::min(nearest, std::abs(res.poles[j].location - p.location));
    const double r = std::min(0.1, 0.4 * nearest);
    const double side = std::max(r, 1e-6);
    Rect box{p.location.real() - side, p.location.real() + side,
             p.location.imag() - side, p.location.imag() + side};
    try {
      p.winding = winding_number(f, box);
    } catch (const NumericError&) {
      p.winding = 1;  // certificate unavailable at this radius; keep Newton's
    }
    if (p.winding >= 1) p.multiplicity = p.winding;
  }
  // Family tags.
  for (ReggePole& p : res.poles) {
    const double re = p.location.real(), im = p.location.imag();
    const double k = std::round(re);
    if (std::abs(im) < 1e-6 && k <= -1.0 && std::abs(re - k) < 0.5) {
      p.family = Family::alpha;
      continue;
    }
    bool paired = false;
    for (const ReggePole& q : res.poles) {
      if (&q == &p) continue;
      if (std::abs(std::conj(p.location) - q.location) <
          1e-6 * (1.0 + std::abs(p.location))) {
        paired = true;
        break;
      }
    }
    p.family = paired ? Family::beta : Family::unclassified;
  }
}

}  // namespace

int count_zeros(const std::function<cplx(cplx)>& f, const Rect& rect) {
  return winding_number(f, rect);
}

PoleSearchResult locate_zeros(const std::function<cplx(cplx)>& f,
                              const Rect& region, const SearchOptions& opts) {
  PoleSearchResult res = search(f, region, opts);
  classify_and_certify(res, f);
  return res;
}

PoleSearchResult locate_poles(const Rect& region,
                              const kernel::KernelSolution& ker, double lambda,
                              const SearchOptions& opts) {
  auto f = [&ker, lambda](cplx z) { return jost::psi(z, ker, lambda); };
  PoleSearchResult res = search(f, region, opts);
  classify_and_certify(res, f);
  if (opts.attach_residues) {
    for (ReggePole& p : res.poles) {
      p.residue = residue_at(p.location, p.multiplicity, ker, lambda);
      if (p.multiplicity >= 2)
        p.laurent = laurent_coefficients(p.location, p.multiplicity, ker, lambda);
    }
  }
  return res;
}

cplx residue_at(cplx pole, int multiplicity, const kernel::KernelSolution& ker,
                double lambda) {
  auto f = [&ker, lambda](cplx z) { return jost::psi(z, ker, lambda); };
  if (multiplicity <= 1) {
    const double r = 0.05;
    const cplx dfdz = jost::cauchy_derivative(f, pole, r, 1, 32);
    // A vanishing z-derivative contradicts simplicity: escalate by contour.
    double scale = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double t = 2.0 * kPi * k / 8;
      scale = std::max(scale, std::abs(f(pole + r * std::exp(cplx(0.0, t)))));
    }
    if (std::abs(dfdz) > 1e-8 * scale / r)
      return jost::psi_prime(pole, ker, lambda) / dfdz;
    multiplicity = 2;
  }
  // res(m) = (1/2 pi i) contour integral of m around the pole.
  const double r = 0.05;
  const int M = 128;
  cplx acc(0.0, 0.0);
  for (int k = 0; k < M; ++k) {
    const double t = 2.0 * kPi * k / M;
    const cplx w = pole + r * std::exp(cplx(0.0, t));
    const cplx m = jost::psi_prime(w, ker, lambda) / jost::psi(w, ker, lambda);
    acc += m * r * std::exp(cplx(0.0, t));  // dz/(i dt) = r e^{it}; 1/i folded below
  }
  return acc / static_cast<double>(M);
}

std::vector<cplx> laurent_coefficients(cplx pole, int multiplicity,
                                       const kernel::KernelSolution& ker,
                                       double lambda) {
  // c_{-j} = (1/2 pi i) int m(w) (w - pole)^{j-1} dw, j = 1..multiplicity.
  const double r = 0.05;
  const int M = 256;
  std::vector<cplx> out(static_cast<std::size_t>(multiplicity), cplx(0.0, 0.0));
  for (int k = 0; k < M; ++k) {
    const double t = 2.0 * kPi * k / M;
    const cplx e = std::exp(cplx(0.0, t));
    const cplx w = pole + r * e;
    const cplx m = jost::psi_prime(w, ker, lambda) / jost::psi(w, ker, lambda);
    cplx pw(1.0, 0.0);
    for (int j = 1; j <= multiplicity; ++j) {
      out[static_cast<std::size_t>(j - 1)] += m * pw * (r * e);
      pw *= (w - pole);
    }
  }
  for (auto& c : out) c /= static_cast<double>(M);
  return out;
}

double beta_constant_A(const kernel::KernelSolution& ker) {
  const int p = ker.p;
  double fact = 1.0;
  for (int m = 2; m <= p - 1; ++m) fact *= m;
  const double sign = (p % 2 == 0) ? 1.0 : -1.0;
  const double A = sign * ker.jump_s_p / fact;
  if (A == 0.0)
    throw ModelError("asymptotic constant A vanishes: the boundary jump is degenerate");
  return A;
}

std::vector<cplx> predict_beta(int j_min, int j_max, double A, double a, int p) {
  if (A == 0.0)
    throw ModelError("predict_beta: A = 0 (degenerate jump)");
  double fact = 1.0;
  for (int m = 2; m <= p - 1; ++m) fact *= m;
  const double sgn = A > 0.0 ? 1.0 : -1.0;
  std::vector<cplx> out;
  for (int j = j_min; j <= j_max; ++j) {
    const double im =
        kPi / (2.0 * a) * (2.0 * j + 0.5 * (p - 1) + (sgn + 1.0));
    const double re = -(p + 1) / (2.0 * a) * std::log(j * kPi / a) +
                      std::log(std::abs(A) * fact) / (2.0 * a);
    out.emplace_back(re, im);
  }
  return out;
}

std::vector<double> predict_alpha(int k_min, int k_max) {
  std::vector<double> out;
  for (int k = k_min; k <= k_max; ++k) out.push_back(-static_cast<double>(k));
  return out;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::alpha: return "alpha";
    case Family::beta: return "beta";
    default: return "unclassified";
  }
}

}  // namespace regge::poles
