#include "regge/model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "regge/errors.hpp"

namespace regge::model {

namespace {

// 20-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; mirror).
constexpr int kGL = 20;
constexpr double kGLx[kGL / 2] = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154196,
    0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
    0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
    0.9931285991850949};
constexpr double kGLw[kGL / 2] = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
    0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
    0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
    0.0176140071391521};

double gl_integrate(const std::function<double(double)>& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < kGL / 2; ++i)
    acc += kGLw[i] * (f(c - h * kGLx[i]) + f(c + h * kGLx[i]));
  return acc * h;
}

// Truncated Taylor ("jet") arithmetic: a[k] = f^{(k)}(x0)/k!.
using Jet = std::vector<double>;

Jet jet_const(double v, int order) {
  Jet j(static_cast<std::size_t>(order) + 1, 0.0);
  j[0] = v;
  return j;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  const int n = static_cast<int>(a.size());
  Jet out(a.size(), 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i <= k; ++i)
      out[static_cast<std::size_t>(k)] += a[static_cast<std::size_t>(i)] *
                                          b[static_cast<std::size_t>(k - i)];
  return out;
}

Jet jet_recip(const Jet& a) {
  const int n = static_cast<int>(a.size());
  Jet out(a.size(), 0.0);
  out[0] = 1.0 / a[0];
  for (int k = 1; k < n; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i)
      s += a[static_cast<std::size_t>(i)] * out[static_cast<std::size_t>(k - i)];
    out[static_cast<std::size_t>(k)] = -s / a[0];
  }
  return out;
}

Jet jet_add(Jet a, const Jet& b, double cb = 1.0) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += cb * b[k];
  return a;
}

// d^s/dx^s as a jet of the reduced order.
Jet jet_derive(const Jet& a, int times) {
  Jet out = a;
  for (int t = 0; t < times; ++t) {
    Jet nx(out.size() - 1, 0.0);
    for (std::size_t k = 0; k + 1 < out.size(); ++k)
      nx[k] = static_cast<double>(k + 1) * out[k + 1];
    out = std::move(nx);
  }
  return out;
}

Jet jet_exp_linear(double c, double alpha, double x0, int order) {
  // jet of c * e^{alpha x} at x0: coefficient k is c e^{alpha x0} alpha^k / k!
  Jet j(static_cast<std::size_t>(order) + 1, 0.0);
  const double v = c * std::exp(alpha * x0);
  double pw = 1.0, fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) {
      pw *= alpha;
      fact *= k;
    }
    j[static_cast<std::size_t>(k)] = v * pw / fact;
  }
  return j;
}

struct QfEvaluator {
  int n;
  double lambda;
  double a;
  double w;  // (n-2)/2
  PiecewisePoly V;

  double operator()(double x) const {
    if (x >= a) return 0.0;
    const double e = std::exp(-x);
    const double f = e + V.eval(x, 0);
    const double f1 = -e + V.eval(x, 1);
    const double f2 = e + V.eval(x, 2);
    const double r1 = f1 / f, r2 = f2 / f;
    const double qf = w * r2 + w * (w - 1.0) * r1 * r1;
    return qf - w * w - lambda * (f * f - e * e);
  }
};

}  // namespace

double PiecewisePoly::eval(double x, int deriv) const {
  if (breakpoints.empty() || coeff.empty()) return 0.0;
  if (x >= breakpoints.back() || x < breakpoints.front()) return 0.0;
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  int piece = static_cast<int>(it - breakpoints.begin()) - 1;
  piece = std::clamp(piece, 0, static_cast<int>(coeff.size()) - 1);
  return eval_left_at(x, piece, deriv);
}

double PiecewisePoly::eval_left_at(double x_right, int piece, int deriv) const {
  const double dx = x_right - breakpoints[static_cast<std::size_t>(piece)];
  const auto& c = coeff[static_cast<std::size_t>(piece)];
  double acc = 0.0;
  double pw = 1.0;
  for (int j = deriv; j < static_cast<int>(c.size()); ++j) {
    double fall = 1.0;
    for (int m = 0; m < deriv; ++m) fall *= (j - m);
    acc += fall * c[static_cast<std::size_t>(j)] * pw;
    pw *= dx;
  }
  return acc;
}

bool PiecewisePoly::is_zero() const {
  for (const auto& c : coeff)
    for (double v : c)
      if (v != 0.0) return false;
  return true;
}

void WarpSpec::validate(bool allow_lambda_zero) const {
  if (n < 3) throw ValidationError("warp.n must be >= 3 (n = 2 is rejected)", "warp.n");
  if (lambda < 0.0 || (lambda == 0.0 && !allow_lambda_zero))
    throw ValidationError("warp.lambda must be positive", "warp.lambda");
  if (!(a > 0.0)) throw ValidationError("warp.a must be positive", "warp.a");
  if (p < 1) throw ValidationError("warp.p must be a positive integer", "warp.p");
  if (!V.breakpoints.empty()) {
    if (V.breakpoints.size() != V.coeff.size() + 1)
      throw ValidationError("breakpoints must have one more entry than coefficient rows",
                            "warp.breakpoints");
    if (std::abs(V.breakpoints.front()) > 1e-14)
      throw ValidationError("first breakpoint must be 0", "warp.breakpoints");
    if (std::abs(V.breakpoints.back() - a) > 1e-12)
      throw ValidationError("last breakpoint must equal a (supp V = [0,a])",
                            "warp.breakpoints");
    for (std::size_t i = 0; i + 1 < V.breakpoints.size(); ++i)
      if (!(V.breakpoints[i + 1] > V.breakpoints[i]))
        throw ValidationError("breakpoints must be strictly increasing",
                              "warp.breakpoints");
  }
  if (V.is_zero()) return;  // degenerate case, no smoothness demands

  // C^p at interior breakpoints.
  for (std::size_t i = 1; i + 1 < V.breakpoints.size(); ++i) {
    const double x = V.breakpoints[i];
    for (int d = 0; d <= p; ++d) {
      const double left = V.eval_left_at(x, static_cast<int>(i) - 1, d);
      const double right = V.eval_left_at(x, static_cast<int>(i), d);  // dx = 0
      const double scale = std::max({1.0, std::abs(left), std::abs(right)});
      if (std::abs(left - right) > 1e-9 * scale)
        throw ValidationError("V is not C^p at an interior breakpoint",
                              "warp.coefficients");
    }
  }
  // C^p against the zero extension past a.
  const int last = static_cast<int>(V.coeff.size()) - 1;
  double cscale = 1.0;
  for (double c : V.coeff[static_cast<std::size_t>(last)])
    cscale = std::max(cscale, std::abs(c));
  for (int d = 0; d <= p; ++d) {
    const double left = V.eval_left_at(a, last, d);
    if (std::abs(left) > 1e-9 * cscale)
      throw ValidationError("V^{(j)}(a^-) must vanish for j <= p (V in C^p, supp V = [0,a])",
                            "warp.coefficients");
  }
}

double PotentialTable::integral_tail(double x) const {
  if (x >= a) return 0.0;
  if (x < 0.0) x = 0.0;
  double acc = 0.0;
  double lo = x;
  for (double b : pieces) {
    if (b <= lo + 1e-15) continue;
    const double hi = std::min(b, a);
    if (hi > lo) acc += gl_integrate(qf, lo, hi);
    lo = hi;
    if (lo >= a) break;
  }
  if (lo < a) acc += gl_integrate(qf, lo, a);
  return acc;
}

PotentialTable build_potential(const WarpSpec& spec, int grid_size) {
  spec.validate(true);
  if (grid_size < 64)
    throw ValidationError("grid_size must be >= 64", "numerics.grid_size");

  const double w = 0.5 * (spec.n - 2);
  QfEvaluator ev{spec.n, spec.lambda, spec.a, w, spec.V};

  // Positivity of f: 1 + e^x V > 0 with a strict margin, checked by sampling.
  {
    const int ns = 4096;
    for (int i = 0; i <= ns; ++i) {
      const double x = spec.a * i / ns;
      const double g = 1.0 + std::exp(x) * spec.V.eval(x, 0);
      if (g <= 1e-12)
        throw ModelError("conformal factor not positive: e^x V(x) <= -1 at x = " +
                         std::to_string(x));
    }
  }

  PotentialTable tab;
  tab.a = spec.a;
  tab.jump_order = spec.p;
  tab.degenerate = spec.V.is_zero();
  tab.f0 = 1.0 + spec.V.eval(0.0, 0);
  tab.f0_prime = -1.0 + spec.V.eval(0.0, 1);
  tab.qf = [ev](double x) { return ev(x); };
  tab.pieces = spec.V.breakpoints;
  if (tab.pieces.empty()) tab.pieces = {0.0, spec.a};

  tab.grid.resize(static_cast<std::size_t>(grid_size) + 1);
  tab.qf_values.resize(tab.grid.size());
  for (int i = 0; i <= grid_size; ++i) {
    const double x = spec.a * i / grid_size;
    tab.grid[static_cast<std::size_t>(i)] = x;
    tab.qf_values[static_cast<std::size_t>(i)] = ev(x);
  }

  if (tab.degenerate) {
    tab.jump_value = 0.0;
    tab.qf_values.back() = 0.0;
    return tab;
  }

  // Jet of Q_f at a^- to order p-1, built from exact one-sided Taylor data.
  const int ord = spec.p + 1;  // f-jet order needed for d^{p-1} of f''/f
  const int last = static_cast<int>(spec.V.coeff.size()) - 1;
  Jet fj = jet_exp_linear(1.0, -1.0, spec.a, ord);
  for (int k = 0; k <= ord; ++k) {
    const double dk = spec.V.eval_left_at(spec.a, last, k);
    double fact = 1.0;
    for (int m = 2; m <= k; ++m) fact *= m;
    fj[static_cast<std::size_t>(k)] += dk / fact;
  }
  const Jet f1 = jet_derive(fj, 1);
  const Jet f2 = jet_derive(fj, 2);
  const int qord = spec.p - 1;
  auto trunc = [qord](Jet j) {
    j.resize(static_cast<std::size_t>(qord) + 1);
    return j;
  };
  const Jet invf = jet_recip(trunc(fj));
  const Jet r2 = jet_mul(trunc(f2), invf);
  const Jet r1 = jet_mul(trunc(f1), invf);
  Jet qf_jet = jet_add(jet_mul(jet_const(w, qord), r2),
                       jet_mul(jet_const(w * (w - 1.0), qord), jet_mul(r1, r1)));
  // - w^2 - lambda (f^2 - e^{-2x})
  Jet f_sq = jet_mul(trunc(fj), trunc(fj));
  Jet e2 = jet_exp_linear(1.0, -2.0, spec.a, qord);
  Jet qf_full = jet_add(qf_jet, jet_const(w * w, qord), -1.0);
  qf_full = jet_add(qf_full, jet_add(f_sq, e2, -1.0), -spec.lambda);

  double fact = 1.0;
  for (int m = 2; m <= qord; ++m) fact *= m;
  tab.jump_value = qf_full[static_cast<std::size_t>(qord)] * fact;
  // One-sided limit at a: the constant jet term. The a-node sample carries it
  // so exports show the interior limit rather than the zero extension.
  tab.qf_left_a = qf_full[0];
  tab.qf_values.back() = qf_full[0];
  return tab;
}

PotentialTable potential_from_function(std::function<double(double)> qf, double a,
                                       int p, double jump_value, int grid_size,
                                       double f0, double f0_prime,
                                       std::vector<double> pieces) {
  if (grid_size < 64)
    throw ValidationError("grid_size must be >= 64", "numerics.grid_size");
  PotentialTable tab;
  tab.a = a;
  tab.jump_order = p;
  tab.jump_value = jump_value;
  tab.f0 = f0;
  tab.f0_prime = f0_prime;
  tab.qf = [qf, a](double x) { return x >= a ? 0.0 : qf(x); };
  tab.pieces = pieces.empty() ? std::vector<double>{0.0, a} : std::move(pieces);
  tab.grid.resize(static_cast<std::size_t>(grid_size) + 1);
  tab.qf_values.resize(tab.grid.size());
  bool all_zero = true;
  for (int i = 0; i <= grid_size; ++i) {
    const double x = a * i / grid_size;
    tab.grid[static_cast<std::size_t>(i)] = x;
    const double v = tab.qf(std::min(x, a * (1.0 - 1e-15)));
    tab.qf_values[static_cast<std::size_t>(i)] = v;
    if (v != 0.0) all_zero = false;
  }
  tab.qf_left_a = tab.qf(a * (1.0 - 1e-15));
  tab.degenerate = all_zero && jump_value == 0.0;
  return tab;
}

TransversalSpectrum shifted_momenta(const std::vector<double>& mu_sq, int n) {
  return shifted_momenta(mu_sq, std::vector<int>(mu_sq.size(), 1), n);
}

TransversalSpectrum shifted_momenta(const std::vector<double>& mu_sq,
                                    const std::vector<int>& multiplicity, int n) {
  if (n < 3) throw ValidationError("n must be >= 3", "n");
  if (multiplicity.size() != mu_sq.size())
    throw ValidationError("multiplicity list length mismatch", "mu_sq");
  TransversalSpectrum sp;
  const double shift = 0.25 * (n - 2) * (n - 2);
  double prev = -1.0;
  for (std::size_t k = 0; k < mu_sq.size(); ++k) {
    const double m2 = mu_sq[k];
    if (m2 < 0.0) throw ValidationError("mu_k^2 must be nonnegative", "mu_sq");
    if (m2 < prev) throw ValidationError("mu_k^2 must be nondecreasing", "mu_sq");
    prev = m2;
    sp.mu_sq.push_back(m2);
    sp.multiplicity.push_back(multiplicity[k]);
    sp.z.push_back(std::sqrt(m2 + shift));
  }
  return sp;
}

std::vector<std::pair<double, int>> sphere_spectrum(int n, int kmax) {
  if (n < 2) throw ValidationError("sphere_spectrum: n must be >= 2", "n");
  if (kmax < 0) throw ValidationError("sphere_spectrum: kmax must be >= 0", "kmax");
  auto binom = [](long long m, long long j) -> long long {
    if (j < 0 || j > m) return 0;
    long long r = 1;
    for (long long i = 1; i <= j; ++i) r = r * (m - j + i) / i;
    return r;
  };
  std::vector<std::pair<double, int>> out;
  for (int k = 0; k <= kmax; ++k) {
    const double mu2 = static_cast<double>(k) * (k + n - 2);
    const long long mult = binom(n + k - 1, k) - binom(n + k - 3, k - 2);
    out.emplace_back(mu2, static_cast<int>(mult));
  }
  return out;
}

}  // namespace regge::model
