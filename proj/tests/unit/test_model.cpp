#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "regge/errors.hpp"
#include "regge/model.hpp"

using namespace regge;

namespace {

// Laplace-Beltrami of a degree-k harmonic polynomial restricted to S^{n-1},
// computed as the ambient Laplacian of the degree-0 homogeneous extension
// F(x) = P(x/|x|), by central differences. Independent of the closed form.
double sphere_laplacian_fd(const std::function<double(const std::vector<double>&)>& P,
                           std::vector<double> point) {
  double norm = 0.0;
  for (double v : point) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : point) v /= norm;
  const double h = 1e-4;
  auto F = [&](std::vector<double> x) {
    double r = 0.0;
    for (double v : x) r += v * v;
    r = std::sqrt(r);
    for (double& v : x) v /= r;
    return P(x);
  };
  double lap = 0.0;
  const double f0 = F(point);
  for (std::size_t i = 0; i < point.size(); ++i) {
    auto xp = point, xm = point;
    xp[i] += h;
    xm[i] -= h;
    lap += (F(xp) - 2.0 * f0 + F(xm)) / (h * h);
  }
  return lap;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("V == 0 gives exactly zero potential, flagged degenerate") {
  auto pot = model::build_potential(testutil::unperturbed(), 128);
  CHECK(pot.degenerate);
  CHECK(pot.jump_value == 0.0);
  for (double v : pot.qf_values) CHECK(v == 0.0);
  CHECK(pot.qf(0.37) == 0.0);
}

TEST_CASE("p=1 template matches the symbolic oracle at random grid points") {
  const double c = 0.8, a = 1.3;
  auto spec = testutil::jump_potential_p1(c, a, 5, 2.0);
  auto pot = model::build_potential(spec, 256);
  for (int t = 0; t < 10; ++t) {
    const std::size_t i =
        static_cast<std::size_t>(testutil::uniform(0.0, 255.999));
    const double x = pot.grid[i];
    const double oracle = testutil::qf_oracle_p1(x, c, a, 5, 2.0);
    CHECK(pot.qf_values[i] == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("p=2 input populates a nonzero jump of the stated order") {
  // V = c x^2 (a-x)^3: d^3 V(a^-) = -6 a^2 c, so the Q_f jet at a gives
  // d Q_f(a^-) = w e^a V'''(a^-) with w = (n-2)/2.
  const double c = 0.7, a = 1.0;
  auto spec = testutil::jump_potential_p2(c, a, 3, 1.0);
  auto pot = model::build_potential(spec, 128);
  CHECK(pot.jump_order == 2);
  const double expected = 0.5 * std::exp(a) * (-6.0 * a * a * c);
  CHECK(pot.jump_value == doctest::Approx(expected).epsilon(1e-10));
  CHECK(pot.jump_value != 0.0);
}

TEST_CASE("support containment: samples beyond a are zero") {
  auto pot = model::build_potential(testutil::jump_potential_p1(0.4), 128);
  CHECK(pot.qf(1.0) == 0.0);
  CHECK(pot.qf(1.7) == 0.0);
  CHECK(pot.qf(25.0) == 0.0);
}

TEST_CASE("doubling the grid changes nothing at shared abscissae") {
  auto spec = testutil::jump_potential_p1(0.5);
  auto coarse = model::build_potential(spec, 128);
  auto fine = model::build_potential(spec, 256);
  for (std::size_t i = 0; i < coarse.grid.size(); ++i) {
    CHECK(std::abs(coarse.qf_values[i] - fine.qf_values[2 * i]) < 1e-12);
  }
}

TEST_CASE("positivity of f is enforced") {
  // Large negative V drives e^x V below -1.
  auto spec = testutil::jump_potential_p1(-8.0);
  CHECK_THROWS_AS(model::build_potential(spec, 128), ModelError);
}

TEST_CASE("interior breakpoint mismatch is a validation error") {
  model::WarpSpec spec;
  spec.n = 3;
  spec.lambda = 1.0;
  spec.a = 1.0;
  spec.p = 1;
  spec.V.breakpoints = {0.0, 0.5, 1.0};
  // second piece does not continue the first one
  spec.V.coeff = {{0.0, 0.25}, {0.3, -0.5, 0.2, 0.1}};
  CHECK_THROWS_AS(model::build_potential(spec, 128), ValidationError);
}

TEST_CASE("n = 2 is rejected") {
  auto spec = testutil::unperturbed();
  spec.n = 2;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("shifted momenta") {
  auto sp3 = model::shifted_momenta({0.0}, 3);
  CHECK(sp3.z[0] == doctest::Approx(0.5));
  auto sp4 = model::shifted_momenta({0.0}, 4);
  CHECK(sp4.z[0] == doctest::Approx(1.0));
  auto sp = model::shifted_momenta({0.0, 2.0}, 3);
  CHECK(sp.z[1] == doctest::Approx(1.5));
  CHECK_THROWS_AS(model::shifted_momenta({-1.0}, 3), ValidationError);
  CHECK_THROWS_AS(model::shifted_momenta({3.0, 1.0}, 3), ValidationError);
}

TEST_CASE("sphere spectrum against the FD Laplace-Beltrami oracle") {
  auto s3 = model::sphere_spectrum(3, 2);
  CHECK(s3[0].first == 0.0);
  CHECK(s3[0].second == 1);
  CHECK(s3[1].first == doctest::Approx(2.0));
  CHECK(s3[1].second == 3);

  // degree-1 harmonics x, y, z on S^2: eigenvalue 2
  for (int axis = 0; axis < 3; ++axis) {
    auto P = [axis](const std::vector<double>& x) { return x[static_cast<std::size_t>(axis)]; };
    const std::vector<double> pt{0.3, -0.6, 0.9};
    const double lap = sphere_laplacian_fd(P, pt);
    std::vector<double> unit = pt;
    double nrm = std::sqrt(0.09 + 0.36 + 0.81);
    for (double& v : unit) v /= nrm;
    CHECK(lap == doctest::Approx(-2.0 * P(unit)).epsilon(1e-4));
  }

  auto s4 = model::sphere_spectrum(4, 2);
  CHECK(s4[2].first == doctest::Approx(8.0));
  CHECK(s4[2].second == 9);
  // degree-2 harmonic x1 x2 on S^3: eigenvalue k(k+n-2) = 8
  auto P = [](const std::vector<double>& x) { return x[0] * x[1]; };
  const std::vector<double> pt{0.4, 0.5, -0.2, 0.7};
  const double lap = sphere_laplacian_fd(P, pt);
  std::vector<double> unit = pt;
  double nrm = std::sqrt(0.16 + 0.25 + 0.04 + 0.49);
  for (double& v : unit) v /= nrm;
  CHECK(lap == doctest::Approx(-8.0 * P(unit)).epsilon(1e-3));
}

TEST_CASE("CSV-facing fields are populated") {
  auto pot = model::build_potential(testutil::jump_potential_p1(0.3), 128);
  CHECK(pot.f0 == doctest::Approx(1.0));
  CHECK(pot.f0_prime == doctest::Approx(-1.0 + 0.3));  // V'(0) = c a^2 = 0.3
  CHECK(pot.grid.front() == 0.0);
  CHECK(pot.grid.back() == doctest::Approx(1.0));
}

TEST_CASE("exact tail integral matches the adaptive oracle") {
  auto pot = model::build_potential(testutil::jump_potential_p1(0.45), 128);
  // integrate to just inside a: at s = a the evaluator returns the zero
  // extension, which would bias an endpoint-sampling rule
  for (double x : {0.0, 0.21, 0.77}) {
    const double oracle = testutil::adaptive_simpson(
        [&](double s) { return pot.qf(s); }, x, 1.0 - 1e-9);
    CHECK(pot.integral_tail(x) == doctest::Approx(oracle).epsilon(1e-8));
  }
}

}  // TEST_SUITE
