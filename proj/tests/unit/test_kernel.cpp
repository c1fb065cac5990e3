#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "regge/errors.hpp"
#include "regge/kernel.hpp"

using namespace regge;

TEST_SUITE("kernel") {

TEST_CASE("picard term of zero is zero") {
  auto pot = model::potential_from_function([](double) { return 1.0; }, 1.0, 1, 1.0, 128);
  kernel::TriGrid g{128, 1.0};
  kernel::TriField zero(g.nodes(), 0.0);
  auto out = kernel::picard_term(zero, pot, 0.0, g);
  for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("second Picard term for constant Q, lambda = 0") {
  // K_{Q,1} = (c/2)(a-u); G applied once gives (c^2/4) v (a-u)^2.
  const double c = 0.9, a = 1.0;
  auto pot = model::potential_from_function([c](double) { return c; }, a, 1, c, 128);
  auto sol = kernel::solve_kernel(pot, 0.0, 256, 1e-12);
  auto K2 = kernel::picard_term(sol.K1, pot, 0.0, sol.grid);
  const auto& g = sol.grid;
  for (auto [i, j] : {std::pair{40, 11}, {100, 60}, {200, 1}, {256, 128}, {77, 77}}) {
    const double expected = 0.25 * c * c * g.v(j) * (a - g.u(i)) * (a - g.u(i));
    CHECK(K2[g.idx(i, j)] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("Picard increments obey the factorial contraction bound") {
  auto pot = model::build_potential(testutil::jump_potential_p1(std::exp(-1.0)), 256);
  auto sol = kernel::solve_kernel(pot, 1.0, 256, 1e-11);
  const double M = sol.contraction_M;
  const double a = sol.grid.a;
  // term-by-term: |K_{Q,n+1}| <= M^n / n! a^n ||K_{Q,1}|| (node-wise with (a-u))
  kernel::TriField term = sol.K1;
  double norm1 = sol.increment_sup.front();
  double fact = 1.0;
  for (int n = 1; n <= 4; ++n) {
    term = kernel::picard_term(term, pot, 1.0, sol.grid);
    fact *= n;
    const auto& g = sol.grid;
    for (int i = 0; i <= g.N; i += 16) {
      for (int j = 0; j <= i; j += 16) {
        const double bound =
            std::pow(M, n) / fact * std::pow(std::max(a - g.u(i), 0.0), n) * norm1;
        CHECK(std::abs(term[g.idx(i, j)]) <= bound * (1.0 + 1e-3) + 1e-12);
      }
    }
  }
}

TEST_CASE("solver preconditions") {
  auto pot = model::build_potential(testutil::unperturbed(), 128);
  CHECK_THROWS_AS(kernel::solve_kernel(pot, 1.0, 64, 1e-10), ValidationError);
  CHECK_THROWS_AS(kernel::solve_kernel(pot, 1.0, 128, 0.0), ValidationError);
  CHECK_THROWS_AS(model::build_potential(testutil::unperturbed(), 32),
                  ValidationError);
}

TEST_CASE("zero potential: fixed point is zero after one term") {
  auto pot = model::build_potential(testutil::unperturbed(), 128);
  auto sol = kernel::solve_kernel(pot, 1.0, 128, 1e-10);
  CHECK(sol.iterations == 1);
  CHECK(sol.residual == 0.0);
  for (double v : sol.K) CHECK(v == 0.0);
}

TEST_CASE("constant Q: first term exact at all nodes") {
  const double c = 1.4, a = 1.0;
  auto pot = model::potential_from_function([c](double) { return c; }, a, 1, c, 128);
  auto sol = kernel::solve_kernel(pot, 0.0, 128, 1e-11);
  const auto& g = sol.grid;
  for (int i = 0; i <= g.N; ++i)
    for (int j = 0; j <= i; ++j)
      CHECK(sol.K1[g.idx(i, j)] ==
            doctest::Approx(0.5 * c * (a - g.u(i))).epsilon(1e-13));
}

TEST_CASE("diagonal identity K(x,x) = (1/2) int_x^a Q_f") {
  const double c = testutil::uniform(0.3, 0.9);
  auto pot = model::build_potential(testutil::jump_potential_p1(c), 256);
  auto sol = kernel::solve_kernel(pot, 1.0, 256, 1e-11);
  const auto& g = sol.grid;
  for (int i = 0; i <= g.N; i += 8) {
    const double oracle = 0.5 * testutil::adaptive_simpson(
                                    [&](double s) { return pot.qf(s); },
                                    g.u(i), 1.0 - 1e-9);
    CHECK(std::abs(sol.K[g.idx(i, 0)] - oracle) < 1e-8);
  }
}

TEST_CASE("support boundary: K vanishes on x + t = 2a and is continuous") {
  auto pot = model::build_potential(testutil::jump_potential_p1(0.5), 256);
  auto sol = kernel::solve_kernel(pot, 1.0, 256, 1e-11);
  const auto& g = sol.grid;
  for (int j = 0; j <= g.N; j += 16) CHECK(sol.K[g.idx(g.N, j)] == 0.0);
  // limit from inside: one step off the boundary K = O(h)
  double near = 0.0;
  for (int j = 0; j < g.N; j += 16)
    near = std::max(near, std::abs(sol.K[g.idx(g.N - 1, j)]));
  CHECK(near < 5.0 * g.hu());
}

TEST_CASE("jump estimate: degenerate and p = 1") {
  auto pot0 = model::build_potential(testutil::unperturbed(), 128);
  auto sol0 = kernel::solve_kernel(pot0, 1.0, 128, 1e-10);
  CHECK(kernel::jump_estimate(sol0, 1) == 0.0);

  // lambda = 0 constant well: d_s K(0, 2a^-) = -c/4 from K1 alone.
  const double c = 0.8;
  auto pot = model::potential_from_function([c](double) { return c; }, 1.0, 1, c, 128);
  auto sol = kernel::solve_kernel(pot, 0.0, 256, 1e-11);
  auto je = kernel::jump_estimate_detail(sol, 1);
  CHECK(je.analytic == doctest::Approx(-c / 4.0));
  CHECK(je.rel_dev < 0.10);
  CHECK(kernel::jump_estimate(sol, 1) == doctest::Approx(-c / 4.0));
}

TEST_CASE("x-direction boundary value d_x K(x-, (2a-x)-) = -(1/4) Q_f(a^-)") {
  // Fix t* = 2a - 2 m h and walk x toward the anti-diagonal along the grid
  // line i + j = 2(N - m): node q is (N - m + q, N - m - q) with x = 2 q h.
  // The boundary sits at q = m where K vanishes; one-sided differences from
  // inside give d_x K at (x*, (2a - x*)^-), Richardson extrapolated. For
  // p = 1 the value is carried by the K_{Q,1} term alone.
  auto pot = model::build_potential(testutil::jump_potential_p1(std::exp(-1.0)), 256);
  auto sol = kernel::solve_kernel(pot, 1.0, 512, 1e-11);
  const auto& g = sol.grid;
  const double h = g.hu();
  const int m = 4;
  const int base = g.N - m;
  auto node = [&](int q) { return sol.K[g.idx(base + q, base - q)]; };
  CHECK(node(m) == 0.0);  // boundary node
  auto dx_one_sided = [&](int step) {
    return (node(m) - node(m - step)) / (2.0 * h * step);
  };
  const double d1 = dx_one_sided(1), d2 = dx_one_sided(2), d4 = dx_one_sided(4);
  const double r1 = 2.0 * d1 - d2, r2 = 2.0 * d2 - d4;
  const double extrap = (4.0 * r1 - r2) / 3.0;
  const double expected = -0.25 * pot.qf_left_a;
  CHECK(extrap == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("jump estimate for a p = 2 potential") {
  auto pot = model::build_potential(testutil::jump_potential_p2(1.2 * std::exp(-1.0)), 256);
  auto sol = kernel::solve_kernel(pot, 1.0, 512, 1e-11);
  auto je = kernel::jump_estimate_detail(sol, 2);
  CHECK(je.analytic == doctest::Approx(-pot.jump_value / 8.0));
  CHECK(je.rel_dev < 0.10);
  CHECK(kernel::jump_estimate(sol, 2) == doctest::Approx(je.analytic));
}

TEST_CASE("continuity in Q: L1 perturbations move K Lipschitz-stably") {
  auto base_spec = testutil::jump_potential_p1(0.5);
  auto pot = model::build_potential(base_spec, 256);
  auto sol = kernel::solve_kernel(pot, 1.0, 256, 1e-11);
  double prev_ratio = -1.0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    // bump with unit L1 norm: 6 x (a-x) / a^3
    auto qf2 = [&, eps](double x) {
      return pot.qf(x) + eps * 6.0 * x * (1.0 - x);
    };
    auto pot2 = model::potential_from_function(qf2, 1.0, 1, pot.jump_value, 256);
    auto sol2 = kernel::solve_kernel(pot2, 1.0, 256, 1e-11);
    double diff = 0.0;
    for (std::size_t k = 0; k < sol.K.size(); ++k)
      diff = std::max(diff, std::abs(sol.K[k] - sol2.K[k]));
    const double ratio = diff / eps;
    CHECK(ratio < 10.0);  // Lipschitz constant is O(1) at this scale
    if (prev_ratio > 0.0) {
      CHECK(ratio < 2.0 * prev_ratio);
      CHECK(ratio > 0.5 * prev_ratio);
    }
    prev_ratio = ratio;
  }
}

TEST_CASE("grid convergence is at least second order") {
  auto pot = model::build_potential(testutil::jump_potential_p1(0.6), 256);
  auto coarse = kernel::solve_kernel(pot, 1.0, 128, 1e-12);
  auto mid = kernel::solve_kernel(pot, 1.0, 256, 1e-12);
  auto fine = kernel::solve_kernel(pot, 1.0, 512, 1e-12);
  // compare at shared nodes (every 2nd / 4th index)
  auto diff_norm = [&](const kernel::KernelSolution& a,
                       const kernel::KernelSolution& b, int stride_a, int stride_b) {
    double d = 0.0;
    for (int i = 0; i <= a.grid.N / stride_a; ++i)
      for (int j = 0; j <= i; ++j)
        d = std::max(d, std::abs(a.K[a.grid.idx(i * stride_a, j * stride_a)] -
                                 b.K[b.grid.idx(i * stride_b, j * stride_b)]));
    return d;
  };
  const double e1 = diff_norm(coarse, fine, 1, 4);
  const double e2 = diff_norm(mid, fine, 1, 2);
  CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("binary cache roundtrip") {
  auto pot = model::build_potential(testutil::jump_potential_p1(0.5), 128);
  auto sol = kernel::solve_kernel(pot, 1.0, 128, 1e-10);
  const std::string path = "kernel_cache_test.bin";
  kernel::save_kernel(sol, path);
  kernel::KernelSolution loaded;
  CHECK(kernel::load_kernel(loaded, path));
  CHECK(loaded.grid.N == sol.grid.N);
  CHECK(loaded.K == sol.K);
  CHECK(loaded.trace_dKx == sol.trace_dKx);
  std::remove(path.c_str());
}

}  // TEST_SUITE
