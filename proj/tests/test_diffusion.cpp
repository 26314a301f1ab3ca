#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "stochlab/diffusion.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/quantum.hpp"

using namespace stochlab;
using namespace stochlab::diffusion;

namespace {

double binomial_pmf(std::size_t n, std::size_t k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                  static_cast<double>(n) * std::numbers::ln2);
}

}  // namespace

TEST_CASE("zero steps is a delta at the origin") {
  RngStream r(41);
  WalkSpec s;
  s.n_steps = 0;
  s.origin = {3, 0, 0};
  const auto f = simulate_walk(s, r);
  CHECK(f.counts.size() == 1);
  CHECK(f.mass_at({3, 0, 0}) == 1.0);
  CHECK(f.density_at({3, 0, 0}) == doctest::Approx(1.0 / s.a_s));
}

TEST_CASE("one-dimensional walk moments") {
  RngStream r(42);
  WalkSpec s;
  s.dim = 1;
  s.a_s = 0.1;
  s.a_t = 0.005;
  s.n_walkers = 1000000;
  s.n_steps = 200;
  const auto f = simulate_walk(s, r);
  CHECK(s.d_coeff() == doctest::Approx(1.0));
  CHECK(f.total_mass() == 1.0);
  CHECK(std::abs(f.axis_variance[0] - 2.0) < 0.01);
  const double se = std::sqrt(f.axis_variance[0] / static_cast<double>(s.n_walkers));
  CHECK(std::abs(f.axis_mean[0]) < 3.0 * se);
}

TEST_CASE("site masses match the binomial distribution") {
  RngStream r(43);
  WalkSpec s;
  s.dim = 1;
  s.a_s = 1.0;
  s.a_t = 0.5;
  s.n_walkers = 400000;
  s.n_steps = 30;
  const auto f = simulate_walk(s, r);
  for (std::int64_t x = -30; x <= 30; ++x) {
    const double p = (x + 30) % 2 == 0 ? binomial_pmf(30, static_cast<std::size_t>((x + 30) / 2)) : 0.0;
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(s.n_walkers));
    REQUIRE(std::abs(f.mass_at({x, 0, 0}) - p) <= 5.0 * se + 1e-12);
  }
}

TEST_CASE("per-axis variance equals n a_s^2 / dim") {
  for (std::size_t dim : {2u, 3u}) {
    RngStream r(44, dim);
    WalkSpec s;
    s.dim = dim;
    s.a_s = 0.5;
    s.a_t = s.a_s * s.a_s / (2.0 * static_cast<double>(dim));
    s.n_walkers = 200000;
    s.n_steps = 60;
    const auto f = simulate_walk(s, r);
    CHECK(f.total_mass() == 1.0);
    const double expected = 60.0 * 0.25 / static_cast<double>(dim);
    // Var of the sample variance for a near-Gaussian axis is 2 sigma^4 / N.
    const double se = expected * std::sqrt(2.0 / static_cast<double>(s.n_walkers));
    for (std::size_t a = 0; a < dim; ++a) CHECK(std::abs(f.axis_variance[a] - expected) < 3.0 * se);
  }
}

TEST_CASE("analytic kernel") {
  const std::vector<double> zero{0.0};
  CHECK(analytic_kernel(1, 1.0, 1.0, zero)[0] == doctest::Approx(1.0 / std::sqrt(4.0 * std::numbers::pi)));
  std::vector<double> xs;
  const double h = 0.001;
  for (double x = -15.0; x <= 15.0; x += h) xs.push_back(x);
  const auto k = analytic_kernel(1, 1.0, 1.0, xs, 0.5);
  double mass = 0.0, mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mass += k[i] * h;
    mean += k[i] * xs[i] * h;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) var += k[i] * (xs[i] - mean) * (xs[i] - mean) * h;
  CHECK(std::abs(mass - 1.0) < 1e-6);
  CHECK(mean == doctest::Approx(0.5));
  CHECK(var == doctest::Approx(2.0).epsilon(1e-6));
  const std::vector<Point> pts{{0, 0, 0}};
  CHECK(analytic_kernel(3, 0.5, 2.0, pts)[0] == doctest::Approx(std::pow(4.0 * std::numbers::pi, -1.5)));
  CHECK_THROWS_AS(analytic_kernel(1, 1.0, 0.0, zero), DomainError);
  CHECK_THROWS_AS(analytic_kernel(1, -1.0, 1.0, zero), DomainError);
}

TEST_CASE("walk width agrees with the Wick-rotated width") {
  RngStream r(45);
  WalkSpec s;
  s.dim = 1;
  s.a_s = 0.1;
  s.a_t = 0.005;
  s.n_walkers = 10000000;
  s.n_steps = 200;
  const auto f = simulate_walk(s, r);
  const double sigma0 = 1.0;
  const auto w = quantum::wick_rotate_check(sigma0, 1.0, 1.0);
  CHECK(std::abs(std::sqrt(sigma0 * sigma0 + f.axis_variance[0]) - w.quantum_width) < 1e-3);
}

TEST_CASE("convergence scan") {
  RngStream r(46);
  WalkSpec base;
  base.dim = 1;
  base.a_s = 0.5;
  base.a_t = 0.125;
  base.n_walkers = 10000000;
  base.n_steps = 8;
  const auto scan = convergence_scan(base, 2, r);
  REQUIRE(scan.rows.size() == 3);
  for (const auto& row : scan.rows) CHECK(row.ratio == 2.0);
  CHECK(scan.rows[1].sup_error < scan.rows[0].sup_error);
  CHECK(scan.rows[2].sup_error < scan.rows[1].sup_error);
  CHECK(scan.rows[0].sup_error >= 2.0 * scan.rows[2].sup_error);
  CHECK(scan.rows[2].sup_error < 1e-2 * scan.peak_density);
  CHECK(scan.finest.total_mass() == 1.0);
}

TEST_CASE("convergence scan in two dimensions") {
  RngStream r(47);
  WalkSpec base;
  base.dim = 2;
  base.a_s = 0.5;
  base.a_t = 0.0625;
  base.n_walkers = 2000000;
  base.n_steps = 16;
  const auto scan = convergence_scan(base, 2, r);
  for (const auto& row : scan.rows) CHECK(row.ratio == 4.0);
  CHECK(scan.rows[1].sup_error < scan.rows[0].sup_error);
}

TEST_CASE("too few walkers is flagged as sampling dominated") {
  RngStream r(48);
  WalkSpec base;
  base.dim = 1;
  base.a_s = 0.5;
  base.a_t = 0.125;
  base.n_walkers = 2000;
  base.n_steps = 8;
  const auto scan = convergence_scan(base, 3, r);
  CHECK(scan.rows.back().sampling_dominated);
}

TEST_CASE("convergence scan preconditions") {
  RngStream r(49);
  WalkSpec base;
  base.a_s = 0.5;
  base.a_t = 0.2;
  CHECK_THROWS_AS(convergence_scan(base, 2, r), ArgumentError);
  base.a_t = 0.125;
  CHECK_THROWS_AS(convergence_scan(base, 1, r), ArgumentError);
}
