#include <doctest.h>

#include <cmath>
#include <vector>

#include "stochlab/errors.hpp"
#include "stochlab/parallel.hpp"
#include "stochlab/path_integral.hpp"
#include "stochlab/quantum.hpp"
#include "stochlab/stats.hpp"

using namespace stochlab;
using namespace stochlab::paths;

namespace {

EuclideanAction free_particle(double a_t) {
  EuclideanAction d;
  d.a_t = a_t;
  return d;
}

EuclideanAction oscillator(double a_t) {
  EuclideanAction d;
  d.a_t = a_t;
  d.potential = [](double x) { return 0.5 * x * x; };
  return d;
}

std::vector<LatticePath> pooled(const EuclideanAction& dyn, const Lattice& lat, std::uint64_t seed,
                                std::size_t chains, const MetropolisOptions& opt = {}) {
  std::vector<MetropolisResult> res(chains);
  const RngStream parent(seed);
  parallel_for(chains, [&](std::size_t c) {
    RngStream r = parent.substream(c);
    res[c] = metropolis_sample(dyn, lat, r, opt);
  });
  std::vector<LatticePath> out;
  for (auto& r : res) out.insert(out.end(), r.ensemble.begin(), r.ensemble.end());
  return out;
}

double skewness(std::span<const double> v) {
  const auto s = summarize(v);
  double m3 = 0.0;
  for (double x : v) m3 += std::pow(x - s.mean, 3);
  return m3 / static_cast<double>(v.size()) / std::pow(s.variance, 1.5);
}

}  // namespace

TEST_CASE("action") {
  const auto d = free_particle(0.1);
  CHECK(action(LatticePath::constant(10, 0.1, 3.0), d) == 0.0);
  CHECK(action(LatticePath{1.0, {0.0, 1.0}}, free_particle(1.0)) == 0.5);

  const auto ho = oscillator(0.01);
  const auto ramp = LatticePath::ramp(100, 0.01, 0.0, 1.0);
  double oracle = 0.0;
  for (std::size_t j = 0; j < 100; ++j) {
    const double dx = ramp.x[j + 1] - ramp.x[j];
    oracle += 0.5 / 0.01 * dx * dx;
    oracle += 0.01 * 0.5 * (0.5 * ramp.x[j] * ramp.x[j] + 0.5 * ramp.x[j + 1] * ramp.x[j + 1]);
  }
  CHECK(std::abs(action(ramp, ho) - oracle) < 1e-12);

  CHECK_THROWS_AS(action(LatticePath::constant(10, 0.2, 0.0), d), ArgumentError);
  CHECK_THROWS_AS(action(LatticePath{0.1, {0.0}}, d), ArgumentError);
}

TEST_CASE("path distance is a pseudo-metric") {
  const auto ho = oscillator(0.05);
  RngStream r(31);
  LatticePath p{0.05, std::vector<double>(21)};
  for (std::size_t j = 1; j < 20; ++j) p.x[j] = r.normal();
  LatticePath mirror = p;
  for (auto& x : mirror.x) x = -x;
  CHECK(path_distance(p, p, ho) == 0.0);
  CHECK(path_distance(p, mirror, ho) == 0.0);

  Lattice lat{32, 0.05, 0.0, 0.0};
  MetropolisOptions opt;
  opt.sweeps = 600;
  opt.thermalization = 100;
  const auto ens = metropolis_sample(ho, lat, r, opt).ensemble;
  REQUIRE(ens.size() >= 3);
  for (std::size_t i = 0; i + 2 < ens.size(); ++i) {
    const auto &a = ens[i], &b = ens[i + 1], &c = ens[i + 2];
    REQUIRE(path_distance(a, b, ho) == std::abs(action(a, ho) - action(b, ho)));
    REQUIRE(path_distance(a, b, ho) == path_distance(b, a, ho));
    REQUIRE(path_distance(a, c, ho) <= path_distance(a, b, ho) + path_distance(b, c, ho) + 1e-12);
  }
  CHECK_THROWS_AS(path_distance(LatticePath::constant(4, 0.05, 0), LatticePath::constant(5, 0.05, 0), ho),
                  ArgumentError);
}

TEST_CASE("metropolis preconditions") {
  RngStream r(1);
  MetropolisOptions opt;
  opt.sweeps = 10;
  opt.thermalization = 10;
  CHECK_THROWS_AS(metropolis_sample(free_particle(0.01), {16, 0.01}, r, opt), ArgumentError);
  opt.sweeps = 20;
  opt.proposal_width = 0.0;
  CHECK_THROWS_AS(metropolis_sample(free_particle(0.01), {16, 0.01}, r, opt), ArgumentError);
  opt.proposal_width = 0.1;
  CHECK_THROWS_AS(metropolis_sample(free_particle(0.01), {2, 0.01}, r, opt), ArgumentError);
  CHECK_THROWS_AS(metropolis_sample(free_particle(0.02), {16, 0.01}, r, opt), ArgumentError);
}

TEST_CASE("metropolis is reproducible and tunes acceptance") {
  RngStream a(32), b(32);
  MetropolisOptions opt;
  opt.sweeps = 2000;
  opt.thermalization = 500;
  const auto ra = metropolis_sample(free_particle(0.01), {64, 0.01}, a, opt);
  const auto rb = metropolis_sample(free_particle(0.01), {64, 0.01}, b, opt);
  CHECK(ra.action_trace == rb.action_trace);
  CHECK(ra.acceptance >= 0.3);
  CHECK(ra.acceptance <= 0.7);
  CHECK(ra.stride == static_cast<std::size_t>(std::ceil(2.0 * ra.tau_int)));
}

TEST_CASE("detailed balance audit on logged proposals") {
  RngStream r(33);
  MetropolisOptions opt;
  opt.sweeps = 400;
  opt.thermalization = 100;
  opt.tune_width = false;
  opt.proposal_width = 0.3;
  opt.audit_proposals = 1000;
  const auto res = metropolis_sample(oscillator(0.05), {64, 0.05}, r, opt);
  REQUIRE(res.proposals.size() == 1000);
  double expected = 0.0, observed = 0.0;
  std::size_t uphill = 0;
  for (const auto& p : res.proposals) {
    const double ratio = std::exp(-p.delta_s);
    REQUIRE(p.accepted == (p.delta_s <= 0.0 || p.u < ratio));
    if (p.delta_s > 0.0) {
      ++uphill;
      expected += ratio;
      observed += p.accepted;
    }
  }
  REQUIRE(uphill > 100);
  // Acceptance of uphill moves agrees with the mean Metropolis ratio.
  CHECK(std::abs(observed - expected) < 4.0 * std::sqrt(expected));
}

TEST_CASE("oscillator <x^2> matches the finite-difference ground state") {
  // Long-wavelength modes decorrelate far more slowly than the action, so the
  // error bar comes from the spread of independent chain means.
  const double a_t = 0.1;
  const Lattice lat{128, a_t, 0.0, 0.0};
  MetropolisOptions opt;
  opt.sweeps = 5000;
  opt.thermalization = 1000;
  std::vector<double> chain_means(16);
  const RngStream parent(34);
  parallel_for(chain_means.size(), [&](std::size_t c) {
    RngStream r = parent.substream(c);
    const auto ens = metropolis_sample(oscillator(a_t), lat, r, opt).ensemble;
    double s = 0.0;
    for (const auto& p : ens)
      for (std::size_t j = 32; j <= 96; ++j) s += p.x[j] * p.x[j];
    chain_means[c] = s / (65.0 * static_cast<double>(ens.size()));
  });
  const auto st = summarize(chain_means);

  const quantum::DirichletGrid g{-8.0, 8.0, 800};
  const auto gs = quantum::lowest_eigenstates([](double x) { return 0.5 * x * x; }, g, 1).front();
  double oracle = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) oracle += gs.psi[i] * gs.psi[i] * g.x(i) * g.x(i) * g.h();
  CHECK(oracle == doctest::Approx(0.5).epsilon(1e-3));
  // Lattice correction at a_t = 0.1 is (1 + a_t^2/4)^(-1/2) - 1, about 1.2e-3.
  CHECK(std::abs(st.mean - oracle) < 3.0 * st.std_error + 0.0015);
}

TEST_CASE("free-particle action: equipartition and Gaussian histogram") {
  const Lattice lat{256, 0.01, 0.0, 0.0};
  const auto ens = pooled(free_particle(0.01), lat, 35, 4);
  std::vector<double> s;
  for (const auto& p : ens) s.push_back(action(p, free_particle(0.01)));
  const auto st = summarize(s);
  // Gaussian integral over the n_t - 1 free slices gives hbar/2 each.
  CHECK(std::abs(st.mean - 255.0 / 2.0) < 3.0 * st.std_error);
  CHECK(std::abs(skewness(s)) < 0.5);
}

TEST_CASE("Hausdorff dimension of quantum paths") {
  const Lattice lat{256, 0.01, 0.0, 0.0};
  for (const auto& dyn : {free_particle(0.01), oscillator(0.01)}) {
    const auto ens = pooled(dyn, lat, 36, 8);
    REQUIRE(ens.size() >= 100);
    const auto scan = hausdorff_scan(ens, dyadic_resolutions(lat, dyn), dyn);
    CHECK(scan.d_h == doctest::Approx(2.0).epsilon(0.05));
    CHECK(scan.alpha < 0.0);
    // Finer resolution measures a longer path.
    CHECK(scan.mean_lengths.back() > scan.mean_lengths.front());
  }
}

TEST_CASE("Hausdorff estimate is stable under doubling n_t") {
  const auto dyn = free_particle(0.005);
  const Lattice lat{512, 0.005, 0.0, 0.0};
  const auto ens = pooled(dyn, lat, 37, 8);
  const auto scan = hausdorff_scan(ens, dyadic_resolutions(lat, dyn), dyn);
  CHECK(std::abs(scan.d_h - 2.0) < 0.1);
}

TEST_CASE("straight line is rectifiable") {
  const auto dyn = free_particle(0.01);
  const Lattice lat{256, 0.01, 0.0, 0.0};
  const std::vector<LatticePath> line{LatticePath::ramp(256, 0.01, 0.0, 3.0)};
  const auto scan = hausdorff_scan(line, dyadic_resolutions(lat, dyn), dyn);
  CHECK(std::abs(scan.d_h - 1.0) < 0.05);
}

TEST_CASE("hausdorff_scan input checks") {
  const auto dyn = free_particle(0.01);
  const std::vector<LatticePath> line{LatticePath::ramp(256, 0.01, 0.0, 3.0)};
  CHECK_THROWS_AS(hausdorff_scan(std::vector<LatticePath>{}, dyadic_resolutions({256, 0.01}, dyn), dyn),
                  ArgumentError);
  const std::vector<double> narrow{0.4, 0.2, 0.1};
  CHECK_THROWS_AS(hausdorff_scan(line, narrow, dyn), ArgumentError);
  // b = 1, 1, 1 after rounding: only one usable resolution.
  const std::vector<double> degenerate{1.0, 0.11, 0.1, 0.09, 0.08};
  CHECK_THROWS_AS(hausdorff_scan(line, degenerate, dyn), FitError);
}
