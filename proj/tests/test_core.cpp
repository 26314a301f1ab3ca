#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "stochlab/errors.hpp"
#include "stochlab/fft.hpp"
#include "stochlab/parallel.hpp"
#include "stochlab/rng.hpp"
#include "stochlab/stats.hpp"

using namespace stochlab;

TEST_CASE("rng replays bit-identically and substreams are stable") {
  RngStream a(7, 3), b(7, 3);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next() == b.next());
  const RngStream p(7, 3);
  RngStream c1 = p.substream(5), c2 = p.substream(5), c3 = p.substream(6);
  CHECK(c1.next() == c2.next());
  CHECK(c1.next() != c3.next());
}

TEST_CASE("distinct stream ids pass a chi-square uniformity test") {
  // 100 bins, 99 dof: the 0.99 quantile is about 134.6.
  for (std::uint64_t id : {0u, 1u, 2u}) {
    RngStream r(2024, id);
    std::vector<int> bins(100, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++bins[static_cast<std::size_t>(r.uniform() * 100.0)];
    double chi2 = 0.0;
    for (int k : bins) chi2 += (k - 1000.0) * (k - 1000.0) / 1000.0;
    CHECK(chi2 < 134.6);
  }
  // Cross-stream correlation is negligible.
  RngStream x(2024, 0), y(2024, 1);
  double sxy = 0.0;
  for (int i = 0; i < 100000; ++i) sxy += (x.uniform() - 0.5) * (y.uniform() - 0.5);
  CHECK(std::abs(sxy / 100000.0) < 4.0 / 12.0 / std::sqrt(100000.0));
}

TEST_CASE("below is unbiased and in range") {
  RngStream r(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = r.below(7);
    REQUIRE(v < 7);
    ++hits[v];
  }
  for (int h : hits) CHECK(std::abs(h - 10000) < 500);
}

TEST_CASE("gaussian") {
  RngStream r(11);
  CHECK(gaussian(r, 3.0, 0.0) == 3.0);
  CHECK_THROWS_AS(gaussian(r, 0.0, -1.0), DomainError);
  std::vector<double> v(1000000);
  for (auto& x : v) x = gaussian(r, 0.0, 1.0);
  const auto s = summarize(v);
  CHECK(std::abs(s.mean) < 0.004);
  CHECK(std::abs(s.variance - 1.0) < 0.01);
}

TEST_CASE("summarize") {
  const std::vector<double> v{1, 2, 3, 4};
  const auto s = summarize(v);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK_THROWS_AS(summarize(std::vector<double>{}), ArgumentError);
}

TEST_CASE("clt scaling") {
  RngStream r(5);
  const std::vector<std::size_t> ns{10, 100, 1000};
  const auto res = clt_scaling(r, ns, 10000);
  CHECK(res.slope == doctest::Approx(-0.5).epsilon(0.1));

  const std::vector<std::size_t> four{4};
  const auto flat = clt_scaling(r, four, 100, [](RngStream&) { return 2.0; });
  CHECK(flat.rows[0].std_error == 0.0);

  const std::vector<std::size_t> two{2};
  const auto uni = clt_scaling(r, two, 100000, [](RngStream& s) { return s.uniform(); });
  CHECK(std::abs(uni.rows[0].std_error - std::sqrt(1.0 / 24.0)) < 0.005);
}

TEST_CASE("clt slope holds for skewed and bounded draws") {
  const std::vector<std::size_t> ns{8, 64, 512};
  const std::vector<Sampler> draws{
      [](RngStream& s) { return -std::log(s.uniform_open0()); },
      [](RngStream& s) { return s.uniform() < 0.1 ? 1.0 : 0.0; },
      [](RngStream& s) { return s.uniform(-1.0, 1.0); }};
  for (std::size_t i = 0; i < draws.size(); ++i) {
    RngStream r(99, i);
    const auto res = clt_scaling(r, ns, 10000, draws[i]);
    CHECK(res.slope > -0.6);
    CHECK(res.slope < -0.4);
  }
}

TEST_CASE("periodogram") {
  const std::size_t n = 4096;
  SUBCASE("sinusoid gives one line") {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2.0 * std::numbers::pi * 64.0 * static_cast<double>(i) / n);
    const auto ps = periodogram(x, 1.0, 1);
    const auto peak = static_cast<std::size_t>(std::max_element(ps.power.begin(), ps.power.end()) - ps.power.begin());
    CHECK(peak == 64);
    CHECK(ps.frequencies[peak] == doctest::Approx(64.0 / n));
    CHECK(ps.power[peak] > 100.0 * std::max(ps.power[peak - 1], ps.power[peak + 1]) + 1e-300);
  }
  SUBCASE("white noise is flat") {
    RngStream r(3);
    std::vector<double> x(n * 16);
    for (auto& v : x) v = r.normal();
    const auto ps = periodogram(x, 1.0, 16, true);
    std::vector<double> p(ps.power.begin() + 1, ps.power.end());
    CHECK(*std::max_element(p.begin(), p.end()) / median(p) < 10.0);
  }
  SUBCASE("constant goes to DC") {
    std::vector<double> x(n, 2.0);
    const auto ps = periodogram(x, 1.0, 4);
    CHECK(ps.power[0] == doctest::Approx(4.0));
    for (std::size_t k = 1; k < ps.power.size(); ++k) CHECK(ps.power[k] < 1e-20);
  }
  SUBCASE("Parseval after de-meaning") {
    RngStream r(4);
    std::vector<double> x(n * 4 + 17);
    for (auto& v : x) v = r.normal() + 0.3;
    const auto ps = periodogram(x, 0.5, 4, true);
    double total = 0.0, ms = 0.0;
    for (double p : ps.power) total += p;
    const std::size_t m = ps.segment_length;
    CHECK(m == n + 4);
    for (std::size_t s = 0; s < 4; ++s) {
      double mean = 0.0;
      for (std::size_t i = 0; i < m; ++i) mean += x[s * m + i] / m;
      for (std::size_t i = 0; i < m; ++i) ms += (x[s * m + i] - mean) * (x[s * m + i] - mean) / (4.0 * m);
    }
    CHECK(std::abs(total - ms) <= 1e-9 * ms);
  }
  CHECK_THROWS_AS(periodogram(std::vector<double>(3, 1.0), 1.0, 4), ArgumentError);
}

TEST_CASE("fft round trip") {
  RngStream r(8);
  std::vector<std::complex<double>> x(30);
  for (auto& v : x) v = {r.normal(), r.normal()};
  const auto back = fft::inverse(fft::forward(x));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back[i] - x[i]) < 1e-12);
}

TEST_CASE("power-law fit") {
  std::vector<double> x, sq, inv, noisy;
  RngStream r(6);
  for (int i = 1; i <= 50; ++i) {
    const double v = i * 0.7;
    x.push_back(v);
    sq.push_back(v * v);
    inv.push_back(5.0 / v);
    noisy.push_back(std::pow(v, 1.5) * (1.0 + 0.01 * r.normal()));
  }
  CHECK(std::abs(fit_power_law(x, sq).exponent - 2.0) < 1e-12);
  CHECK(fit_power_law(x, inv).exponent == doctest::Approx(-1.0));
  CHECK(fit_power_law(x, inv).prefactor == doctest::Approx(5.0));
  CHECK(std::abs(fit_power_law(x, noisy).exponent - 1.5) < 0.05);
  std::vector<double> bad = sq;
  bad[3] = 0.0;
  CHECK_THROWS_AS(fit_power_law(x, bad), DomainError);
}

TEST_CASE("ccdf fit recovers a Pareto tail") {
  RngStream r(12);
  std::vector<double> v(200000);
  for (auto& x : v) x = std::pow(r.uniform_open0(), -1.0 / 1.5);  // P(X >= x) = x^-1.5
  const auto f = ccdf_fit(v, 1.0, 100.0);
  CHECK(f.exponent == doctest::Approx(-1.5).epsilon(0.05));
  CHECK_THROWS_AS(ccdf_fit(v, 10.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(ccdf_fit(v, 1e6, 1e7), FitError);
}

TEST_CASE("monte carlo integration") {
  RngStream r(13);
  const auto one = mc_integrate(r, [](std::span<const double>) { return 1.0; }, 4, 1000);
  CHECK(one.mean == 1.0);
  CHECK(one.variance == 0.0);
  const auto prod = mc_integrate(
      r, [](std::span<const double> x) {
        double p = 1.0;
        for (double v : x) p *= v;
        return p;
      },
      10, 1000000);
  CHECK(std::abs(prod.mean - std::pow(0.5, 10)) < 3.0 * prod.std_error);
  const auto lin = mc_integrate(r, [](std::span<const double> x) { return x[0]; }, 1, 100000);
  CHECK(std::abs(lin.mean - 0.5) < 3.0 * lin.std_error);
}

TEST_CASE("autocorrelation time of an AR(1) chain") {
  // x_t = phi x_{t-1} + noise has tau = (1 + phi) / (2 (1 - phi)).
  RngStream r(14);
  const double phi = 0.8;
  std::vector<double> x(200000);
  double v = 0.0;
  for (auto& s : x) s = v = phi * v + r.normal();
  CHECK(integrated_autocorrelation_time(x) == doctest::Approx(4.5).epsilon(0.1));
}

TEST_CASE("spearman and median") {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{5, 6, 7, 8, 100}, c{2, 1, 1, 0, -3};
  CHECK(spearman(a, b) == doctest::Approx(1.0));
  CHECK(spearman(a, c) < -0.9);
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, 4);
  for (int h : hits) CHECK(h == 1);
}
