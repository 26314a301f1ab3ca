#include <algorithm>
#include <cmath>
#include <numbers>

#include "stochlab/diffusion.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/fft.hpp"
#include "stochlab/quantum.hpp"

namespace stochlab::quantum {
namespace {

void check_grid(const Grid& grid) {
  if (grid.n < 2) throw ArgumentError("WaveState: grid needs at least 2 points");
  if (!(grid.x_max > grid.x_min)) throw ArgumentError("WaveState: x_max must exceed x_min");
}

// Multiplies the spectrum of psi by multiplier(k).
template <typename Multiplier>
std::vector<Amplitude> spectral_apply(const Grid& grid, std::span<const Amplitude> psi,
                                      Multiplier multiplier) {
  auto coeffs = fft::forward(psi);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    coeffs[i] *= multiplier(fft::wavenumber(i, grid.n, grid.length()));
  return fft::inverse(coeffs);
}

double profile_width(const Grid& grid, std::span<const double> f) {
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = grid.x(i);
    m0 += f[i];
    m1 += f[i] * x;
  }
  const double mean = m1 / m0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = grid.x(i) - mean;
    m2 += f[i] * d * d;
  }
  return std::sqrt(m2 / m0);
}

}  // namespace

WaveState::WaveState(Grid grid, std::vector<Amplitude> values, double hbar, double mass)
    : WaveState(grid, std::move(values), hbar, mass, true) {}

WaveState::WaveState(Grid grid, std::vector<Amplitude> values, double hbar, double mass,
                     bool normalize)
    : grid_(grid), values_(std::move(values)), hbar_(hbar), mass_(mass) {
  check_grid(grid_);
  if (values_.size() != grid_.n) throw ArgumentError("WaveState: values do not match grid size");
  if (!(hbar_ > 0.0) || !(mass_ > 0.0)) throw DomainError("WaveState: hbar and mass must be > 0");
  if (normalize) {
    const double nrm = norm();
    if (!(nrm > 0.0)) throw DomainError("WaveState: cannot normalize a zero state");
    const double scale = 1.0 / std::sqrt(nrm);
    for (auto& v : values_) v *= scale;
  }
}

WaveState WaveState::unnormalized(Grid grid, std::vector<Amplitude> values, double hbar,
                                  double mass) {
  return WaveState(grid, std::move(values), hbar, mass, false);
}

WaveState WaveState::gaussian(Grid grid, double sigma0, double x0, double k0, double hbar,
                              double mass) {
  if (!(sigma0 > 0.0)) throw DomainError("WaveState::gaussian: sigma0 must be > 0");
  check_grid(grid);
  std::vector<Amplitude> values(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    values[i] = std::polar(std::exp(-(x - x0) * (x - x0) / (4.0 * sigma0 * sigma0)), k0 * x);
  }
  return WaveState(grid, std::move(values), hbar, mass);
}

WaveState random_state(const Grid& grid, RngStream& rng, std::size_t max_components) {
  check_grid(grid);
  if (max_components == 0) throw ArgumentError("random_state: max_components must be >= 1");
  const std::size_t count = 1 + static_cast<std::size_t>(rng.below(max_components));
  const double len = grid.length();
  const double w_lo = std::max(4.0 * grid.dx(), len / 128.0), w_hi = len / 12.0;
  const double k_max = 0.25 * std::numbers::pi / grid.dx();
  std::vector<Amplitude> values(grid.n, 0.0);
  for (std::size_t c = 0; c < count; ++c) {
    const double x0 = grid.x_min + len * rng.uniform(0.2, 0.8);
    const double width = rng.uniform(w_lo, std::max(w_lo, w_hi));
    const double k0 = rng.uniform(-k_max, k_max);
    const Amplitude weight(rng.normal(), rng.normal());
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double d = grid.x(i) - x0;
      values[i] += weight * std::polar(std::exp(-d * d / (4.0 * width * width)), k0 * grid.x(i));
    }
  }
  return WaveState(grid, std::move(values));
}

double WaveState::norm() const {
  double acc = 0.0;
  for (const auto& v : values_) acc += std::norm(v);
  return acc * grid_.dx();
}

Uncertainty uncertainty_product(const WaveState& state) {
  if (std::abs(state.norm() - 1.0) > 1e-6)
    throw ContractViolation("uncertainty_product: state is not normalized");
  const Grid& grid = state.grid();
  const auto psi = state.values();
  const double dx = grid.dx();

  double mx = 0.0, mxx = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double w = std::norm(psi[i]) * dx;
    const double x = grid.x(i);
    mx += w * x;
    mxx += w * x * x;
  }

  const auto coeffs = fft::forward(psi);
  double total = 0.0, mp = 0.0, mpp = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double w = std::norm(coeffs[i]);
    const double p = state.hbar() * fft::wavenumber(i, grid.n, grid.length());
    total += w;
    mp += w * p;
    mpp += w * p * p;
  }
  mp /= total;
  mpp /= total;

  Uncertainty u;
  u.dx = std::sqrt(std::max(0.0, mxx - mx * mx));
  u.dp = std::sqrt(std::max(0.0, mpp - mp * mp));
  u.product = u.dx * u.dp;
  return u;
}

WaveState evolve_free(const WaveState& state, double t) {
  if (!(t >= 0.0)) throw DomainError("evolve_free: t must be >= 0");
  if (t == 0.0) return state;
  const double factor = state.hbar() * t / (2.0 * state.mass());
  auto values = spectral_apply(state.grid(), state.values(),
                               [&](double k) { return std::polar(1.0, -factor * k * k); });
  // Re-normalize away the O(1e-16) drift of the transform pair.
  return WaveState(state.grid(), std::move(values), state.hbar(), state.mass());
}

WaveState evolve_imaginary(const WaveState& state, double tau) {
  if (!(tau >= 0.0)) throw DomainError("evolve_imaginary: tau must be >= 0");
  const double factor = state.hbar() * tau / (2.0 * state.mass());
  auto values = spectral_apply(state.grid(), state.values(),
                               [&](double k) { return Amplitude(std::exp(-factor * k * k)); });
  return WaveState(state.grid(), std::move(values), state.hbar(), state.mass());
}

WickCheck wick_rotate_check(double sigma0, double d_coeff, double t) {
  if (!(sigma0 > 0.0) || !(d_coeff > 0.0) || !(t > 0.0))
    throw DomainError("wick_rotate_check: sigma0, D and t must be > 0");

  const double kernel_width = std::sqrt(2.0 * d_coeff * t);
  const double final_width = std::sqrt(sigma0 * sigma0 + kernel_width * kernel_width);
  const double half_span = 12.0 * final_width;
  constexpr std::size_t max_points = std::size_t{1} << 18;
  double dx = std::min(sigma0, kernel_width) / 8.0;
  dx = std::max(dx, 2.0 * half_span / static_cast<double>(max_points));
  auto n = static_cast<std::size_t>(std::ceil(2.0 * half_span / dx));
  n += n % 2;
  const Grid grid{-0.5 * dx * static_cast<double>(n), 0.5 * dx * static_cast<double>(n), n};

  std::vector<double> initial(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    initial[i] = std::exp(-x * x / (2.0 * sigma0 * sigma0));
  }

  // Imaginary-time route: hbar = 1, m = 1 / (2D) so that hbar / 2m = D.
  std::vector<Amplitude> psi0(initial.begin(), initial.end());
  const WaveState start(grid, std::move(psi0), 1.0, 1.0 / (2.0 * d_coeff));
  const WaveState evolved = evolve_imaginary(start, t);
  std::vector<double> quantum(n);
  for (std::size_t i = 0; i < n; ++i) quantum[i] = evolved.values()[i].real();

  // Diffusion route: real-space convolution with the heat kernel.
  const bool resolved = kernel_width >= 4.0 * dx;
  auto weight = [&](std::ptrdiff_t offset) {
    const double x = static_cast<double>(offset) * dx;
    if (resolved) {
      const double point[] = {x};
      return dx * diffusion::analytic_kernel(1, d_coeff, t, point)[0];
    }
    const double s = std::sqrt(4.0 * d_coeff * t);
    return 0.5 * (std::erf((x + 0.5 * dx) / s) - std::erf((x - 0.5 * dx) / s));
  };
  const auto sn = static_cast<std::ptrdiff_t>(n);
  const auto kernel_reach = std::min<std::ptrdiff_t>(
      sn - 1, static_cast<std::ptrdiff_t>(std::ceil(40.0 * std::max(kernel_width, dx) / dx)));
  const auto profile_reach = std::min<std::ptrdiff_t>(
      sn / 2, static_cast<std::ptrdiff_t>(std::ceil(40.0 * sigma0 / dx)));
  std::vector<double> weights(static_cast<std::size_t>(2 * kernel_reach + 1));
  for (std::ptrdiff_t j = -kernel_reach; j <= kernel_reach; ++j)
    weights[static_cast<std::size_t>(j + kernel_reach)] = weight(j);
  auto w_at = [&](std::ptrdiff_t offset) {
    return std::abs(offset) > kernel_reach
               ? 0.0
               : weights[static_cast<std::size_t>(offset + kernel_reach)];
  };

  // Sum over whichever factor has the narrower support.
  std::vector<double> diffused(n, 0.0);
  const std::ptrdiff_t center = sn / 2;  // grid.x(center) == 0
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    double acc = 0.0;
    if (kernel_reach <= profile_reach) {
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(-kernel_reach, i - (sn - 1));
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(kernel_reach, i);
      for (std::ptrdiff_t j = lo; j <= hi; ++j)
        acc += w_at(j) * initial[static_cast<std::size_t>(i - j)];
    } else {
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, center - profile_reach);
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(sn - 1, center + profile_reach);
      for (std::ptrdiff_t j = lo; j <= hi; ++j)
        acc += w_at(i - j) * initial[static_cast<std::size_t>(j)];
    }
    diffused[static_cast<std::size_t>(i)] = acc;
  }

  // Compare as densities (unit mass) so the two routes' normalizations drop out.
  auto to_density = [&](std::vector<double>& f) {
    double mass = 0.0;
    for (double v : f) mass += v;
    for (double& v : f) v /= mass * dx;
  };
  to_density(quantum);
  to_density(diffused);

  WickCheck check;
  check.quantum_width = profile_width(grid, quantum);
  check.diffusion_width = profile_width(grid, diffused);
  double peak = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    peak = std::max(peak, diffused[i]);
    worst = std::max(worst, std::abs(quantum[i] - diffused[i]));
  }
  check.residual = worst / peak;
  return check;
}

}  // namespace stochlab::quantum
