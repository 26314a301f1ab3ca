#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab::quantum {

using Amplitude = std::complex<double>;

struct Superposition {
  Amplitude amplitude;
  double p_quantum = 0.0;    // |a + b|^2
  double p_classical = 0.0;  // |a|^2 + |b|^2
  double interference = 0.0;  // 2 Re(conj(a) b)
};

Superposition superpose(Amplitude a, Amplitude b);

// Two point sources at +-d/2, screen at distance L. Each source contributes
// (L / r) exp(i k r) with the exact source-detector distance r; the model is
// meant for the far field L >> d, where the first dark fringe sits at
// x = lambda L / (2 d).
struct DoubleSlit {
  double wavelength = 1.0;
  double slit_separation = 100.0;
  double screen_distance = 1.0e4;
};

enum class SlitMode { amplitude, classical };

double double_slit_intensity(const DoubleSlit& geometry, double x, SlitMode mode);
std::vector<double> double_slit_pattern(const DoubleSlit& geometry,
                                        std::span<const double> detector_xs, SlitMode mode);

struct DecayModel {
  double rate_lambda = 1.0;
  std::size_t n_atoms = 1000000;
};

struct DecaySample {
  std::vector<double> times;     // bin edges 0, dt, ..., t_max (bins + 1 entries)
  std::vector<double> survival;  // fraction with lifetime > times[i]
  std::vector<double> lifetimes;
  double fitted_rate = 0.0;
  double fitted_rate_stderr = 0.0;
  double mean_lifetime = 0.0;
  double mean_lifetime_stderr = 0.0;
};

/// Samples n_atoms exponential lifetimes. The rate is the count-weighted slope of
/// log(decays per bin) against bin start, i.e. a log-linear fit to the survival
/// increments; bins with fewer than 5 decays are left out.
DecaySample decay_sample(const DecayModel& model, RngStream& rng, double t_max, std::size_t bins);

/// Mean remaining lifetime of the atoms that survive past t0.
double residual_mean_lifetime(std::span<const double> lifetimes, double t0);

// Periodic cell [x_min, x_max) sampled at n points, dx = (x_max - x_min) / n.
struct Grid {
  double x_min = -20.0;
  double x_max = 20.0;
  std::size_t n = 1024;

  double dx() const { return (x_max - x_min) / static_cast<double>(n); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  double length() const { return x_max - x_min; }
};

/// Discretized wavefunction; immutable, evolution returns a new state.
class WaveState {
 public:
  /// Normalizes so sum |psi_i|^2 dx = 1.
  WaveState(Grid grid, std::vector<Amplitude> values, double hbar = 1.0, double mass = 1.0);
  /// Keeps the values as given; operations that need a normalized state check it.
  static WaveState unnormalized(Grid grid, std::vector<Amplitude> values, double hbar = 1.0,
                                double mass = 1.0);
  /// psi ~ exp(-(x - x0)^2 / (4 sigma0^2) + i k0 x): |psi|^2 has standard deviation sigma0.
  static WaveState gaussian(Grid grid, double sigma0, double x0 = 0.0, double k0 = 0.0,
                            double hbar = 1.0, double mass = 1.0);

  const Grid& grid() const { return grid_; }
  std::span<const Amplitude> values() const { return values_; }
  double hbar() const { return hbar_; }
  double mass() const { return mass_; }
  double norm() const;  // sum |psi|^2 dx

 private:
  WaveState(Grid grid, std::vector<Amplitude> values, double hbar, double mass, bool normalize);

  Grid grid_;
  std::vector<Amplitude> values_;
  double hbar_;
  double mass_;
};

/// Normalized superposition of 1..max_components Gaussian packets with random
/// complex weights, centres in the middle 60% of the cell, widths between
/// max(4 dx, L/128) and L/12, and wavenumbers within a quarter of the Nyquist limit.
WaveState random_state(const Grid& grid, RngStream& rng, std::size_t max_components = 4);

struct Uncertainty {
  double dx = 0.0;
  double dp = 0.0;
  double product = 0.0;
};

/// Position spread from |psi|^2 on the grid, momentum spread from the discrete
/// Fourier transform on the matching momentum grid p = hbar k.
/// Throws ContractViolation when |norm - 1| > 1e-6.
Uncertainty uncertainty_product(const WaveState& state);

/// Exact free evolution: spectral multiplication by exp(-i hbar k^2 t / 2m).
WaveState evolve_free(const WaveState& state, double t);

/// Imaginary-time counterpart (t -> -i tau): multiplication by exp(-hbar k^2 tau / 2m).
/// The result is renormalized.
WaveState evolve_imaginary(const WaveState& state, double tau);

struct WickCheck {
  double quantum_width = 0.0;
  double diffusion_width = 0.0;
  double residual = 0.0;  // max |profile difference| / peak
};

/// Evolves the profile exp(-x^2 / 2 sigma0^2) two ways: imaginary-time free
/// Schroedinger propagation with hbar / 2m = D, and real-space convolution with
/// the heat kernel of diffusion constant D. Widths are standard deviations of the
/// evolved profiles.
WickCheck wick_rotate_check(double sigma0, double d_coeff, double t);

using Potential = std::function<double(double)>;

// Dirichlet box: n interior points x_min + i h, i = 1..n, h = (x_max - x_min) / (n + 1).
struct DirichletGrid {
  double x_min = -10.0;
  double x_max = 10.0;
  std::size_t n = 1000;

  double h() const { return (x_max - x_min) / static_cast<double>(n + 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i + 1) * h(); }
};

struct Level {
  double energy = 0.0;
  double gap = 0.0;  // energy - previous energy; 0 for the lowest level
};

struct Spectrum {
  std::vector<Level> levels;
  double max_gap = 0.0;  // largest adjacent gap over the computed set (whole band in commuting mode)
};

struct SpectrumOptions {
  double hbar = 1.0;
  double mass = 1.0;
  bool commuting_mode = false;
  bool check_convergence = true;
};

/// Lowest n_levels eigenvalues of H = -hbar^2/2m d^2/dx^2 + V on the Dirichlet
/// grid (three-point finite differences). Convergence is checked against the
/// grid with doubled spacing: any gap moving by more than 1% raises
/// ConvergenceError. In commuting mode the spectrum is E_p = p^2/2m + v(p) over
/// the n momentum values of the periodic grid with the same spacing, which
/// forms a band whose adjacent gaps close as n grows.
Spectrum spectrum_gaps(const Potential& potential, const DirichletGrid& grid,
                       std::size_t n_levels, const SpectrumOptions& options = {});

struct Eigenstate {
  double energy = 0.0;
  std::vector<double> psi;  // normalized so sum psi^2 h = 1
};

/// Lowest eigenstates (with vectors) of the same finite-difference Hamiltonian.
std::vector<Eigenstate> lowest_eigenstates(const Potential& potential, const DirichletGrid& grid,
                                           std::size_t count, double hbar = 1.0,
                                           double mass = 1.0);

}  // namespace stochlab::quantum
