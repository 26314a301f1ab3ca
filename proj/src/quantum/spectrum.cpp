#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "stochlab/errors.hpp"
#include "stochlab/quantum.hpp"

namespace stochlab::quantum {
namespace {

void check_options(const DirichletGrid& grid, std::size_t n_levels, const SpectrumOptions& o) {
  if (n_levels < 2) throw ArgumentError("spectrum_gaps: need at least 2 levels");
  if (grid.n < n_levels) throw ArgumentError("spectrum_gaps: grid has fewer points than levels");
  if (!(grid.x_max > grid.x_min)) throw ArgumentError("spectrum_gaps: x_max must exceed x_min");
  if (!(o.hbar > 0.0) || !(o.mass > 0.0)) throw DomainError("spectrum_gaps: hbar, mass must be > 0");
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve(const Potential& potential,
                                                     const DirichletGrid& grid, double hbar,
                                                     double mass, int options) {
  const auto n = static_cast<Eigen::Index>(grid.n);
  const double h = grid.h();
  const double kinetic = hbar * hbar / (2.0 * mass * h * h);
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off = Eigen::VectorXd::Constant(std::max<Eigen::Index>(n - 1, 0), -kinetic);
  for (Eigen::Index i = 0; i < n; ++i)
    diag(i) = 2.0 * kinetic + potential(grid.x(static_cast<std::size_t>(i)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, options);
  if (solver.info() != Eigen::Success) throw ConvergenceError("spectrum_gaps: eigensolver failed");
  return solver;
}

Spectrum levels_from(const std::vector<double>& energies, std::size_t n_levels) {
  Spectrum s;
  for (std::size_t i = 0; i < n_levels; ++i) {
    const double gap = i == 0 ? 0.0 : energies[i] - energies[i - 1];
    s.levels.push_back({energies[i], gap});
    s.max_gap = std::max(s.max_gap, gap);
  }
  return s;
}

std::vector<double> finite_difference_energies(const Potential& potential,
                                               const DirichletGrid& grid, double hbar,
                                               double mass) {
  const auto solver = solve(potential, grid, hbar, mass, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();  // ascending
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

Spectrum spectrum_gaps(const Potential& potential, const DirichletGrid& grid, std::size_t n_levels,
                       const SpectrumOptions& options) {
  check_options(grid, n_levels, options);

  if (options.commuting_mode) {
    // Momentum values of the periodic grid with spacing h: p_m = hbar 2 pi m / (n h).
    const double h = grid.h();
    const double length = h * static_cast<double>(grid.n);
    std::vector<double> energies;
    energies.reserve(grid.n);
    const auto n = static_cast<std::ptrdiff_t>(grid.n);
    for (std::ptrdiff_t m = -n / 2; m < n - n / 2; ++m) {
      const double p = options.hbar * 2.0 * std::numbers::pi * static_cast<double>(m) / length;
      energies.push_back(p * p / (2.0 * options.mass) + potential(p));
    }
    std::sort(energies.begin(), energies.end());
    Spectrum s = levels_from(energies, n_levels);
    s.max_gap = 0.0;
    for (std::size_t i = 1; i < energies.size(); ++i)
      s.max_gap = std::max(s.max_gap, energies[i] - energies[i - 1]);
    return s;
  }

  const auto energies = finite_difference_energies(potential, grid, options.hbar, options.mass);
  Spectrum s = levels_from(energies, n_levels);

  if (options.check_convergence) {
    DirichletGrid coarse = grid;
    coarse.n = (grid.n + 1) / 2 - 1;  // doubles h when n is odd, nearly so otherwise
    if (coarse.n < n_levels)
      throw ConvergenceError("spectrum_gaps: grid too coarse to check convergence");
    const auto coarse_energies =
        finite_difference_energies(potential, coarse, options.hbar, options.mass);
    for (std::size_t i = 1; i < n_levels; ++i) {
      const double fine_gap = energies[i] - energies[i - 1];
      const double coarse_gap = coarse_energies[i] - coarse_energies[i - 1];
      if (std::abs(coarse_gap - fine_gap) > 0.01 * std::abs(fine_gap))
        throw ConvergenceError("spectrum_gaps: gap " + std::to_string(i) +
                               " moves by more than 1% between resolutions; refine the grid");
    }
  }
  return s;
}

std::vector<Eigenstate> lowest_eigenstates(const Potential& potential, const DirichletGrid& grid,
                                           std::size_t count, double hbar, double mass) {
  if (count == 0 || count > grid.n) throw ArgumentError("lowest_eigenstates: bad count");
  const auto solver = solve(potential, grid, hbar, mass, Eigen::ComputeEigenvectors);
  std::vector<Eigenstate> states;
  const double h = grid.h();
  for (std::size_t k = 0; k < count; ++k) {
    Eigenstate st;
    st.energy = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    const auto col = solver.eigenvectors().col(static_cast<Eigen::Index>(k));
    st.psi.assign(col.data(), col.data() + col.size());
    double nrm = 0.0;
    for (double v : st.psi) nrm += v * v * h;
    const double scale = 1.0 / std::sqrt(nrm);
    for (double& v : st.psi) v *= scale;
    states.push_back(std::move(st));
  }
  return states;
}

}  // namespace stochlab::quantum
