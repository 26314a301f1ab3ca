#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab::paths {

using Potential = std::function<double(double)>;

/// Positions x_0..x_{n_t} on n_t intervals of imaginary time a_t. x_0 and x_{n_t}
/// are the fixed endpoints.
struct LatticePath {
  double a_t = 1.0;
  std::vector<double> x;

  std::size_t n_t() const { return x.empty() ? 0 : x.size() - 1; }

  static LatticePath constant(std::size_t n_t, double a_t, double value);
  static LatticePath ramp(std::size_t n_t, double a_t, double from, double to);
};

struct EuclideanAction {
  double mass = 1.0;
  Potential potential;  // empty means V == 0
  double a_t = 1.0;
  double hbar = 1.0;

  double v(double x) const { return potential ? potential(x) : 0.0; }
};

/// S = sum_j m/(2 a_t) (x_{j+1} - x_j)^2 + a_t sum_j w_j V(x_j), with w_j = 1/2 at
/// the two endpoints and 1 inside. Throws ArgumentError if the path's a_t
/// differs from the action's or the path has fewer than 2 positions.
double action(const LatticePath& path, const EuclideanAction& dynamics);

/// |S(p1) - S(p2)|. A pseudo-metric: distinct paths of equal action are at
/// distance 0. Throws ArgumentError for incompatible lattices.
double path_distance(const LatticePath& p1, const LatticePath& p2, const EuclideanAction& dynamics);

struct Lattice {
  std::size_t n_t = 256;
  double a_t = 0.01;
  double x_start = 0.0;
  double x_end = 0.0;
};

struct MetropolisOptions {
  std::size_t sweeps = 10000;
  std::size_t thermalization = 2000;
  double proposal_width = 0.2;
  bool tune_width = true;          // every 10 thermalization sweeps, toward 50%
  bool warm_start = true;          // start from a free-particle Brownian bridge
  std::size_t stride = 0;          // 0: ceil(2 tau_int) of the action series
  std::size_t audit_proposals = 0; // log this many post-thermalization proposals
};

struct ProposalRecord {
  double delta_s = 0.0;  // in units of hbar
  double u = 0.0;
  bool accepted = false;
};

struct MetropolisResult {
  std::vector<LatticePath> ensemble;
  std::vector<double> action_trace;  // one value per sweep, thermalization included
  double acceptance = 0.0;           // post-thermalization
  double proposal_width = 0.0;       // frozen width
  double tau_int = 0.0;              // of the post-thermalization action series
  std::size_t stride = 1;
  std::vector<ProposalRecord> proposals;
};

/// Single-chain site-by-site Metropolis with proposals x_j + U(-w, w) and weight
/// exp(-S / hbar). Throws ArgumentError unless sweeps > thermalization, w > 0,
/// n_t >= 3 and a_t matches the action.
MetropolisResult metropolis_sample(const EuclideanAction& dynamics, const Lattice& lattice,
                                   RngStream& rng, const MetropolisOptions& options);

struct HausdorffScan {
  std::vector<double> resolutions;     // realized Δx, strictly decreasing
  std::vector<std::size_t> block_sizes;
  std::vector<double> mean_lengths;
  std::vector<double> length_stderr;
  std::size_t correction_terms = 0;
  double alpha = 0.0;
  double d_h = 1.0;
};

/// Length of each path measured on every b-th slice, where b = round(m Δx^2 /
/// (hbar a_t)) is the number of slices over which a free increment has spread Δx.
/// The exponent comes from log<L> = c0 + alpha log Δx + sum_k c_k (Δx/Δx_max)^(2k)
/// with up to two correction terms for the fixed-endpoint constraint at coarse
/// scales. Resolutions whose b is 0, does not divide n_t, leaves fewer than 2
/// links, or repeats an earlier b are skipped.
/// Throws ArgumentError for an empty ensemble, non-decreasing resolutions or a
/// span under one decade; FitError when fewer than 3 resolutions remain.
HausdorffScan hausdorff_scan(std::span<const LatticePath> ensemble,
                             std::span<const double> resolutions, const EuclideanAction& dynamics);

/// Δx values for block sizes 1, 2, 4, ... up to n_t / 2, largest first.
std::vector<double> dyadic_resolutions(const Lattice& lattice, const EuclideanAction& dynamics,
                                       std::size_t max_block = 0);

}  // namespace stochlab::paths
