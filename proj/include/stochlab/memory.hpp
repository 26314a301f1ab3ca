#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab::memory {

using SpinConfig = std::vector<int>;  // entries are -1 or +1

enum class CouplingOrigin { custom, hebbian, sk_gaussian };

/// Symmetric N x N couplings with zero diagonal, stored densely.
class CouplingMatrix {
 public:
  explicit CouplingMatrix(std::size_t n = 0, CouplingOrigin origin = CouplingOrigin::custom);

  std::size_t size() const { return n_; }
  CouplingOrigin origin() const { return origin_; }
  double operator()(std::size_t i, std::size_t k) const { return j_[i * n_ + k]; }
  /// Sets J_ik and J_ki. Throws ArgumentError for i == k or out-of-range indices.
  void set(std::size_t i, std::size_t k, double value);
  std::span<const double> row(std::size_t i) const { return {j_.data() + i * n_, n_}; }

 private:
  std::size_t n_;
  CouplingOrigin origin_;
  std::vector<double> j_;
};

/// Throws ArgumentError unless every entry is -1 or +1.
void check_spins(std::span<const int> config);
SpinConfig random_spins(std::size_t n, RngStream& rng);
/// (1/N) sum_i a_i b_i.
double overlap(std::span<const int> a, std::span<const int> b);

/// J_ik = (1/N) sum_mu xi_i xi_k for i != k.
CouplingMatrix hebbian_couplings(std::span<const SpinConfig> patterns);
/// Upper-triangle entries drawn independently from N(0, 1/N).
CouplingMatrix sk_couplings(std::size_t n, RngStream& rng);

/// H = -sum_{i<k} J_ik s_i s_k.
double energy(std::span<const int> config, const CouplingMatrix& couplings);
/// H(s with spin i flipped) - H(s).
double flip_delta(std::span<const int> config, const CouplingMatrix& couplings, std::size_t i);

struct ZeroTResult {
  SpinConfig config;
  std::size_t sweeps = 0;
  bool converged = false;             // a full sweep made no flip
  std::vector<double> energy_trace;   // start, then after each sweep
  std::vector<double> overlap_trace;  // against `reference`, same sampling; empty without one
};

/// Asynchronous updates in a fresh random order each sweep; a spin flips only if
/// that strictly lowers H.
ZeroTResult zero_t_dynamics(SpinConfig config, const CouplingMatrix& couplings, RngStream& rng,
                            std::size_t max_sweeps, const SpinConfig* reference = nullptr);

struct ThermoState {
  double temperature = 0.0;
  double log_z = 0.0;
  double partition_z = 0.0;  // exp(log_z); may overflow to inf
  double free_energy = 0.0;  // -T log Z
  double mean_energy = 0.0;  // Boltzmann average of H
};

inline constexpr std::size_t kMaxEnumerationSpins = 24;

/// Exact enumeration over 2^N states. Throws CapabilityError for N > 24 and
/// DomainError for T <= 0.
ThermoState exact_thermo(const CouplingMatrix& couplings, double temperature);

struct GroundState {
  SpinConfig config;
  double energy = 0.0;
};

/// Minimum over the 2^(N-1) states with s_0 = -1, scanned in lexicographic order
/// (-1 before +1); the first state within 1e-9 of the minimum wins.
/// Throws CapabilityError for N > 24 and ArgumentError for N == 0.
GroundState ground_state_bruteforce(const CouplingMatrix& couplings);

struct AnnealSchedule {
  double t_initial = 2.0;
  double ratio = 0.95;
  std::size_t levels = 120;
  std::size_t sweeps_per_level = 50;

  /// Throws ArgumentError unless t_initial > 0, 0 < ratio < 1, levels and sweeps >= 1.
  void validate() const;
  double temperature(std::size_t level) const;
};

struct AnnealResult {
  SpinConfig config;  // best seen
  double energy = 0.0;
  std::vector<double> acceptance_trace;  // per level
  std::vector<double> best_trace;        // best-seen energy after each level
};

/// Metropolis flips in sequential sweeps from a random start.
AnnealResult simulated_annealing(const CouplingMatrix& couplings, const AnnealSchedule& schedule,
                                 RngStream& rng);

/// CSV triplets "i,j,value" for i < j, preceded by a header line "i,j,value" and
/// a comment line "# n=<N>".
void write_couplings_csv(std::ostream& out, const CouplingMatrix& couplings);
CouplingMatrix read_couplings_csv(std::istream& in);

}  // namespace stochlab::memory
