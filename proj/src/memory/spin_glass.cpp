#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "stochlab/errors.hpp"
#include "stochlab/memory.hpp"

namespace stochlab::memory {
namespace {

void check_sizes(std::span<const int> config, const CouplingMatrix& c) {
  if (config.size() != c.size()) throw ArgumentError("spin config and couplings differ in size");
}

void check_enumerable(const CouplingMatrix& c) {
  if (c.size() > kMaxEnumerationSpins)
    throw CapabilityError("exact enumeration supports at most 24 spins");
}

// Local fields h_i = sum_k J_ik s_k.
std::vector<double> local_fields(std::span<const int> s, const CouplingMatrix& c) {
  std::vector<double> h(c.size(), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto row = c.row(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) acc += row[k] * s[k];
    h[i] = acc;
  }
  return h;
}

void flip(std::vector<int>& s, std::vector<double>& h, const CouplingMatrix& c, std::size_t i) {
  const auto row = c.row(i);
  const double change = -2.0 * s[i];
  s[i] = -s[i];
  for (std::size_t k = 0; k < c.size(); ++k) h[k] += row[k] * change;
}

}  // namespace

CouplingMatrix::CouplingMatrix(std::size_t n, CouplingOrigin origin)
    : n_(n), origin_(origin), j_(n * n, 0.0) {}

void CouplingMatrix::set(std::size_t i, std::size_t k, double value) {
  if (i >= n_ || k >= n_) throw ArgumentError("CouplingMatrix: index out of range");
  if (i == k) throw ArgumentError("CouplingMatrix: diagonal must stay zero");
  j_[i * n_ + k] = value;
  j_[k * n_ + i] = value;
}

void check_spins(std::span<const int> config) {
  for (int s : config)
    if (s != 1 && s != -1) throw ArgumentError("spin entries must be -1 or +1");
}

SpinConfig random_spins(std::size_t n, RngStream& rng) {
  SpinConfig s(n);
  for (auto& v : s) v = (rng.next() >> 63) ? 1 : -1;
  return s;
}

double overlap(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size() || a.empty()) throw ArgumentError("overlap: sizes differ or empty");
  long acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return static_cast<double>(acc) / static_cast<double>(a.size());
}

CouplingMatrix hebbian_couplings(std::span<const SpinConfig> patterns) {
  if (patterns.empty()) throw ArgumentError("hebbian_couplings: need at least one pattern");
  const std::size_t n = patterns.front().size();
  if (n == 0) throw ArgumentError("hebbian_couplings: empty pattern");
  for (const auto& p : patterns) {
    if (p.size() != n) throw ArgumentError("hebbian_couplings: pattern lengths differ");
    check_spins(p);
  }
  CouplingMatrix c(n, CouplingOrigin::hebbian);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k) {
      int acc = 0;
      for (const auto& p : patterns) acc += p[i] * p[k];
      c.set(i, k, static_cast<double>(acc) / static_cast<double>(n));
    }
  return c;
}

CouplingMatrix sk_couplings(std::size_t n, RngStream& rng) {
  if (n < 2) throw ArgumentError("sk_couplings: need n >= 2");
  CouplingMatrix c(n, CouplingOrigin::sk_gaussian);
  const double sd = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k) c.set(i, k, sd * rng.normal());
  return c;
}

double energy(std::span<const int> config, const CouplingMatrix& couplings) {
  check_sizes(config, couplings);
  check_spins(config);
  double h = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto row = couplings.row(i);
    double acc = 0.0;
    for (std::size_t k = i + 1; k < config.size(); ++k) acc += row[k] * config[k];
    h -= acc * config[i];
  }
  return h;
}

double flip_delta(std::span<const int> config, const CouplingMatrix& couplings, std::size_t i) {
  check_sizes(config, couplings);
  if (i >= config.size()) throw ArgumentError("flip_delta: index out of range");
  const auto row = couplings.row(i);
  double field = 0.0;
  for (std::size_t k = 0; k < config.size(); ++k) field += row[k] * config[k];
  return 2.0 * config[i] * field;
}

ZeroTResult zero_t_dynamics(SpinConfig config, const CouplingMatrix& couplings, RngStream& rng,
                            std::size_t max_sweeps, const SpinConfig* reference) {
  if (max_sweeps < 1) throw ArgumentError("zero_t_dynamics: max_sweeps must be >= 1");
  check_sizes(config, couplings);
  check_spins(config);
  if (reference && reference->size() != config.size())
    throw ArgumentError("zero_t_dynamics: reference size differs");

  ZeroTResult out;
  std::vector<double> h = local_fields(config, couplings);
  double e = energy(config, couplings);
  out.energy_trace.push_back(e);
  if (reference) out.overlap_trace.push_back(overlap(config, *reference));
  std::vector<std::size_t> order(config.size());
  std::iota(order.begin(), order.end(), 0);
  while (out.sweeps < max_sweeps) {
    shuffle(std::span<std::size_t>(order), rng);
    ++out.sweeps;
    bool flipped = false;
    for (std::size_t i : order) {
      const double delta = 2.0 * config[i] * h[i];
      if (delta < 0.0) {
        flip(config, h, couplings, i);
        e += delta;
        flipped = true;
      }
    }
    out.energy_trace.push_back(e);
    if (reference) out.overlap_trace.push_back(overlap(config, *reference));
    if (!flipped) {
      out.converged = true;
      break;
    }
  }
  out.config = std::move(config);
  return out;
}

ThermoState exact_thermo(const CouplingMatrix& couplings, double temperature) {
  check_enumerable(couplings);
  if (!(temperature > 0.0)) throw DomainError("exact_thermo: temperature must be > 0");
  const std::size_t n = couplings.size();
  SpinConfig s(n, -1);
  std::vector<double> h = local_fields(s, couplings);
  double e = energy(s, couplings);
  // Gray-code walk; online log-sum-exp of -H/T with the energy-weighted sum.
  double max_w = -e / temperature, sum = 1.0, sum_e = e;
  const std::uint64_t states = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < states; ++g) {
    const auto i = static_cast<std::size_t>(std::countr_zero(g));
    e += 2.0 * s[i] * h[i];
    flip(s, h, couplings, i);
    if ((g & 0xffff) == 0) e = energy(s, couplings);
    const double w = -e / temperature;
    if (w > max_w) {
      const double scale = std::exp(max_w - w);
      sum *= scale;
      sum_e *= scale;
      max_w = w;
    }
    const double p = std::exp(w - max_w);
    sum += p;
    sum_e += p * e;
  }
  ThermoState t;
  t.temperature = temperature;
  t.log_z = max_w + std::log(sum);
  t.partition_z = std::exp(t.log_z);
  t.free_energy = -temperature * t.log_z;
  t.mean_energy = sum_e / sum;
  return t;
}

GroundState ground_state_bruteforce(const CouplingMatrix& couplings) {
  check_enumerable(couplings);
  const std::size_t n = couplings.size();
  if (n == 0) throw ArgumentError("ground_state_bruteforce: empty system");
  SpinConfig s(n, -1);
  std::vector<double> h = local_fields(s, couplings);
  double e = energy(s, couplings);
  GroundState best{s, e};
  const std::uint64_t states = std::uint64_t{1} << (n - 1);
  // Counting upward in binary with spin n-1 as the lowest bit visits states in
  // lexicographic order; each increment flips the trailing run of +1 spins.
  for (std::uint64_t c = 1; c < states; ++c) {
    const auto run = static_cast<std::size_t>(std::countr_zero(c));
    for (std::size_t b = 0; b <= run; ++b) {
      const std::size_t i = n - 1 - b;
      e += 2.0 * s[i] * h[i];
      flip(s, h, couplings, i);
    }
    if ((c & 0xffff) == 0) e = energy(s, couplings);
    if (e < best.energy - 1e-9 * std::max(1.0, std::abs(best.energy))) {
      best.config = s;
      best.energy = e;
    }
  }
  best.energy = energy(best.config, couplings);
  return best;
}

void AnnealSchedule::validate() const {
  if (!(t_initial > 0.0)) throw ArgumentError("AnnealSchedule: t_initial must be > 0");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ArgumentError("AnnealSchedule: ratio must be in (0, 1)");
  if (levels < 1 || sweeps_per_level < 1)
    throw ArgumentError("AnnealSchedule: levels and sweeps_per_level must be >= 1");
}

double AnnealSchedule::temperature(std::size_t level) const {
  return t_initial * std::pow(ratio, static_cast<double>(level));
}

AnnealResult simulated_annealing(const CouplingMatrix& couplings, const AnnealSchedule& schedule,
                                 RngStream& rng) {
  schedule.validate();
  const std::size_t n = couplings.size();
  if (n == 0) throw ArgumentError("simulated_annealing: empty system");
  SpinConfig s = random_spins(n, rng);
  std::vector<double> h = local_fields(s, couplings);
  double e = energy(s, couplings);
  AnnealResult out;
  out.config = s;
  out.energy = e;
  for (std::size_t level = 0; level < schedule.levels; ++level) {
    const double t = schedule.temperature(level);
    std::size_t accepted = 0;
    for (std::size_t sweep = 0; sweep < schedule.sweeps_per_level; ++sweep) {
      for (std::size_t i = 0; i < n; ++i) {
        const double delta = 2.0 * s[i] * h[i];
        if (delta <= 0.0 || rng.uniform() < std::exp(-delta / t)) {
          flip(s, h, couplings, i);
          e += delta;
          ++accepted;
          if (e < out.energy) {
            out.energy = e;
            out.config = s;
          }
        }
      }
    }
    e = energy(s, couplings);
    out.acceptance_trace.push_back(static_cast<double>(accepted) /
                                   static_cast<double>(n * schedule.sweeps_per_level));
    out.best_trace.push_back(out.energy);
  }
  out.energy = energy(out.config, couplings);
  return out;
}

void write_couplings_csv(std::ostream& out, const CouplingMatrix& couplings) {
  out << "# n=" << couplings.size() << "\ni,j,value\n";
  char buf[64];
  for (std::size_t i = 0; i < couplings.size(); ++i)
    for (std::size_t k = i + 1; k < couplings.size(); ++k) {
      const double v = couplings(i, k);
      if (v == 0.0) continue;
      const auto r = std::to_chars(buf, buf + sizeof buf, v);
      out << i << ',' << k << ',' << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf)) << '\n';
    }
}

CouplingMatrix read_couplings_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# n=", 0) != 0)
    throw ArgumentError("read_couplings_csv: missing '# n=' line");
  const std::size_t n = std::stoul(line.substr(4));
  if (!std::getline(in, line) || line != "i,j,value")
    throw ArgumentError("read_couplings_csv: missing header");
  CouplingMatrix c(n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto a = line.find(','), b = line.find(',', a + 1);
    if (a == std::string::npos || b == std::string::npos)
      throw ArgumentError("read_couplings_csv: malformed line '" + line + "'");
    double v = 0.0;
    const auto r = std::from_chars(line.data() + b + 1, line.data() + line.size(), v);
    if (r.ec != std::errc{}) throw ArgumentError("read_couplings_csv: bad value '" + line + "'");
    c.set(std::stoul(line.substr(0, a)), std::stoul(line.substr(a + 1, b - a - 1)), v);
  }
  return c;
}

}  // namespace stochlab::memory
