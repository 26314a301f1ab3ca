#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace stochlab {

/// Reproducible random stream identified by (seed, stream_id).
///
/// The generator is xoshiro256** with its state derived from both identifiers
/// through SplitMix64, so distinct stream ids give decorrelated sequences and the
/// same pair always replays bit-identically. A stream is single-owner: copy it to
/// fork an identical replay, call substream() to derive an independent child.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Child stream for replica/block `index`; depends only on (seed, stream_id, index).
  RngStream substream(std::uint64_t index) const;

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1], safe for log().
  double uniform_open0();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal (Box-Muller, second variate cached).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Draw from N(mu, sigma^2). sigma == 0 returns mu without consuming the stream.
/// Throws DomainError for sigma < 0.
double gaussian(RngStream& rng, double mu, double sigma);

/// In-place Fisher-Yates shuffle driven by `rng`.
template <typename T>
void shuffle(std::span<T> items, RngStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace stochlab
