#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace ccn {

/// SplitMix64 finalizer. Used to expand seeds and to derive child streams.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for the `stream`-th independent child of `seed`. Repetition r of an
/// experiment seeded with s uses derive_seed(s, r).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// xoshiro256** generator, state filled by four SplitMix64 outputs of the seed.
/// Normals come from Box-Muller on the uniform stream (pairs are cached), so
/// draws are bit-identical on every platform with IEEE doubles and a
/// conforming libm.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace ccn
