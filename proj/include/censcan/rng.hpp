#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace censcan {

/// splitmix64 step; also used as the mixing function for stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Small, fast, seedable generator with an explicit state so streams can be
/// derived per task. All randomized code in this project draws from
/// RngStream; nothing uses global or implementation-defined RNG state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound) {
    // Rejection-free modulo is fine here: bound is tiny vs 2^64.
    return next_u64() % bound;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream from a seed and a path of tags, e.g.
/// {kStreamInject, node, day, source}. Derivation is a pure hash chain, so
/// per-cell streams are order-independent and safe to draw in parallel.
inline RngStream derive_stream(std::uint64_t seed,
                               std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = seed ^ 0xda3e39cb94b95bdbULL;
  for (std::uint64_t tag : path) {
    s ^= tag + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    std::uint64_t tmp = s;
    s = splitmix64(tmp);
  }
  return RngStream(s);
}

// Stream-purpose tags for derive_stream paths.
inline constexpr std::uint64_t kStreamInject = 0x101;
inline constexpr std::uint64_t kStreamNull = 0x102;
inline constexpr std::uint64_t kStreamWalk = 0x103;
inline constexpr std::uint64_t kStreamPermute = 0x104;
inline constexpr std::uint64_t kStreamGraphGen = 0x105;
inline constexpr std::uint64_t kStreamBenchmark = 0x106;
inline constexpr std::uint64_t kSourceRef = 1;
inline constexpr std::uint64_t kSourceTarget = 2;

/// Poisson sample via inversion by multiplication, chunked so that large
/// rates do not underflow exp(-lambda). Deterministic given the stream.
inline long poisson_sample(double lambda, RngStream& rng) {
  if (lambda <= 0.0) return 0;
  long total = 0;
  constexpr double kChunk = 30.0;
  while (lambda > 0.0) {
    const double step = lambda > kChunk ? kChunk : lambda;
    lambda -= step;
    // Knuth: count multiplications of U(0,1) until product < exp(-step).
    const double limit = std::exp(-step);
    double prod = rng.uniform01();
    long k = 0;
    while (prod >= limit) {
      ++k;
      prod *= rng.uniform01();
    }
    total += k;
  }
  return total;
}

}  // namespace censcan
