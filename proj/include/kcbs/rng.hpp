#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Counter-based deterministic random streams built on the SplitMix64
// finalizer (Steele, Lea, Flood 2014) with the fixed golden-gamma increment.
// A stream is keyed by hashing an arbitrary tuple of 64-bit fields; draws
// are pure functions of (key, counter) so output is independent of thread
// count and execution order.

namespace kcbs {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Hash-chains key fields into a stream key.
inline std::uint64_t stream_key(std::uint64_t h, std::uint64_t field) {
  return splitmix64_mix((h + field) * kGoldenGamma + kGoldenGamma);
}

template <typename... Fields>
std::uint64_t stream_key(std::uint64_t h, std::uint64_t field, Fields... rest) {
  return stream_key(stream_key(h, field), rest...);
}

/// Counter-based stream: draw k is splitmix64_mix(key + (k+1)*gamma).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return splitmix64_mix(key_ + (++counter_) * kGoldenGamma); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (kept in-repo: std::normal_distribution
  /// is implementation-defined and would break cross-platform determinism).
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace kcbs
