#pragma once

#include <cmath>
#include <cstdint>

namespace avgps {

// Counter-based deterministic random stream. Each draw hashes
// (seed, stream, counter) through a splitmix64-style finalizer, so streams
// keyed by different ids never interact and a copied stream replays
// identically from its current counter.
class CounterRng {
 public:
  CounterRng() : CounterRng(0, 0) {}
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ull); }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Inclusive integer range.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = next_double();
    double mag = std::sqrt(-2.0 * std::log(u1));
    double ang = 6.283185307179586476925286766559 * u2;
    spare_ = mag * std::sin(ang);
    has_spare_ = true;
    return mag * std::cos(ang);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Number of successes out of n independent trials with probability p.
  int binomial(int n, double p) {
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += (next_double() < p) ? 1 : 0;
    return hits;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream ids used by the simulator so scenario reruns are schedule-independent.
namespace rng_stream {
inline constexpr std::uint64_t kGpsNoise = 1;
inline constexpr std::uint64_t kSpoof = 2;
inline constexpr std::uint64_t kCaptureDelay = 3;
inline constexpr std::uint64_t kSensors = 4;
inline constexpr std::uint64_t kBatch = 5;
}  // namespace rng_stream

}  // namespace avgps
