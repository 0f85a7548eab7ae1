#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace mtp {

/// Deterministic, seedable stream generator.  Per-suite streams are derived
/// by hashing the suite name into the seed, so suites can run in any order
/// (or alone) and still see identical draws.  Bounded draws reduce the raw
/// 64-bit engine output directly; std::uniform_int_distribution is not
/// implementation-stable and is deliberately avoided.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t mix(std::uint64_t seed, std::string_view stream_name) {
    // FNV-1a over the name, then splitmix64 finalization with the seed.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : stream_name) {
      h ^= c;
      h *= 1099511628211ull;
    }
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull + h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static Rng for_stream(std::uint64_t seed, std::string_view stream_name) {
    return Rng(mix(seed, stream_name));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [lo, hi] inclusive.
  long long uniform(long long lo, long long hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(next_u64() % span);
  }

  bool coin() { return (next_u64() & 1u) != 0; }

  /// Uniform over {-hi..-1, 1..hi} (never zero).
  long long nonzero(long long hi) {
    long long v = uniform(1, hi);
    return coin() ? v : -v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mtp
