#pragma once

#include <cstdint>
#include <random>

namespace orq {

/// Substream roles. A root seed expands to one independent stream per role so
/// that one policy's draws never shift another's.
enum class StreamRole : std::uint64_t {
  builder = 1,
  painter = 2,
  chance = 3,
  hidden = 4,
  trial = 5,
  probe = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based seed derivation: mixes (root, role, index) through splitmix64.
std::uint64_t derive_seed(std::uint64_t root, StreamRole role,
                          std::uint64_t index = 0);

/// Portable random stream. Draws are bit-identical across platforms: the
/// engine is std::mt19937_64 and the conversions below avoid the
/// implementation-defined std distributions.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace orq
