#pragma once

#include <cstdint>
#include <random>

namespace lincbwk {

// Named random streams. Each role draws from its own engine so that changing
// how one role consumes randomness leaves the others untouched.
enum class Stream : std::uint64_t {
  kParameters = 1,
  kContexts = 2,
  kRewardNoise = 3,
  kConsumptionNoise = 4,
  kPolicy = 5,
  kOracle = 6,
  kEpisode = 7,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Splitting rule: child = splitmix64(splitmix64(master ^ stream) + index).
inline std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
  return splitmix64(splitmix64(master ^ (static_cast<std::uint64_t>(stream) << 56)) + index);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
  return Engine(derive_seed(master, stream, index));
}

// Uniform in [0,1) from the top 53 bits. Portable across standard libraries.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace lincbwk
