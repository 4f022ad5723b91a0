#pragma once

#include <cstdint>
#include <random>

namespace coalition {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sub-seed scheme: every random stream is identified by (seed, stream, index)
// where `stream` names the consumer (see StreamTag) and `index` is the task or
// trial counter. Results therefore never depend on how tasks map to threads.
enum class StreamTag : std::uint64_t {
  kProfile = 1,
  kLimit = 2,
  kPlateau = 3,
  kCompare = 4,
  kConverge = 5,
};

inline std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(tag))) + index);
}

inline Engine make_engine(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  return Engine(derive_seed(seed, tag, index));
}

}  // namespace coalition
