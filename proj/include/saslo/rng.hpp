#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace saslo {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent seed for a named sub-stream. Every module that needs
// randomness takes its own stream so that adding draws in one place never
// perturbs another.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ splitmix64(h));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream,
                                 std::uint64_t index) {
  return splitmix64(derive_seed(seed, stream) + splitmix64(index));
}

inline Rng make_rng(std::uint64_t seed, std::string_view stream) {
  return Rng(derive_seed(seed, stream));
}

inline Rng make_rng(std::uint64_t seed, std::string_view stream,
                    std::uint64_t index) {
  return Rng(derive_seed(seed, stream, index));
}

}  // namespace saslo
