#include "alcs/sampler/rng.hpp"

namespace alcs {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = seed;
  std::uint64_t key = splitmix64(s);
  s = key ^ a;
  key = splitmix64(s);
  s = key ^ b;
  key = splitmix64(s);
  return std::mt19937_64(key);
}

}  // namespace alcs
