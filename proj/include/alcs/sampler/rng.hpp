#pragma once

#include <cstdint>
#include <random>

namespace alcs {

std::uint64_t splitmix64(std::uint64_t& state);

// Independent stream keyed by (seed, a, b); same key, same sequence.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace alcs
