#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace wii {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Order-sensitive combination of a seed with further integer keys.
std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::int64_t> keys);

// Labeled fan-out: stage seeds are derived from (label, root).
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

}  // namespace wii
