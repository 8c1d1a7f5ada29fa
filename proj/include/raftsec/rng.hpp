// Copyright 2026 raftsec contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace raftsec {

using Engine = std::mt19937_64;

/// SplitMix64 finaliser over (master, index). Distinct indices give
/// well-separated seeds, so substreams can be handed out in any order.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Independent random stream for one trial (or one sweep point).
inline Engine substream(std::uint64_t master, std::uint64_t index) { return Engine{mix_seed(master, index)}; }

}  // namespace raftsec
