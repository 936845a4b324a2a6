#pragma once

#include <cstdint>
#include <random>

namespace prodplan {

/// Which random stream of a Monte Carlo path is requested.
enum class Stream : std::uint32_t { Chain = 0, Brownian = 1 };

/// Independent generator for (seed, path, stream). Seeding goes through
/// std::seed_seq so neighbouring path indices give unrelated states, and a
/// path's draws never depend on which thread simulates it.
inline std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t path, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                      static_cast<std::uint32_t>(stream), 0x70726f64u};
    return std::mt19937_64(seq);
}

} // namespace prodplan
