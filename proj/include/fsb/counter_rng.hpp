// Counter-based Gaussian stream: Philox4x32-10 (Salmon, Moraes, Dror, Shaw,
// "Parallel random numbers: as easy as 1, 2, 3", SC'11) keyed by a 64-bit
// seed, with a 128-bit counter laid out as
//
//   counter = (step lo32, step hi32, mode, purpose-tag)
//
// so that every (seed, tag, mode, step) cell is an independent draw that can
// be regenerated in any order — this is what makes noise refinement and mode
// truncation couplings bitwise, and runs reproducible across thread schedules.
// One Philox block (128 bits) feeds one Box–Muller pair; gaussian() returns
// the cosine leg, gaussian_pair() both.

#pragma once

#include <array>
#include <cstdint>

namespace fsb {

struct Philox4x32 {
    // 10-round Philox4x32 block function.
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key);
};

// Purpose tags: distinct sub-streams of the same seed.
enum class StreamTag : std::uint32_t {
    ou_forcing = 1,      // increments driving the OU recursion
    wiener = 2,          // raw Wiener increments
    norm_pairs = 0xA001, // long-range pair sampling in the Holder norm
    test = 0xF000        // scratch streams for test oracles
};

// Standard normal draw for cell (seed, tag, mode, step); mode is the 1-based
// basis index, step the fine time-step index.
double gaussian(std::uint64_t seed, StreamTag tag, std::uint32_t mode, std::uint64_t step);

// Both Box–Muller legs of the same cell (used where two draws per cell are
// cheaper than two cells).
std::array<double, 2> gaussian_pair(std::uint64_t seed, StreamTag tag,
                                    std::uint32_t mode, std::uint64_t step);

// Uniform in [0,1) from the same cell family (used for pair sampling).
double uniform01(std::uint64_t seed, StreamTag tag, std::uint32_t mode, std::uint64_t step);

// Identifier embedded in study reports.
inline const char* rng_id() { return "philox4x32-10/box-muller/v1"; }

}  // namespace fsb
