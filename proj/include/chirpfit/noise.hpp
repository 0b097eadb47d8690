#pragma once

#include <cstdint>

#include "chirpfit/types.hpp"

namespace chirpfit {

// splitmix64 finalizer; used to decorrelate per-replication seeds derived
// from a common base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

// Draws n samples of the stationary noise process X(t), t = 1..n.
//
// Innovations e(t) are iid N(0, sigma2) from mt19937_64. The main-window
// draws e(1)..e(n) come first, then any presample values e(0), e(-1), ...
// in descending order of t. This makes ma1 with rho = 0 reproduce the iid
// stream bit for bit, and keeps the filtered processes comparable across
// kinds for a fixed seed.
Signal draw_noise(const NoiseSpec& spec, int n, std::uint64_t seed);

}  // namespace chirpfit
