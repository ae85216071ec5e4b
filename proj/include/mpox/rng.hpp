#pragma once

// Counter-based Gaussian increments.
//
// Every draw is a pure function of (seed, path_index, step_index, source), so
// paths can be generated on any thread in any order. The block cipher is
// Philox4x32-10 (Salmon, Moraes, Dror, Shaw 2011); uniforms are mapped to
// normals with the Box-Muller transform, one cipher block per pair of sources.

#include <mpox/model.hpp>

#include <array>
#include <cstdint>

namespace mpox {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Two standard normals for sources (2*pair, 2*pair+1), pair in [0, 4).
std::array<double, 2> standard_normal_pair(std::uint64_t seed, std::uint64_t path_index,
                                           std::uint64_t step_index, unsigned pair);

/// Eight independent N(0, 1) draws for one step of one path.
NoiseVector standard_normals(std::uint64_t seed, std::uint64_t path_index, std::uint64_t step_index);

/// Eight independent N(0, dt) Brownian increments.
inline NoiseVector brownian_increments(std::uint64_t seed, std::uint64_t path_index,
                                       std::uint64_t step_index, double dt) {
    return std::sqrt(dt) * standard_normals(seed, path_index, step_index);
}

} // namespace mpox
