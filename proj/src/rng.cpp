#include <mpox/rng.hpp>

#include <cmath>
#include <numbers>

namespace mpox {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53U;
constexpr std::uint32_t kMul1 = 0xCD9E8D57U;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

// 53-bit uniform in (0, 1].
inline double open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// 53-bit uniform in [0, 1).
inline double half_open_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

std::array<double, 2> standard_normal_pair(std::uint64_t seed, std::uint64_t path_index,
                                           std::uint64_t step_index, unsigned pair) {
    // Counter layout: step (64 bits) | path low word | path high bits << 2 | pair.
    const PhiloxCounter counter = {static_cast<std::uint32_t>(step_index),
                                   static_cast<std::uint32_t>(step_index >> 32),
                                   static_cast<std::uint32_t>(path_index),
                                   static_cast<std::uint32_t>((path_index >> 32) << 2) | (pair & 3U)};
    const PhiloxKey key = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const auto block = philox4x32_10(counter, key);

    const std::uint64_t w0 = (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
    const std::uint64_t w1 = (static_cast<std::uint64_t>(block[3]) << 32) | block[2];
    const double radius = std::sqrt(-2.0 * std::log(open_unit(w0)));
    const double angle = 2.0 * std::numbers::pi * half_open_unit(w1);
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

NoiseVector standard_normals(std::uint64_t seed, std::uint64_t path_index, std::uint64_t step_index) {
    NoiseVector z;
    for (unsigned pair = 0; pair < 4; ++pair) {
        const auto [a, b] = standard_normal_pair(seed, path_index, step_index, pair);
        z(2 * pair) = a;
        z(2 * pair + 1) = b;
    }
    return z;
}

} // namespace mpox
