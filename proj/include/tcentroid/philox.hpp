#pragma once

#include <array>
#include <cstdint>

namespace tcentroid::rng {

// Philox4x32-10, as in Random123: a keyed bijection on
// 128-bit counters. Output depends only on (counter, key), so any draw can be
// recomputed independently of the order draws are made in.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key);
};

inline Philox4x32::Key key_from_seed(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Uniform double in the open interval (0, 1) from the top 52 bits. The
/// half-step offset keeps both ends exactly representable and excluded.
inline double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// The two 64-bit words of one Philox block, as open-interval uniforms.
struct UniformPair {
    double first;
    double second;
};

inline UniformPair uniforms(const Philox4x32::Counter& block) {
    const std::uint64_t a = (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
    const std::uint64_t b = (static_cast<std::uint64_t>(block[3]) << 32) | block[2];
    return {to_open_unit(a), to_open_unit(b)};
}

/// Counter for draw `attempt` of stream element `index`, in substream `tag`.
inline Philox4x32::Counter counter_for(std::uint64_t index, std::uint32_t attempt,
                                       std::uint32_t tag = 0) {
    return {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), attempt,
            tag};
}

}  // namespace tcentroid::rng
