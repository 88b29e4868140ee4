#pragma once

#include <cstdint>

namespace prokrast::rng {

// splitmix64 (Steele, Lea, Flood 2014). Chosen because the whole generator is
// three lines and the stream-splitting rule below is trivial to reimplement
// elsewhere when someone wants to reproduce a trajectory outside this library.
inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += kGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Derive the seed of an indexed substream. Substream i of a run seed is
/// independent of how work is scheduled, which is what makes simulation
/// results identical for any worker count.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed + (index + 1) * kGamma;
    return splitmix64_next(s);
}

class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace prokrast::rng
