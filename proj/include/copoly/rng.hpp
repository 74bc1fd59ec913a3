// Counter-based RNG streams for reproducible parallel Monte Carlo.
//
// Every stochastic routine derives one generator per (run seed, sample index)
// pair, so results are bit-identical no matter how samples are distributed
// over worker threads.
#pragma once

#include <cmath>
#include <cstdint>

namespace copoly {

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64_step(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Deterministic per-stream generator. Stream identity is mixed into the
/// initial state with two avalanche rounds, decorrelating nearby indices.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_lo, std::uint64_t stream_hi = 0) {
        state_ = seed;
        (void)detail::splitmix64_step(state_);
        state_ ^= 0xD1B54A32D192ED03ULL * (stream_lo + 1);
        (void)detail::splitmix64_step(state_);
        state_ ^= 0x8CB92BA72F3D8DD7ULL * (stream_hi + 1);
        (void)detail::splitmix64_step(state_);
    }

    std::uint64_t next_u64() { return detail::splitmix64_step(state_); }

    /// Uniform on (0,1]; never returns 0 so log() is always safe.
    double uniform01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (pair cached).
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// +1 or -1 with probability 1/2 each.
    double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

private:
    std::uint64_t state_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace copoly
