#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace scrubrel {

/// SplitMix64; used to expand seeds into well-mixed state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ with counter-based stream derivation: the stream for
/// (seed, index) is a pure function of both, so trials can run on any
/// number of workers in any order and still replay bit-identically.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream_index) {
        std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (stream_index + 1));
        for (auto& w : state_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in (0, 1]; never returns 0, so log() is safe.
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Exponential waiting time; infinity for rate 0 (event never fires).
    double exponential(double rate) {
        if (rate <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(uniform_pos()) / rate;
    }

    /// Uniform integer in [0, n).
    std::uint32_t uniform_below(std::uint32_t n) {
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

} // namespace scrubrel
