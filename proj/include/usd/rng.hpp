#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Deterministic randomness for all simulation code. Every trial owns one
// Xoshiro256++ instance; independent streams are derived from a user seed
// and a stream index via the splitmix64 finalizer, so a batch of trials is
// reproducible bit-for-bit regardless of how it is scheduled onto threads.

namespace usd {

// splitmix64 finalizer (Steele, Lea, Flood).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Stream-derivation rule: the RNG seed of stream `index` under master
/// seed `seed` is mix64(mix64(seed) + index).
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) + index);
}

/// xoshiro256++ (Blackman, Vigna). Fixed algorithm, no library dependence,
/// identical output on every platform.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            word = mix64(sm);
            sm += 0x9E3779B97F4A7C15ull;
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next() noexcept {
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

    /// Uniform on [0,1), 53-bit resolution.
    double uniform() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0,1]; the transition rule compares r <= p, so p = 0 must
    /// never keep and p = 1 must always keep.
    double uniform_open_closed() noexcept {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    /// Unbiased integer in [0, bound) via 128-bit multiply with rejection.
    std::uint64_t bounded(std::uint64_t bound) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> state_;
};

/// Geometric sample on {1,2,...} with success probability q, by inverse CDF:
/// ceil(ln U / ln(1-q)) with U uniform on (0,1]. Guards q >= 1 and caps the
/// result so callers can add it to an interaction clock without overflow.
inline std::uint64_t sample_geometric(double q, Xoshiro256pp& rng) {
    if (q >= 1.0) return 1;
    const double u = rng.uniform_open_closed();
    const double g = std::ceil(std::log(u) / std::log1p(-q));
    if (!(g >= 1.0)) return 1;
    constexpr double cap = 9.0e18;
    if (g > cap) return static_cast<std::uint64_t>(cap);
    return static_cast<std::uint64_t>(g);
}

}  // namespace usd
