#ifndef MIXCLUST_RNG_HPP
#define MIXCLUST_RNG_HPP

#include <cmath>
#include <cstdint>

namespace mixclust {

// Counter-based generator built on the SplitMix64 finalizer.
//
// Sequence specification: a (seed, stream) pair is folded into a 64-bit key
//   key = mix(mix(seed) ^ mix(stream ^ 0x6A09E667F3BCC909))
// and draw t (t = 1, 2, ...) is
//   out_t = mix(key + t * 0x9E3779B97F4A7C15)
// where mix is the SplitMix64 finalizer (shift-xor-multiply, three rounds).
// Draws are a pure function of (seed, stream, t): distinct streams may be
// generated concurrently with schedule-independent results.
struct CounterRng {
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    std::uint64_t key = 0;
    std::uint64_t counter = 0;
    bool have_cached_gaussian = false;
    double cached_gaussian = 0.0;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    CounterRng(std::uint64_t seed, std::uint64_t stream) {
        key = mix(mix(seed) ^ mix(stream ^ 0x6A09E667F3BCC909ULL));
    }

    std::uint64_t next_u64() { return mix(key + (++counter) * kGamma); }

    /// Uniform on (0, 1]: ((x >> 11) + 1) * 2^-53. Never returns 0.
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; second value of each pair is cached.
    double next_gaussian() {
        if (have_cached_gaussian) {
            have_cached_gaussian = false;
            return cached_gaussian;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        cached_gaussian = radius * std::sin(angle);
        have_cached_gaussian = true;
        return radius * std::cos(angle);
    }
};

/// Deterministic sub-seed for a named purpose (split, per-half k-means, ...).
inline std::uint64_t fork_seed(std::uint64_t seed, std::uint64_t label) {
    return CounterRng::mix(CounterRng::mix(seed) + label * CounterRng::kGamma);
}

} // namespace mixclust

#endif
