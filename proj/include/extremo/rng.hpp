#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace extremo {

/// One SplitMix64 step on `state`; used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/**
 * Deterministic xoshiro256++ stream addressed by (seed, purpose, index).
 *
 * Derivation rule: a SplitMix64 chain absorbs the three identifiers in
 * order (seed, then purpose, then index) and its next four outputs form the
 * xoshiro state. The same triple therefore yields the same stream on every
 * platform and at any worker count; workers must never share a stream.
 *
 * All samplers below use integer arithmetic plus libm calls only, so a fixed
 * call sequence reproduces bit-identical values.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) noexcept {
        std::uint64_t k = seed;
        k = splitmix64(k) ^ purpose;
        k = splitmix64(k) ^ index;
        s_[0] = splitmix64(k);
        s_[1] = splitmix64(k);
        s_[2] = splitmix64(k);
        s_[3] = splitmix64(k);
    }

    static RngStream derive(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) noexcept {
        return RngStream(seed, purpose, index);
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Unbiased uniform draw on {0, ..., bound-1}.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
        const std::uint64_t reject = (0ULL - bound) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= reject) return r % bound;
        }
    }

    /// Uniform on [0, 1) with 53-bit resolution.
    double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1); safe to pass to log().
    double next_open() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Fair sign, +1 or -1.
    double next_sign() noexcept { return (next_u64() >> 63) ? 1.0 : -1.0; }

    /// Standard normal via the Marsaglia polar method (second value cached).
    double next_normal() noexcept {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        have_cached_ = true;
        return u * f;
    }

    /// Student-t with nu > 0 degrees of freedom (Bailey's polar method).
    double next_student_t(double nu) {
        if (!(nu > 0.0)) throw std::invalid_argument("next_student_t: nu must be positive");
        double u, v, w;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            w = u * u + v * v;
        } while (w >= 1.0 || w == 0.0);
        return u * std::sqrt(nu * (std::pow(w, -2.0 / nu) - 1.0) / w);
    }

    /// Geometric block length on {1, 2, ...} with mean r >= 1 (inversion).
    std::uint64_t next_geometric(double mean) {
        if (!(mean >= 1.0)) throw std::invalid_argument("next_geometric: mean must be >= 1");
        if (mean == 1.0) return 1;
        const double q = 1.0 / mean;  // success probability, E = 1/q
        const double g = std::floor(std::log(next_open()) / std::log1p(-q));
        return 1 + static_cast<std::uint64_t>(g);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    bool have_cached_ = false;
    double cached_ = 0.0;
};

/// Stream purposes used by the library; documented so callers can reproduce
/// any internal draw independently.
namespace stream_purpose {
inline constexpr std::uint64_t generic = 0;
inline constexpr std::uint64_t model_series = 1;
inline constexpr std::uint64_t multiplier_replicate = 2;
inline constexpr std::uint64_t dmc_replicate = 3;
inline constexpr std::uint64_t modified_replicate = 4;
inline constexpr std::uint64_t oracle_series = 5;
}  // namespace stream_purpose

/// Composite index for (repetition, replicate) stream addressing: the low 24
/// bits hold the replicate, the rest the repetition.
inline constexpr std::uint64_t replicate_stream_index(std::uint64_t repetition,
                                                      std::uint64_t replicate) noexcept {
    return (repetition << 24) | (replicate & 0xFFFFFFULL);
}

}  // namespace extremo
