#pragma once

#include <cmath>
#include <cstdint>

namespace bmn {

// Counter-style generator: output element i is a pure function of
// (seed, stream, i). Trials can therefore be evaluated in any order, on any
// number of threads, and still produce identical values.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Asymmetric combiner: hash_combine(a, b) != hash_combine(b, a) in general.
constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
    return mix64(mix64(h) ^ (v + kGolden));
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(hash_combine(seed, stream)) {}

    std::uint64_t bits(std::uint64_t i) const noexcept {
        return mix64(key_ + (i + 1) * kGolden);
    }

    // Uniform on (0, 1]; never returns 0 so log() is safe.
    double uniform(std::uint64_t i) const noexcept {
        return static_cast<double>((bits(i) >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal. Element i belongs to the Box-Muller pair with index
    // i/2, so scalar access agrees with fill_normal element-for-element.
    double normal(std::uint64_t i) const noexcept {
        const std::uint64_t k = i / 2;
        const double u1 = uniform(2 * k);
        const double u2 = uniform(2 * k + 1);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = kTwoPi * u2;
        return (i % 2 == 0) ? rad * std::cos(ang) : rad * std::sin(ang);
    }

    void fill_normal(double* out, std::uint64_t count) const noexcept {
        std::uint64_t i = 0;
        for (; i + 2 <= count; i += 2) {
            const double u1 = uniform(i);
            const double u2 = uniform(i + 1);
            const double rad = std::sqrt(-2.0 * std::log(u1));
            const double ang = kTwoPi * u2;
            out[i] = rad * std::cos(ang);
            out[i + 1] = rad * std::sin(ang);
        }
        if (i < count) {
            out[i] = normal(i);
        }
    }

private:
    static constexpr double kTwoPi = 6.283185307179586476925287;

    std::uint64_t key_;
};

}  // namespace bmn
