#pragma once

// Counter-based random number generation (Philox4x32-10). Every random
// quantity in the library is a pure function of (key, counter), which makes
// sampling reproducible, order-independent, and parallelizable: stream i of
// a dataset simply uses key = base_seed ^ splitmix64(i).

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace sppdon {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace detail {

struct u32x2 {
    std::uint32_t hi, lo;
};

inline u32x2 mulhilo(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    return {static_cast<std::uint32_t>(prod >> 32), static_cast<std::uint32_t>(prod)};
}

}  // namespace detail

/// Philox4x32-10 block function: maps a 128-bit counter and 64-bit key to
/// four 32-bit words.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::uint64_t key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        const auto p0 = detail::mulhilo(kMul0, ctr[0]);
        const auto p1 = detail::mulhilo(kMul1, ctr[2]);
        ctr = {p1.hi ^ ctr[1] ^ k0, p1.lo, p0.hi ^ ctr[3] ^ k1, p0.lo};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return ctr;
}

/// Two independent uniform doubles in (0,1] derived from (key, counter).
inline std::array<double, 2> uniform_pair(std::uint64_t key, std::uint64_t counter) {
    const auto w = philox4x32({static_cast<std::uint32_t>(counter),
                               static_cast<std::uint32_t>(counter >> 32), 0u, 0u},
                              key);
    const std::uint64_t a = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(w[2]) << 32) | w[3];
    // (x+1) * 2^-64 lies in (0, 1]; never 0, so log() below is safe.
    constexpr double scale = 0x1.0p-64;
    return {(static_cast<double>(a) + 1.0) * scale, (static_cast<double>(b) + 1.0) * scale};
}

/// Standard normal via Box-Muller, one draw per (key, counter).
inline double standard_normal(std::uint64_t key, std::uint64_t counter) {
    const auto u = uniform_pair(key, counter);
    return std::sqrt(-2.0 * std::log(u[0])) * std::cos(2.0 * std::numbers::pi * u[1]);
}

/// Uniform integer in [0, bound) by rejection; exact (no modulo bias).
inline std::uint64_t uniform_below(std::uint64_t key, std::uint64_t& counter,
                                   std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    for (;;) {
        const auto w = philox4x32({static_cast<std::uint32_t>(counter),
                                   static_cast<std::uint32_t>(counter >> 32), 1u, 0u},
                                  key);
        ++counter;
        const std::uint64_t x = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
        if (x <= limit) return x % bound;
    }
}

/// Deterministic Fisher-Yates permutation of {0, ..., n-1}.
inline std::vector<std::uint64_t> random_permutation(std::uint64_t key, std::uint64_t n) {
    std::vector<std::uint64_t> perm(n);
    for (std::uint64_t i = 0; i < n; ++i) perm[i] = i;
    std::uint64_t counter = 0;
    for (std::uint64_t i = n; i > 1; --i) {
        const std::uint64_t j = uniform_below(key, counter, i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

}  // namespace sppdon
