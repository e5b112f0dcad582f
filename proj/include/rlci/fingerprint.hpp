#pragma once

// Karp-Rabin signatures modulo the Mersenne prime 2^61 - 1, kept as triples
// (kappa, c^len, c^-len) so that concatenation and both splits are O(1).

#include <cstdint>
#include <span>
#include <vector>

#include "rlci/common.hpp"

namespace rlci {

inline constexpr std::uint64_t kr_modulus = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(p & kr_modulus);
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    std::uint64_t r = lo + hi;
    if (r >= kr_modulus) r -= kr_modulus;
    return r;
}
inline std::uint64_t mod_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = a + b;
    if (r >= kr_modulus) r -= kr_modulus;
    return r;
}
inline std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b) {
    return a >= b ? a - b : a + kr_modulus - b;
}
std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e);
inline std::uint64_t mod_inv(std::uint64_t a) { return mod_pow(a, kr_modulus - 2); }

struct signature {
    std::uint64_t kappa = 0;
    std::uint64_t pow = 1;   // c^len
    std::uint64_t ipow = 1;  // c^-len

    friend bool operator==(const signature&, const signature&) = default;
};

struct fingerprint_context {
    std::uint64_t c = 2;
    std::uint64_t c_inv = 0;
    std::uint64_t seed = 0;
    std::uint32_t draws = 0;  // number of bases tried
    bool verified = false;

    static fingerprint_context with_base(std::uint64_t c);

    /// Code of a symbol inside kappa: id + 1, so no symbol maps to zero.
    static std::uint64_t code(symbol_t s) { return static_cast<std::uint64_t>(s) + 1; }

    signature of_symbol(symbol_t s) const { return {code(s) % kr_modulus, c, c_inv}; }
    signature of(std::span<const symbol_t> s) const;
    signature of_bytes(std::span<const std::uint8_t> s) const;
};

inline signature sig_concat(const signature& a, const signature& b) {
    return {mod_add(a.kappa, mod_mul(a.pow, b.kappa)), mod_mul(a.pow, b.pow), mod_mul(a.ipow, b.ipow)};
}
/// From kappa(ab) and kappa(a), returns kappa(b).
inline signature sig_split_right(const signature& ab, const signature& a) {
    return {mod_mul(mod_sub(ab.kappa, a.kappa), a.ipow), mod_mul(ab.pow, a.ipow), mod_mul(ab.ipow, a.pow)};
}
/// From kappa(ab) and kappa(b), returns kappa(a).
inline signature sig_split_left(const signature& ab, const signature& b) {
    const std::uint64_t pow_a = mod_mul(ab.pow, b.ipow);
    return {mod_sub(ab.kappa, mod_mul(b.kappa, pow_a)), pow_a, mod_mul(ab.ipow, b.pow)};
}
/// kappa(S^i). geo_inv must be (c^|S| - 1)^-1, or 0 when c^|S| = 1.
signature sig_power(const signature& s, std::uint64_t i, std::uint64_t geo_inv);
signature sig_power(const signature& s, std::uint64_t i);

/// Draws a base from the seed and redraws until kappa is collision-free on
/// all power-of-two-length substrings of t and of its reverse.
fingerprint_context make_fingerprint_context(std::span<const symbol_t> t, std::uint64_t seed);

/// True when no two distinct power-of-two-length substrings of t or reversed
/// t share a signature under ctx.
bool verify_collision_free(const fingerprint_context& ctx, std::span<const symbol_t> t);

/// Key of a string of length l: kappa of its longest power-of-two prefix
/// and suffix, and l.
struct period_key {
    std::uint64_t prefix = 0;
    std::uint64_t suffix = 0;
    std::uint64_t length = 0;
    friend bool operator==(const period_key&, const period_key&) = default;
    friend auto operator<=>(const period_key&, const period_key&) = default;
};

struct period_key_hash {
    std::size_t operator()(const period_key& k) const noexcept {
        return static_cast<std::size_t>(k.prefix * 0x9e3779b97f4a7c15ULL ^ k.suffix ^ (k.length << 7));
    }
};

}  // namespace rlci
