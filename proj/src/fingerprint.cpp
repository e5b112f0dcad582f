#include "rlci/fingerprint.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "rlci/lcparse.hpp"
#include "rlci/suffix_array.hpp"

namespace rlci {

std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    a %= kr_modulus;
    while (e) {
        if (e & 1) r = mod_mul(r, a);
        a = mod_mul(a, a);
        e >>= 1;
    }
    return r;
}

fingerprint_context fingerprint_context::with_base(std::uint64_t c) {
    fingerprint_context ctx;
    ctx.c = c;
    ctx.c_inv = mod_inv(c);
    return ctx;
}

signature fingerprint_context::of(std::span<const symbol_t> s) const {
    signature out;
    std::uint64_t p = 1;
    for (symbol_t x : s) {
        out.kappa = mod_add(out.kappa, mod_mul(code(x), p));
        p = mod_mul(p, c);
    }
    out.pow = p;
    out.ipow = mod_pow(c_inv, s.size());
    return out;
}

signature fingerprint_context::of_bytes(std::span<const std::uint8_t> s) const {
    std::vector<symbol_t> v(s.begin(), s.end());
    return of(v);
}

signature sig_power(const signature& s, std::uint64_t i, std::uint64_t geo_inv) {
    signature out;
    out.pow = mod_pow(s.pow, i);
    out.ipow = mod_pow(s.ipow, i);
    if (geo_inv == 0) {
        out.kappa = mod_mul(s.kappa, i % kr_modulus);
    } else {
        out.kappa = mod_mul(s.kappa, mod_mul(mod_sub(out.pow, 1), geo_inv));
    }
    return out;
}

signature sig_power(const signature& s, std::uint64_t i) {
    const std::uint64_t g = s.pow == 1 ? 0 : mod_inv(mod_sub(s.pow, 1));
    return sig_power(s, i, g);
}

namespace {

void radix_sort(std::vector<std::uint64_t>& v) {
    std::vector<std::uint64_t> buf(v.size());
    std::vector<std::size_t> cnt(1 << 16);
    for (int shift = 0; shift < 64; shift += 16) {
        std::fill(cnt.begin(), cnt.end(), 0);
        for (auto x : v) ++cnt[(x >> shift) & 0xffff];
        std::size_t sum = 0;
        for (auto& c : cnt) {
            const std::size_t t = c;
            c = sum;
            sum += t;
        }
        for (auto x : v) buf[cnt[(x >> shift) & 0xffff]++] = x;
        v.swap(buf);
    }
}

}  // namespace

bool verify_collision_free(const fingerprint_context& ctx, std::span<const symbol_t> t) {
    const std::size_t n = t.size();
    if (n == 0) return true;
    symbol_t hi = 0;
    for (symbol_t x : t) hi = std::max(hi, x);
    const symbol_t sep = hi + 1;
    std::vector<std::uint32_t> u;
    u.reserve(2 * n + 1);
    u.insert(u.end(), t.begin(), t.end());
    u.push_back(sep);
    u.insert(u.end(), t.rbegin(), t.rend());
    const std::size_t un = u.size();

    const auto sa = suffix_array(u, sep + 1);
    const auto lcp = lcp_array(u, sa);

    std::vector<std::uint64_t> h(un + 1, 0), ip(un + 1, 1);
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < un; ++i) {
        h[i + 1] = mod_add(h[i], mod_mul(fingerprint_context::code(u[i]), p));
        p = mod_mul(p, ctx.c);
        ip[i + 1] = mod_mul(ip[i], ctx.c_inv);
    }
    auto end_of = [&](std::size_t i) { return i < n ? n : un; };

    std::vector<std::uint64_t> sigs;
    for (std::size_t w = 1; w <= n; w <<= 1) {
        sigs.clear();
        std::size_t classes = 0;
        std::uint32_t run_min = std::numeric_limits<std::uint32_t>::max();
        bool any = false;
        for (std::size_t k = 0; k < un; ++k) {
            run_min = std::min(run_min, lcp[k]);
            const std::size_t i = sa[k];
            if (i + w > end_of(i)) continue;
            if (!any || run_min < w) ++classes;
            any = true;
            run_min = std::numeric_limits<std::uint32_t>::max();
            sigs.push_back(mod_mul(mod_sub(h[i + w], h[i]), ip[i]));
        }
        radix_sort(sigs);
        const auto distinct = static_cast<std::size_t>(std::unique(sigs.begin(), sigs.end()) - sigs.begin());
        if (distinct != classes) return false;
    }
    return true;
}

fingerprint_context make_fingerprint_context(std::span<const symbol_t> t, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x6a09e667f3bcc909ULL);
    for (std::uint32_t draw = 1;; ++draw) {
        auto ctx = fingerprint_context::with_base(2 + uniform_below(rng, kr_modulus - 3));
        ctx.seed = seed;
        ctx.draws = draw;
        if (verify_collision_free(ctx, t)) {
            ctx.verified = true;
            return ctx;
        }
    }
}

}  // namespace rlci
