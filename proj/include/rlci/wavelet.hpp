#pragma once

// Wavelet matrix over a sequence of small integers with optional weights:
// 2D range reporting and weighted range sums over (index, value) points.

#include <bit>
#include <cstdint>
#include <vector>

namespace rlci {

class bitvector {
public:
    bitvector() = default;
    explicit bitvector(std::size_t n) : words_((n + 63) / 64, 0), n_(n) {}
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
    void build_rank();
    /// Number of ones in [0, i).
    std::size_t rank1(std::size_t i) const {
        const std::size_t w = i / 64, b = i % 64;
        std::size_t r = ranks_[w];
        if (b) r += std::popcount(words_[w] & ((std::uint64_t{1} << b) - 1));
        return r;
    }
    std::size_t rank0(std::size_t i) const { return i - rank1(i); }
    std::size_t size() const noexcept { return n_; }

private:
    std::vector<std::uint64_t> words_;
    std::vector<std::uint32_t> ranks_;
    std::size_t n_ = 0;
};

class wavelet_matrix {
public:
    wavelet_matrix() = default;
    /// weights may be empty, in which case sum() counts points.
    wavelet_matrix(const std::vector<std::uint32_t>& values, const std::vector<std::uint64_t>& weights);

    std::size_t size() const noexcept { return n_; }

    /// Calls f(i) for every index i in [a, b) with y1 <= values[i] <= y2.
    template <typename F>
    void report(std::size_t a, std::size_t b, std::uint32_t y1, std::uint32_t y2, F&& f) const;

    /// Sum of weights over indices in [a, b) with y1 <= value <= y2.
    std::uint64_t sum(std::size_t a, std::size_t b, std::uint32_t y1, std::uint32_t y2) const;

private:
    std::uint64_t sum_less(std::size_t a, std::size_t b, std::uint64_t y) const;

    std::size_t n_ = 0;
    unsigned bits_ = 0;
    std::vector<bitvector> levels_;
    std::vector<std::size_t> zeros_;
    std::vector<std::vector<std::uint64_t>> wsum_;  // per level, prefix sums after partition
    std::vector<std::uint32_t> perm_;               // bottom order -> original index
};

template <typename F>
void wavelet_matrix::report(std::size_t a, std::size_t b, std::uint32_t y1, std::uint32_t y2, F&& f) const {
    if (a >= b || y1 > y2 || n_ == 0) return;
    struct item {
        unsigned level;
        std::size_t a, b;
        std::uint64_t prefix;
    };
    std::vector<item> stack{{0, a, b, 0}};
    while (!stack.empty()) {
        const item it = stack.back();
        stack.pop_back();
        if (it.a >= it.b) continue;
        const unsigned rest = bits_ - it.level;
        const std::uint64_t lo = it.prefix << rest;
        const std::uint64_t hi = lo + (std::uint64_t{1} << rest) - 1;
        if (hi < y1 || lo > y2) continue;
        if (it.level == bits_) {
            for (std::size_t i = it.a; i < it.b; ++i) f(perm_[i]);
            continue;
        }
        const bitvector& bv = levels_[it.level];
        const std::size_t r0a = bv.rank0(it.a), r0b = bv.rank0(it.b);
        const std::size_t z = zeros_[it.level];
        stack.push_back({it.level + 1, z + (it.a - r0a), z + (it.b - r0b), (it.prefix << 1) | 1});
        stack.push_back({it.level + 1, r0a, r0b, it.prefix << 1});
    }
}

}  // namespace rlci
