#pragma once

// Suffix array by prefix doubling, Kasai LCP, and a range-minimum
// structure over the LCP array.

#include <cstdint>
#include <span>
#include <vector>

namespace rlci {

/// Suffix array of s. Symbols must be < alphabet_size.
std::vector<std::uint32_t> suffix_array(std::span<const std::uint32_t> s, std::uint32_t alphabet_size);

/// lcp[k] = LCP(suffix sa[k-1], suffix sa[k]); lcp[0] = 0.
std::vector<std::uint32_t> lcp_array(std::span<const std::uint32_t> s,
                                     std::span<const std::uint32_t> sa);

/// Range minimum over an LCP array: block minima in a sparse table, linear
/// scans inside blocks.
class lcp_rmq {
public:
    lcp_rmq() = default;
    explicit lcp_rmq(std::vector<std::uint32_t> lcp);

    /// min lcp[lo..hi], lo <= hi.
    std::uint32_t min(std::size_t lo, std::size_t hi) const;
    std::size_t size() const noexcept { return lcp_.size(); }

private:
    static constexpr std::size_t block = 32;
    std::vector<std::uint32_t> lcp_;
    std::vector<std::vector<std::uint32_t>> table_;
};

/// Longest common extension of any two suffixes of a fixed sequence.
class lce_index {
public:
    lce_index() = default;
    lce_index(std::span<const std::uint32_t> s, std::uint32_t alphabet_size);

    std::uint32_t lce(std::size_t i, std::size_t j) const;
    std::uint32_t rank(std::size_t i) const { return rank_[i]; }
    std::size_t size() const noexcept { return rank_.size(); }

private:
    std::vector<std::uint32_t> rank_;
    lcp_rmq rmq_;
};

}  // namespace rlci
