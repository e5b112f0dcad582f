#pragma once

// One round of locally-consistent parsing: runs are collapsed into
// metasymbols, local minima of a permutation over the collapsed sequence
// end blocks, and the block structure is projected back onto the input.
//
// All positions in this header are 0-based.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "rlci/common.hpp"

namespace rlci {

/// Bijection from a round's alphabet onto [1..sigma]. Stored densely over
/// the id span [base, base + ranks.size()); rank 0 marks ids outside the
/// alphabet.
class permutation {
public:
    permutation() = default;
    permutation(symbol_t base, std::vector<std::uint32_t> ranks);

    /// Builds a permutation from explicit (symbol, rank) pairs.
    static permutation from_pairs(std::span<const std::pair<symbol_t, std::uint32_t>> pairs);

    bool contains(symbol_t s) const noexcept {
        return s >= base_ && s - base_ < ranks_.size() && ranks_[s - base_] != 0;
    }
    /// Throws alphabet_error for symbols outside the alphabet.
    std::uint32_t rank(symbol_t s) const;
    std::uint32_t size() const noexcept { return size_; }
    symbol_t base() const noexcept { return base_; }
    const std::vector<std::uint32_t>& dense_ranks() const noexcept { return ranks_; }

    friend bool operator==(const permutation&, const permutation&) = default;

private:
    symbol_t base_ = 0;
    std::vector<std::uint32_t> ranks_;
    std::uint32_t size_ = 0;
};

/// Draws a uniform permutation of `alphabet` (sorted, unique) with
/// Fisher-Yates, then swaps ranks so that rank(dollar_role) = 1 and
/// rank(hash_role) = 2.
permutation draw_permutation(std::span<const symbol_t> alphabet, symbol_t hash_role,
                             symbol_t dollar_role, std::mt19937_64& rng);

/// Uniform integer in [0, bound) without modulo bias; portable across
/// standard libraries (std::uniform_int_distribution is not).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

struct run_collapse {
    std::vector<symbol_t> base;        // base symbol of each metasymbol
    std::vector<std::uint64_t> length; // run length of each metasymbol
    std::vector<std::uint32_t> map;    // position -> metasymbol index
    std::vector<std::size_t> fimap;    // metasymbol -> first position
    std::vector<std::size_t> limap;    // metasymbol -> last position

    std::size_t size() const noexcept { return base.size(); }
    std::size_t source_length() const noexcept { return map.size(); }
};

run_collapse collapse_runs(std::span<const symbol_t> s);

/// Metasymbol indices i with 0 < i < size-1 and
/// rank(base[i-1]) > rank(base[i]) < rank(base[i+1]).
std::vector<std::size_t> local_minima(const run_collapse& rc, const permutation& pi);

/// Same, with ranks supplied by a callable; used when some symbols are not
/// part of a stored permutation.
template <typename RankFn>
std::vector<std::size_t> local_minima_by(const run_collapse& rc, RankFn&& rank_of) {
    std::vector<std::size_t> out;
    const std::size_t n = rc.size();
    if (n < 3) return out;
    std::uint32_t prev = rank_of(rc.base[0]);
    std::uint32_t cur = rank_of(rc.base[1]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const std::uint32_t next = rank_of(rc.base[i + 1]);
        if (prev > cur && cur < next) out.push_back(i);
        prev = cur;
        cur = next;
    }
    return out;
}

struct round_parse {
    /// Positions where a block ends, ascending; always contains n-1.
    std::vector<std::size_t> boundaries;
    /// Blocks as inclusive [start, end] position pairs covering the input.
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    /// Blocks as half-open metasymbol ranges [first, last).
    std::vector<std::pair<std::size_t, std::size_t>> collapsed_blocks;
};

/// Parses s (length >= 2) into blocks. Throws std::invalid_argument for
/// shorter input and alphabet_error when pi misses a symbol.
round_parse parse_round(std::span<const symbol_t> s, const permutation& pi);
round_parse parse_collapsed(const run_collapse& rc, std::span<const std::size_t> minima);

/// Extension [i_e, j_e] of block [i, j]: i_e = fimap(map(i-1)) - 1,
/// j_e = j + 1. The first and last blocks have no extension; asking for one
/// throws bounds_error.
std::pair<std::size_t, std::size_t> block_extension(const run_collapse& rc, std::size_t i,
                                                    std::size_t j);

}  // namespace rlci
