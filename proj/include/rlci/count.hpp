#pragma once

// Occurrence counters of grammar-tree nodes, shortest periods, and the
// table that corrects counts for patterns spanning long runs.

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "rlci/access.hpp"

namespace rlci {

/// c(u) for every node: parse-tree occurrences of u's label counted from u
/// onward along its next chain. Pseudo-leaves get 0.
std::vector<std::uint64_t> compute_counts(const rlcfg& g, const grammar_tree& t);

/// Smallest p >= 1 with P[0..m-p) = P[p..m).
std::uint64_t shortest_period(std::span<const std::uint8_t> p);
std::uint64_t shortest_period(std::span<const symbol_t> p);

struct run_period_entry {
    symbol_t base = no_symbol;           // a representative A1
    std::vector<std::uint64_t> exponents; // sorted, all >= 3
    std::vector<std::uint64_t> c;        // c[i]  = sum of c(A) over exponents >= exponents[i]
    std::vector<std::uint64_t> c_prime;  // c'[i] = sum of s * c(A) over the same
};

using run_period_table = std::unordered_map<period_key, run_period_entry, period_key_hash>;

period_key period_key_of(const grammar_access& acc, symbol_t a);
/// Key of text[from .. from+len) given prefix signatures of text.
period_key period_key_of(std::span<const signature> prefix, std::uint64_t from, std::uint64_t len);

run_period_table build_run_period_table(const grammar_access& acc, const grammar_tree& t,
                                        const std::vector<std::uint64_t>& counts);

/// Number of occurrences crossing run boundaries that the count grid
/// misses for split q: c'(s_min) - c(s_min) * ceil((m - q) / p), or 0.
std::uint64_t run_correction(const run_period_entry& e, std::uint64_t m, std::uint64_t q, std::uint64_t p);

}  // namespace rlci
