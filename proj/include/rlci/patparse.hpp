#pragma once

// Query-time parsing of #P$ with the stored round tables. Produces the
// candidate split offsets M(P) and detects patterns that cannot occur.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rlci/grammar.hpp"

namespace rlci {

struct split_set {
    std::vector<std::uint64_t> m_of_p;  // sorted offsets in [0, m-1]
    std::vector<std::uint64_t> splits;  // q = x + 1 with 1 <= q < m
    bool abandoned = false;
    std::string reason;
    // per round, for inspection
    std::vector<std::vector<std::uint64_t>> b;
    std::vector<std::vector<std::uint64_t>> b_hat;
    std::uint64_t symbols_processed = 0;
};

split_set parse_pattern(const rlcfg& g, std::span<const std::uint8_t> p);

/// (M(P) + 1) restricted to [1, m-1].
std::vector<std::uint64_t> splits_for_search(const split_set& ss, std::uint64_t m);

}  // namespace rlci
