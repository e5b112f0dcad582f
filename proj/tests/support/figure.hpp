#pragma once

// The worked example: its text and the permutations of each level, keyed by
// the expansion of each symbol.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rlci/grammar.hpp"

namespace rlci::testing {

/// Text between the sentinels.
inline constexpr std::string_view figure_text = "adbdaacaacbdaabcbdaabcbdbdaacaacbdaabcbdaabcbdc";

/// Expansion with the sentinels rendered as '#' and '$'.
inline std::string expansion_string(const rlcfg& g, symbol_t s) {
    std::string out;
    for (symbol_t c : expand(g, s)) {
        if (c == hash_symbol) out.push_back('#');
        else if (c == dollar_symbol) out.push_back('$');
        else out.push_back(static_cast<char>(c));
    }
    return out;
}

/// Ranks of the figure, by expansion; sentinels of level r are matched by
/// their leading '#' or trailing '$'.
inline std::optional<permutation> figure_permutation(std::size_t round, std::span<const symbol_t> alphabet,
                                                     const rlcfg& g) {
    static const std::vector<std::map<std::string, std::uint32_t>> ranks = {
        {{"d", 3}, {"c", 4}, {"b", 5}, {"a", 6}},
        {{"aac", 3}, {"aabc", 4}, {"bd", 5}},
        {{"bdbdaacaac", 3}, {"bdaabc", 4}},
        {},
    };
    if (round >= ranks.size()) return std::nullopt;
    std::vector<std::pair<symbol_t, std::uint32_t>> pairs;
    for (symbol_t s : alphabet) {
        const std::string e = expansion_string(g, s);
        std::uint32_t r = 0;
        if (e.front() == '#') r = 2;
        else if (e.back() == '$') r = 1;
        else if (auto it = ranks[round].find(e); it != ranks[round].end()) r = it->second;
        else return std::nullopt;
        pairs.emplace_back(s, r);
    }
    return permutation::from_pairs(pairs);
}

inline build_config figure_config() {
    build_config c;
    c.permutation_source = figure_permutation;
    return c;
}

inline constexpr std::string_view figure_pattern = "dbdaacaacbdaabcbdaabcbd";

}  // namespace rlci::testing
