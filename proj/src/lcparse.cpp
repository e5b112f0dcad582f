#include "rlci/lcparse.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rlci {

permutation::permutation(symbol_t base, std::vector<std::uint32_t> ranks)
    : base_(base), ranks_(std::move(ranks)) {
    size_ = static_cast<std::uint32_t>(
        std::count_if(ranks_.begin(), ranks_.end(), [](std::uint32_t r) { return r != 0; }));
}

permutation permutation::from_pairs(std::span<const std::pair<symbol_t, std::uint32_t>> pairs) {
    if (pairs.empty()) return {};
    symbol_t lo = pairs.front().first, hi = pairs.front().first;
    for (const auto& [s, r] : pairs) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    std::vector<std::uint32_t> ranks(static_cast<std::size_t>(hi - lo) + 1, 0);
    std::vector<bool> used(pairs.size() + 1, false);
    for (const auto& [s, r] : pairs) {
        if (r == 0 || r > pairs.size() || used[r] || ranks[s - lo] != 0)
            throw std::invalid_argument("permutation pairs are not a bijection onto [1..sigma]");
        used[r] = true;
        ranks[s - lo] = r;
    }
    return permutation(lo, std::move(ranks));
}

std::uint32_t permutation::rank(symbol_t s) const {
    if (!contains(s)) throw alphabet_error("symbol " + std::to_string(s) + " is not in the permutation");
    return ranks_[s - base_];
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    // Lemire-free rejection sampling; bound is small in practice.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

permutation draw_permutation(std::span<const symbol_t> alphabet, symbol_t hash_role,
                             symbol_t dollar_role, std::mt19937_64& rng) {
    const std::size_t sigma = alphabet.size();
    std::vector<std::uint32_t> order(sigma);
    std::iota(order.begin(), order.end(), 1u);
    for (std::size_t i = sigma; i > 1; --i) {
        const std::size_t j = uniform_below(rng, i);
        std::swap(order[i - 1], order[j]);
    }
    const symbol_t base = alphabet.empty() ? 0 : alphabet.front();
    std::vector<std::uint32_t> ranks(alphabet.empty() ? 0 : alphabet.back() - base + 1, 0);
    for (std::size_t k = 0; k < sigma; ++k) ranks[alphabet[k] - base] = order[k];

    auto slot_of_rank = [&](std::uint32_t r) -> std::uint32_t& {
        for (auto& v : ranks)
            if (v == r) return v;
        throw std::logic_error("rank not present");
    };
    auto place = [&](symbol_t s, std::uint32_t r) {
        if (s < base || s - base >= ranks.size() || ranks[s - base] == 0)
            throw alphabet_error("sentinel role symbol missing from the round alphabet");
        std::uint32_t& holder = slot_of_rank(r);
        std::swap(holder, ranks[s - base]);
    };
    place(dollar_role, 1);
    if (sigma >= 2) place(hash_role, 2);
    return permutation(base, std::move(ranks));
}

run_collapse collapse_runs(std::span<const symbol_t> s) {
    run_collapse rc;
    rc.map.resize(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t j = i;
        while (j + 1 < s.size() && s[j + 1] == s[i]) ++j;
        const auto idx = static_cast<std::uint32_t>(rc.base.size());
        rc.base.push_back(s[i]);
        rc.length.push_back(j - i + 1);
        rc.fimap.push_back(i);
        rc.limap.push_back(j);
        for (std::size_t k = i; k <= j; ++k) rc.map[k] = idx;
        i = j + 1;
    }
    return rc;
}

std::vector<std::size_t> local_minima(const run_collapse& rc, const permutation& pi) {
    return local_minima_by(rc, [&](symbol_t s) { return pi.rank(s); });
}

round_parse parse_collapsed(const run_collapse& rc, std::span<const std::size_t> minima) {
    round_parse out;
    std::size_t first = 0;
    auto close = [&](std::size_t last_meta) {
        out.collapsed_blocks.emplace_back(first, last_meta + 1);
        out.blocks.emplace_back(rc.fimap[first], rc.limap[last_meta]);
        out.boundaries.push_back(rc.limap[last_meta]);
        first = last_meta + 1;
    };
    for (std::size_t m : minima) close(m);
    if (first < rc.size()) close(rc.size() - 1);
    return out;
}

round_parse parse_round(std::span<const symbol_t> s, const permutation& pi) {
    if (s.size() < 2) throw std::invalid_argument("parse_round needs at least two symbols");
    const run_collapse rc = collapse_runs(s);
    const auto minima = local_minima(rc, pi);
    return parse_collapsed(rc, minima);
}

std::pair<std::size_t, std::size_t> block_extension(const run_collapse& rc, std::size_t i,
                                                    std::size_t j) {
    const std::size_t n = rc.source_length();
    if (i == 0 || j + 1 >= n || i > j) throw bounds_error("block touches a sequence end and has no extension");
    const std::size_t run_start = rc.fimap[rc.map[i - 1]];
    if (run_start == 0) throw bounds_error("block extension would start before the sequence");
    return {run_start - 1, j + 1};
}

}  // namespace rlci
