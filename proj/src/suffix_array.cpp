#include "rlci/suffix_array.hpp"

#include <algorithm>
#include <bit>

namespace rlci {

std::vector<std::uint32_t> suffix_array(std::span<const std::uint32_t> s, std::uint32_t alphabet_size) {
    const std::size_t n = s.size();
    std::vector<std::uint32_t> sa(n), rank(n), tmp(n), sa2(n);
    if (n == 0) return sa;

    // rank by first symbol
    std::vector<std::uint32_t> cnt(std::max<std::size_t>(alphabet_size, n) + 2, 0);
    for (std::size_t i = 0; i < n; ++i) ++cnt[s[i] + 1];
    for (std::size_t c = 1; c < cnt.size(); ++c) cnt[c] += cnt[c - 1];
    for (std::size_t i = 0; i < n; ++i) sa[cnt[s[i]]++] = static_cast<std::uint32_t>(i);
    rank[sa[0]] = 0;
    for (std::size_t k = 1; k < n; ++k) rank[sa[k]] = rank[sa[k - 1]] + (s[sa[k]] != s[sa[k - 1]]);
    std::uint32_t classes = rank[sa[n - 1]] + 1;

    for (std::size_t h = 1; classes < n; h <<= 1) {
        // second key: suffixes without an h-successor come first, then by sa order
        std::size_t p = 0;
        for (std::size_t i = n - h; i < n; ++i) sa2[p++] = static_cast<std::uint32_t>(i);
        for (std::size_t k = 0; k < n; ++k)
            if (sa[k] >= h) sa2[p++] = static_cast<std::uint32_t>(sa[k] - h);
        // stable counting sort by first key
        std::fill(cnt.begin(), cnt.begin() + classes + 1, 0);
        for (std::size_t i = 0; i < n; ++i) ++cnt[rank[i] + 1];
        for (std::size_t c = 1; c <= classes; ++c) cnt[c] += cnt[c - 1];
        for (std::size_t k = 0; k < n; ++k) sa[cnt[rank[sa2[k]]]++] = sa2[k];

        tmp[sa[0]] = 0;
        for (std::size_t k = 1; k < n; ++k) {
            const std::uint32_t a = sa[k - 1], b = sa[k];
            const bool same = rank[a] == rank[b] && a + h < n && b + h < n && rank[a + h] == rank[b + h];
            tmp[b] = tmp[a] + (same ? 0 : 1);
        }
        rank.swap(tmp);
        classes = rank[sa[n - 1]] + 1;
    }
    return sa;
}

std::vector<std::uint32_t> lcp_array(std::span<const std::uint32_t> s,
                                     std::span<const std::uint32_t> sa) {
    const std::size_t n = s.size();
    std::vector<std::uint32_t> rank(n), lcp(n, 0);
    for (std::size_t k = 0; k < n; ++k) rank[sa[k]] = static_cast<std::uint32_t>(k);
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        const std::size_t j = sa[rank[i] - 1];
        while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
        lcp[rank[i]] = static_cast<std::uint32_t>(h);
        if (h > 0) --h;
    }
    return lcp;
}

lcp_rmq::lcp_rmq(std::vector<std::uint32_t> lcp) : lcp_(std::move(lcp)) {
    const std::size_t nb = (lcp_.size() + block - 1) / block;
    if (nb == 0) return;
    table_.emplace_back(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const auto first = lcp_.begin() + b * block;
        const auto last = lcp_.begin() + std::min(lcp_.size(), (b + 1) * block);
        table_[0][b] = *std::min_element(first, last);
    }
    for (std::size_t k = 1; (std::size_t{1} << k) <= nb; ++k) {
        const std::size_t len = nb - (std::size_t{1} << k) + 1;
        std::vector<std::uint32_t> row(len);
        const auto& prev = table_[k - 1];
        for (std::size_t b = 0; b < len; ++b)
            row[b] = std::min(prev[b], prev[b + (std::size_t{1} << (k - 1))]);
        table_.push_back(std::move(row));
    }
}

std::uint32_t lcp_rmq::min(std::size_t lo, std::size_t hi) const {
    const std::size_t bl = lo / block, bh = hi / block;
    if (bh - bl < 2) {
        return *std::min_element(lcp_.begin() + lo, lcp_.begin() + hi + 1);
    }
    std::uint32_t m = *std::min_element(lcp_.begin() + lo, lcp_.begin() + (bl + 1) * block);
    m = std::min(m, *std::min_element(lcp_.begin() + bh * block, lcp_.begin() + hi + 1));
    const std::size_t a = bl + 1, b = bh - 1;
    const unsigned k = std::bit_width(b - a + 1) - 1;
    m = std::min({m, table_[k][a], table_[k][b + 1 - (std::size_t{1} << k)]});
    return m;
}

lce_index::lce_index(std::span<const std::uint32_t> s, std::uint32_t alphabet_size) {
    const auto sa = suffix_array(s, alphabet_size);
    rank_.resize(s.size());
    for (std::size_t k = 0; k < sa.size(); ++k) rank_[sa[k]] = static_cast<std::uint32_t>(k);
    rmq_ = lcp_rmq(lcp_array(s, sa));
}

std::uint32_t lce_index::lce(std::size_t i, std::size_t j) const {
    if (i == j) return static_cast<std::uint32_t>(rank_.size() - i);
    std::size_t a = rank_[i], b = rank_[j];
    if (a > b) std::swap(a, b);
    return rmq_.min(a + 1, b);
}

}  // namespace rlci
