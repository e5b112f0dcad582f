#pragma once

// Lexicographically ranked X/Y strings and the two grids built on them:
// the locate grid (one point per phrase boundary of each rule) and the
// weighted count grid.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rlci/access.hpp"
#include "rlci/suffix_array.hpp"
#include "rlci/wavelet.hpp"

namespace rlci {

/// A virtual string: either exp(sym)[off .. off+len) or, when reversed, the
/// reverse of the last len symbols of exp(sym).
struct member {
    symbol_t sym = no_symbol;
    std::uint64_t off = 0;
    std::uint64_t len = 0;
    bool reversed = false;

    friend bool operator==(const member&, const member&) = default;
};

symbol_t member_char(const grammar_access& acc, const member& x, std::uint64_t i);
signature member_prefix_sig(const grammar_access& acc, const member& x, std::uint64_t l);
symbol_cursor member_cursor(const grammar_access& acc, const member& x);
std::vector<symbol_t> member_string(const grammar_access& acc, const member& x);

/// Signature of the length-l prefix of an X member (reversed expansion) or a
/// Y member (expansion suffix).
inline signature sig_x_prefix(const grammar_access& acc, const member& x, std::uint64_t l) {
    return member_prefix_sig(acc, x, l);
}
inline signature sig_y_prefix(const grammar_access& acc, const member& y, std::uint64_t l) {
    return member_prefix_sig(acc, y, l);
}

/// A query string: text[from .. from+len) of a symbol sequence whose
/// prefix signatures are precomputed.
struct query_string {
    std::span<const symbol_t> text;
    std::span<const signature> prefix;  // prefix[i] = kappa(text[0..i))
    std::uint64_t from = 0;
    std::uint64_t len = 0;

    symbol_t at(std::uint64_t i) const { return text[from + i]; }
    signature sig(std::uint64_t l) const { return sig_split_right(prefix[from + l], prefix[from]); }
};

std::vector<signature> prefix_signatures(const fingerprint_context& ctx, std::span<const symbol_t> s);

struct ranked_strings {
    std::vector<member> members;  // sorted
    std::size_t size() const noexcept { return members.size(); }
};

/// Suffix ranks and LCE over text, separator, reversed text.
class member_sorter {
public:
    member_sorter(std::span<const symbol_t> text, const rlcfg& g, const grammar_tree& t);
    /// Sorts by content, ties by original index. Returns the original index
    /// of each sorted member.
    std::vector<std::uint32_t> sort(std::vector<member>& members) const;

private:
    std::uint64_t position(const member& x) const;
    const rlcfg* g_;
    const grammar_tree* t_;
    std::uint64_t n_;
    lce_index lce_;
    std::vector<std::uint64_t> term_pos_;
};

struct range_stats {
    std::uint64_t fallbacks = 0;  // searches redone by pure streaming
};

/// Half-open rank interval of members having q as a prefix.
std::pair<std::size_t, std::size_t> prefix_range(const grammar_access& acc, const ranked_strings& rs,
                                                 const query_string& q, range_stats* stats = nullptr);
/// Same by plain streaming comparisons only.
std::pair<std::size_t, std::size_t> prefix_range_streaming(const grammar_access& acc,
                                                           const ranked_strings& rs,
                                                           const query_string& q);

/// -1, 0, +1: member below q, member has prefix q, member above q. By
/// streaming only.
int compare_streaming(const grammar_access& acc, const member& x, const query_string& q);

struct grid_point {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    node_t locus = no_node;   // child node on the X side (first child for runs)
    node_t parent = no_node;  // internal node of the rule
    bool run = false;
    std::uint64_t weight = 0;
};

/// Points sorted by x, with a wavelet matrix over their y values.
struct point_grid {
    std::vector<grid_point> points;
    std::vector<std::uint32_t> xs;
    wavelet_matrix wm;

    void index(bool weighted);
    std::pair<std::size_t, std::size_t> x_span(std::size_t x1, std::size_t x2) const;

    /// Points with x in [x1, x2) and y in [y1, y2).
    template <typename F>
    void report(std::size_t x1, std::size_t x2, std::size_t y1, std::size_t y2, F&& f) const {
        if (x1 >= x2 || y1 >= y2) return;
        const auto [a, b] = x_span(x1, x2);
        wm.report(a, b, static_cast<std::uint32_t>(y1), static_cast<std::uint32_t>(y2 - 1),
                  [&](std::uint32_t i) { f(points[i]); });
    }
    std::uint64_t sum(std::size_t x1, std::size_t x2, std::size_t y1, std::size_t y2) const;
};

struct grids {
    ranked_strings x;      // shared X
    ranked_strings y_loc;  // locate Y
    ranked_strings y_cnt;  // count Y
    point_grid locate;
    point_grid count;
};

/// weights[v] for internal nodes v of rules (c of the rule's node).
grids build_grids(const rlcfg& g, const grammar_tree& t, std::span<const symbol_t> text,
                  const std::vector<std::uint64_t>& weights);

}  // namespace rlci
