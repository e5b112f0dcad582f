#pragma once

// Grammar tree with the fields used to propagate occurrences, and random
// access to expansions: characters, streaming extraction, and signatures
// of prefixes and reversed suffixes.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "rlci/fingerprint.hpp"
#include "rlci/grammar.hpp"

namespace rlci {

using node_t = std::uint32_t;
inline constexpr node_t no_node = std::numeric_limits<node_t>::max();

/// Parse tree pruned to one internal node per nonterminal (its leftmost
/// occurrence in preorder). A run A -> B^s is an internal node with two
/// children: B and a pseudo-leaf standing for B^(s-1).
struct grammar_tree {
    std::vector<symbol_t> label;       // pseudo-leaves carry the run base
    std::vector<node_t> parent;
    std::vector<std::uint8_t> pseudo;
    std::vector<std::uint64_t> start;  // 0-based text position
    std::vector<node_t> anc;
    std::vector<std::uint64_t> offs;   // start - start[anc]
    std::vector<node_t> next;          // next node with the same label, in preorder
    std::vector<std::uint32_t> child_begin;  // CSR over children
    std::vector<node_t> children;
    std::vector<node_t> internal_of;   // symbol -> its internal node, or no_node
    std::vector<std::uint64_t> phrase_starts;

    node_t size() const noexcept { return static_cast<node_t>(label.size()); }
    node_t root() const noexcept { return 0; }
    bool is_leaf(node_t v) const noexcept { return child_begin[v] == child_begin[v + 1]; }
    std::span<const node_t> children_of(node_t v) const {
        return {children.data() + child_begin[v], children.data() + child_begin[v + 1]};
    }
};

grammar_tree build_grammar_tree(const rlcfg& g);

/// Random access to a grammar. Holds a pointer to the grammar, which must
/// outlive it.
class grammar_access {
public:
    grammar_access() = default;
    grammar_access(const rlcfg& g, const fingerprint_context& ctx);

    const rlcfg& grammar() const { return *g_; }
    const fingerprint_context& context() const { return ctx_; }
    std::uint64_t length(symbol_t s) const { return g_->exp_len[s]; }

    /// exp(A)[pos], 0-based.
    symbol_t char_at(symbol_t a, std::uint64_t pos) const;

    /// Appends exp(A)[off .. off+len) (clipped to |A|).
    void extract(symbol_t a, std::uint64_t off, std::uint64_t len, std::vector<symbol_t>& out) const;
    /// Appends the last len symbols of exp(A) in reverse order (clipped).
    void extract_reversed_suffix(symbol_t a, std::uint64_t len, std::vector<symbol_t>& out) const;

    /// Internal 1-based coordinates over the wrapped text, inclusive.
    std::vector<symbol_t> extract_text(std::uint64_t p, std::uint64_t q) const;

    const signature& full(symbol_t a) const { return full_[a]; }
    const signature& full_reversed(symbol_t a) const { return full_rev_[a]; }
    /// kappa(exp(A)[0..l)).
    signature prefix_sig(symbol_t a, std::uint64_t l) const;
    /// kappa of the reverse of the last l symbols of exp(A).
    signature reversed_suffix_sig(symbol_t a, std::uint64_t l) const;
    /// kappa(exp(A)[off..off+l)).
    signature substring_sig(symbol_t a, std::uint64_t off, std::uint64_t l) const;

    /// Cumulative child lengths of a block rule: arity+1 entries.
    std::span<const std::uint64_t> offsets(symbol_t a) const;

private:
    const rlcfg* g_ = nullptr;
    fingerprint_context ctx_;
    std::vector<std::uint64_t> cum_;
    std::vector<std::uint64_t> cum_begin_;       // per rule
    std::vector<signature> prefix_tab_;          // per rule, arity+1 (aligned with cum_)
    std::vector<signature> revsuf_tab_;          // per rule, arity+1
    std::vector<std::uint64_t> geo_inv_;         // per rule, runs only
    std::vector<signature> full_, full_rev_;     // per symbol

    friend class symbol_cursor;
};

/// Streams exp(A) left to right from an offset, or right to left from the
/// end. O(height) to start, O(1) amortized per symbol.
class symbol_cursor {
public:
    symbol_cursor(const grammar_access& acc, symbol_t a, std::uint64_t off, bool reversed);
    bool done() const noexcept { return remaining_ == 0; }
    symbol_t get() const noexcept { return current_; }
    void advance();

private:
    struct frame {
        symbol_t sym;
        std::uint64_t idx;
    };
    void descend(symbol_t x, std::uint64_t local);
    void descend_edge(symbol_t x);

    const grammar_access* acc_;
    bool rev_;
    std::vector<frame> stack_;
    symbol_t current_ = no_symbol;
    std::uint64_t remaining_ = 0;
};

}  // namespace rlci
