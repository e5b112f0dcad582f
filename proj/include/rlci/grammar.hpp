#pragma once

// Run-length grammar built by repeated locally-consistent parsing, plus the
// distinct-substring measure delta that budgets each round.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rlci/common.hpp"
#include "rlci/lcparse.hpp"

namespace rlci {

struct rule {
    std::vector<symbol_t> children;  // block rule
    symbol_t base = no_symbol;       // run rule base
    std::uint64_t exponent = 0;      // run rule exponent

    bool is_run() const noexcept { return base != no_symbol; }
    /// Size under the usual convention: arity for blocks, 2 for runs.
    std::uint64_t size() const noexcept { return is_run() ? 2 : children.size(); }

    static rule block(std::vector<symbol_t> c) { return rule{std::move(c), no_symbol, 0}; }
    static rule run(symbol_t b, std::uint64_t s) { return rule{{}, b, s}; }
};

inline std::uint64_t run_key(symbol_t base, std::uint64_t length) {
    return (static_cast<std::uint64_t>(base) << 32) | length;
}

struct round_tables {
    permutation pi;
    std::unordered_map<std::uint64_t, symbol_t> run_table;        // run_key(base, l) -> id
    std::unordered_map<std::u32string, symbol_t> block_table;     // children -> id
    // bookkeeping of the construction
    std::uint64_t input_length = 0;
    std::uint32_t retries = 0;
    std::uint64_t contribution = 0;
    double delta = 0;
    bool within_budget = true;
};

struct rlcfg {
    std::vector<rule> rules;                   // rules[id - first_nonterminal]
    std::vector<std::uint32_t> creation_round; // per nonterminal
    symbol_t start = no_symbol;
    std::vector<std::uint64_t> exp_len;        // per symbol id, terminals included
    std::vector<round_tables> rounds;
    std::array<bool, 256> alphabet{};          // bytes present in the text
    std::uint64_t text_length = 0;             // sentinel-wrapped length

    symbol_t symbol_count() const noexcept {
        return first_nonterminal + static_cast<symbol_t>(rules.size());
    }
    bool has_rule(symbol_t s) const noexcept {
        return s >= first_nonterminal && s < symbol_count();
    }
    const rule& rule_of(symbol_t s) const;
    std::uint64_t length(symbol_t s) const { return exp_len.at(s); }
};

struct delta_profile {
    std::vector<std::uint64_t> t_of_ell;  // t_of_ell[l] for 1 <= l <= n; index 0 unused
    double delta = 0;
    std::uint64_t argmax = 0;             // l attaining the maximum
};

delta_profile compute_delta(std::span<const std::uint32_t> seq, std::uint32_t alphabet_size);
delta_profile compute_delta(std::span<const std::uint8_t> text);

struct build_config {
    std::uint64_t seed = 1;
    double budget_factor = 16.0;
    std::uint32_t max_retries = 32;
    /// Optional fixed permutation per round; used instead of random draws
    /// when it returns a value.
    std::function<std::optional<permutation>(std::size_t round, std::span<const symbol_t> alphabet,
                                             const rlcfg& partial)>
        permutation_source;
};

rlcfg build_grammar(std::span<const std::uint8_t> text, const build_config& config = {});

/// Sentinel-wrapped symbol sequence #text$.
std::vector<symbol_t> wrap_text(std::span<const std::uint8_t> text);

/// Expansion of the start symbol. Throws structure_error on missing rules
/// or cycles.
std::vector<symbol_t> decompress(const rlcfg& g);
std::vector<symbol_t> expand(const rlcfg& g, symbol_t s);

/// Checks that every rule is well-formed and that the rule graph is acyclic;
/// returns nonterminals in an order where children precede parents.
std::vector<symbol_t> topological_order(const rlcfg& g);

/// Fills exp_len from the rules.
void compute_lengths(rlcfg& g);

/// T_0 .. T_R reconstructed top-down from the rules.
std::vector<std::vector<symbol_t>> level_sequences(const rlcfg& g);

/// Parse-tree height of every symbol (terminals 0).
std::vector<std::uint32_t> symbol_heights(const rlcfg& g);

struct grammar_stats {
    std::uint64_t n = 0;        // raw text length
    std::uint64_t g = 0;        // grammar size
    std::uint64_t r = 0;        // number of rules
    std::uint64_t rounds = 0;
    std::uint32_t height = 0;
    std::vector<std::uint32_t> retries;
    std::vector<std::uint64_t> round_lengths;
    double mean_retries = 0;
    double delta = 0;
    double ratio = 0;           // g / (delta * max(1, log2(n / delta)))
};

grammar_stats compute_stats(const rlcfg& g, double delta);
std::string format_stats(const grammar_stats& s);

/// Readable rendering of a symbol sequence: bytes as characters, the
/// sentinels as '#' and '$', nonterminals as <id>.
std::string render(std::span<const symbol_t> s);

}  // namespace rlci
