#include "rlci/grammar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string_view>

#include "rlci/suffix_array.hpp"

namespace rlci {

const rule& rlcfg::rule_of(symbol_t s) const {
    if (!has_rule(s)) throw structure_error("no rule for symbol " + std::to_string(s));
    return rules[s - first_nonterminal];
}

delta_profile compute_delta(std::span<const std::uint32_t> seq, std::uint32_t alphabet_size) {
    delta_profile out;
    const std::size_t n = seq.size();
    out.t_of_ell.assign(n + 1, 0);
    if (n == 0) return out;
    const auto sa = suffix_array(seq, alphabet_size);
    const auto lcp = lcp_array(seq, sa);
    // suffix sa[k] contributes one new substring of each length in (lcp[k], n - sa[k]]
    std::vector<std::int64_t> diff(n + 2, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t len = n - sa[k];
        if (lcp[k] < len) {
            ++diff[lcp[k] + 1];
            --diff[len + 1];
        }
    }
    std::int64_t run = 0;
    for (std::size_t l = 1; l <= n; ++l) {
        run += diff[l];
        out.t_of_ell[l] = static_cast<std::uint64_t>(run);
        const double v = static_cast<double>(run) / static_cast<double>(l);
        if (v > out.delta) {
            out.delta = v;
            out.argmax = l;
        }
    }
    return out;
}

delta_profile compute_delta(std::span<const std::uint8_t> text) {
    std::vector<std::uint32_t> s(text.begin(), text.end());
    return compute_delta(s, 256);
}

std::vector<symbol_t> wrap_text(std::span<const std::uint8_t> text) {
    std::vector<symbol_t> t;
    t.reserve(text.size() + 2);
    t.push_back(hash_symbol);
    t.insert(t.end(), text.begin(), text.end());
    t.push_back(dollar_symbol);
    return t;
}

namespace {

struct candidate {
    permutation pi;
    std::vector<std::pair<std::size_t, std::size_t>> blocks;  // metasymbol ranges
    std::uint64_t block_size = 0;                             // sum of distinct arities
};

// Dense remap of a sequence for suffix sorting.
std::pair<std::vector<std::uint32_t>, std::vector<symbol_t>> densify(std::span<const symbol_t> s) {
    std::vector<symbol_t> alpha(s.begin(), s.end());
    std::sort(alpha.begin(), alpha.end());
    alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
    std::vector<std::uint32_t> dense(s.size());
    const symbol_t hi = alpha.back();
    std::vector<std::uint32_t> index(hi - alpha.front() + 1, 0);
    for (std::size_t k = 0; k < alpha.size(); ++k) index[alpha[k] - alpha.front()] = static_cast<std::uint32_t>(k);
    for (std::size_t i = 0; i < s.size(); ++i) dense[i] = index[s[i] - alpha.front()];
    return {std::move(dense), std::move(alpha)};
}

candidate evaluate(const run_collapse& rc, const std::u32string& meta, permutation pi) {
    candidate c;
    c.pi = std::move(pi);
    const auto minima = local_minima(rc, c.pi);
    std::size_t first = 0;
    for (std::size_t m : minima) {
        c.blocks.emplace_back(first, m + 1);
        first = m + 1;
    }
    c.blocks.emplace_back(first, rc.size());
    std::unordered_map<std::u32string_view, bool> seen;
    seen.reserve(c.blocks.size());
    const std::u32string_view mv(meta);
    for (const auto& [a, b] : c.blocks) {
        if (seen.emplace(mv.substr(a, b - a), true).second) c.block_size += b - a;
    }
    return c;
}

}  // namespace

rlcfg build_grammar(std::span<const std::uint8_t> text, const build_config& config) {
    if (text.empty()) throw std::invalid_argument("cannot build a grammar over an empty text");
    rlcfg g;
    for (std::uint8_t b : text) g.alphabet[b] = true;
    std::vector<symbol_t> cur = wrap_text(text);
    g.text_length = cur.size();

    std::mt19937_64 rng(config.seed);
    const std::size_t round_cap =
        2 * static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(g.text_length))));

    auto new_symbol = [&](rule r) {
        const symbol_t id = g.symbol_count();
        g.rules.push_back(std::move(r));
        g.creation_round.push_back(static_cast<std::uint32_t>(g.rounds.size()));
        return id;
    };

    while (cur.size() > 1) {
        if (g.rounds.size() >= round_cap) throw structure_error("round cap exceeded");
        round_tables tables;
        tables.input_length = cur.size();
        const run_collapse rc = collapse_runs(cur);

        std::u32string meta(rc.size(), U'\0');
        std::uint64_t new_runs = 0;
        for (std::size_t k = 0; k < rc.size(); ++k) {
            symbol_t id = rc.base[k];
            if (rc.length[k] >= 2) {
                const auto key = run_key(rc.base[k], rc.length[k]);
                auto it = tables.run_table.find(key);
                if (it == tables.run_table.end()) {
                    id = new_symbol(rule::run(rc.base[k], rc.length[k]));
                    tables.run_table.emplace(key, id);
                    ++new_runs;
                } else {
                    id = it->second;
                }
            }
            meta[k] = static_cast<char32_t>(id);
        }

        auto [dense, alpha] = densify(cur);
        tables.delta = compute_delta(dense, static_cast<std::uint32_t>(alpha.size())).delta;
        const double budget = config.budget_factor * tables.delta;

        std::optional<candidate> best;
        std::uint32_t attempts = 0;
        std::optional<permutation> fixed;
        if (config.permutation_source) fixed = config.permutation_source(g.rounds.size(), alpha, g);
        if (fixed) {
            best = evaluate(rc, meta, std::move(*fixed));
            attempts = 1;
        } else {
            while (true) {
                candidate c = evaluate(rc, meta, draw_permutation(alpha, cur.front(), cur.back(), rng));
                ++attempts;
                if (!best || c.block_size < best->block_size) best = std::move(c);
                if (static_cast<double>(best->block_size + 2 * new_runs) <= budget) break;
                if (attempts > config.max_retries) break;
            }
        }
        tables.retries = attempts - 1;
        tables.contribution = best->block_size + 2 * new_runs;
        tables.within_budget = static_cast<double>(tables.contribution) <= budget;

        std::vector<symbol_t> next;
        next.reserve(best->blocks.size());
        const std::u32string_view mv(meta);
        for (const auto& [a, b] : best->blocks) {
            const auto key = mv.substr(a, b - a);
            auto it = tables.block_table.find(std::u32string(key));
            if (it == tables.block_table.end()) {
                std::vector<symbol_t> children(key.begin(), key.end());
                const symbol_t id = new_symbol(rule::block(std::move(children)));
                it = tables.block_table.emplace(std::u32string(key), id).first;
            }
            next.push_back(it->second);
        }
        tables.pi = std::move(best->pi);
        g.rounds.push_back(std::move(tables));
        cur = std::move(next);
    }
    g.start = cur.front();
    compute_lengths(g);
    return g;
}

std::vector<symbol_t> topological_order(const rlcfg& g) {
    const std::size_t r = g.rules.size();
    std::vector<std::uint8_t> state(r, 0);  // 0 new, 1 open, 2 done
    std::vector<symbol_t> order;
    order.reserve(r);
    auto check_child = [&](symbol_t c) {
        if (is_terminal(c)) return;
        if (!g.has_rule(c)) throw structure_error("missing rule for symbol " + std::to_string(c));
    };
    for (std::size_t k = 0; k < r; ++k) {
        const rule& rr = g.rules[k];
        if (rr.is_run()) {
            check_child(rr.base);
            if (rr.exponent < 2) throw structure_error("run rule with exponent below 2");
        } else {
            if (rr.children.size() < 2) throw structure_error("block rule with fewer than two children");
            for (symbol_t c : rr.children) check_child(c);
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> stack;  // (rule index, next child)
    for (std::size_t root = 0; root < r; ++root) {
        if (state[root]) continue;
        stack.emplace_back(root, 0);
        state[root] = 1;
        while (!stack.empty()) {
            auto& [k, pos] = stack.back();
            const rule& rr = g.rules[k];
            const std::size_t deg = rr.is_run() ? 1 : rr.children.size();
            if (pos == deg) {
                state[k] = 2;
                order.push_back(static_cast<symbol_t>(k + first_nonterminal));
                stack.pop_back();
                continue;
            }
            const symbol_t c = rr.is_run() ? rr.base : rr.children[pos];
            ++pos;
            if (is_terminal(c)) continue;
            const std::size_t ck = c - first_nonterminal;
            if (state[ck] == 1) throw structure_error("cycle through symbol " + std::to_string(c));
            if (state[ck] == 0) {
                state[ck] = 1;
                stack.emplace_back(ck, 0);
            }
        }
    }
    return order;
}

void compute_lengths(rlcfg& g) {
    const auto order = topological_order(g);
    g.exp_len.assign(g.symbol_count(), 1);
    for (symbol_t s : order) {
        const rule& rr = g.rule_of(s);
        std::uint64_t len = 0;
        if (rr.is_run()) {
            len = g.exp_len[rr.base] * rr.exponent;
        } else {
            for (symbol_t c : rr.children) len += g.exp_len[c];
        }
        g.exp_len[s] = len;
    }
}

std::vector<symbol_t> expand(const rlcfg& g, symbol_t s) {
    topological_order(g);
    if (!is_terminal(s) && !g.has_rule(s)) throw structure_error("no rule for symbol " + std::to_string(s));
    std::vector<symbol_t> out;
    std::vector<std::pair<symbol_t, std::uint64_t>> stack{{s, 1}};  // (symbol, copies left)
    const std::uint64_t limit = std::uint64_t{1} << 40;
    while (!stack.empty()) {
        auto& [sym, copies] = stack.back();
        if (copies == 0) {
            stack.pop_back();
            continue;
        }
        --copies;
        const symbol_t x = sym;
        if (is_terminal(x)) {
            out.push_back(x);
            if (out.size() > limit) throw structure_error("expansion too long");
            continue;
        }
        const rule& rr = g.rule_of(x);
        if (rr.is_run()) {
            stack.emplace_back(rr.base, rr.exponent);
        } else {
            for (auto it = rr.children.rbegin(); it != rr.children.rend(); ++it) stack.emplace_back(*it, 1);
        }
    }
    return out;
}

std::vector<symbol_t> decompress(const rlcfg& g) {
    if (g.start == no_symbol) throw structure_error("grammar has no start symbol");
    if (!is_terminal(g.start) && !g.has_rule(g.start)) throw structure_error("start symbol has no rule");
    return expand(g, g.start);
}

std::vector<std::vector<symbol_t>> level_sequences(const rlcfg& g) {
    std::vector<std::vector<symbol_t>> levels(g.rounds.size() + 1);
    levels.back() = {g.start};
    for (std::size_t r = g.rounds.size(); r-- > 0;) {
        std::vector<symbol_t> out;
        for (symbol_t b : levels[r + 1]) {
            for (symbol_t c : g.rule_of(b).children) {
                if (!is_terminal(c) && g.creation_round[c - first_nonterminal] == r && g.rule_of(c).is_run()) {
                    const rule& rr = g.rule_of(c);
                    out.insert(out.end(), rr.exponent, rr.base);
                } else {
                    out.push_back(c);
                }
            }
        }
        levels[r] = std::move(out);
    }
    return levels;
}

std::vector<std::uint32_t> symbol_heights(const rlcfg& g) {
    std::vector<std::uint32_t> h(g.symbol_count(), 0);
    for (symbol_t s : topological_order(g)) {
        const rule& rr = g.rule_of(s);
        std::uint32_t m = 0;
        if (rr.is_run()) {
            m = h[rr.base];
        } else {
            for (symbol_t c : rr.children) m = std::max(m, h[c]);
        }
        h[s] = m + 1;
    }
    return h;
}

grammar_stats compute_stats(const rlcfg& g, double delta) {
    grammar_stats s;
    s.n = g.text_length - 2;
    s.r = g.rules.size();
    for (const rule& rr : g.rules) s.g += rr.size();
    s.rounds = g.rounds.size();
    s.height = symbol_heights(g)[g.start];
    for (const auto& t : g.rounds) {
        s.retries.push_back(t.retries);
        s.round_lengths.push_back(t.input_length);
        s.mean_retries += t.retries;
    }
    if (!g.rounds.empty()) s.mean_retries /= static_cast<double>(g.rounds.size());
    s.delta = delta;
    if (delta > 0) {
        const double lg = std::max(1.0, std::log2(static_cast<double>(s.n) / delta));
        s.ratio = static_cast<double>(s.g) / (delta * lg);
    }
    return s;
}

std::string format_stats(const grammar_stats& s) {
    std::ostringstream os;
    os << "n " << s.n << "\n"
       << "g " << s.g << "\n"
       << "r " << s.r << "\n"
       << "rounds " << s.rounds << "\n"
       << "height " << s.height << "\n"
       << "delta " << s.delta << "\n"
       << "ratio " << s.ratio << "\n"
       << "mean_retries " << s.mean_retries << "\n"
       << "retries";
    for (auto v : s.retries) os << ' ' << v;
    os << "\nround_lengths";
    for (auto v : s.round_lengths) os << ' ' << v;
    os << "\n";
    return os.str();
}

std::string render(std::span<const symbol_t> s) {
    std::string out;
    for (symbol_t x : s) {
        if (x == hash_symbol) out += '#';
        else if (x == dollar_symbol) out += '$';
        else if (x < 256) out += static_cast<char>(x);
        else out += "<" + std::to_string(x) + ">";
    }
    return out;
}

}  // namespace rlci
