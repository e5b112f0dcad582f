#include "rlci/access.hpp"

#include <algorithm>

namespace rlci {

grammar_tree build_grammar_tree(const rlcfg& g) {
    grammar_tree t;
    t.internal_of.assign(g.symbol_count(), no_node);
    struct item {
        symbol_t label;
        node_t parent;
        std::uint64_t start;
        bool pseudo;
    };
    std::vector<item> stack{{g.start, no_node, 0, false}};
    while (!stack.empty()) {
        const item it = stack.back();
        stack.pop_back();
        const node_t id = t.size();
        t.label.push_back(it.label);
        t.parent.push_back(it.parent);
        t.pseudo.push_back(it.pseudo ? 1 : 0);
        t.start.push_back(it.start);
        if (it.pseudo || is_terminal(it.label) || t.internal_of[it.label] != no_node) continue;
        t.internal_of[it.label] = id;
        const rule& r = g.rule_of(it.label);
        if (r.is_run()) {
            stack.push_back({r.base, id, it.start + g.exp_len[r.base], true});
            stack.push_back({r.base, id, it.start, false});
        } else {
            std::uint64_t end = it.start + g.exp_len[it.label];
            for (auto c = r.children.rbegin(); c != r.children.rend(); ++c) {
                end -= g.exp_len[*c];
                stack.push_back({*c, id, end, false});
            }
        }
    }
    const node_t n = t.size();
    t.child_begin.assign(n + 1, 0);
    for (node_t v = 1; v < n; ++v) ++t.child_begin[t.parent[v] + 1];
    for (node_t v = 0; v < n; ++v) t.child_begin[v + 1] += t.child_begin[v];
    t.children.resize(n > 0 ? n - 1 : 0);
    {
        std::vector<std::uint32_t> fill(t.child_begin.begin(), t.child_begin.end() - 1);
        for (node_t v = 1; v < n; ++v) t.children[fill[t.parent[v]]++] = v;
    }

    std::vector<node_t> last(g.symbol_count(), no_node);
    std::vector<std::uint32_t> chain(g.symbol_count(), 0);
    t.next.assign(n, no_node);
    for (node_t v = 0; v < n; ++v) {
        const symbol_t l = t.label[v];
        if (last[l] != no_node) t.next[last[l]] = v;
        last[l] = v;
        ++chain[l];
    }
    t.anc.assign(n, no_node);
    t.offs.assign(n, 0);
    auto is_stop = [&](node_t v) { return v == 0 || chain[t.label[v]] > 1; };
    for (node_t v = 1; v < n; ++v) {
        const node_t p = t.parent[v];
        t.anc[v] = is_stop(p) ? p : t.anc[p];
        t.offs[v] = t.start[v] - t.start[t.anc[v]];
    }
    for (node_t v = 0; v < n; ++v)
        if (t.is_leaf(v)) t.phrase_starts.push_back(t.start[v]);
    return t;
}

grammar_access::grammar_access(const rlcfg& g, const fingerprint_context& ctx) : g_(&g), ctx_(ctx) {
    const std::size_t r = g.rules.size();
    cum_begin_.assign(r + 1, 0);
    for (std::size_t k = 0; k < r; ++k)
        cum_begin_[k + 1] = cum_begin_[k] + (g.rules[k].is_run() ? 0 : g.rules[k].children.size() + 1);
    cum_.resize(cum_begin_[r]);
    prefix_tab_.resize(cum_begin_[r]);
    revsuf_tab_.resize(cum_begin_[r]);
    geo_inv_.assign(r, 0);
    full_.resize(g.symbol_count());
    full_rev_.resize(g.symbol_count());
    for (symbol_t s = 0; s < first_nonterminal; ++s) full_[s] = full_rev_[s] = ctx_.of_symbol(s);

    for (symbol_t s : topological_order(g)) {
        const std::size_t k = s - first_nonterminal;
        const rule& rr = g.rules[k];
        if (rr.is_run()) {
            const signature& b = full_[rr.base];
            geo_inv_[k] = b.pow == 1 ? 0 : mod_inv(mod_sub(b.pow, 1));
            full_[s] = sig_power(b, rr.exponent, geo_inv_[k]);
            full_rev_[s] = sig_power(full_rev_[rr.base], rr.exponent, geo_inv_[k]);
            continue;
        }
        const std::size_t base = cum_begin_[k];
        const std::size_t a = rr.children.size();
        cum_[base] = 0;
        prefix_tab_[base] = signature{};
        for (std::size_t i = 0; i < a; ++i) {
            cum_[base + i + 1] = cum_[base + i] + g.exp_len[rr.children[i]];
            prefix_tab_[base + i + 1] = sig_concat(prefix_tab_[base + i], full_[rr.children[i]]);
        }
        revsuf_tab_[base + a] = signature{};
        for (std::size_t i = a; i-- > 0;)
            revsuf_tab_[base + i] = sig_concat(revsuf_tab_[base + i + 1], full_rev_[rr.children[i]]);
        full_[s] = prefix_tab_[base + a];
        full_rev_[s] = revsuf_tab_[base];
    }
}

std::span<const std::uint64_t> grammar_access::offsets(symbol_t a) const {
    const std::size_t k = a - first_nonterminal;
    return {cum_.data() + cum_begin_[k], cum_.data() + cum_begin_[k + 1]};
}

symbol_t grammar_access::char_at(symbol_t a, std::uint64_t pos) const {
    if (pos >= length(a)) throw bounds_error("position outside the expansion");
    while (!is_terminal(a)) {
        const std::size_t k = a - first_nonterminal;
        const rule& rr = g_->rules[k];
        if (rr.is_run()) {
            pos %= g_->exp_len[rr.base];
            a = rr.base;
        } else {
            const auto cum = offsets(a);
            const std::size_t i = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), pos) - cum.begin()) - 1;
            pos -= cum[i];
            a = rr.children[i];
        }
    }
    return a;
}

void grammar_access::extract(symbol_t a, std::uint64_t off, std::uint64_t len,
                             std::vector<symbol_t>& out) const {
    if (off >= length(a)) return;
    len = std::min(len, length(a) - off);
    symbol_cursor cur(*this, a, off, false);
    for (std::uint64_t i = 0; i < len; ++i) {
        out.push_back(cur.get());
        cur.advance();
    }
}

void grammar_access::extract_reversed_suffix(symbol_t a, std::uint64_t len,
                                             std::vector<symbol_t>& out) const {
    len = std::min(len, length(a));
    if (len == 0) return;
    symbol_cursor cur(*this, a, 0, true);
    for (std::uint64_t i = 0; i < len; ++i) {
        out.push_back(cur.get());
        cur.advance();
    }
}

std::vector<symbol_t> grammar_access::extract_text(std::uint64_t p, std::uint64_t q) const {
    const std::uint64_t n = length(g_->start);
    if (p < 1 || p > q || q > n) throw bounds_error("extract range outside the text");
    std::vector<symbol_t> out;
    out.reserve(q - p + 1);
    extract(g_->start, p - 1, q - p + 1, out);
    return out;
}

signature grammar_access::prefix_sig(symbol_t a, std::uint64_t l) const {
    signature acc;
    while (l > 0) {
        if (l == length(a)) {
            acc = sig_concat(acc, full_[a]);
            break;
        }
        const std::size_t k = a - first_nonterminal;
        const rule& rr = g_->rules[k];
        if (rr.is_run()) {
            const std::uint64_t L = g_->exp_len[rr.base];
            const std::uint64_t j = l / L;
            if (j > 0) acc = sig_concat(acc, sig_power(full_[rr.base], j, geo_inv_[k]));
            l %= L;
            a = rr.base;
        } else {
            const auto cum = offsets(a);
            const std::size_t i = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), l) - cum.begin()) - 1;
            acc = sig_concat(acc, prefix_tab_[cum_begin_[k] + i]);
            l -= cum[i];
            if (l > 0) a = rr.children[i];
        }
    }
    return acc;
}

signature grammar_access::reversed_suffix_sig(symbol_t a, std::uint64_t l) const {
    signature acc;
    while (l > 0) {
        if (l == length(a)) {
            acc = sig_concat(acc, full_rev_[a]);
            break;
        }
        const std::size_t k = a - first_nonterminal;
        const rule& rr = g_->rules[k];
        if (rr.is_run()) {
            const std::uint64_t L = g_->exp_len[rr.base];
            const std::uint64_t j = l / L;
            if (j > 0) acc = sig_concat(acc, sig_power(full_rev_[rr.base], j, geo_inv_[k]));
            l %= L;
            a = rr.base;
        } else {
            const auto cum = offsets(a);
            const std::uint64_t from = length(a) - l;
            const std::size_t i = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), from) - cum.begin()) - 1;
            acc = sig_concat(acc, revsuf_tab_[cum_begin_[k] + i + 1]);
            l = cum[i + 1] - from;
            a = rr.children[i];
        }
    }
    return acc;
}

signature grammar_access::substring_sig(symbol_t a, std::uint64_t off, std::uint64_t l) const {
    if (off == 0) return prefix_sig(a, l);
    return sig_split_right(prefix_sig(a, off + l), prefix_sig(a, off));
}

symbol_cursor::symbol_cursor(const grammar_access& acc, symbol_t a, std::uint64_t off, bool reversed)
    : acc_(&acc), rev_(reversed) {
    const std::uint64_t len = acc.length(a);
    if (off >= len) return;
    remaining_ = len - off;
    descend(a, reversed ? len - 1 - off : off);
}

void symbol_cursor::descend(symbol_t x, std::uint64_t local) {
    const rlcfg& g = *acc_->g_;
    while (!is_terminal(x)) {
        const rule& rr = g.rules[x - first_nonterminal];
        if (rr.is_run()) {
            const std::uint64_t L = g.exp_len[rr.base];
            stack_.push_back({x, local / L});
            local %= L;
            x = rr.base;
        } else {
            const auto cum = acc_->offsets(x);
            const std::size_t i = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), local) - cum.begin()) - 1;
            stack_.push_back({x, i});
            local -= cum[i];
            x = rr.children[i];
        }
    }
    current_ = x;
}

void symbol_cursor::descend_edge(symbol_t x) {
    const rlcfg& g = *acc_->g_;
    while (!is_terminal(x)) {
        const rule& rr = g.rules[x - first_nonterminal];
        if (rr.is_run()) {
            stack_.push_back({x, rev_ ? rr.exponent - 1 : 0});
            x = rr.base;
        } else {
            const std::size_t i = rev_ ? rr.children.size() - 1 : 0;
            stack_.push_back({x, i});
            x = rr.children[i];
        }
    }
    current_ = x;
}

void symbol_cursor::advance() {
    if (remaining_ == 0) return;
    if (--remaining_ == 0) return;
    const rlcfg& g = *acc_->g_;
    while (!stack_.empty()) {
        frame& f = stack_.back();
        const rule& rr = g.rules[f.sym - first_nonterminal];
        const std::uint64_t count = rr.is_run() ? rr.exponent : rr.children.size();
        if (!rev_ && f.idx + 1 < count) {
            ++f.idx;
        } else if (rev_ && f.idx > 0) {
            --f.idx;
        } else {
            stack_.pop_back();
            continue;
        }
        descend_edge(rr.is_run() ? rr.base : rr.children[f.idx]);
        return;
    }
}

}  // namespace rlci
