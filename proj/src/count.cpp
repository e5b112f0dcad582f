#include "rlci/count.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace rlci {

std::vector<std::uint64_t> compute_counts(const rlcfg& g, const grammar_tree& t) {
    const node_t n = t.size();
    std::vector<std::uint64_t> c(n, 0);
    std::vector<std::uint8_t> state(n, 0);  // 0 new, 1 open, 2 done
    if (n == 0) return c;
    c[0] = 1;
    state[0] = 2;

    // dependencies of u: anc(u) and the next non-pseudo node of its chain
    auto deps = [&](node_t u, node_t& a, node_t& nx, std::uint64_t& mult) {
        a = t.anc[u];
        nx = t.next[u];
        mult = 1;
        if (nx != no_node && t.pseudo[nx]) {
            mult = g.rule_of(t.label[t.parent[u]]).exponent;
            nx = t.next[nx];
        }
    };
    std::vector<node_t> stack;
    for (node_t root = 1; root < n; ++root) {
        if (t.pseudo[root] || state[root] == 2) continue;
        stack.push_back(root);
        while (!stack.empty()) {
            const node_t u = stack.back();
            if (state[u] == 2) {
                stack.pop_back();
                continue;
            }
            node_t a, nx;
            std::uint64_t mult;
            deps(u, a, nx, mult);
            bool ready = true;
            for (node_t d : {a, nx}) {
                if (d == no_node || state[d] == 2) continue;
                if (state[d] == 1) throw structure_error("cyclic occurrence counters");
                ready = false;
                stack.push_back(d);
            }
            if (!ready) {
                state[u] = 1;
                continue;
            }
            c[u] = mult * c[a] + (nx == no_node ? 0 : c[nx]);
            state[u] = 2;
            stack.pop_back();
        }
    }
    return c;
}

namespace {

template <typename T>
std::uint64_t period_of(std::span<const T> p) {
    const std::size_t m = p.size();
    if (m == 0) return 0;
    std::vector<std::size_t> fail(m + 1, 0);
    std::size_t k = 0;
    for (std::size_t i = 1; i < m; ++i) {
        while (k > 0 && p[i] != p[k]) k = fail[k];
        if (p[i] == p[k]) ++k;
        fail[i + 1] = k;
    }
    return m - fail[m];
}

}  // namespace

std::uint64_t shortest_period(std::span<const std::uint8_t> p) { return period_of(p); }
std::uint64_t shortest_period(std::span<const symbol_t> p) { return period_of(p); }

period_key period_key_of(const grammar_access& acc, symbol_t a) {
    const std::uint64_t l = acc.length(a);
    const std::uint64_t k = std::bit_floor(l);
    return {acc.prefix_sig(a, k).kappa, acc.substring_sig(a, l - k, k).kappa, l};
}

period_key period_key_of(std::span<const signature> prefix, std::uint64_t from, std::uint64_t len) {
    const std::uint64_t k = std::bit_floor(len);
    const auto sub = [&](std::uint64_t a, std::uint64_t l) {
        return sig_split_right(prefix[a + l], prefix[a]).kappa;
    };
    return {sub(from, k), sub(from + len - k, k), len};
}

run_period_table build_run_period_table(const grammar_access& acc, const grammar_tree& t,
                                        const std::vector<std::uint64_t>& counts) {
    const rlcfg& g = acc.grammar();
    // key -> exponent -> summed c(A)
    std::map<period_key, std::pair<symbol_t, std::map<std::uint64_t, std::uint64_t>>> agg;
    for (symbol_t s = first_nonterminal; s < g.symbol_count(); ++s) {
        const rule& r = g.rule_of(s);
        if (!r.is_run() || r.exponent < 3) continue;
        const node_t u = t.internal_of[s];
        if (u == no_node) continue;
        auto& slot = agg[period_key_of(acc, r.base)];
        if (slot.second.empty()) slot.first = r.base;
        slot.second[r.exponent] += counts[u];
    }
    run_period_table out;
    for (auto& [key, val] : agg) {
        run_period_entry e;
        e.base = val.first;
        for (const auto& [s, c] : val.second) {
            e.exponents.push_back(s);
            e.c.push_back(c);
            e.c_prime.push_back(s * c);
        }
        for (std::size_t i = e.c.size(); i-- > 1;) {
            e.c[i - 1] += e.c[i];
            e.c_prime[i - 1] += e.c_prime[i];
        }
        out.emplace(key, std::move(e));
    }
    return out;
}

std::uint64_t run_correction(const run_period_entry& e, std::uint64_t m, std::uint64_t q, std::uint64_t p) {
    const std::uint64_t need = m - q;
    // first exponent s with (s - 1) p >= m - q
    const auto it = std::partition_point(e.exponents.begin(), e.exponents.end(),
                                         [&](std::uint64_t s) { return (s - 1) * p < need; });
    if (it == e.exponents.end()) return 0;
    const std::size_t i = static_cast<std::size_t>(it - e.exponents.begin());
    const std::uint64_t copies = (need + p - 1) / p;
    return e.c_prime[i] - e.c[i] * copies;
}

}  // namespace rlci
