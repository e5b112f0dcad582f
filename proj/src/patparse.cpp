#include "rlci/patparse.hpp"

#include <algorithm>
#include <unordered_map>

namespace rlci {

namespace {

// Fresh ids and ranks for symbols of #P$ that the text never produced.
struct novel_registry {
    symbol_t next_id = 0;
    std::unordered_map<std::uint64_t, symbol_t> runs;        // per round, cleared
    std::unordered_map<std::u32string, symbol_t> blocks;     // per round, cleared
    std::unordered_map<symbol_t, std::uint32_t> rank;        // ranks for the following round
    std::uint32_t counter = 0;
};

std::vector<std::uint64_t> restrict(const std::vector<std::uint64_t>& ends, std::uint64_t lo,
                                    std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t o : ends)
        if (o >= lo && o < hi) out.push_back(o);
    return out;
}

}  // namespace

split_set parse_pattern(const rlcfg& g, std::span<const std::uint8_t> p) {
    split_set out;
    const std::uint64_t m = p.size();
    for (std::uint8_t b : p) {
        if (!g.alphabet[b]) {
            out.abandoned = true;
            out.reason = "byte absent from the text";
            return out;
        }
    }
    if (m < 2) return out;

    std::vector<symbol_t> s;
    s.reserve(m + 2);
    s.push_back(hash_symbol);
    s.insert(s.end(), p.begin(), p.end());
    s.push_back(dollar_symbol);
    // ends[k]: last position of symbol k inside #P$; boundary offset is ends[k] - 1
    std::vector<std::uint64_t> ends(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) ends[k] = k;

    std::vector<std::uint64_t> b_cur(m - 1);
    for (std::uint64_t o = 0; o + 1 < m; ++o) b_cur[o] = o;

    novel_registry reg;
    reg.next_id = g.symbol_count();
    std::vector<std::uint64_t> mset;
    const std::size_t rounds = g.rounds.size();

    for (std::size_t r = 0;; ++r) {
        out.b.push_back(b_cur);
        if (b_cur.empty()) break;
        mset.push_back(b_cur.front());
        mset.push_back(b_cur.back());
        if (r == rounds) {
            out.abandoned = true;
            out.reason = "pattern outlasts the grammar";
            break;
        }
        out.symbols_processed += s.size();
        const round_tables& tab = g.rounds[r];
        const run_collapse rc = collapse_runs(s);
        const std::size_t nm = rc.size();

        std::vector<std::uint64_t> run_ends(nm);
        for (std::size_t k = 0; k < nm; ++k) run_ends[k] = ends[rc.limap[k]] - 1;
        const auto b_hat = restrict(run_ends, b_cur.front() + 1, b_cur.back());
        out.b_hat.push_back(b_hat);
        if (!b_hat.empty()) mset.push_back(b_hat.front());

        // metasymbols
        std::u32string meta(nm, U'\0');
        reg.runs.clear();
        for (std::size_t k = 0; k < nm; ++k) {
            symbol_t id = rc.base[k];
            if (rc.length[k] >= 2) {
                const auto key = run_key(rc.base[k], rc.length[k]);
                if (auto it = tab.run_table.find(key); it != tab.run_table.end()) {
                    id = it->second;
                } else {
                    const bool near_edge = rc.fimap[k] <= 5 || rc.limap[k] + 5 >= s.size();
                    if (!near_edge) {
                        out.abandoned = true;
                        out.reason = "interior run absent from the grammar";
                        break;
                    }
                    auto [it2, fresh] = reg.runs.emplace(key, reg.next_id);
                    if (fresh) ++reg.next_id;
                    id = it2->second;
                }
            }
            meta[k] = static_cast<char32_t>(id);
        }
        if (out.abandoned) break;

        // ranks: first metasymbol plays '#', last plays '$'
        std::vector<std::uint32_t> rank(nm);
        for (std::size_t k = 0; k < nm; ++k) {
            if (k == 0) rank[k] = 2;
            else if (k + 1 == nm) rank[k] = 1;
            else if (tab.pi.contains(rc.base[k])) rank[k] = tab.pi.rank(rc.base[k]);
            else if (auto it = reg.rank.find(rc.base[k]); it != reg.rank.end()) rank[k] = it->second;
            else throw alphabet_error("symbol without a rank while parsing a pattern");
        }
        std::vector<std::pair<std::size_t, std::size_t>> blocks;
        std::size_t first = 0;
        for (std::size_t k = 1; k + 1 < nm; ++k) {
            if (rank[k - 1] > rank[k] && rank[k] < rank[k + 1]) {
                blocks.emplace_back(first, k + 1);
                first = k + 1;
            }
        }
        blocks.emplace_back(first, nm);

        const std::uint32_t next_max = r + 1 < rounds ? g.rounds[r + 1].pi.size() : 0;
        reg.blocks.clear();
        reg.rank.clear();
        reg.counter = 0;
        std::vector<symbol_t> next;
        std::vector<std::uint64_t> next_ends;
        const std::u32string_view mv(meta);
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            const auto [a, b] = blocks[bi];
            std::u32string key(mv.substr(a, b - a));
            symbol_t id;
            if (auto it = tab.block_table.find(key); it != tab.block_table.end()) {
                id = it->second;
            } else {
                if (bi >= 4 && bi + 2 < blocks.size()) {
                    out.abandoned = true;
                    out.reason = "interior block absent from the grammar";
                    break;
                }
                auto [it2, fresh] = reg.blocks.emplace(std::move(key), reg.next_id);
                if (fresh) {
                    ++reg.next_id;
                    reg.rank.emplace(it2->second, next_max + ++reg.counter);
                }
                id = it2->second;
            }
            next.push_back(id);
            next_ends.push_back(ends[rc.limap[b - 1]]);
        }
        if (out.abandoned) break;

        std::vector<std::uint64_t> b_next;
        if (!b_hat.empty()) {
            std::vector<std::uint64_t> offs(next_ends.size());
            for (std::size_t k = 0; k < next_ends.size(); ++k) offs[k] = next_ends[k] - 1;
            b_next = restrict(offs, b_hat.front() + 1, b_cur.back());
        }
        s = std::move(next);
        ends = std::move(next_ends);
        b_cur = std::move(b_next);
    }

    std::sort(mset.begin(), mset.end());
    mset.erase(std::unique(mset.begin(), mset.end()), mset.end());
    out.m_of_p = std::move(mset);
    if (!out.abandoned) out.splits = splits_for_search(out, m);
    return out;
}

std::vector<std::uint64_t> splits_for_search(const split_set& ss, std::uint64_t m) {
    std::vector<std::uint64_t> q;
    for (std::uint64_t x : ss.m_of_p)
        if (x + 1 >= 1 && x + 1 < m) q.push_back(x + 1);
    return q;
}

}  // namespace rlci
