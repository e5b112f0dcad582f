// Acceptance suite: one PASS/FAIL line per criterion, then a latency report.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rlci/corpus.hpp"
#include "rlci/index.hpp"
#include "support/figure.hpp"
#include "support/oracles.hpp"

using namespace rlci;
using namespace rlci::testing;

namespace {

using clock_type = std::chrono::steady_clock;
using u64s = std::vector<std::uint64_t>;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct outcome {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<outcome> results;

void report(int id, std::string name, bool pass, std::string detail) {
    std::printf("%s %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    results.push_back({id, std::move(name), pass, std::move(detail)});
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct corpus {
    std::string name;
    std::string text;
};

std::string run_text(std::uint64_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::string t;
    while (t.size() < n) t += std::string(1 + uniform_below(rng, 40), static_cast<char>('a' + uniform_below(rng, 3)));
    t.resize(n);
    return t;
}

std::string unary_breaks(std::uint64_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::string t(n, 'a');
    for (int k = 0; k < 12; ++k) t[uniform_below(rng, n)] = 'b';
    return t;
}

std::vector<corpus> query_suite() {
    std::vector<corpus> out;
    for (std::uint64_t n : {1000, 10000, 100000}) {
        for (unsigned s : {2u, 4u, 26u}) out.push_back({fmt("random s=%u n=%llu", s, (unsigned long long)n), random_text(n, s, n + s)});
        out.push_back({fmt("fibonacci n=%llu", (unsigned long long)n), fibonacci_word(n)});
        out.push_back({fmt("copy-edit 8x n=%llu", (unsigned long long)n), copy_edit(n, 8, 4, 4, n)});
    }
    for (std::uint64_t n : {10000, 100000}) {
        out.push_back({fmt("copy-edit 50x n=%llu", (unsigned long long)n), copy_edit(n, 50, 2, 2, n + 1)});
        out.push_back({fmt("runs n=%llu", (unsigned long long)n), run_text(n, n)});
    }
    out.push_back({"unary with breaks n=10000", unary_breaks(10000, 3)});
    return out;
}

enum class kind { present, perturbed, unary, periodic };

struct pattern {
    std::string text;
    kind k;
};

std::vector<pattern> patterns_for(const std::string& t, std::mt19937_64& rng, int count) {
    std::vector<pattern> out;
    std::string alpha;
    {
        std::set<char> a(t.begin(), t.end());
        alpha.assign(a.begin(), a.end());
    }
    for (int c = 0; c < count; ++c) {
        const std::uint64_t m = 1 + uniform_below(rng, std::min<std::uint64_t>(128, t.size()));
        std::string p = t.substr(uniform_below(rng, t.size() - m + 1), m);
        kind k = kind::present;
        switch (c % 8) {
            case 4:
            case 5: {
                k = kind::perturbed;
                const std::uint64_t at = uniform_below(rng, m);
                const char other = alpha[uniform_below(rng, alpha.size())];
                if (c % 8 == 4) p[at] = other == p[at] ? '!' : other;
                else p[at] = static_cast<char>(p[at] ^ 1);
                break;
            }
            case 6:
                k = kind::unary;
                p.assign(m, p[0]);
                break;
            case 7: {
                k = kind::periodic;
                const std::string u = p.substr(0, 1 + uniform_below(rng, std::min<std::uint64_t>(5, m)));
                p.clear();
                while (p.size() < m) p += u;
                p.resize(m);
                break;
            }
            default: break;
        }
        out.push_back({std::move(p), k});
    }
    return out;
}

struct built {
    const corpus* c;
    self_index idx;
    grammar_stats st;
};

std::uint64_t ceil_log2(std::uint64_t m) {
    std::uint64_t l = 0;
    while ((std::uint64_t{1} << l) < m) ++l;
    return l;
}

// Structural checks shared by criteria 6 and 9; returns violations.
std::uint64_t structural_violations(const rlcfg& g, std::string_view text, const grammar_stats& st) {
    std::uint64_t bad = 0;
    for (std::size_t r = 0; r + 1 < st.round_lengths.size(); ++r)
        if (st.round_lengths[r + 1] > st.round_lengths[r] / 2) ++bad;
    const auto h = symbol_heights(g);
    for (symbol_t s = first_nonterminal; s < g.symbol_count(); ++s)
        if (h[s] > 2.0 * std::log2(static_cast<double>(g.length(s))) + 1e-9) ++bad;
    std::vector<symbol_t> direct;
    expand_into(g, g.start, direct);
    const std::vector<symbol_t> want = wrap_text(text_bytes(text));
    if (direct != want) ++bad;
    if (decompress(g) != want) ++bad;
    return bad;
}

// Distinct substrings of every length from naively sorted suffixes and
// directly compared neighbours.
u64s distinct_by_sorted_suffixes(std::string_view s) {
    const std::size_t n = s.size();
    std::vector<std::string_view> suf;
    for (std::size_t i = 0; i < n; ++i) suf.push_back(s.substr(i));
    std::sort(suf.begin(), suf.end());
    u64s cnt(n + 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t lcp = 0;
        if (k > 0)
            while (lcp < suf[k].size() && lcp < suf[k - 1].size() && suf[k][lcp] == suf[k - 1][lcp]) ++lcp;
        for (std::size_t l = lcp + 1; l <= suf[k].size(); ++l) ++cnt[l];
    }
    return cnt;
}

// Criterion 8 on one string and permutation; returns violations, adds the
// number of checked pairs and extensions.
std::uint64_t consistency_violations(const std::vector<symbol_t>& s, const permutation& pi, std::uint64_t& pairs,
                                     std::uint64_t& extensions) {
    const std::size_t n = s.size();
    const auto rp = parse_round(s, pi);
    const auto rc = collapse_runs(s);
    std::vector<char> is_b(n, 0);
    for (std::size_t b : rp.boundaries)
        if (b + 1 < n) is_b[b] = 1;
    std::uint64_t bad = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            if (i2 == i) continue;
            const std::size_t excl = rc.limap[rc.map[i]] - i;
            std::uint64_t diff = 0;
            for (std::size_t d = 0; i + d < n && i2 + d < n && s[i + d] == s[i2 + d]; ++d) {
                // fragments [i, i+d] and [i2, i2+d]; B covers offsets < d
                if (d > 0 && d - 1 != excl && is_b[i + d - 1] != is_b[i2 + d - 1]) ++diff;
                ++pairs;
                if (diff) ++bad;
            }
        }
    std::set<std::pair<std::size_t, std::size_t>> blocks(rp.blocks.begin(), rp.blocks.end());
    for (std::size_t k = 1; k + 1 < rp.blocks.size(); ++k) {
        const auto [i, j] = rp.blocks[k];
        const auto [ie, je] = block_extension(rc, i, j);
        const std::size_t len = je - ie + 1;
        for (std::size_t r2 = 0; r2 + len <= n; ++r2) {
            if (!std::equal(s.begin() + ie, s.begin() + je + 1, s.begin() + r2)) continue;
            ++extensions;
            const std::size_t r = r2 + (i - ie), e = r2 + (j - ie);
            if (!blocks.count({r, e})) {
                ++bad;
                continue;
            }
            if (block_extension(rc, r, e) != std::pair<std::size_t, std::size_t>{r2, r2 + len - 1}) ++bad;
        }
    }
    return bad;
}

std::vector<symbol_t> with_sentinels(const std::string& t) { return wrap_text(text_bytes(t)); }

struct latency {
    double locate_us = 0, count_us = 0;
    std::uint64_t n = 0;
};

const char* m_bucket(std::uint64_t m) {
    return m == 1 ? "m=1" : m <= 4 ? "m=2..4" : m <= 16 ? "m=5..16" : m <= 64 ? "m=17..64" : "m=65..128";
}
const char* occ_bucket(std::uint64_t o) {
    return o == 0 ? "occ=0" : o <= 10 ? "occ=1..10" : o <= 100 ? "occ=11..100" : o <= 1000 ? "occ=101..1000" : "occ>1000";
}

}  // namespace

int main() {
    const auto t_start = clock_type::now();
    std::mt19937_64 rng(2024);

    // build the query suite
    const auto suite = query_suite();
    std::vector<built> idx;
    std::vector<double> retries_all;
    for (const corpus& c : suite) {
        auto i = self_index::build(c.text);
        auto st = i.stats();
        for (auto r : st.retries) retries_all.push_back(r);
        idx.push_back({&c, std::move(i), std::move(st)});
    }
    std::printf("built %zu corpora in %.1f s\n", idx.size(), seconds_since(t_start));

    // criteria 1, 2, 4, 5 over one pattern suite
    std::uint64_t patterns = 0, absent = 0, unary = 0, periodic = 0;
    std::uint64_t locate_bad = 0, count_bad = 0, split_bad = 0, complete_bad = 0, max_m_of_p = 0;
    std::map<std::string, latency> by_m, by_occ;
    for (const built& b : idx) {
        const std::string& t = b.c->text;
        for (const pattern& p : patterns_for(t, rng, 600)) {
            ++patterns;
            const std::uint64_t m = p.text.size();
            const auto want = scan_occurrences(t, p.text);
            if (want.empty()) ++absent;
            if (p.k == kind::unary) ++unary;
            if (p.k == kind::periodic) ++periodic;

            auto t0 = clock_type::now();
            const auto got = b.idx.locate(p.text);
            const double lus = seconds_since(t0) * 1e6;
            t0 = clock_type::now();
            const std::uint64_t cnt = b.idx.count(p.text);
            const double cus = seconds_since(t0) * 1e6;
            for (auto* tab : {&by_m, &by_occ}) {
                auto& e = (*tab)[tab == &by_m ? m_bucket(m) : occ_bucket(want.size())];
                e.locate_us += lus;
                e.count_us += cus;
                ++e.n;
            }
            if (got != want) ++locate_bad;
            if (cnt != want.size() || cnt != got.size()) ++count_bad;

            const auto some = b.idx.locate_debug(text_bytes(p.text), false);
            if (!some.splits.abandoned) {
                max_m_of_p = std::max<std::uint64_t>(max_m_of_p, some.splits.m_of_p.size());
                if (some.splits.m_of_p.size() > 3 * ceil_log2(m)) ++split_bad;
            }
            const auto all = b.idx.locate_debug(text_bytes(p.text), true);
            if (some.primaries != all.primaries) ++complete_bad;
        }
    }
    report(1, "locate equals naive scan", locate_bad == 0 && patterns >= 10000 && idx.size() >= 20,
           fmt("%llu patterns (%llu absent) over %zu corpora, %llu mismatches", (unsigned long long)patterns,
               (unsigned long long)absent, idx.size(), (unsigned long long)locate_bad));
    report(2, "count equals |locate| and naive scan", count_bad == 0,
           fmt("%llu patterns incl. %llu unary and %llu periodic, %llu mismatches", (unsigned long long)patterns,
               (unsigned long long)unary, (unsigned long long)periodic, (unsigned long long)count_bad));

    // criterion 3: worked example
    {
        std::vector<std::string> errs;
        const rlcfg g = build_grammar(text_bytes(figure_text), figure_config());
        const auto levels = level_sequences(g);
        if (levels.size() < 3) errs.push_back("fewer than 3 levels");
        else {
            if (level_ends(g, levels[1]) != u64s{3, 5, 8, 11, 13, 17, 19, 23, 25, 27, 30, 33, 35, 39, 41, 45, 47})
                errs.push_back("level-1 boundaries");
            if (level_ends(g, levels[2]) != u64s{11, 17, 23, 33, 39, 45}) errs.push_back("level-2 boundaries");
            const auto& t2 = levels[2];
            const bool shape = t2.size() == 7 && t2[1] == t2[2] && t2[2] == t2[4] && t2[4] == t2[5] && t2[3] != t2[1] &&
                               expansion_string(g, t2[0]).front() == '#' && expansion_string(g, t2[6]).back() == '$' &&
                               expansion_string(g, t2[1]) == "bdaabc" && expansion_string(g, t2[3]) == "bdbdaacaac";
            if (!shape) errs.push_back("T2 shape");
        }
        const auto ss = parse_pattern(g, text_bytes(figure_pattern));
        if (ss.m_of_p != u64s{0, 1, 2, 8, 14, 20, 21}) errs.push_back("M(P)");
        const auto fi = self_index::build(figure_text, figure_config());
        if (fi.locate("bdaabc") != u64s{11, 17, 33, 39}) errs.push_back("locate bdaabc");
        std::string detail = "level-1, level-2, T2 = #DDEDD$, M(P) = {0,1,2,8,14,20,21}";
        for (const auto& e : errs) detail += "; wrong " + e;
        report(3, "worked example", errs.empty(), detail);
    }

    report(4, "split-set size bound", split_bad == 0,
           fmt("%llu patterns, max |M(P)| = %llu, %llu violations", (unsigned long long)patterns,
               (unsigned long long)max_m_of_p, (unsigned long long)split_bad));
    report(5, "split completeness", complete_bad == 0,
           fmt("%llu patterns, %llu discrepancies", (unsigned long long)patterns, (unsigned long long)complete_bad));

    // criterion 9 corpora, reused by 6 and 10
    struct scaled {
        std::string name;
        std::uint64_t n;
        grammar_stats st;
        std::uint64_t structural_bad;
    };
    std::vector<scaled> scaling;
    for (std::uint64_t n : {1000, 10000, 100000, 1000000}) {
        const std::vector<std::pair<std::string, std::string>> texts = {
            {"fibonacci", fibonacci_word(n)},
            {"copy-edit", copy_edit(n, 64, 8, 4, n)},
            {"runs", run_text(n, n + 7)},
        };
        for (const auto& [name, t] : texts) {
            const rlcfg g = build_grammar(text_bytes(t));
            const auto st = compute_stats(g, compute_delta(text_bytes(t)).delta);
            for (auto r : st.retries) retries_all.push_back(r);
            scaling.push_back({name, n, st, structural_violations(g, t, st)});
        }
    }

    {
        std::uint64_t bad = 0, grammars = 0;
        for (const built& b : idx) {
            bad += structural_violations(b.idx.data().grammar, b.c->text, b.st);
            ++grammars;
        }
        for (const scaled& s : scaling) {
            bad += s.structural_bad;
            ++grammars;
        }
        report(6, "structural invariants", bad == 0,
               fmt("%llu grammars: halving, heights, round trip; %llu violations", (unsigned long long)grammars,
                   (unsigned long long)bad));
    }

    // criterion 7
    {
        std::uint64_t checked = 0, bad = 0;
        for (std::size_t len = 1; len <= 14; ++len)
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
                std::string s(len, '0');
                for (std::size_t k = 0; k < len; ++k)
                    if (mask >> k & 1) s[k] = '1';
                const auto d = compute_delta(text_bytes(s));
                bool ok = d.delta == brute_delta(s);
                for (std::size_t l = 1; l <= len && ok; ++l) ok = d.t_of_ell[l] == distinct_of_length(s, l);
                if (!ok) ++bad;
                ++checked;
            }
        for (int k = 0; k < 100; ++k) {
            const std::uint64_t n = 1 + uniform_below(rng, 500);
            const std::string s = k % 2 ? random_text(n, 1 + static_cast<unsigned>(uniform_below(rng, 26)), k)
                                        : copy_edit(std::max<std::uint64_t>(n, 8), 1 + k % 7, k % 5, 3, k);
            const auto d = compute_delta(text_bytes(s));
            const auto want = distinct_by_sorted_suffixes(s);
            double best = 0;
            bool ok = true;
            for (std::size_t l = 1; l <= s.size(); ++l) {
                ok = ok && d.t_of_ell[l] == want[l];
                best = std::max(best, static_cast<double>(want[l]) / static_cast<double>(l));
            }
            if (!ok || d.delta != best) ++bad;
            ++checked;
        }
        report(7, "delta equals distinct-substring enumeration", bad == 0,
               fmt("%llu strings (all binary up to length 14, 100 random up to 500), %llu mismatches",
                   (unsigned long long)checked, (unsigned long long)bad));
    }

    // criterion 8
    {
        std::uint64_t strings = 0, pairs = 0, exts = 0, bad = 0;
        const std::vector<symbol_t> alpha = {'a', 'b', 'c', hash_symbol, dollar_symbol};
        // exhaustive: every string of length <= 8 over {a,b,c}, every permutation
        std::vector<std::vector<std::pair<symbol_t, std::uint32_t>>> perms;
        {
            std::vector<std::uint32_t> r = {3, 4, 5};
            do {
                perms.push_back({{dollar_symbol, 1}, {hash_symbol, 2}, {'a', r[0]}, {'b', r[1]}, {'c', r[2]}});
            } while (std::next_permutation(r.begin(), r.end()));
        }
        for (std::size_t len = 1; len <= 8; ++len) {
            std::uint64_t total = 1;
            for (std::size_t k = 0; k < len; ++k) total *= 3;
            for (std::uint64_t code = 0; code < total; ++code) {
                std::string t(len, 'a');
                std::uint64_t c = code;
                for (auto& ch : t) {
                    ch = static_cast<char>('a' + c % 3);
                    c /= 3;
                }
                const auto s = with_sentinels(t);
                for (const auto& pp : perms) {
                    bad += consistency_violations(s, permutation::from_pairs(pp), pairs, exts);
                    ++strings;
                }
            }
        }
        // sampled: 1000 strings of length <= 64, sigma <= 3, random permutations
        for (int k = 0; k < 1000; ++k) {
            const std::uint64_t n = 1 + uniform_below(rng, 64);
            const unsigned sigma = 1 + static_cast<unsigned>(uniform_below(rng, 3));
            std::string t(n, 'a');
            for (auto& ch : t) ch = static_cast<char>('a' + uniform_below(rng, sigma));
            const auto pi = draw_permutation(alpha, hash_symbol, dollar_symbol, rng);
            bad += consistency_violations(with_sentinels(t), pi, pairs, exts);
            ++strings;
        }
        report(8, "local consistency and block extensions", bad == 0,
               fmt("%llu (string, permutation) cases, %llu fragment pairs, %llu extension matches, %llu violations",
                   (unsigned long long)strings, (unsigned long long)pairs, (unsigned long long)exts,
                   (unsigned long long)bad));
    }

    // criterion 9
    {
        double worst = 0;
        for (const scaled& s : scaling) {
            std::printf("     ratio %-10s n=%-8llu g=%-8llu delta=%-9.2f rounds=%llu ratio=%.3f\n", s.name.c_str(),
                        (unsigned long long)s.n, (unsigned long long)s.st.g, s.st.delta,
                        (unsigned long long)s.st.rounds, s.st.ratio);
            worst = std::max(worst, s.st.ratio);
        }
        report(9, "space ratio g / (delta log(n/delta))", worst <= 64.0,
               fmt("%zu repetitive corpora, n = 1e3 .. 1e6, max ratio %.3f (bound 64)", scaling.size(), worst));
    }

    // criterion 10
    {
        double sum = 0, mx = 0;
        for (double r : retries_all) {
            sum += r;
            mx = std::max(mx, r);
        }
        const double mean = retries_all.empty() ? 0 : sum / static_cast<double>(retries_all.size());
        report(10, "mean permutation retries per round", mean <= 8.0,
               fmt("%zu rounds, mean %.3f, max %.0f (bound 8)", retries_all.size(), mean, mx));
    }

    // criterion 11
    {
        std::uint64_t cases = 0, bad = 0, verified = 0;
        std::vector<const built*> small;
        for (const built& b : idx)
            if (b.c->text.size() <= 10000) small.push_back(&b);
        std::map<std::pair<const built*, symbol_t>, std::vector<symbol_t>> expansions;
        auto expansion_of = [&](const built* b, symbol_t s) -> const std::vector<symbol_t>& {
            auto [it, fresh] = expansions.try_emplace({b, s});
            if (fresh) expand_into(b->idx.data().grammar, s, it->second);
            return it->second;
        };
        // oracle string of a member: slice of the rule's expansion
        auto member_text = [&](const built* b, const member& x) {
            const auto& e = expansion_of(b, x.sym);
            if (x.reversed) return std::vector<symbol_t>(e.rbegin(), e.rbegin() + x.len);
            return std::vector<symbol_t>(e.begin() + x.off, e.begin() + x.off + x.len);
        };
        while (cases < 10000) {
            const built* b = small[uniform_below(rng, small.size())];
            const auto& d = b->idx.data();
            const auto& xs = d.grid.x.members;
            const auto& ys = uniform_below(rng, 2) ? d.grid.y_loc.members : d.grid.y_cnt.members;
            if (xs.empty() || ys.empty()) continue;
            const member x = xs[uniform_below(rng, xs.size())], y = ys[uniform_below(rng, ys.size())];
            const auto sx = member_text(b, x), sy = member_text(b, y);
            const std::uint64_t lx = 1 + uniform_below(rng, sx.size()), ly = 1 + uniform_below(rng, sy.size());
            const std::vector<symbol_t> px(sx.begin(), sx.begin() + lx), py(sy.begin(), sy.begin() + ly);
            std::vector<symbol_t> both = px;
            both.insert(both.end(), py.begin(), py.end());
            const signature gx = sig_x_prefix(d.access, x, lx), gy = sig_y_prefix(d.access, y, ly);
            const signature gxy = sig_concat(gx, gy);
            bool ok = gx.kappa == direct_kappa(px, d.ctx.c) && gy.kappa == direct_kappa(py, d.ctx.c) &&
                      gxy.kappa == direct_kappa(both, d.ctx.c) && sig_split_right(gxy, gx) == gy &&
                      sig_split_left(gxy, gy) == gx && gx == d.ctx.of(px) && gy == d.ctx.of(py);
            if (!ok) ++bad;
            ++cases;
        }
        for (const built& b : idx)
            if (b.idx.data().ctx.verified && verify_collision_free(b.idx.data().ctx, with_sentinels(b.c->text)))
                ++verified;
        report(11, "fingerprint algebra and collision verification", bad == 0 && verified == idx.size(),
               fmt("%llu signature cases, %llu mismatches; collision-free on %llu of %zu corpora",
                   (unsigned long long)cases, (unsigned long long)bad, (unsigned long long)verified, idx.size()));
    }

    std::printf("\nlatency report (mean microseconds per query, not asserted)\n");
    for (const auto* tab : {&by_m, &by_occ})
        for (const auto& [k, e] : *tab)
            std::printf("  %-14s queries=%-6llu locate=%9.1f count=%9.1f\n", k.c_str(), (unsigned long long)e.n,
                        e.locate_us / static_cast<double>(e.n), e.count_us / static_cast<double>(e.n));

    int failed = 0;
    for (const outcome& o : results) failed += !o.pass;
    std::printf("\n%zu criteria, %d failed, %.1f s\n", results.size(), failed, seconds_since(t_start));
    return failed == 0 ? 0 : 1;
}
