#include "rlci/index.hpp"

#include <algorithm>
#include <chrono>

namespace rlci {

self_index::self_index() = default;
self_index::~self_index() = default;
self_index::self_index(self_index&&) noexcept = default;
self_index& self_index::operator=(self_index&&) noexcept = default;

namespace {

std::span<const std::uint8_t> bytes_of(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

self_index self_index::build(std::span<const std::uint8_t> text, const build_config& config) {
    const auto t0 = std::chrono::steady_clock::now();
    auto d = std::make_unique<index_data>();
    d->grammar = build_grammar(text, config);
    d->delta = compute_delta(text).delta;
    d->tree = build_grammar_tree(d->grammar);
    const auto wrapped = wrap_text(text);
    d->ctx = make_fingerprint_context(wrapped, config.seed);
    d->access = grammar_access(d->grammar, d->ctx);
    d->counts = compute_counts(d->grammar, d->tree);
    d->grid = build_grids(d->grammar, d->tree, wrapped, d->counts);
    d->periods = build_run_period_table(d->access, d->tree, d->counts);
    for (std::uint8_t b : text) ++d->terminal_count[b];
    d->build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    self_index idx;
    idx.d_ = std::move(d);
    return idx;
}

self_index self_index::build(std::string_view text, const build_config& config) {
    return build(bytes_of(text), config);
}

self_index self_index::assemble(std::unique_ptr<index_data> d) {
    d->access = grammar_access(d->grammar, d->ctx);
    d->grid.locate.index(false);
    d->grid.count.index(true);
    self_index idx;
    idx.d_ = std::move(d);
    return idx;
}

std::uint64_t self_index::text_length() const { return d_->grammar.text_length - 2; }

grammar_stats self_index::stats() const { return compute_stats(d_->grammar, d_->delta); }

std::vector<std::uint8_t> self_index::extract(std::uint64_t from, std::uint64_t len) const {
    if (len == 0) return {};
    if (from < 1 || from + len - 1 > text_length()) throw bounds_error("extract range outside the text");
    const auto syms = d_->access.extract_text(from + 1, from + len);
    return {syms.begin(), syms.end()};
}

std::vector<std::uint64_t> self_index::run_locate(std::span<const std::uint8_t> p, std::uint64_t limit,
                                                  bool all_splits, locate_trace* trace) const {
    const index_data& d = *d_;
    const grammar_tree& t = d.tree;
    const rlcfg& g = d.grammar;
    std::vector<std::uint64_t> out;
    const std::uint64_t m = p.size();
    if (m == 0 || limit == 0) return out;
    for (std::uint8_t b : p)
        if (!g.alphabet[b]) {
            if (trace) {
                trace->splits.abandoned = true;
                trace->splits.reason = "byte absent from the text";
            }
            return out;
        }

    std::vector<std::uint64_t> qs;
    if (m == 1) {
        qs = {1};
    } else {
        split_set ss = parse_pattern(g, p);
        if (ss.abandoned) {
            if (trace) trace->splits = std::move(ss);
            return out;
        }
        if (all_splits) {
            for (std::uint64_t q = 1; q < m; ++q) qs.push_back(q);
        } else {
            qs = ss.splits;
        }
        if (trace) trace->splits = std::move(ss);
    }
    if (trace) trace->searched = qs;

    const std::vector<symbol_t> fwd(p.begin(), p.end());
    const std::vector<symbol_t> rev(p.rbegin(), p.rend());
    const auto fwd_sig = prefix_signatures(d.ctx, fwd);
    const auto rev_sig = prefix_signatures(d.ctx, rev);

    struct work {
        node_t w;
        std::uint64_t off;
    };
    std::vector<work> stack;
    std::uint64_t steps = 0;
    bool full = false;

    auto drain = [&] {
        while (!stack.empty() && !full) {
            const work it = stack.back();
            stack.pop_back();
            ++steps;
            if (it.w == t.root()) {
                out.push_back(it.off);
                if (out.size() >= limit) full = true;
                continue;
            }
            node_t nx = t.next[it.w];
            if (nx != no_node && t.pseudo[nx]) {
                const std::uint64_t s = g.rule_of(t.label[t.parent[it.w]]).exponent;
                const std::uint64_t L = g.exp_len[t.label[it.w]];
                for (std::uint64_t i = 0; i < s; ++i) stack.push_back({t.anc[it.w], it.off + i * L + t.offs[it.w]});
                nx = t.next[nx];
            } else {
                stack.push_back({t.anc[it.w], it.off + t.offs[it.w]});
            }
            if (nx != no_node) stack.push_back({nx, it.off});
        }
    };

    range_stats rstats;
    for (std::uint64_t q : qs) {
        if (full) break;
        const query_string xq{rev, rev_sig, m - q, q};
        const auto [x1, x2] = prefix_range(d.access, d.grid.x, xq, &rstats);
        if (x1 == x2) continue;
        std::size_t y1 = 0, y2 = d.grid.y_loc.size();
        if (q < m) {
            const query_string yq{fwd, fwd_sig, q, m - q};
            std::tie(y1, y2) = prefix_range(d.access, d.grid.y_loc, yq, &rstats);
            if (y1 == y2) continue;
        }
        std::vector<grid_point> hits;
        d.grid.locate.report(x1, x2, y1, y2, [&](const grid_point& pt) { hits.push_back(pt); });
        for (const grid_point& pt : hits) {
            if (full) break;
            const node_t v = pt.locus;
            const std::uint64_t L = g.exp_len[t.label[v]];
            const std::size_t before = out.size();
            if (!pt.run) {
                stack.push_back({t.anc[v], L - q + t.offs[v]});
            } else {
                const std::uint64_t s = g.rule_of(t.label[pt.parent]).exponent;
                // for m = 1 the last copy's final symbol belongs to an enclosing boundary
                const std::uint64_t top = m == 1 ? s - 1 : s;
                for (std::uint64_t i = 1; i <= top && i * L - q + m <= s * L; ++i)
                    stack.push_back({t.anc[v], i * L - q + t.offs[v]});
            }
            drain();
            if (trace)
                for (std::size_t k = before; k < out.size(); ++k) trace->primaries.push_back({q, out[k]});
        }
    }
    if (trace) {
        trace->raw = out;
        trace->steps = steps;
        trace->ranges = rstats;
        std::sort(trace->primaries.begin(), trace->primaries.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> self_index::locate(std::span<const std::uint8_t> p) const {
    return run_locate(p, UINT64_MAX, false, nullptr);
}

std::vector<std::uint64_t> self_index::locate(std::string_view p) const { return locate(bytes_of(p)); }

std::vector<std::uint64_t> self_index::locate_limited(std::span<const std::uint8_t> p, std::uint64_t k) const {
    return run_locate(p, k, false, nullptr);
}

locate_trace self_index::locate_debug(std::span<const std::uint8_t> p, bool all_splits) const {
    locate_trace tr;
    run_locate(p, UINT64_MAX, all_splits, &tr);
    return tr;
}

std::pair<std::uint64_t, std::uint64_t> self_index::count_split(std::span<const std::uint8_t> p,
                                                                std::uint64_t q) const {
    const index_data& d = *d_;
    const std::uint64_t m = p.size();
    const std::vector<symbol_t> fwd(p.begin(), p.end());
    const std::vector<symbol_t> rev(p.rbegin(), p.rend());
    const auto fwd_sig = prefix_signatures(d.ctx, fwd);
    const auto rev_sig = prefix_signatures(d.ctx, rev);

    std::uint64_t grid = 0, correction = 0;
    const query_string xq{rev, rev_sig, m - q, q};
    const auto [x1, x2] = prefix_range(d.access, d.grid.x, xq);
    if (x1 < x2) {
        const query_string yq{fwd, fwd_sig, q, m - q};
        const auto [y1, y2] = prefix_range(d.access, d.grid.y_cnt, yq);
        grid = d.grid.count.sum(x1, x2, y1, y2);
    }
    const std::uint64_t per = shortest_period(p);
    if (q <= per && m - q > 2 * per) {
        const auto it = d.periods.find(period_key_of(fwd_sig, q, per));
        if (it != d.periods.end()) {
            std::vector<symbol_t> body;
            d.access.extract(it->second.base, 0, per, body);
            if (std::equal(body.begin(), body.end(), fwd.begin() + static_cast<std::ptrdiff_t>(q)))
                correction = run_correction(it->second, m, q, per);
        }
    }
    return {grid, correction};
}

std::uint64_t self_index::count(std::span<const std::uint8_t> p) const {
    const index_data& d = *d_;
    const std::uint64_t m = p.size();
    if (m == 0) return 0;
    for (std::uint8_t b : p)
        if (!d.grammar.alphabet[b]) return 0;
    if (m == 1) return d.terminal_count[p[0]];
    const split_set ss = parse_pattern(d.grammar, p);
    if (ss.abandoned) return 0;
    std::uint64_t total = 0;
    for (std::uint64_t q : ss.splits) {
        const auto [grid, corr] = count_split(p, q);
        total += grid + corr;
    }
    return total;
}

std::uint64_t self_index::count(std::string_view p) const { return count(bytes_of(p)); }

std::vector<std::uint64_t> naive_locate(std::string_view text, std::string_view p) {
    std::vector<std::uint64_t> out;
    if (p.empty()) return out;
    for (auto pos = text.find(p); pos != std::string_view::npos; pos = text.find(p, pos + 1))
        out.push_back(pos + 1);
    return out;
}

}  // namespace rlci
