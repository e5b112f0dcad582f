#include "rlci/grid.hpp"

#include <algorithm>
#include <numeric>

namespace rlci {

symbol_t member_char(const grammar_access& acc, const member& x, std::uint64_t i) {
    if (i >= x.len) throw bounds_error("member index out of range");
    return x.reversed ? acc.char_at(x.sym, acc.length(x.sym) - 1 - i) : acc.char_at(x.sym, x.off + i);
}

signature member_prefix_sig(const grammar_access& acc, const member& x, std::uint64_t l) {
    if (l > x.len) throw bounds_error("member prefix longer than the member");
    return x.reversed ? acc.reversed_suffix_sig(x.sym, l) : acc.substring_sig(x.sym, x.off, l);
}

symbol_cursor member_cursor(const grammar_access& acc, const member& x) {
    return x.reversed ? symbol_cursor(acc, x.sym, 0, true) : symbol_cursor(acc, x.sym, x.off, false);
}

std::vector<symbol_t> member_string(const grammar_access& acc, const member& x) {
    std::vector<symbol_t> out;
    if (x.reversed) acc.extract_reversed_suffix(x.sym, x.len, out);
    else acc.extract(x.sym, x.off, x.len, out);
    return out;
}

std::vector<signature> prefix_signatures(const fingerprint_context& ctx, std::span<const symbol_t> s) {
    std::vector<signature> out(s.size() + 1);
    for (std::size_t i = 0; i < s.size(); ++i) out[i + 1] = sig_concat(out[i], ctx.of_symbol(s[i]));
    return out;
}

member_sorter::member_sorter(std::span<const symbol_t> text, const rlcfg& g, const grammar_tree& t)
    : g_(&g), t_(&t), n_(text.size()) {
    std::vector<std::uint32_t> u;
    u.reserve(2 * text.size() + 1);
    u.insert(u.end(), text.begin(), text.end());
    u.push_back(first_nonterminal);
    u.insert(u.end(), text.rbegin(), text.rend());
    lce_ = lce_index(u, first_nonterminal + 1);
    term_pos_.assign(first_nonterminal, 0);
    for (std::size_t i = text.size(); i-- > 0;) term_pos_[text[i]] = i;
}

std::uint64_t member_sorter::position(const member& x) const {
    const std::uint64_t start = is_terminal(x.sym) ? term_pos_[x.sym] : t_->start[t_->internal_of[x.sym]];
    if (!x.reversed) return start + x.off;
    const std::uint64_t end = start + g_->exp_len[x.sym] - 1;
    return 2 * n_ - end;
}

std::vector<std::uint32_t> member_sorter::sort(std::vector<member>& members) const {
    const std::size_t k = members.size();
    std::vector<std::uint64_t> pos(k);
    for (std::size_t i = 0; i < k; ++i) pos[i] = position(members[i]);
    std::vector<std::uint32_t> order(k);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const member& ma = members[a];
        const member& mb = members[b];
        const std::uint64_t lim = std::min(ma.len, mb.len);
        const std::uint64_t l = std::min<std::uint64_t>(lim, lce_.lce(pos[a], pos[b]));
        if (l < lim) return lce_.rank(pos[a]) < lce_.rank(pos[b]);
        if (ma.len != mb.len) return ma.len < mb.len;
        return a < b;
    });
    std::vector<member> sorted(k);
    for (std::size_t i = 0; i < k; ++i) sorted[i] = members[order[i]];
    members.swap(sorted);
    return order;
}

namespace {

constexpr std::uint64_t stream_head = 16;

int compare_fast(const grammar_access& acc, const member& x, const query_string& q) {
    const std::uint64_t lim = std::min(x.len, q.len);
    symbol_cursor cur = member_cursor(acc, x);
    std::uint64_t i = 0;
    for (; i < lim && i < stream_head; ++i) {
        const symbol_t c = cur.get();
        const symbol_t d = q.at(i);
        if (c != d) return c < d ? -1 : 1;
        cur.advance();
    }
    if (i < lim) {
        std::uint64_t lo = i, hi = lim;
        while (lo < hi) {
            const std::uint64_t mid = lo + (hi - lo + 1) / 2;
            if (member_prefix_sig(acc, x, mid) == q.sig(mid)) lo = mid;
            else hi = mid - 1;
        }
        if (lo < lim) {
            const symbol_t c = member_char(acc, x, lo);
            const symbol_t d = q.at(lo);
            if (c != d) return c < d ? -1 : 1;
            // signature search misled us; settle it by streaming
            return compare_streaming(acc, x, q);
        }
    }
    return x.len >= q.len ? 0 : -1;
}

template <typename Cmp>
std::pair<std::size_t, std::size_t> search(const ranked_strings& rs, Cmp&& cmp) {
    std::size_t lo = 0, hi = rs.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (cmp(rs.members[mid]) < 0) lo = mid + 1;
        else hi = mid;
    }
    const std::size_t lower = lo;
    hi = rs.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (cmp(rs.members[mid]) <= 0) lo = mid + 1;
        else hi = mid;
    }
    return {lower, lo};
}

}  // namespace

int compare_streaming(const grammar_access& acc, const member& x, const query_string& q) {
    const std::uint64_t lim = std::min(x.len, q.len);
    symbol_cursor cur = member_cursor(acc, x);
    for (std::uint64_t i = 0; i < lim; ++i) {
        const symbol_t c = cur.get();
        const symbol_t d = q.at(i);
        if (c != d) return c < d ? -1 : 1;
        cur.advance();
    }
    return x.len >= q.len ? 0 : -1;
}

std::pair<std::size_t, std::size_t> prefix_range_streaming(const grammar_access& acc,
                                                           const ranked_strings& rs,
                                                           const query_string& q) {
    return search(rs, [&](const member& x) { return compare_streaming(acc, x, q); });
}

std::pair<std::size_t, std::size_t> prefix_range(const grammar_access& acc, const ranked_strings& rs,
                                                 const query_string& q, range_stats* stats) {
    if (q.len == 0) return {0, rs.size()};
    const auto [lo, hi] = search(rs, [&](const member& x) { return compare_fast(acc, x, q); });
    const std::size_t n = rs.size();
    auto cmp = [&](std::size_t i) { return compare_streaming(acc, rs.members[i], q); };
    bool ok = true;
    if (lo < hi) ok = cmp(lo) == 0 && (hi - 1 == lo || cmp(hi - 1) == 0);
    if (ok && lo > 0) ok = cmp(lo - 1) < 0;
    if (ok && hi < n) ok = cmp(hi) > 0;
    if (ok) return {lo, hi};
    if (stats) ++stats->fallbacks;
    return prefix_range_streaming(acc, rs, q);
}

void point_grid::index(bool weighted) {
    std::stable_sort(points.begin(), points.end(), [](const grid_point& a, const grid_point& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    xs.resize(points.size());
    std::vector<std::uint32_t> ys(points.size());
    std::vector<std::uint64_t> ws;
    if (weighted) ws.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        xs[i] = points[i].x;
        ys[i] = points[i].y;
        if (weighted) ws[i] = points[i].weight;
    }
    wm = wavelet_matrix(ys, ws);
}

std::pair<std::size_t, std::size_t> point_grid::x_span(std::size_t x1, std::size_t x2) const {
    const auto a = std::lower_bound(xs.begin(), xs.end(), x1) - xs.begin();
    const auto b = std::lower_bound(xs.begin(), xs.end(), x2) - xs.begin();
    return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

std::uint64_t point_grid::sum(std::size_t x1, std::size_t x2, std::size_t y1, std::size_t y2) const {
    if (x1 >= x2 || y1 >= y2) return 0;
    const auto [a, b] = x_span(x1, x2);
    return wm.sum(a, b, static_cast<std::uint32_t>(y1), static_cast<std::uint32_t>(y2 - 1));
}

grids build_grids(const rlcfg& g, const grammar_tree& t, std::span<const symbol_t> text,
                  const std::vector<std::uint64_t>& weights) {
    grids out;
    std::vector<member> xm, yl, yc;
    std::vector<grid_point> lp, cp;
    std::vector<std::uint32_t> cp_x;  // index into xm for each count point

    for (node_t u = 0; u < t.size(); ++u) {
        if (t.is_leaf(u)) continue;
        const symbol_t a = t.label[u];
        const rule& rr = g.rule_of(a);
        const auto kids = t.children_of(u);
        const std::uint64_t w = weights[u];
        if (rr.is_run()) {
            const node_t v = kids[0];
            const std::uint64_t L = g.exp_len[rr.base];
            const auto xi = static_cast<std::uint32_t>(xm.size());
            xm.push_back({rr.base, 0, L, true});
            yl.push_back({a, L, (rr.exponent - 1) * L, false});
            lp.push_back({0, 0, v, u, true, w});
            yc.push_back({a, L, L, false});
            cp.push_back({0, 0, v, u, true, w});
            cp_x.push_back(xi);
            if (rr.exponent >= 3) {
                yc.push_back({a, L, 2 * L, false});
                cp.push_back({0, 0, v, u, true, (rr.exponent - 2) * w});
                cp_x.push_back(xi);
            }
            continue;
        }
        std::uint64_t off = 0;
        const std::uint64_t len = g.exp_len[a];
        for (std::size_t i = 0; i + 1 < kids.size(); ++i) {
            const node_t v = kids[i];
            const symbol_t c = t.label[v];
            off += g.exp_len[c];
            const auto xi = static_cast<std::uint32_t>(xm.size());
            xm.push_back({c, 0, g.exp_len[c], true});
            yl.push_back({a, off, len - off, false});
            lp.push_back({0, 0, v, u, false, w});
            yc.push_back({a, off, len - off, false});
            cp.push_back({0, 0, v, u, false, w});
            cp_x.push_back(xi);
        }
    }

    const member_sorter sorter(text, g, t);
    auto ranks_of = [](const std::vector<std::uint32_t>& order) {
        std::vector<std::uint32_t> r(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) r[order[i]] = static_cast<std::uint32_t>(i);
        return r;
    };
    const auto xr = ranks_of(sorter.sort(xm));
    const auto ylr = ranks_of(sorter.sort(yl));
    const auto ycr = ranks_of(sorter.sort(yc));
    for (std::size_t i = 0; i < lp.size(); ++i) {
        lp[i].x = xr[i];
        lp[i].y = ylr[i];
    }
    for (std::size_t i = 0; i < cp.size(); ++i) {
        cp[i].x = xr[cp_x[i]];
        cp[i].y = ycr[i];
    }
    out.x.members = std::move(xm);
    out.y_loc.members = std::move(yl);
    out.y_cnt.members = std::move(yc);
    out.locate.points = std::move(lp);
    out.count.points = std::move(cp);
    out.locate.index(false);
    out.count.index(true);
    return out;
}

}  // namespace rlci
