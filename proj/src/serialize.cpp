#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "rlci/index.hpp"

namespace rlci {

namespace {

constexpr char magic[4] = {'R', 'L', 'C', 'I'};
constexpr std::uint32_t format_version = 1;

class writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    template <typename T>
    void vec32(const std::vector<T>& v) {
        u64(v.size());
        for (auto x : v) u32(static_cast<std::uint32_t>(x));
    }
    void vec64(const std::vector<std::uint64_t>& v) {
        u64(v.size());
        for (auto x : v) u64(x);
    }
    void section(std::ostream& os, const char tag[4]) {
        os.write(tag, 4);
        std::string len(8, '\0');
        for (int i = 0; i < 8; ++i) len[i] = static_cast<char>(static_cast<std::uint64_t>(buf_.size()) >> (8 * i));
        os.write(len.data(), 8);
        os.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        buf_.clear();
    }

private:
    std::string buf_;
};

class reader {
public:
    reader(std::string data, std::string name) : data_(std::move(data)), name_(std::move(name)) {}
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data_[pos_++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data_[pos_++])) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::uint64_t count(std::uint64_t elem_size) {
        const std::uint64_t n = u64();
        if (elem_size && n > (data_.size() - pos_) / elem_size) fail("element count exceeds section");
        return n;
    }
    template <typename T>
    std::vector<T> vec32() {
        std::vector<T> v(count(4));
        for (auto& x : v) x = static_cast<T>(u32());
        return v;
    }
    std::vector<std::uint64_t> vec64() {
        std::vector<std::uint64_t> v(count(8));
        for (auto& x : v) x = u64();
        return v;
    }
    void done() const {
        if (pos_ != data_.size()) fail("trailing bytes");
    }
    [[noreturn]] void fail(const std::string& what) const { throw format_error(name_, what); }

private:
    void need(std::size_t k) const {
        if (data_.size() - pos_ < k) fail("truncated");
    }
    std::string data_;
    std::string name_;
    std::size_t pos_ = 0;
};

reader read_section(std::istream& is, const char tag[4]) {
    const std::string name(tag, 4);
    char got[4];
    if (!is.read(got, 4)) throw format_error(name, "missing section");
    if (std::memcmp(got, tag, 4) != 0) throw format_error(name, "unexpected section tag");
    char lenb[8];
    if (!is.read(lenb, 8)) throw format_error(name, "truncated length");
    std::uint64_t len = 0;
    for (int i = 0; i < 8; ++i) len |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(lenb[i])) << (8 * i);
    if (len > (std::uint64_t{1} << 40)) throw format_error(name, "implausible length");
    std::string data(len, '\0');
    if (len && !is.read(data.data(), static_cast<std::streamsize>(len))) throw format_error(name, "truncated payload");
    return reader(std::move(data), name);
}

void write_members(writer& w, const ranked_strings& rs) {
    w.u64(rs.members.size());
    for (const member& x : rs.members) {
        w.u32(x.sym);
        w.u64(x.off);
        w.u64(x.len);
        w.u8(x.reversed ? 1 : 0);
    }
}

ranked_strings read_members(reader& r, const rlcfg& g) {
    ranked_strings rs;
    rs.members.resize(r.count(21));
    for (member& x : rs.members) {
        x.sym = r.u32();
        x.off = r.u64();
        x.len = r.u64();
        x.reversed = r.u8() != 0;
        if (x.sym >= g.symbol_count() || x.off + x.len > g.exp_len[x.sym]) r.fail("member outside its expansion");
    }
    return rs;
}

void write_points(writer& w, const point_grid& pg) {
    w.u64(pg.points.size());
    for (const grid_point& p : pg.points) {
        w.u32(p.x);
        w.u32(p.y);
        w.u32(p.locus);
        w.u32(p.parent);
        w.u8(p.run ? 1 : 0);
        w.u64(p.weight);
    }
}

point_grid read_points(reader& r, std::size_t nx, std::size_t ny, node_t nodes) {
    point_grid pg;
    pg.points.resize(r.count(25));
    for (grid_point& p : pg.points) {
        p.x = r.u32();
        p.y = r.u32();
        p.locus = r.u32();
        p.parent = r.u32();
        p.run = r.u8() != 0;
        p.weight = r.u64();
        if (p.x >= nx || p.y >= ny || p.locus >= nodes || p.parent >= nodes) r.fail("point out of range");
    }
    return pg;
}

}  // namespace

void self_index::save(std::ostream& os) const {
    const index_data& d = *d_;
    const rlcfg& g = d.grammar;
    os.write(magic, 4);
    {
        std::string v(4, '\0');
        for (int i = 0; i < 4; ++i) v[i] = static_cast<char>(format_version >> (8 * i));
        os.write(v.data(), 4);
    }
    writer w;

    w.u64(g.text_length);
    for (bool b : g.alphabet) w.u8(b ? 1 : 0);
    w.u64(d.ctx.c);
    w.u64(d.ctx.seed);
    w.u32(d.ctx.draws);
    w.u8(d.ctx.verified ? 1 : 0);
    w.f64(d.delta);
    w.section(os, "HEAD");

    w.u64(g.rules.size());
    for (std::size_t k = 0; k < g.rules.size(); ++k) {
        const rule& r = g.rules[k];
        w.u32(g.creation_round[k]);
        if (r.is_run()) {
            w.u8(1);
            w.u32(r.base);
            w.u64(r.exponent);
        } else {
            w.u8(0);
            w.vec32(r.children);
        }
    }
    w.u32(g.start);
    w.u64(g.rounds.size());
    for (const round_tables& t : g.rounds) {
        w.u32(t.pi.base());
        w.vec32(t.pi.dense_ranks());
        std::vector<std::pair<std::uint64_t, symbol_t>> runs(t.run_table.begin(), t.run_table.end());
        std::sort(runs.begin(), runs.end());
        w.u64(runs.size());
        for (const auto& [k, id] : runs) {
            w.u64(k);
            w.u32(id);
        }
        std::vector<std::pair<symbol_t, const std::u32string*>> blocks;
        for (const auto& [key, id] : t.block_table) blocks.emplace_back(id, &key);
        std::sort(blocks.begin(), blocks.end());
        w.u64(blocks.size());
        for (const auto& [id, key] : blocks) {
            w.u32(id);
            w.u64(key->size());
            for (char32_t c : *key) w.u32(static_cast<std::uint32_t>(c));
        }
        w.u64(t.input_length);
        w.u32(t.retries);
        w.u64(t.contribution);
        w.f64(t.delta);
        w.u8(t.within_budget ? 1 : 0);
    }
    w.section(os, "GRAM");

    w.vec32(d.tree.anc);
    w.vec64(d.tree.offs);
    w.vec32(d.tree.next);
    w.section(os, "TREE");

    write_members(w, d.grid.x);
    write_members(w, d.grid.y_loc);
    write_members(w, d.grid.y_cnt);
    w.section(os, "MEMB");

    write_points(w, d.grid.locate);
    w.section(os, "LGRD");
    write_points(w, d.grid.count);
    w.section(os, "CGRD");

    w.vec64(d.counts);
    w.section(os, "CNTS");

    std::vector<const std::pair<const period_key, run_period_entry>*> entries;
    for (const auto& e : d.periods) entries.push_back(&e);
    std::sort(entries.begin(), entries.end(), [](auto* a, auto* b) { return a->first < b->first; });
    w.u64(entries.size());
    for (const auto* e : entries) {
        w.u64(e->first.prefix);
        w.u64(e->first.suffix);
        w.u64(e->first.length);
        w.u32(e->second.base);
        w.vec64(e->second.exponents);
        w.vec64(e->second.c);
        w.vec64(e->second.c_prime);
    }
    w.section(os, "PERI");

    for (auto c : d.terminal_count) w.u64(c);
    w.section(os, "TERM");
    if (!os) throw io_error("failed to write index");
}

self_index self_index::load(std::istream& is) {
    char head[8];
    if (!is.read(head, 8)) throw format_error("magic", "file too short");
    if (std::memcmp(head, magic, 4) != 0) throw format_error("magic", "not an index file");
    std::uint32_t version = 0;
    for (int i = 0; i < 4; ++i) version |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(head[4 + i])) << (8 * i);
    if (version != format_version)
        throw format_error("magic", "unsupported format version " + std::to_string(version));

    auto d = std::make_unique<index_data>();
    rlcfg& g = d->grammar;
    {
        reader r = read_section(is, "HEAD");
        g.text_length = r.u64();
        for (bool& b : g.alphabet) b = r.u8() != 0;
        const std::uint64_t c = r.u64();
        if (c < 2 || c >= kr_modulus) r.fail("fingerprint base out of range");
        d->ctx = fingerprint_context::with_base(c);
        d->ctx.seed = r.u64();
        d->ctx.draws = r.u32();
        d->ctx.verified = r.u8() != 0;
        d->delta = r.f64();
        r.done();
    }
    {
        reader r = read_section(is, "GRAM");
        g.rules.resize(r.count(9));
        g.creation_round.resize(g.rules.size());
        for (std::size_t k = 0; k < g.rules.size(); ++k) {
            g.creation_round[k] = r.u32();
            const std::uint8_t kind = r.u8();
            if (kind == 1) {
                const symbol_t b = r.u32();
                g.rules[k] = rule::run(b, r.u64());
            } else if (kind == 0) {
                g.rules[k] = rule::block(r.vec32<symbol_t>());
            } else {
                r.fail("unknown rule kind");
            }
        }
        g.start = r.u32();
        const std::uint64_t nr = r.count(4);
        for (std::uint64_t i = 0; i < nr; ++i) {
            round_tables t;
            const symbol_t base = r.u32();
            t.pi = permutation(base, r.vec32<std::uint32_t>());
            const std::uint64_t runs = r.count(12);
            for (std::uint64_t k = 0; k < runs; ++k) {
                const std::uint64_t key = r.u64();
                t.run_table.emplace(key, r.u32());
            }
            const std::uint64_t blocks = r.count(12);
            for (std::uint64_t k = 0; k < blocks; ++k) {
                const symbol_t id = r.u32();
                std::u32string key(r.count(4), U'\0');
                for (auto& c : key) c = static_cast<char32_t>(r.u32());
                t.block_table.emplace(std::move(key), id);
            }
            t.input_length = r.u64();
            t.retries = r.u32();
            t.contribution = r.u64();
            t.delta = r.f64();
            t.within_budget = r.u8() != 0;
            g.rounds.push_back(std::move(t));
        }
        r.done();
        try {
            compute_lengths(g);
            if (g.length(g.start) != g.text_length) r.fail("start symbol length mismatch");
        } catch (const structure_error& e) {
            r.fail(e.what());
        }
    }
    try {
        d->tree = build_grammar_tree(g);
    } catch (const rlci_error& e) {
        throw format_error("TREE", e.what());
    }
    {
        reader r = read_section(is, "TREE");
        const auto anc = r.vec32<node_t>();
        const auto offs = r.vec64();
        const auto next = r.vec32<node_t>();
        r.done();
        if (anc != d->tree.anc || offs != d->tree.offs || next != d->tree.next)
            r.fail("tree fields disagree with the grammar");
    }
    {
        reader r = read_section(is, "MEMB");
        d->grid.x = read_members(r, g);
        d->grid.y_loc = read_members(r, g);
        d->grid.y_cnt = read_members(r, g);
        r.done();
    }
    {
        reader r = read_section(is, "LGRD");
        d->grid.locate = read_points(r, d->grid.x.size(), d->grid.y_loc.size(), d->tree.size());
        r.done();
    }
    {
        reader r = read_section(is, "CGRD");
        d->grid.count = read_points(r, d->grid.x.size(), d->grid.y_cnt.size(), d->tree.size());
        r.done();
    }
    {
        reader r = read_section(is, "CNTS");
        d->counts = r.vec64();
        if (d->counts.size() != d->tree.size()) r.fail("count map size mismatch");
        r.done();
    }
    {
        reader r = read_section(is, "PERI");
        const std::uint64_t n = r.count(28);
        for (std::uint64_t i = 0; i < n; ++i) {
            period_key k;
            k.prefix = r.u64();
            k.suffix = r.u64();
            k.length = r.u64();
            run_period_entry e;
            e.base = r.u32();
            e.exponents = r.vec64();
            e.c = r.vec64();
            e.c_prime = r.vec64();
            if (e.base >= g.symbol_count() || e.c.size() != e.exponents.size() ||
                e.c_prime.size() != e.exponents.size())
                r.fail("malformed period entry");
            d->periods.emplace(k, std::move(e));
        }
        r.done();
    }
    {
        reader r = read_section(is, "TERM");
        for (auto& c : d->terminal_count) c = r.u64();
        r.done();
    }
    return assemble(std::move(d));
}

}  // namespace rlci
