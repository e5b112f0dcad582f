#pragma once

// The self-index: grammar, grammar tree, grids and counting tables, with
// locate, count and extract queries.
//
// Positions returned by queries are 1-based over the raw text.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "rlci/count.hpp"
#include "rlci/grammar.hpp"
#include "rlci/grid.hpp"
#include "rlci/patparse.hpp"

namespace rlci {

struct index_data {
    rlcfg grammar;
    grammar_tree tree;
    fingerprint_context ctx;
    grammar_access access;
    std::vector<std::uint64_t> counts;
    grids grid;
    run_period_table periods;
    std::array<std::uint64_t, 256> terminal_count{};
    double delta = 0;
    double build_seconds = 0;
};

/// One primary occurrence: the split it was found with and its position.
struct primary_hit {
    std::uint64_t q;
    std::uint64_t position;
    friend bool operator==(const primary_hit&, const primary_hit&) = default;
    friend auto operator<=>(const primary_hit&, const primary_hit&) = default;
};

struct locate_trace {
    split_set splits;
    std::vector<std::uint64_t> searched;    // splits actually searched
    std::vector<std::uint64_t> raw;         // positions in emission order
    std::vector<primary_hit> primaries;     // sorted
    std::uint64_t steps = 0;                // work items processed
    range_stats ranges;
};

class self_index {
public:
    self_index();
    ~self_index();
    self_index(self_index&&) noexcept;
    self_index& operator=(self_index&&) noexcept;

    static self_index build(std::span<const std::uint8_t> text, const build_config& config = {});
    static self_index build(std::string_view text, const build_config& config = {});

    std::vector<std::uint64_t> locate(std::span<const std::uint8_t> p) const;
    std::vector<std::uint64_t> locate(std::string_view p) const;
    /// At most k positions, traversal stopped early.
    std::vector<std::uint64_t> locate_limited(std::span<const std::uint8_t> p, std::uint64_t k) const;
    /// Full trace; with all_splits every q in [1, m-1] is searched.
    locate_trace locate_debug(std::span<const std::uint8_t> p, bool all_splits) const;

    std::uint64_t count(std::span<const std::uint8_t> p) const;
    std::uint64_t count(std::string_view p) const;
    /// Count-grid contribution and run correction of one split.
    std::pair<std::uint64_t, std::uint64_t> count_split(std::span<const std::uint8_t> p, std::uint64_t q) const;

    /// Raw text bytes [from, from+len), 1-based.
    std::vector<std::uint8_t> extract(std::uint64_t from, std::uint64_t len) const;

    std::uint64_t text_length() const;
    grammar_stats stats() const;
    const index_data& data() const { return *d_; }

    void save(std::ostream& os) const;
    static self_index load(std::istream& is);

    /// Rebuilds the derived structures (access tables, wavelet matrices)
    /// after the stored parts are filled in.
    static self_index assemble(std::unique_ptr<index_data> d);

private:
    std::vector<std::uint64_t> run_locate(std::span<const std::uint8_t> p, std::uint64_t limit, bool all_splits,
                                          locate_trace* trace) const;
    std::unique_ptr<index_data> d_;
};

/// Occurrences of p in text, 1-based, by direct scanning.
std::vector<std::uint64_t> naive_locate(std::string_view text, std::string_view p);

}  // namespace rlci
