#include "rlci/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rlci/corpus.hpp"
#include "rlci/index.hpp"

namespace rlci::cli {

namespace {

constexpr const char* positions_note =
    "Positions are 1-based over the raw input; the sentinels added around the text are not counted.";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw io_error("failed reading '" + path + "'");
    return s;
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot create '" + path + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.close();
    if (!out) throw io_error("failed writing '" + path + "'");
}

self_index load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    return self_index::load(in);
}

std::span<const std::uint8_t> bytes(const std::string& s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

struct build_args {
    std::string input, output;
    std::uint64_t seed = 1;
    double budget_factor = 16.0;
    std::uint32_t max_retries = 32;
    bool stats = false;
};

struct query_args {
    std::string index;
    std::string pattern;
    std::string pattern_file;
    std::optional<std::uint64_t> limit;
    std::uint64_t from = 1;
    std::optional<std::uint64_t> len;
};

struct gen_args {
    std::string kind;
    std::uint64_t size = 0;
    std::uint64_t seed = 1;
    unsigned sigma = 4;
    unsigned copies = 8;
    unsigned mutations = 4;
    std::string output;
};

int cmd_build(const build_args& a, std::ostream& out) {
    const std::string text = read_file(a.input);
    if (text.empty()) throw usage_error("input '" + a.input + "' is empty");
    if (!(a.budget_factor > 0)) throw usage_error("--budget-factor must be positive");
    build_config cfg;
    cfg.seed = a.seed;
    cfg.budget_factor = a.budget_factor;
    cfg.max_retries = a.max_retries;
    const self_index idx = self_index::build(bytes(text), cfg);
    std::ostringstream buf;
    idx.save(buf);
    write_file(a.output, buf.str());
    if (a.stats) {
        out << format_stats(idx.stats());
        out << "build_seconds " << idx.data().build_seconds << '\n';
        out << "index_bytes " << buf.str().size() << '\n';
    }
    return exit_ok;
}

std::string pattern_of(const query_args& a) {
    if (!a.pattern.empty() && !a.pattern_file.empty())
        throw usage_error("give either a pattern or --pattern-file, not both");
    std::string p = a.pattern_file.empty() ? a.pattern : read_file(a.pattern_file);
    if (p.empty()) throw usage_error("the pattern is empty");
    return p;
}

int cmd_locate(const query_args& a, std::ostream& out) {
    const std::string p = pattern_of(a);
    const self_index idx = load_index(a.index);
    const auto pos = a.limit ? idx.locate_limited(bytes(p), *a.limit) : idx.locate(bytes(p));
    for (std::uint64_t x : pos) out << x << '\n';
    return exit_ok;
}

int cmd_count(const query_args& a, std::ostream& out) {
    const std::string p = pattern_of(a);
    const self_index idx = load_index(a.index);
    out << idx.count(bytes(p)) << '\n';
    return exit_ok;
}

int cmd_extract(const query_args& a, std::ostream& out) {
    const self_index idx = load_index(a.index);
    const std::uint64_t n = idx.text_length();
    if (a.from < 1 || a.from > n) throw usage_error("--from must lie in [1, " + std::to_string(n) + "]");
    const std::uint64_t len = a.len ? *a.len : n - a.from + 1;
    if (len > n - a.from + 1) throw usage_error("--len runs past the end of the text");
    const auto b = idx.extract(a.from, len);
    out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
    return exit_ok;
}

int cmd_stats(const query_args& a, std::ostream& out) {
    const self_index idx = load_index(a.index);
    out << format_stats(idx.stats());
    return exit_ok;
}

int cmd_gen(const gen_args& a, std::ostream& out) {
    std::string text;
    if (a.kind == "random") text = random_text(a.size, a.sigma, a.seed);
    else if (a.kind == "fibonacci") text = fibonacci_word(a.size);
    else text = copy_edit(a.size, a.copies, a.mutations, a.sigma, a.seed);
    if (a.output.empty()) out.write(text.data(), static_cast<std::streamsize>(text.size()));
    else write_file(a.output, text);
    return exit_ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Grammar-compressed self-index: build an index over a file, then locate, count and extract.",
                 "rlci"};
    app.footer(positions_note);
    app.require_subcommand(1);

    build_args ba;
    auto* build = app.add_subcommand("build", "Build an index file from an input file");
    build->add_option("input", ba.input, "Input text file")->required();
    build->add_option("output", ba.output, "Index file to write")->required();
    build->add_option("--seed", ba.seed, "Random seed")->capture_default_str();
    build->add_option("--budget-factor", ba.budget_factor, "Per-round budget in units of delta")
        ->capture_default_str();
    build->add_option("--max-retries", ba.max_retries, "Permutation redraws per round")->capture_default_str();
    build->add_flag("--stats", ba.stats, "Print grammar statistics");

    query_args qa;
    auto* query = app.add_subcommand("query", "Query an index file");
    query->add_option("index", qa.index, "Index file")->required();
    query->require_subcommand(1);
    auto* locate = query->add_subcommand("locate", "Print the sorted positions of a pattern, one per line");
    auto* count = query->add_subcommand("count", "Print the number of occurrences of a pattern");
    for (auto* sub : {locate, count}) {
        sub->add_option("pattern", qa.pattern, "Pattern bytes as given");
        sub->add_option("--pattern-file", qa.pattern_file, "Read the pattern from a file, byte for byte");
    }
    locate->add_option("--limit", qa.limit, "Report at most this many positions");
    auto* extract = query->add_subcommand("extract", "Print raw text bytes");
    extract->add_option("--from", qa.from, "First position, 1-based")->capture_default_str();
    extract->add_option("--len", qa.len, "Number of bytes (default: to the end)");
    auto* stats = query->add_subcommand("stats", "Print grammar statistics");
    for (auto* sub : {locate, count, extract, stats}) sub->footer(positions_note);

    gen_args ga;
    auto* gen = app.add_subcommand("gen", "Write a deterministic test corpus");
    gen->add_option("kind", ga.kind, "random, fibonacci or copy-edit")
        ->required()
        ->check(CLI::IsMember({"random", "fibonacci", "copy-edit"}));
    gen->add_option("--size", ga.size, "Length in bytes")->required();
    gen->add_option("--seed", ga.seed, "Random seed")->capture_default_str();
    gen->add_option("--sigma", ga.sigma, "Alphabet size")->capture_default_str();
    gen->add_option("--copies", ga.copies, "copy-edit: number of copies")->capture_default_str();
    gen->add_option("--mutations", ga.mutations, "copy-edit: point mutations per copy")->capture_default_str();
    gen->add_option("-o,--output", ga.output, "Output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*build) return cmd_build(ba, out);
        if (*gen) return cmd_gen(ga, out);
        if (*locate) return cmd_locate(qa, out);
        if (*count) return cmd_count(qa, out);
        if (*extract) return cmd_extract(qa, out);
        if (*stats) return cmd_stats(qa, out);
    } catch (const format_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_format;
    } catch (const io_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const rlci_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace rlci::cli
