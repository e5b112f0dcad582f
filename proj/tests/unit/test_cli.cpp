#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "rlci/cli.hpp"
#include "rlci/corpus.hpp"
#include "rlci/index.hpp"
#include "support/figure.hpp"
#include "support/oracles.hpp"

using namespace rlci;
using namespace rlci::testing;
namespace fs = std::filesystem;

namespace {

struct result {
    int code;
    std::string out, err;
};

result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "rlci");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct scratch {
    fs::path dir;
    scratch() {
        std::random_device rd;
        dir = fs::temp_directory_path() / ("rlci_test_" + std::to_string(rd()));
        fs::create_directories(dir);
    }
    ~scratch() { fs::remove_all(dir); }
    std::string file(const std::string& name, const std::string& content) const {
        const auto p = dir / name;
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string serialized(const self_index& idx) {
    std::ostringstream s;
    idx.save(s);
    return s.str();
}

std::vector<std::uint64_t> lines_of(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::istringstream in(s);
    for (std::uint64_t x; in >> x;) out.push_back(x);
    return out;
}

}  // namespace

TEST_CASE("Fibonacci word prefix") {
    CHECK(fibonacci_word(13) == "abaababaabaab");
    CHECK(fibonacci_word(1) == "a");
    CHECK(fibonacci_word(100).substr(0, 13) == "abaababaabaab");
}

TEST_CASE("generators reject empty corpora") {
    CHECK_THROWS_AS(random_text(0, 4, 1), usage_error);
    CHECK_THROWS_AS(fibonacci_word(0), usage_error);
    CHECK_THROWS_AS(copy_edit(10, 0, 1, 4, 1), usage_error);
}

TEST_CASE("copy-edit without mutations repeats the base") {
    const std::string t = copy_edit(400, 5, 0, 4, 3);
    REQUIRE(t.size() == 400);
    for (int k = 1; k < 5; ++k) CHECK(t.substr(k * 80, 80) == t.substr(0, 80));
}

TEST_CASE("generators are deterministic") {
    CHECK(random_text(500, 26, 8) == random_text(500, 26, 8));
    CHECK(random_text(500, 26, 8) != random_text(500, 26, 9));
    CHECK(copy_edit(900, 3, 5, 4, 2) == copy_edit(900, 3, 5, 4, 2));
    const std::string r = random_text(2000, 4, 1);
    for (char c : r) CHECK((c >= 'a' && c <= 'd'));
}

TEST_CASE("save and load answer every query identically") {
    std::mt19937_64 rng(51);
    for (const std::string& t : {copy_edit(3000, 6, 3, 4, 1), fibonacci_word(1000), random_text(800, 26, 3),
                                 std::string(figure_text)}) {
        const auto idx = self_index::build(t);
        const std::string bytes = serialized(idx);
        std::istringstream in(bytes);
        const auto back = self_index::load(in);
        CHECK(serialized(back) == bytes);
        for (int k = 0; k < 100; ++k) {
            const std::uint64_t m = 1 + uniform_below(rng, 20);
            const std::string p = t.substr(uniform_below(rng, t.size() - m + 1), m);
            CHECK(back.locate(p) == idx.locate(p));
            CHECK(back.count(p) == idx.count(p));
        }
        const auto e = back.extract(1, t.size());
        CHECK(std::string(e.begin(), e.end()) == t);
        CHECK(format_stats(back.stats()) == format_stats(idx.stats()));
    }
}

TEST_CASE("index bytes are deterministic for a fixed seed") {
    const std::string t = copy_edit(5000, 5, 10, 4, 7);
    build_config c;
    c.seed = 42;
    CHECK(serialized(self_index::build(t, c)) == serialized(self_index::build(t, c)));
}

TEST_CASE("corrupt index files name the failing section") {
    const std::string good = serialized(self_index::build(copy_edit(1000, 4, 2, 4, 5)));
    auto load_str = [](const std::string& s) {
        std::istringstream in(s);
        return self_index::load(in);
    };
    CHECK_THROWS_AS(load_str("nope"), format_error);
    std::string bad_version = good;
    bad_version[4] = 9;
    CHECK_THROWS_WITH_AS(load_str(bad_version), doctest::Contains("magic"), format_error);
    CHECK_THROWS_WITH_AS(load_str(good.substr(0, good.size() - 3)), doctest::Contains("TERM"), format_error);
    // flip one byte inside each section after its 12-byte header
    std::size_t pos = 8;
    std::set<std::string> seen;
    while (pos + 12 <= good.size()) {
        const std::string tag = good.substr(pos, 4);
        std::uint64_t len = 0;
        for (int i = 0; i < 8; ++i) len |= std::uint64_t(static_cast<unsigned char>(good[pos + 4 + i])) << (8 * i);
        std::string bad = good;
        bad.replace(pos, 4, "XXXX");
        try {
            load_str(bad);
            CHECK_MESSAGE(false, "load accepted a renamed section ", tag);
        } catch (const format_error& e) {
            CHECK(e.section() == tag);
        }
        seen.insert(tag);
        pos += 12 + len;
    }
    CHECK(pos == good.size());
    CHECK(seen == std::set<std::string>{"HEAD", "GRAM", "TREE", "MEMB", "LGRD", "CGRD", "CNTS", "PERI", "TERM"});
}

TEST_CASE("cli build and query round trip") {
    scratch s;
    const std::string text = copy_edit(4000, 8, 3, 4, 11);
    const std::string in = s.file("text", text), idx = s.path("text.rlci");
    const auto b = run_cli({"build", in, idx, "--seed", "5", "--stats"});
    REQUIRE(b.code == cli::exit_ok);
    CHECK(b.out.find("ratio") != std::string::npos);
    const auto e = run_cli({"query", idx, "extract", "--from", "1", "--len", std::to_string(text.size())});
    CHECK(e.code == cli::exit_ok);
    CHECK(e.out == text);
    const std::string p = text.substr(100, 6);
    const auto l = run_cli({"query", idx, "locate", p});
    CHECK(lines_of(l.out) == scan_occurrences(text, p));
    const auto c = run_cli({"query", idx, "count", "--pattern-file", s.file("pat", p)});
    CHECK(c.out == std::to_string(scan_occurrences(text, p).size()) + "\n");
    CHECK(run_cli({"query", idx, "count", "zzzz"}).out == "0\n");
    CHECK(run_cli({"query", idx, "stats"}).out.find("rounds") != std::string::npos);
}

TEST_CASE("cli locate with a limit") {
    scratch s;
    const std::string text = std::string("xyab") + "abababababababababab" + "yx";
    const std::string idx = s.path("i");
    REQUIRE(run_cli({"build", s.file("t", text), idx}).code == 0);
    const auto want = scan_occurrences(text, "ab");
    REQUIRE(want.size() == 11);
    const auto got = lines_of(run_cli({"query", idx, "locate", "ab", "--limit", "3"}).out);
    CHECK(got.size() == 3);
    for (std::uint64_t x : got) CHECK(std::find(want.begin(), want.end(), x) != want.end());
}

TEST_CASE("cli on a one-byte file and on the worked example") {
    scratch s;
    const std::string one = s.path("one");
    REQUIRE(run_cli({"build", s.file("o", "q"), one}).code == 0);
    CHECK(run_cli({"query", one, "locate", "q"}).out == "1\n");
    const std::string fig = s.path("fig");
    REQUIRE(run_cli({"build", s.file("f", "#" + std::string(figure_text) + "$"), fig}).code == 0);
    CHECK(lines_of(run_cli({"query", fig, "locate", "bdaabc"}).out) == std::vector<std::uint64_t>{12, 18, 34, 40});
}

TEST_CASE("cli builds are byte-identical for a fixed seed") {
    scratch s;
    const std::string in = s.file("t", random_text(3000, 4, 1));
    REQUIRE(run_cli({"build", in, s.path("a"), "--seed", "9"}).code == 0);
    REQUIRE(run_cli({"build", in, s.path("b"), "--seed", "9"}).code == 0);
    CHECK(slurp(s.path("a")) == slurp(s.path("b")));
}

TEST_CASE("cli exit codes") {
    scratch s;
    CHECK(run_cli({}).code == cli::exit_usage);
    CHECK(run_cli({"--help"}).code == cli::exit_ok);
    CHECK(run_cli({"frobnicate"}).code == cli::exit_usage);
    CHECK(run_cli({"build", s.file("empty", ""), s.path("x")}).code == cli::exit_usage);
    CHECK(run_cli({"build", s.path("missing"), s.path("x")}).code == cli::exit_io);
    CHECK(run_cli({"query", s.path("missing"), "count", "a"}).code == cli::exit_io);
    const auto bad = run_cli({"query", s.file("garbage", std::string("RLCI\x01\0\0\0junk", 12)), "count", "a"});
    CHECK(bad.code == cli::exit_format);
    CHECK(bad.err.find("section") != std::string::npos);
    const std::string idx = s.path("i");
    REQUIRE(run_cli({"build", s.file("t", "abcabc"), idx}).code == 0);
    CHECK(run_cli({"query", idx, "count"}).code == cli::exit_usage);
    CHECK(run_cli({"query", idx, "extract", "--from", "5", "--len", "9"}).code == cli::exit_usage);
    CHECK(run_cli({"gen", "random", "--size", "0"}).code == cli::exit_usage);
    CHECK(run_cli({"gen", "fibonacci", "--size", "13"}).out == "abaababaabaab");
    CHECK(run_cli({"gen", "copy-edit", "--size", "40", "--copies", "4", "--mutations", "0"}).out.size() == 40);
}
