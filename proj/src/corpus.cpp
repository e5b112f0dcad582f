#include "rlci/corpus.hpp"

#include <random>

#include "rlci/common.hpp"
#include "rlci/lcparse.hpp"

namespace rlci {

namespace {

char symbol_of(std::uint64_t k, unsigned sigma) {
    return sigma <= 26 ? static_cast<char>('a' + k) : static_cast<char>(k);
}

void check_sigma(unsigned sigma) {
    if (sigma < 1 || sigma > 256) throw usage_error("alphabet size must be in [1, 256]");
}

}  // namespace

std::string random_text(std::uint64_t n, unsigned sigma, std::uint64_t seed) {
    if (n == 0) throw usage_error("corpus size must be positive");
    check_sigma(sigma);
    std::mt19937_64 rng(seed);
    std::string s(n, '\0');
    for (char& c : s) c = symbol_of(uniform_below(rng, sigma), sigma);
    return s;
}

std::string fibonacci_word(std::uint64_t n) {
    if (n == 0) throw usage_error("corpus size must be positive");
    std::string prev = "a", cur = "ab";
    if (n == 1) return prev;
    while (cur.size() < n) {
        std::string next = cur + prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    cur.resize(n);
    return cur;
}

std::string copy_edit(std::uint64_t n, unsigned copies, unsigned mutations, unsigned sigma, std::uint64_t seed) {
    if (copies == 0) throw usage_error("number of copies must be positive");
    if (n < copies) throw usage_error("corpus size must be at least the number of copies");
    check_sigma(sigma);
    const std::string base = random_text(n / copies, sigma, seed);
    std::mt19937_64 rng(seed ^ 0x5bd1e995u);
    std::string out = base;
    for (unsigned k = 1; k < copies; ++k) {
        std::string copy = base;
        for (unsigned j = 0; j < mutations; ++j)
            copy[uniform_below(rng, copy.size())] = symbol_of(uniform_below(rng, sigma), sigma);
        out += copy;
    }
    return out;
}

}  // namespace rlci
