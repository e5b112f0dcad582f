#pragma once

// Deterministic test corpora: uniform random text, Fibonacci words and
// copy-edit collections.

#include <cstdint>
#include <string>

namespace rlci {

/// n symbols drawn uniformly from the first sigma lowercase letters
/// (sigma <= 26) or bytes (sigma > 26). Throws usage_error for n = 0.
std::string random_text(std::uint64_t n, unsigned sigma, std::uint64_t seed);

/// Prefix of length n of the Fibonacci word over {a, b}: S1 = a, S2 = ab,
/// Sk = S(k-1) S(k-2).
std::string fibonacci_word(std::uint64_t n);

/// A random base of length n / copies followed by copies - 1 further copies
/// of it, each with `mutations` point substitutions.
std::string copy_edit(std::uint64_t n, unsigned copies, unsigned mutations, unsigned sigma, std::uint64_t seed);

}  // namespace rlci
