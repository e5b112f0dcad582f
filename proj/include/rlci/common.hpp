#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace rlci {

/// Grammar symbol id. Bytes map to 0..255, the sentinels are out-of-band and
/// nonterminals start right after them.
using symbol_t = std::uint32_t;

inline constexpr symbol_t hash_symbol = 256;    // '#', leftmost sentinel
inline constexpr symbol_t dollar_symbol = 257;  // '$', rightmost sentinel
inline constexpr symbol_t first_nonterminal = 258;
inline constexpr symbol_t no_symbol = std::numeric_limits<symbol_t>::max();

inline constexpr bool is_terminal(symbol_t s) { return s < first_nonterminal; }

class rlci_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A symbol was not covered by the permutation or alphabet it was looked up in.
class alphabet_error : public rlci_error {
public:
    using rlci_error::rlci_error;
};

/// Malformed grammar or grammar tree (missing rule, cycle, bad arity).
class structure_error : public rlci_error {
public:
    using rlci_error::rlci_error;
};

class bounds_error : public rlci_error {
public:
    using rlci_error::rlci_error;
};

/// Raised by the index reader; carries the name of the offending section.
class format_error : public rlci_error {
public:
    format_error(const std::string& section, const std::string& what)
        : rlci_error("index format error in section '" + section + "': " + what), section_(section) {}
    const std::string& section() const noexcept { return section_; }

private:
    std::string section_;
};

class usage_error : public rlci_error {
public:
    using rlci_error::rlci_error;
};

class io_error : public rlci_error {
public:
    using rlci_error::rlci_error;
};

}  // namespace rlci
