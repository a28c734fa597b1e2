#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace procfuzz {

using u8 = uint8_t;
using u16 = uint16_t;
using u32 = uint32_t;
using u64 = uint64_t;
using i32 = int32_t;
using i64 = int64_t;

constexpr u64 bit(unsigned n) { return u64{1} << n; }

constexpr u64 get_field(u64 v, u64 mask) {
    return (v & mask) / (mask & ~(mask << 1));
}

constexpr u64 set_field(u64 v, u64 mask, u64 field) {
    u64 lsb = mask & ~(mask << 1);
    return (v & ~mask) | ((field * lsb) & mask);
}

constexpr i64 sign_extend(u64 v, unsigned bits) {
    return static_cast<i64>(v << (64 - bits)) >> (64 - bits);
}

/// Lowercase hex, zero-padded to `digits`.
inline std::string to_hex(u64 v, unsigned digits) {
    static const char *tab = "0123456789abcdef";
    std::string s(digits, '0');
    for (unsigned i = 0; i < digits && v; ++i, v >>= 4)
        s[digits - 1 - i] = tab[v & 0xf];
    return s;
}

// Deterministic RNG. std::uniform_int_distribution is implementation-defined,
// so campaigns roll their own draws to keep reports reproducible across
// toolchains.
class Rng {
public:
    explicit Rng(u64 seed) : state_(seed) {}

    u64 next() {
        u64 z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n). n must be nonzero.
    u64 below(u64 n) {
        return static_cast<u64>((static_cast<__uint128_t>(next()) * n) >> 64);
    }

    /// True with probability num/den.
    bool chance(u64 num, u64 den) { return below(den) < num; }

    /// Derive an independent stream (e.g. one per trial).
    Rng fork(u64 salt) {
        Rng r(state_ ^ (salt * 0xd6e8feb86659fd93ull));
        r.next();
        return r;
    }

private:
    u64 state_;
};

struct ParseError : std::runtime_error {
    ParseError(size_t line, size_t col, const std::string &msg)
        : std::runtime_error("parse error at line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ": " + msg),
          line(line), col(col) {}
    size_t line;
    size_t col;
};

struct AssembleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SelectionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProgramLoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyCorpus : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace procfuzz
