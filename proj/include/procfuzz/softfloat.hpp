#pragma once

#include "procfuzz/common.hpp"

namespace procfuzz::sf32 {

// Integer implementation of IEEE-754 binary32 add/sub/mul/div/sqrt with
// exact accrued-exception flags and all five RISC-V rounding modes.
// Architectural flag bits follow the fflags layout; results are canonical
// (NaN payloads are not propagated). Tininess is detected after rounding.

enum Round : unsigned { RNE = 0, RTZ = 1, RDN = 2, RUP = 3, RMM = 4 };

enum Flag : unsigned { NX = 0x01, UF = 0x02, OF = 0x04, DZ = 0x08, NV = 0x10 };

constexpr u32 kQuietNan = 0x7fc00000;

constexpr bool is_nan(u32 f) { return (f & 0x7f800000) == 0x7f800000 && (f & 0x007fffff); }
constexpr bool is_snan(u32 f) { return is_nan(f) && !(f & 0x00400000); }
constexpr bool is_inf(u32 f) { return (f & 0x7fffffff) == 0x7f800000; }
constexpr bool is_zero(u32 f) { return (f & 0x7fffffff) == 0; }

namespace detail {

constexpr bool sign_of(u32 f) { return f >> 31; }
constexpr int exp_of(u32 f) { return (f >> 23) & 0xff; }
constexpr u32 frac_of(u32 f) { return f & 0x007fffff; }

constexpr u32 pack(bool sign, int exp, u32 frac) {
    return (u32(sign) << 31) | (u32(exp) << 23) | frac;
}

/// Right shift that ORs every shifted-out bit into bit 0.
constexpr u64 shift_right_jam(u64 v, unsigned n) {
    if (n == 0) return v;
    if (n >= 64) return v != 0;
    return (v >> n) | ((v << (64 - n)) != 0);
}

/// Significand with the implicit bit, normalized so the leading 1 sits at
/// `pos`; subnormals are scaled up with the exponent adjusted accordingly.
struct Norm {
    int exp;  // biased exponent of the bit-`pos` weight
    u64 sig;
};

inline Norm normalize(u32 f, unsigned pos) {
    int exp = exp_of(f);
    u64 sig = frac_of(f);
    if (exp == 0) {
        // subnormal, nonzero by caller contract
        int lead = 63 - __builtin_clzll(sig);
        exp = 1 - (23 - lead);
        sig <<= (23 - lead);
    } else {
        sig |= 0x800000;
    }
    return {exp, sig << (pos - 23)};
}

constexpr unsigned kGuard = 7; // round bits below the 24-bit significand
constexpr u64 kLead = u64{1} << (23 + kGuard);     // bit 30
constexpr u64 kRoundMask = (u64{1} << kGuard) - 1; // 0x7f
constexpr u64 kHalf = u64{1} << (kGuard - 1);      // 0x40

inline u64 round_increment(Round rm, bool sign, u64 sig) {
    u64 r = sig & kRoundMask;
    switch (rm) {
    case RNE: return (r > kHalf || (r == kHalf && (sig & (kHalf << 1)))) ? kHalf << 1 : 0;
    case RTZ: return 0;
    case RDN: return (sign && r) ? kHalf << 1 : 0;
    case RUP: return (!sign && r) ? kHalf << 1 : 0;
    case RMM: return (r >= kHalf) ? kHalf << 1 : 0;
    }
    return 0;
}

/// Round and pack a normalized (leading bit at kLead) intermediate.
/// exp is the biased exponent of the kLead weight.
inline u32 round_pack(bool sign, int exp, u64 sig, Round rm, unsigned &flags) {
    if (exp >= 255 || (exp == 254 && sig + round_increment(rm, sign, sig) >= (kLead << 1))) {
        flags |= OF | NX;
        bool to_inf = (rm == RNE || rm == RMM || (rm == RUP && !sign) || (rm == RDN && sign));
        return to_inf ? pack(sign, 255, 0) : pack(sign, 254, 0x7fffff);
    }
    if (exp <= 0) {
        // Tiny after rounding unless the unbounded-range rounding would carry
        // back up to the smallest normal.
        bool tiny = exp < 0 || sig + round_increment(rm, sign, sig) < (kLead << 1);
        sig = shift_right_jam(sig, unsigned(1 - exp));
        exp = 0;
        u64 r = sig & kRoundMask;
        sig = (sig + round_increment(rm, sign, sig)) >> kGuard;
        if (r) {
            flags |= NX;
            if (tiny) flags |= UF;
        }
        return pack(sign, 0, u32(sig)); // sig == 0x800000 packs as FLT_MIN
    }
    u64 r = sig & kRoundMask;
    sig = (sig + round_increment(rm, sign, sig)) >> kGuard;
    if (sig & (u64{1} << 24)) {
        sig >>= 1;
        ++exp;
        if (exp >= 255) {
            flags |= OF | NX;
            bool to_inf = (rm == RNE || rm == RMM || (rm == RUP && !sign) || (rm == RDN && sign));
            return to_inf ? pack(sign, 255, 0) : pack(sign, 254, 0x7fffff);
        }
    }
    if (r) flags |= NX;
    return pack(sign, exp, u32(sig & 0x7fffff));
}

inline u32 propagate_nan(u32 a, u32 b, unsigned &flags) {
    if (is_snan(a) || is_snan(b)) flags |= NV;
    return kQuietNan;
}

/// Magnitude add/sub of finite nonzero values; handles result sign and
/// exact-zero results.
inline u32 add_mags(u32 a, u32 b, Round rm, unsigned &flags) {
    Norm na = normalize(a, 23 + kGuard);
    Norm nb = normalize(b, 23 + kGuard);
    bool sa = sign_of(a), sb = sign_of(b);
    if (na.exp < nb.exp || (na.exp == nb.exp && na.sig < nb.sig)) {
        std::swap(na, nb);
        std::swap(sa, sb);
    }
    nb.sig = shift_right_jam(nb.sig, unsigned(na.exp - nb.exp));
    if (sa == sb) {
        u64 sum = na.sig + nb.sig;
        if (sum & (kLead << 1)) {
            sum = shift_right_jam(sum, 1);
            ++na.exp;
        }
        return round_pack(sa, na.exp, sum, rm, flags);
    }
    u64 diff = na.sig - nb.sig;
    if (diff == 0) return pack(rm == RDN, 0, 0);
    int lead = 63 - __builtin_clzll(diff);
    int shift = (23 + int(kGuard)) - lead;
    if (shift > 0) {
        diff <<= shift;
        na.exp -= shift;
    }
    return round_pack(sa, na.exp, diff, rm, flags);
}

} // namespace detail

inline u32 add(u32 a, u32 b, Round rm, unsigned &flags) {
    using namespace detail;
    if (is_nan(a) || is_nan(b)) return propagate_nan(a, b, flags);
    if (is_inf(a) || is_inf(b)) {
        if (is_inf(a) && is_inf(b) && sign_of(a) != sign_of(b)) {
            flags |= NV;
            return kQuietNan;
        }
        return is_inf(a) ? a : b;
    }
    if (is_zero(a) && is_zero(b)) {
        if (sign_of(a) == sign_of(b)) return a;
        return pack(rm == RDN, 0, 0);
    }
    if (is_zero(a)) return b;
    if (is_zero(b)) return a;
    return add_mags(a, b, rm, flags);
}

inline u32 sub(u32 a, u32 b, Round rm, unsigned &flags) {
    return add(a, b ^ 0x80000000, rm, flags);
}

inline u32 mul(u32 a, u32 b, Round rm, unsigned &flags) {
    using namespace detail;
    if (is_nan(a) || is_nan(b)) return propagate_nan(a, b, flags);
    bool sign = sign_of(a) ^ sign_of(b);
    if (is_inf(a) || is_inf(b)) {
        if (is_zero(a) || is_zero(b)) {
            flags |= NV;
            return kQuietNan;
        }
        return pack(sign, 255, 0);
    }
    if (is_zero(a) || is_zero(b)) return pack(sign, 0, 0);
    Norm na = normalize(a, 23);
    Norm nb = normalize(b, 23);
    int exp = na.exp + nb.exp - 127;
    u64 prod = na.sig * nb.sig; // [2^46, 2^48)
    if (prod & (u64{1} << 47)) {
        prod = shift_right_jam(prod, 47 - (23 + kGuard));
        ++exp;
    } else {
        prod = shift_right_jam(prod, 46 - (23 + kGuard));
    }
    return round_pack(sign, exp, prod, rm, flags);
}

inline u32 div(u32 a, u32 b, Round rm, unsigned &flags) {
    using namespace detail;
    if (is_nan(a) || is_nan(b)) return propagate_nan(a, b, flags);
    bool sign = sign_of(a) ^ sign_of(b);
    if (is_inf(a)) {
        if (is_inf(b)) {
            flags |= NV;
            return kQuietNan;
        }
        return pack(sign, 255, 0);
    }
    if (is_inf(b)) return pack(sign, 0, 0);
    if (is_zero(b)) {
        if (is_zero(a)) {
            flags |= NV;
            return kQuietNan;
        }
        flags |= DZ;
        return pack(sign, 255, 0);
    }
    if (is_zero(a)) return pack(sign, 0, 0);
    Norm na = normalize(a, 23);
    Norm nb = normalize(b, 23);
    int exp = na.exp - nb.exp + 127;
    u64 num = na.sig;
    if (num < nb.sig) {
        num <<= 1;
        --exp;
    }
    // quotient in [2^30, 2^31); remainder feeds the sticky bit
    u64 shifted = num << (23 + kGuard);
    u64 q = shifted / nb.sig;
    if (shifted % nb.sig) q |= 1;
    return round_pack(sign, exp, q, rm, flags);
}

inline u32 sqrt(u32 a, Round rm, unsigned &flags) {
    using namespace detail;
    if (is_nan(a)) {
        if (is_snan(a)) flags |= NV;
        return kQuietNan;
    }
    if (is_zero(a)) return a; // sqrt(-0) = -0
    if (sign_of(a)) {
        flags |= NV;
        return kQuietNan;
    }
    if (is_inf(a)) return a;
    Norm na = normalize(a, 23);
    int e = na.exp - 127; // unbiased
    u64 m = na.sig;       // [2^23, 2^24)
    if (e & 1) {
        m <<= 1;
        --e;
    }
    // s = floor(sqrt(m << 37)) lands in [2^30, 2^31): 24 result bits + guard
    u64 x = m << 37;
    u64 s = 0;
    for (int bitpos = 31; bitpos >= 0; --bitpos) {
        u64 trial = s | (u64{1} << bitpos);
        if (trial * trial <= x) s = trial;
    }
    if (s * s != x) s |= 1;
    return round_pack(false, e / 2 + 127, s, rm, flags);
}

} // namespace procfuzz::sf32
