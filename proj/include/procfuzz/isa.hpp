#pragma once

#include "procfuzz/common.hpp"
#include "procfuzz/csr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace procfuzz {

// Modeled subset: RV64I base, M, Zicsr, ecall/ebreak/mret/sret/wfi, and
// single-precision fp arithmetic with fmv bit-pattern moves.
#define PROCFUZZ_MNEMONICS(X)                                                                  \
    X(Lui, "lui", Integer)                                                                     \
    X(Auipc, "auipc", Integer)                                                                 \
    X(Jal, "jal", Branch)                                                                      \
    X(Jalr, "jalr", Branch)                                                                    \
    X(Beq, "beq", Branch)                                                                      \
    X(Bne, "bne", Branch)                                                                      \
    X(Blt, "blt", Branch)                                                                      \
    X(Bge, "bge", Branch)                                                                      \
    X(Bltu, "bltu", Branch)                                                                    \
    X(Bgeu, "bgeu", Branch)                                                                    \
    X(Lb, "lb", LoadStore)                                                                     \
    X(Lh, "lh", LoadStore)                                                                     \
    X(Lw, "lw", LoadStore)                                                                     \
    X(Ld, "ld", LoadStore)                                                                     \
    X(Lbu, "lbu", LoadStore)                                                                   \
    X(Lhu, "lhu", LoadStore)                                                                   \
    X(Lwu, "lwu", LoadStore)                                                                   \
    X(Sb, "sb", LoadStore)                                                                     \
    X(Sh, "sh", LoadStore)                                                                     \
    X(Sw, "sw", LoadStore)                                                                     \
    X(Sd, "sd", LoadStore)                                                                     \
    X(Addi, "addi", Integer)                                                                   \
    X(Slti, "slti", Integer)                                                                   \
    X(Sltiu, "sltiu", Integer)                                                                 \
    X(Xori, "xori", Integer)                                                                   \
    X(Ori, "ori", Integer)                                                                     \
    X(Andi, "andi", Integer)                                                                   \
    X(Slli, "slli", Integer)                                                                   \
    X(Srli, "srli", Integer)                                                                   \
    X(Srai, "srai", Integer)                                                                   \
    X(Add, "add", Integer)                                                                     \
    X(Sub, "sub", Integer)                                                                     \
    X(Sll, "sll", Integer)                                                                     \
    X(Slt, "slt", Integer)                                                                     \
    X(Sltu, "sltu", Integer)                                                                   \
    X(Xor, "xor", Integer)                                                                     \
    X(Srl, "srl", Integer)                                                                     \
    X(Sra, "sra", Integer)                                                                     \
    X(Or, "or", Integer)                                                                       \
    X(And, "and", Integer)                                                                     \
    X(Addiw, "addiw", Integer)                                                                 \
    X(Slliw, "slliw", Integer)                                                                 \
    X(Srliw, "srliw", Integer)                                                                 \
    X(Sraiw, "sraiw", Integer)                                                                 \
    X(Addw, "addw", Integer)                                                                   \
    X(Subw, "subw", Integer)                                                                   \
    X(Sllw, "sllw", Integer)                                                                   \
    X(Srlw, "srlw", Integer)                                                                   \
    X(Sraw, "sraw", Integer)                                                                   \
    X(Fence, "fence", Integer)                                                                 \
    X(Mul, "mul", MulDiv)                                                                      \
    X(Mulh, "mulh", MulDiv)                                                                    \
    X(Mulhsu, "mulhsu", MulDiv)                                                                \
    X(Mulhu, "mulhu", MulDiv)                                                                  \
    X(Div, "div", MulDiv)                                                                      \
    X(Divu, "divu", MulDiv)                                                                    \
    X(Rem, "rem", MulDiv)                                                                      \
    X(Remu, "remu", MulDiv)                                                                    \
    X(Mulw, "mulw", MulDiv)                                                                    \
    X(Divw, "divw", MulDiv)                                                                    \
    X(Divuw, "divuw", MulDiv)                                                                  \
    X(Remw, "remw", MulDiv)                                                                    \
    X(Remuw, "remuw", MulDiv)                                                                  \
    X(Csrrw, "csrrw", Csr)                                                                     \
    X(Csrrs, "csrrs", Csr)                                                                     \
    X(Csrrc, "csrrc", Csr)                                                                     \
    X(Csrrwi, "csrrwi", Csr)                                                                   \
    X(Csrrsi, "csrrsi", Csr)                                                                   \
    X(Csrrci, "csrrci", Csr)                                                                   \
    X(Ecall, "ecall", System)                                                                  \
    X(Ebreak, "ebreak", System)                                                                \
    X(Mret, "mret", System)                                                                    \
    X(Sret, "sret", System)                                                                    \
    X(Wfi, "wfi", System)                                                                      \
    X(FaddS, "fadd.s", Fp)                                                                     \
    X(FsubS, "fsub.s", Fp)                                                                     \
    X(FmulS, "fmul.s", Fp)                                                                     \
    X(FdivS, "fdiv.s", Fp)                                                                     \
    X(FsqrtS, "fsqrt.s", Fp)                                                                   \
    X(FmvWX, "fmv.w.x", Fp)                                                                    \
    X(FmvXW, "fmv.x.w", Fp)

enum class Mnemonic : u8 {
    Illegal = 0,
#define PROCFUZZ_ENUM(id, txt, cls) id,
    PROCFUZZ_MNEMONICS(PROCFUZZ_ENUM)
#undef PROCFUZZ_ENUM
        Count,
};

enum class InstrClass : u8 { None, Integer, MulDiv, LoadStore, Branch, Csr, Fp, System };

inline const char *mnemonic_text(Mnemonic m) {
    switch (m) {
#define PROCFUZZ_TEXT(id, txt, cls)                                                            \
    case Mnemonic::id: return txt;
        PROCFUZZ_MNEMONICS(PROCFUZZ_TEXT)
#undef PROCFUZZ_TEXT
    default: return "illegal";
    }
}

inline InstrClass instr_class(Mnemonic m) {
    switch (m) {
#define PROCFUZZ_CLASS(id, txt, cls)                                                           \
    case Mnemonic::id: return InstrClass::cls;
        PROCFUZZ_MNEMONICS(PROCFUZZ_CLASS)
#undef PROCFUZZ_CLASS
    default: return InstrClass::None;
    }
}

inline std::optional<Mnemonic> mnemonic_from_text(const std::string &s) {
#define PROCFUZZ_LOOKUP(id, txt, cls)                                                          \
    if (s == txt) return Mnemonic::id;
    PROCFUZZ_MNEMONICS(PROCFUZZ_LOOKUP)
#undef PROCFUZZ_LOOKUP
    return std::nullopt;
}

// One decoded instruction. For Zicsr immediate forms rs1 carries the 5-bit
// zimm; for shifts imm carries the shamt; for lui/auipc imm carries the raw
// 20-bit field; for fence imm carries bits [31:20] verbatim.
struct Instruction {
    Mnemonic mnemonic = Mnemonic::Illegal;
    u8 rd = 0;
    u8 rs1 = 0;
    u8 rs2 = 0;
    u8 rm = 0;
    u16 csr = 0;
    i64 imm = 0;

    bool operator==(const Instruction &) const = default;
    bool valid() const { return mnemonic != Mnemonic::Illegal; }
};

namespace decode_detail {

constexpr u32 bits(u32 w, unsigned hi, unsigned lo) { return (w >> lo) & ((1u << (hi - lo + 1)) - 1); }

constexpr i64 imm_i(u32 w) { return sign_extend(bits(w, 31, 20), 12); }
constexpr i64 imm_s(u32 w) { return sign_extend((bits(w, 31, 25) << 5) | bits(w, 11, 7), 12); }
constexpr i64 imm_b(u32 w) {
    return sign_extend((bits(w, 31, 31) << 12) | (bits(w, 7, 7) << 11) |
                           (bits(w, 30, 25) << 5) | (bits(w, 11, 8) << 1),
                       13);
}
constexpr i64 imm_j(u32 w) {
    return sign_extend((bits(w, 31, 31) << 20) | (bits(w, 19, 12) << 12) |
                           (bits(w, 20, 20) << 11) | (bits(w, 30, 21) << 1),
                       21);
}

} // namespace decode_detail

/// Decodes one 32-bit word. Unrecognized words yield an Instruction with
/// mnemonic Illegal; the simulators turn those into illegal-instruction traps.
inline Instruction decode(u32 w) {
    using namespace decode_detail;
    Instruction in;
    in.rd = u8(bits(w, 11, 7));
    in.rs1 = u8(bits(w, 19, 15));
    in.rs2 = u8(bits(w, 24, 20));
    const u32 f3 = bits(w, 14, 12);
    const u32 f7 = bits(w, 31, 25);
    if ((w & 3) != 3) return {};

    switch (bits(w, 6, 0)) {
    case 0x37:
        in.mnemonic = Mnemonic::Lui;
        in.imm = bits(w, 31, 12);
        in.rs1 = in.rs2 = 0;
        return in;
    case 0x17:
        in.mnemonic = Mnemonic::Auipc;
        in.imm = bits(w, 31, 12);
        in.rs1 = in.rs2 = 0;
        return in;
    case 0x6f:
        in.mnemonic = Mnemonic::Jal;
        in.imm = imm_j(w);
        in.rs1 = in.rs2 = 0;
        return in;
    case 0x67:
        if (f3 != 0) return {};
        in.mnemonic = Mnemonic::Jalr;
        in.imm = imm_i(w);
        in.rs2 = 0;
        return in;
    case 0x63: {
        static constexpr Mnemonic ops[8] = {Mnemonic::Beq,  Mnemonic::Bne,  Mnemonic::Illegal,
                                            Mnemonic::Illegal, Mnemonic::Blt, Mnemonic::Bge,
                                            Mnemonic::Bltu, Mnemonic::Bgeu};
        if (ops[f3] == Mnemonic::Illegal) return {};
        in.mnemonic = ops[f3];
        in.imm = imm_b(w);
        in.rd = 0;
        return in;
    }
    case 0x03: {
        static constexpr Mnemonic ops[8] = {Mnemonic::Lb,  Mnemonic::Lh,  Mnemonic::Lw,
                                            Mnemonic::Ld,  Mnemonic::Lbu, Mnemonic::Lhu,
                                            Mnemonic::Lwu, Mnemonic::Illegal};
        if (ops[f3] == Mnemonic::Illegal) return {};
        in.mnemonic = ops[f3];
        in.imm = imm_i(w);
        in.rs2 = 0;
        return in;
    }
    case 0x23: {
        static constexpr Mnemonic ops[4] = {Mnemonic::Sb, Mnemonic::Sh, Mnemonic::Sw,
                                            Mnemonic::Sd};
        if (f3 > 3) return {};
        in.mnemonic = ops[f3];
        in.imm = imm_s(w);
        in.rd = 0;
        return in;
    }
    case 0x13: {
        switch (f3) {
        case 0: in.mnemonic = Mnemonic::Addi; break;
        case 2: in.mnemonic = Mnemonic::Slti; break;
        case 3: in.mnemonic = Mnemonic::Sltiu; break;
        case 4: in.mnemonic = Mnemonic::Xori; break;
        case 6: in.mnemonic = Mnemonic::Ori; break;
        case 7: in.mnemonic = Mnemonic::Andi; break;
        case 1:
            if (bits(w, 31, 26) != 0) return {};
            in.mnemonic = Mnemonic::Slli;
            in.imm = bits(w, 25, 20);
            in.rs2 = 0;
            return in;
        case 5:
            if (bits(w, 31, 26) == 0x00) in.mnemonic = Mnemonic::Srli;
            else if (bits(w, 31, 26) == 0x10) in.mnemonic = Mnemonic::Srai;
            else return {};
            in.imm = bits(w, 25, 20);
            in.rs2 = 0;
            return in;
        }
        in.imm = imm_i(w);
        in.rs2 = 0;
        return in;
    }
    case 0x1b: {
        switch (f3) {
        case 0:
            in.mnemonic = Mnemonic::Addiw;
            in.imm = imm_i(w);
            in.rs2 = 0;
            return in;
        case 1:
            if (f7 != 0x00) return {};
            in.mnemonic = Mnemonic::Slliw;
            break;
        case 5:
            if (f7 == 0x00) in.mnemonic = Mnemonic::Srliw;
            else if (f7 == 0x20) in.mnemonic = Mnemonic::Sraiw;
            else return {};
            break;
        default: return {};
        }
        in.imm = bits(w, 24, 20);
        in.rs2 = 0;
        return in;
    }
    case 0x33: {
        if (f7 == 0x00) {
            static constexpr Mnemonic ops[8] = {Mnemonic::Add, Mnemonic::Sll, Mnemonic::Slt,
                                                Mnemonic::Sltu, Mnemonic::Xor, Mnemonic::Srl,
                                                Mnemonic::Or,  Mnemonic::And};
            in.mnemonic = ops[f3];
        } else if (f7 == 0x20) {
            if (f3 == 0) in.mnemonic = Mnemonic::Sub;
            else if (f3 == 5) in.mnemonic = Mnemonic::Sra;
            else return {};
        } else if (f7 == 0x01) {
            static constexpr Mnemonic ops[8] = {Mnemonic::Mul,  Mnemonic::Mulh,
                                                Mnemonic::Mulhsu, Mnemonic::Mulhu,
                                                Mnemonic::Div,  Mnemonic::Divu,
                                                Mnemonic::Rem,  Mnemonic::Remu};
            in.mnemonic = ops[f3];
        } else {
            return {};
        }
        return in;
    }
    case 0x3b: {
        if (f7 == 0x00) {
            if (f3 == 0) in.mnemonic = Mnemonic::Addw;
            else if (f3 == 1) in.mnemonic = Mnemonic::Sllw;
            else if (f3 == 5) in.mnemonic = Mnemonic::Srlw;
            else return {};
        } else if (f7 == 0x20) {
            if (f3 == 0) in.mnemonic = Mnemonic::Subw;
            else if (f3 == 5) in.mnemonic = Mnemonic::Sraw;
            else return {};
        } else if (f7 == 0x01) {
            static constexpr Mnemonic ops[8] = {Mnemonic::Mulw, Mnemonic::Illegal,
                                                Mnemonic::Illegal, Mnemonic::Illegal,
                                                Mnemonic::Divw, Mnemonic::Divuw,
                                                Mnemonic::Remw, Mnemonic::Remuw};
            if (ops[f3] == Mnemonic::Illegal) return {};
            in.mnemonic = ops[f3];
        } else {
            return {};
        }
        return in;
    }
    case 0x0f:
        if (f3 != 0) return {};
        in.mnemonic = Mnemonic::Fence;
        in.imm = bits(w, 31, 20);
        in.rs2 = 0;
        return in;
    case 0x73: {
        if (f3 == 0) {
            switch (w) {
            case 0x00000073: in.mnemonic = Mnemonic::Ecall; break;
            case 0x00100073: in.mnemonic = Mnemonic::Ebreak; break;
            case 0x10200073: in.mnemonic = Mnemonic::Sret; break;
            case 0x30200073: in.mnemonic = Mnemonic::Mret; break;
            case 0x10500073: in.mnemonic = Mnemonic::Wfi; break;
            default: return {};
            }
            in.rd = in.rs1 = in.rs2 = 0;
            return in;
        }
        if (f3 == 4) return {};
        static constexpr Mnemonic ops[8] = {Mnemonic::Illegal, Mnemonic::Csrrw,
                                            Mnemonic::Csrrs,  Mnemonic::Csrrc,
                                            Mnemonic::Illegal, Mnemonic::Csrrwi,
                                            Mnemonic::Csrrsi, Mnemonic::Csrrci};
        in.mnemonic = ops[f3];
        in.csr = u16(bits(w, 31, 20));
        in.rs2 = 0;
        return in;
    }
    case 0x53: {
        switch (f7) {
        case 0x00: in.mnemonic = Mnemonic::FaddS; break;
        case 0x04: in.mnemonic = Mnemonic::FsubS; break;
        case 0x08: in.mnemonic = Mnemonic::FmulS; break;
        case 0x0c: in.mnemonic = Mnemonic::FdivS; break;
        case 0x2c:
            if (in.rs2 != 0) return {};
            in.mnemonic = Mnemonic::FsqrtS;
            break;
        case 0x78:
            if (in.rs2 != 0 || f3 != 0) return {};
            in.mnemonic = Mnemonic::FmvWX;
            return in;
        case 0x70:
            if (in.rs2 != 0 || f3 != 0) return {};
            in.mnemonic = Mnemonic::FmvXW;
            return in;
        default: return {};
        }
        in.rm = u8(f3);
        return in;
    }
    default: return {};
    }
}

/// Inverse of decode for every valid instruction in the subset.
inline u32 encode(const Instruction &in) {
    const u32 rd = in.rd, rs1 = in.rs1, rs2 = in.rs2;
    auto r_type = [&](u32 op, u32 f3, u32 f7) {
        return (f7 << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | op;
    };
    auto i_type = [&](u32 op, u32 f3) {
        return ((u32(in.imm) & 0xfff) << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | op;
    };
    auto s_type = [&](u32 op, u32 f3) {
        u32 imm = u32(in.imm) & 0xfff;
        return ((imm >> 5) << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) |
               ((imm & 0x1f) << 7) | op;
    };
    auto b_type = [&](u32 f3) {
        u32 imm = u32(in.imm) & 0x1fff;
        return (((imm >> 12) & 1) << 31) | (((imm >> 5) & 0x3f) << 25) | (rs2 << 20) |
               (rs1 << 15) | (f3 << 12) | (((imm >> 1) & 0xf) << 8) | (((imm >> 11) & 1) << 7) |
               0x63;
    };
    auto sh_type = [&](u32 op, u32 f3, u32 top) {
        return (top << 26) | ((u32(in.imm) & 0x3f) << 20) | (rs1 << 15) | (f3 << 12) |
               (rd << 7) | op;
    };

    switch (in.mnemonic) {
    case Mnemonic::Lui: return ((u32(in.imm) & 0xfffff) << 12) | (rd << 7) | 0x37;
    case Mnemonic::Auipc: return ((u32(in.imm) & 0xfffff) << 12) | (rd << 7) | 0x17;
    case Mnemonic::Jal: {
        u32 imm = u32(in.imm) & 0x1fffff;
        return (((imm >> 20) & 1) << 31) | (((imm >> 1) & 0x3ff) << 21) |
               (((imm >> 11) & 1) << 20) | (((imm >> 12) & 0xff) << 12) | (rd << 7) | 0x6f;
    }
    case Mnemonic::Jalr: return i_type(0x67, 0);
    case Mnemonic::Beq: return b_type(0);
    case Mnemonic::Bne: return b_type(1);
    case Mnemonic::Blt: return b_type(4);
    case Mnemonic::Bge: return b_type(5);
    case Mnemonic::Bltu: return b_type(6);
    case Mnemonic::Bgeu: return b_type(7);
    case Mnemonic::Lb: return i_type(0x03, 0);
    case Mnemonic::Lh: return i_type(0x03, 1);
    case Mnemonic::Lw: return i_type(0x03, 2);
    case Mnemonic::Ld: return i_type(0x03, 3);
    case Mnemonic::Lbu: return i_type(0x03, 4);
    case Mnemonic::Lhu: return i_type(0x03, 5);
    case Mnemonic::Lwu: return i_type(0x03, 6);
    case Mnemonic::Sb: return s_type(0x23, 0);
    case Mnemonic::Sh: return s_type(0x23, 1);
    case Mnemonic::Sw: return s_type(0x23, 2);
    case Mnemonic::Sd: return s_type(0x23, 3);
    case Mnemonic::Addi: return i_type(0x13, 0);
    case Mnemonic::Slti: return i_type(0x13, 2);
    case Mnemonic::Sltiu: return i_type(0x13, 3);
    case Mnemonic::Xori: return i_type(0x13, 4);
    case Mnemonic::Ori: return i_type(0x13, 6);
    case Mnemonic::Andi: return i_type(0x13, 7);
    case Mnemonic::Slli: return sh_type(0x13, 1, 0x00);
    case Mnemonic::Srli: return sh_type(0x13, 5, 0x00);
    case Mnemonic::Srai: return sh_type(0x13, 5, 0x10);
    case Mnemonic::Add: return r_type(0x33, 0, 0x00);
    case Mnemonic::Sub: return r_type(0x33, 0, 0x20);
    case Mnemonic::Sll: return r_type(0x33, 1, 0x00);
    case Mnemonic::Slt: return r_type(0x33, 2, 0x00);
    case Mnemonic::Sltu: return r_type(0x33, 3, 0x00);
    case Mnemonic::Xor: return r_type(0x33, 4, 0x00);
    case Mnemonic::Srl: return r_type(0x33, 5, 0x00);
    case Mnemonic::Sra: return r_type(0x33, 5, 0x20);
    case Mnemonic::Or: return r_type(0x33, 6, 0x00);
    case Mnemonic::And: return r_type(0x33, 7, 0x00);
    case Mnemonic::Addiw: return i_type(0x1b, 0);
    case Mnemonic::Slliw: return ((u32(in.imm) & 0x1f) << 20) | (rs1 << 15) | (1 << 12) | (rd << 7) | 0x1b;
    case Mnemonic::Srliw: return ((u32(in.imm) & 0x1f) << 20) | (rs1 << 15) | (5 << 12) | (rd << 7) | 0x1b;
    case Mnemonic::Sraiw: return (0x20u << 25) | ((u32(in.imm) & 0x1f) << 20) | (rs1 << 15) | (5 << 12) | (rd << 7) | 0x1b;
    case Mnemonic::Addw: return r_type(0x3b, 0, 0x00);
    case Mnemonic::Subw: return r_type(0x3b, 0, 0x20);
    case Mnemonic::Sllw: return r_type(0x3b, 1, 0x00);
    case Mnemonic::Srlw: return r_type(0x3b, 5, 0x00);
    case Mnemonic::Sraw: return r_type(0x3b, 5, 0x20);
    case Mnemonic::Fence: return ((u32(in.imm) & 0xfff) << 20) | (rs1 << 15) | (rd << 7) | 0x0f;
    case Mnemonic::Mul: return r_type(0x33, 0, 0x01);
    case Mnemonic::Mulh: return r_type(0x33, 1, 0x01);
    case Mnemonic::Mulhsu: return r_type(0x33, 2, 0x01);
    case Mnemonic::Mulhu: return r_type(0x33, 3, 0x01);
    case Mnemonic::Div: return r_type(0x33, 4, 0x01);
    case Mnemonic::Divu: return r_type(0x33, 5, 0x01);
    case Mnemonic::Rem: return r_type(0x33, 6, 0x01);
    case Mnemonic::Remu: return r_type(0x33, 7, 0x01);
    case Mnemonic::Mulw: return r_type(0x3b, 0, 0x01);
    case Mnemonic::Divw: return r_type(0x3b, 4, 0x01);
    case Mnemonic::Divuw: return r_type(0x3b, 5, 0x01);
    case Mnemonic::Remw: return r_type(0x3b, 6, 0x01);
    case Mnemonic::Remuw: return r_type(0x3b, 7, 0x01);
    case Mnemonic::Csrrw: return (u32(in.csr) << 20) | (rs1 << 15) | (1 << 12) | (rd << 7) | 0x73;
    case Mnemonic::Csrrs: return (u32(in.csr) << 20) | (rs1 << 15) | (2 << 12) | (rd << 7) | 0x73;
    case Mnemonic::Csrrc: return (u32(in.csr) << 20) | (rs1 << 15) | (3 << 12) | (rd << 7) | 0x73;
    case Mnemonic::Csrrwi: return (u32(in.csr) << 20) | (rs1 << 15) | (5 << 12) | (rd << 7) | 0x73;
    case Mnemonic::Csrrsi: return (u32(in.csr) << 20) | (rs1 << 15) | (6 << 12) | (rd << 7) | 0x73;
    case Mnemonic::Csrrci: return (u32(in.csr) << 20) | (rs1 << 15) | (7 << 12) | (rd << 7) | 0x73;
    case Mnemonic::Ecall: return 0x00000073;
    case Mnemonic::Ebreak: return 0x00100073;
    case Mnemonic::Sret: return 0x10200073;
    case Mnemonic::Mret: return 0x30200073;
    case Mnemonic::Wfi: return 0x10500073;
    case Mnemonic::FaddS: return r_type(0x53, in.rm, 0x00);
    case Mnemonic::FsubS: return r_type(0x53, in.rm, 0x04);
    case Mnemonic::FmulS: return r_type(0x53, in.rm, 0x08);
    case Mnemonic::FdivS: return r_type(0x53, in.rm, 0x0c);
    case Mnemonic::FsqrtS: return (0x2cu << 25) | (rs1 << 15) | (u32(in.rm) << 12) | (rd << 7) | 0x53;
    case Mnemonic::FmvWX: return (0x78u << 25) | (rs1 << 15) | (rd << 7) | 0x53;
    case Mnemonic::FmvXW: return (0x70u << 25) | (rs1 << 15) | (rd << 7) | 0x53;
    default: return 0;
    }
}

inline bool is_csr_instr(Mnemonic m) { return instr_class(m) == InstrClass::Csr; }

/// Whether a Zicsr instruction performs a write at all (the set/clear forms
/// with a zero mask read without writing).
inline bool csr_instr_writes(const Instruction &in) {
    switch (in.mnemonic) {
    case Mnemonic::Csrrw:
    case Mnemonic::Csrrwi: return true;
    case Mnemonic::Csrrs:
    case Mnemonic::Csrrc:
    case Mnemonic::Csrrsi:
    case Mnemonic::Csrrci: return in.rs1 != 0;
    default: return false;
    }
}

/// Storage CSRs an instruction explicitly writes. The transition unit's
/// filter keys on this; a write through the fcsr alias touches both fp CSRs.
inline std::vector<CsrId> csr_write_targets(const Instruction &in) {
    if (!csr_instr_writes(in)) return {};
    if (in.csr == kFcsrAddr) return {CsrId::Frm, CsrId::Fflags};
    if (auto id = csr_from_address(in.csr)) return {*id};
    return {};
}

inline std::string csr_operand_text(u16 addr) {
    if (addr == kFcsrAddr) return "fcsr";
    if (auto id = csr_from_address(addr)) return csr_info(*id).name;
    return "0x" + to_hex(addr, 3);
}

inline const char *rounding_mode_text(u8 rm) {
    switch (rm) {
    case 0: return "rne";
    case 1: return "rtz";
    case 2: return "rdn";
    case 3: return "rup";
    case 4: return "rmm";
    case 5: return "rm5";
    case 6: return "rm6";
    default: return nullptr; // dynamic, omitted
    }
}

inline std::string disassemble(const Instruction &in) {
    auto x = [](u8 r) { return "x" + std::to_string(r); };
    auto f = [](u8 r) { return "f" + std::to_string(r); };
    auto d = [](i64 v) { return std::to_string(v); };
    const std::string m = mnemonic_text(in.mnemonic);
    switch (in.mnemonic) {
    case Mnemonic::Illegal: return "illegal";
    case Mnemonic::Lui:
    case Mnemonic::Auipc: return m + " " + x(in.rd) + ", 0x" + to_hex(u64(in.imm), 5);
    case Mnemonic::Jal: return m + " " + x(in.rd) + ", " + d(in.imm);
    case Mnemonic::Jalr: return m + " " + x(in.rd) + ", " + x(in.rs1) + ", " + d(in.imm);
    case Mnemonic::Beq:
    case Mnemonic::Bne:
    case Mnemonic::Blt:
    case Mnemonic::Bge:
    case Mnemonic::Bltu:
    case Mnemonic::Bgeu: return m + " " + x(in.rs1) + ", " + x(in.rs2) + ", " + d(in.imm);
    case Mnemonic::Lb:
    case Mnemonic::Lh:
    case Mnemonic::Lw:
    case Mnemonic::Ld:
    case Mnemonic::Lbu:
    case Mnemonic::Lhu:
    case Mnemonic::Lwu: return m + " " + x(in.rd) + ", " + d(in.imm) + "(" + x(in.rs1) + ")";
    case Mnemonic::Sb:
    case Mnemonic::Sh:
    case Mnemonic::Sw:
    case Mnemonic::Sd: return m + " " + x(in.rs2) + ", " + d(in.imm) + "(" + x(in.rs1) + ")";
    case Mnemonic::Fence:
        if (in.imm == 0x0ff && in.rd == 0 && in.rs1 == 0) return "fence";
        return "fence 0x" + to_hex(u64(in.imm), 3) + ", " + x(in.rd) + ", " + x(in.rs1);
    case Mnemonic::Ecall:
    case Mnemonic::Ebreak:
    case Mnemonic::Mret:
    case Mnemonic::Sret:
    case Mnemonic::Wfi: return m;
    case Mnemonic::Csrrw:
    case Mnemonic::Csrrs:
    case Mnemonic::Csrrc:
        return m + " " + x(in.rd) + ", " + csr_operand_text(in.csr) + ", " + x(in.rs1);
    case Mnemonic::Csrrwi:
    case Mnemonic::Csrrsi:
    case Mnemonic::Csrrci:
        return m + " " + x(in.rd) + ", " + csr_operand_text(in.csr) + ", " +
               std::to_string(in.rs1);
    case Mnemonic::FaddS:
    case Mnemonic::FsubS:
    case Mnemonic::FmulS:
    case Mnemonic::FdivS: {
        std::string s = m + " " + f(in.rd) + ", " + f(in.rs1) + ", " + f(in.rs2);
        if (const char *r = rounding_mode_text(in.rm)) s += std::string(", ") + r;
        return s;
    }
    case Mnemonic::FsqrtS: {
        std::string s = m + " " + f(in.rd) + ", " + f(in.rs1);
        if (const char *r = rounding_mode_text(in.rm)) s += std::string(", ") + r;
        return s;
    }
    case Mnemonic::FmvWX: return m + " " + f(in.rd) + ", " + x(in.rs1);
    case Mnemonic::FmvXW: return m + " " + x(in.rd) + ", " + f(in.rs1);
    default: {
        // remaining R- and I-type integer forms
        switch (instr_class(in.mnemonic)) {
        case InstrClass::Integer:
        case InstrClass::MulDiv: break;
        default: return m;
        }
        switch (in.mnemonic) {
        case Mnemonic::Addi:
        case Mnemonic::Slti:
        case Mnemonic::Sltiu:
        case Mnemonic::Xori:
        case Mnemonic::Ori:
        case Mnemonic::Andi:
        case Mnemonic::Slli:
        case Mnemonic::Srli:
        case Mnemonic::Srai:
        case Mnemonic::Addiw:
        case Mnemonic::Slliw:
        case Mnemonic::Srliw:
        case Mnemonic::Sraiw:
            return m + " " + x(in.rd) + ", " + x(in.rs1) + ", " + d(in.imm);
        default: return m + " " + x(in.rd) + ", " + x(in.rs1) + ", " + x(in.rs2);
        }
    }
    }
}

} // namespace procfuzz
