#pragma once

#include "procfuzz/common.hpp"
#include "procfuzz/program.hpp"
#include "procfuzz/selection.hpp"

#include <algorithm>
#include <vector>

namespace procfuzz {

enum class MutationOp : u8 {
    RemoveInstruction,
    AppendInstruction,
    ReplaceInstruction,
    PerturbOperand,
    PerturbImmediate,
};

struct GenConfig {
    unsigned min_len = 8;
    unsigned max_len = 64;

    // Relative instruction-class weights.
    unsigned w_integer = 40;
    unsigned w_muldiv = 10;
    unsigned w_loadstore = 15;
    unsigned w_branch = 10;
    unsigned w_csr = 15;
    unsigned w_fp = 10;
    unsigned w_system = 10;

    // Zicsr address pool: biased toward the monitored CSRs, with the
    // remainder drawn from the full implemented set.
    unsigned csr_monitored_bias_pct = 80;
    std::vector<u16> monitored_csrs;
    std::vector<u16> all_csrs;

    static GenConfig for_selection(const CsrSelection &sel) {
        GenConfig cfg;
        for (CsrId id : sel.monitored) cfg.monitored_csrs.push_back(csr_info(id).address);
        for (const auto &c : csr_table()) cfg.all_csrs.push_back(c.address);
        cfg.all_csrs.push_back(kFcsrAddr);
        return cfg;
    }
};

namespace gen_detail {

// Prologue medeleg masks; a small pool keeps the explicit-write tuple burst
// bounded while still exercising delegation combinations.
constexpr u64 kMedelegPool[] = {0x000, 0x3ff, 0x00c, 0x0f0, 0x300, 0x2ff, 0x0a4, 0x155};

// Register values a fuzzer wants on hand: CSR field patterns, cause codes,
// float bit patterns, odd addresses.
constexpr u64 kDictionary[] = {
    0x2,       0x8,       0x22,     0x80,      0x100,    0x800,    0x1800,    0x2000,
    0x6000,    0x20000,   0x80000,  0x200000,  0x400000, 0x1,      0x3,       0x7,
    0x2a,      0x3ff,     0x0f0,    0x00800000, 0x40400000, 0x3f800000, 0x7f800000,
    0x7fc00000, 0x7f7fffff, 0x80000000, 0xff800000, 0x4,
};

inline Instruction make(Mnemonic m, u8 rd = 0, u8 rs1 = 0, u8 rs2 = 0, i64 imm = 0, u16 csr = 0,
                        u8 rm = 7) {
    Instruction in;
    in.mnemonic = m;
    in.rd = rd;
    in.rs1 = rs1;
    in.rs2 = rs2;
    in.imm = imm;
    in.csr = csr;
    in.rm = (instr_class(m) == InstrClass::Fp && m != Mnemonic::FmvWX && m != Mnemonic::FmvXW)
                ? rm
                : 0;
    return in;
}

/// Materializes a 32-bit constant into rd (one or two instructions).
inline void emit_li(std::vector<Instruction> &out, u8 rd, u64 value) {
    i64 v = i64(i32(u32(value)));
    if (v >= -2048 && v <= 2047) {
        out.push_back(make(Mnemonic::Addi, rd, 0, 0, v));
        return;
    }
    u32 hi = (u32(v) + 0x800) >> 12;
    i64 lo = v - i64(i32(hi << 12));
    out.push_back(make(Mnemonic::Lui, rd, 0, 0, i64(hi & 0xfffff)));
    if (lo != 0) out.push_back(make(Mnemonic::Addi, rd, rd, 0, lo));
}

inline u8 reg(Rng &rng) { return u8(rng.below(32)); }

inline u64 dict(Rng &rng) { return kDictionary[rng.below(std::size(kDictionary))]; }

inline InstrClass pick_class(Rng &rng, const GenConfig &cfg) {
    unsigned total = cfg.w_integer + cfg.w_muldiv + cfg.w_loadstore + cfg.w_branch + cfg.w_csr +
                     cfg.w_fp + cfg.w_system;
    u64 r = rng.below(total);
    if (r < cfg.w_integer) return InstrClass::Integer;
    r -= cfg.w_integer;
    if (r < cfg.w_muldiv) return InstrClass::MulDiv;
    r -= cfg.w_muldiv;
    if (r < cfg.w_loadstore) return InstrClass::LoadStore;
    r -= cfg.w_loadstore;
    if (r < cfg.w_branch) return InstrClass::Branch;
    r -= cfg.w_branch;
    if (r < cfg.w_csr) return InstrClass::Csr;
    r -= cfg.w_csr;
    if (r < cfg.w_fp) return InstrClass::Fp;
    return InstrClass::System;
}

inline Instruction random_integer(Rng &rng) {
    static constexpr Mnemonic imm_ops[] = {Mnemonic::Addi, Mnemonic::Slti, Mnemonic::Sltiu,
                                           Mnemonic::Xori, Mnemonic::Ori,  Mnemonic::Andi,
                                           Mnemonic::Addiw};
    static constexpr Mnemonic reg_ops[] = {Mnemonic::Add,  Mnemonic::Sub,  Mnemonic::Sll,
                                           Mnemonic::Slt,  Mnemonic::Sltu, Mnemonic::Xor,
                                           Mnemonic::Srl,  Mnemonic::Sra,  Mnemonic::Or,
                                           Mnemonic::And,  Mnemonic::Addw, Mnemonic::Subw,
                                           Mnemonic::Sllw, Mnemonic::Srlw, Mnemonic::Sraw};
    static constexpr Mnemonic sh_ops[] = {Mnemonic::Slli,  Mnemonic::Srli,  Mnemonic::Srai,
                                          Mnemonic::Slliw, Mnemonic::Srliw, Mnemonic::Sraiw};
    switch (rng.below(5)) {
    case 0: return make(imm_ops[rng.below(std::size(imm_ops))], reg(rng), reg(rng), 0,
                        i64(rng.below(4096)) - 2048);
    case 1: {
        Mnemonic m = sh_ops[rng.below(std::size(sh_ops))];
        bool word = m == Mnemonic::Slliw || m == Mnemonic::Srliw || m == Mnemonic::Sraiw;
        return make(m, reg(rng), reg(rng), 0, i64(rng.below(word ? 32 : 64)));
    }
    case 2: return make(Mnemonic::Lui, reg(rng), 0, 0, i64(rng.below(1 << 20)));
    case 3: return make(Mnemonic::Auipc, reg(rng), 0, 0, i64(rng.below(0x60)));
    default: return make(reg_ops[rng.below(std::size(reg_ops))], reg(rng), reg(rng), reg(rng));
    }
}

inline void emit_muldiv(std::vector<Instruction> &out, Rng &rng) {
    static constexpr Mnemonic ops[] = {Mnemonic::Mul,  Mnemonic::Mulh,  Mnemonic::Mulhsu,
                                       Mnemonic::Mulhu, Mnemonic::Div,   Mnemonic::Divu,
                                       Mnemonic::Rem,  Mnemonic::Remu,  Mnemonic::Mulw,
                                       Mnemonic::Divw, Mnemonic::Divuw, Mnemonic::Remw,
                                       Mnemonic::Remuw};
    // discarded results included: rd=x0 exercises the bypass network
    u8 rd = rng.chance(1, 20) ? 0 : reg(rng);
    out.push_back(make(ops[rng.below(std::size(ops))], rd, reg(rng), reg(rng)));
    if (rd == 0 && rng.chance(1, 5))
        out.push_back(make(Mnemonic::Add, 1 + u8(rng.below(28)), 0, 0)); // read it back dead
}

inline void emit_loadstore(std::vector<Instruction> &out, Rng &rng) {
    static constexpr Mnemonic loads[] = {Mnemonic::Lb, Mnemonic::Lh,  Mnemonic::Lw, Mnemonic::Ld,
                                         Mnemonic::Lbu, Mnemonic::Lhu, Mnemonic::Lwu};
    static constexpr Mnemonic stores[] = {Mnemonic::Sb, Mnemonic::Sh, Mnemonic::Sw, Mnemonic::Sd};
    u8 base = reg(rng);
    if (rng.chance(2, 5)) {
        // anchor the base inside the data window so some accesses land
        base = 1 + u8(rng.below(28));
        out.push_back(make(Mnemonic::Auipc, base, 0, 0, 0x40 + i64(rng.below(16))));
    }
    i64 off = rng.chance(7, 10) ? i64(rng.below(32)) * 8 : i64(rng.below(256)) - 128;
    if (rng.chance(1, 2)) out.push_back(make(loads[rng.below(std::size(loads))], reg(rng), base, 0, off));
    else out.push_back(make(stores[rng.below(std::size(stores))], 0, base, reg(rng), off));
}

inline void emit_branch(std::vector<Instruction> &out, Rng &rng) {
    static constexpr Mnemonic ops[] = {Mnemonic::Beq, Mnemonic::Bne,  Mnemonic::Blt,
                                       Mnemonic::Bge, Mnemonic::Bltu, Mnemonic::Bgeu};
    // forward targets only, so generated control flow always drains ahead
    i64 off = i64(1 + rng.below(8)) * 4;
    switch (rng.below(8)) {
    case 0: out.push_back(make(Mnemonic::Jal, rng.chance(1, 2) ? 0 : reg(rng), 0, 0, off)); break;
    case 1: {
        u8 rd = rng.chance(1, 2) ? 0 : reg(rng);
        if (rng.chance(19, 20)) {
            // pc-anchored indirect jump stays inside the image
            u8 base = 1 + u8(rng.below(28));
            out.push_back(make(Mnemonic::Auipc, base, 0, 0, 0));
            out.push_back(make(Mnemonic::Jalr, rd, base, 0, i64(1 + rng.below(63)) * 4));
        } else {
            out.push_back(make(Mnemonic::Jalr, rd, reg(rng), 0, i64(rng.below(64)) * 4));
        }
        break;
    }
    default: out.push_back(make(ops[rng.below(std::size(ops))], 0, reg(rng), reg(rng), off));
    }
}

inline u16 pick_csr(Rng &rng, const GenConfig &cfg) {
    if (!cfg.monitored_csrs.empty() && rng.chance(cfg.csr_monitored_bias_pct, 100))
        return cfg.monitored_csrs[rng.below(cfg.monitored_csrs.size())];
    return cfg.all_csrs[rng.below(cfg.all_csrs.size())];
}

inline void emit_csr(std::vector<Instruction> &out, Rng &rng, const GenConfig &cfg) {
    static constexpr Mnemonic ops[] = {Mnemonic::Csrrw,  Mnemonic::Csrrs,  Mnemonic::Csrrc,
                                       Mnemonic::Csrrwi, Mnemonic::Csrrsi, Mnemonic::Csrrci};
    Mnemonic m = ops[rng.below(std::size(ops))];
    u16 csr = pick_csr(rng, cfg);
    bool imm_form = m == Mnemonic::Csrrwi || m == Mnemonic::Csrrsi || m == Mnemonic::Csrrci;
    // status and configuration registers get dictionary patterns; plain junk
    // values mostly bounce off their WARL masks anyway
    bool dict_value = csr == 0x300 || csr == 0x342 || csr == 0x142 || csr == 0x302 ||
                      rng.chance(35, 100);
    u8 rs1 = imm_form ? u8(rng.below(32)) : reg(rng);
    if (!imm_form && dict_value) {
        rs1 = 1 + u8(rng.below(28));
        emit_li(out, rs1, dict(rng));
    }
    out.push_back(make(m, reg(rng), rs1, 0, 0, csr));
    if (rng.chance(15, 100))
        out.push_back(make(Mnemonic::Csrrs, 1 + u8(rng.below(28)), 0, 0, 0, csr)); // read back
}

inline void emit_fp(std::vector<Instruction> &out, Rng &rng) {
    static constexpr Mnemonic ops[] = {Mnemonic::FaddS, Mnemonic::FsubS, Mnemonic::FmulS,
                                       Mnemonic::FdivS, Mnemonic::FsqrtS};
    u64 r = rng.below(10);
    if (r < 3) {
        u8 src = 1 + u8(rng.below(28));
        if (rng.chance(1, 2)) emit_li(out, src, dict(rng));
        out.push_back(make(Mnemonic::FmvWX, u8(rng.below(32)), src));
    } else if (r < 9) {
        Mnemonic m = ops[rng.below(std::size(ops))];
        u8 rm = rng.chance(4, 5) ? 7 : u8(rng.below(5));
        u8 rs2 = m == Mnemonic::FsqrtS ? 0 : u8(rng.below(32));
        out.push_back(make(m, u8(rng.below(32)), u8(rng.below(32)), rs2, 0, 0, rm));
        if (rng.chance(1, 100)) // software checks the accrued flags
            out.push_back(make(Mnemonic::Csrrs, 1 + u8(rng.below(28)), 0, 0, 0, 0x001));
    } else {
        out.push_back(make(Mnemonic::FmvXW, reg(rng), u8(rng.below(32))));
    }
}

/// Privilege-switch routine: hop into supervisor mode and back down to user
/// through the sret path. Arms nothing by itself; it just makes the S->U
/// descent reachable by generated programs.
inline void emit_supervisor_round_trip(std::vector<Instruction> &out) {
    out.push_back(make(Mnemonic::Lui, 28, 0, 0, 0x1));
    out.push_back(make(Mnemonic::Srli, 28, 28, 0, 1)); // 0x800 = MPP[0]
    out.push_back(make(Mnemonic::Csrrs, 0, 28, 0, 0, 0x300));
    out.push_back(make(Mnemonic::Auipc, 29, 0, 0, 0));
    out.push_back(make(Mnemonic::Addi, 29, 29, 0, 16));
    out.push_back(make(Mnemonic::Csrrw, 0, 29, 0, 0, 0x341)); // mepc
    out.push_back(make(Mnemonic::Mret));
    out.push_back(make(Mnemonic::Auipc, 29, 0, 0, 0));
    out.push_back(make(Mnemonic::Addi, 29, 29, 0, 16));
    out.push_back(make(Mnemonic::Csrrw, 0, 29, 0, 0, 0x141)); // sepc
    out.push_back(make(Mnemonic::Sret));
}

/// The machine-mode twin: mret back into M, poke the interrupt-enable bit,
/// and drop to user through sret without ever entering supervisor mode.
inline void emit_machine_round_trip(std::vector<Instruction> &out) {
    out.push_back(make(Mnemonic::Lui, 28, 0, 0, 0x2));
    out.push_back(make(Mnemonic::Addi, 28, 28, 0, -2048)); // 0x1800 = MPP[1:0]
    out.push_back(make(Mnemonic::Csrrs, 0, 28, 0, 0, 0x300));
    out.push_back(make(Mnemonic::Auipc, 29, 0, 0, 0));
    out.push_back(make(Mnemonic::Addi, 29, 29, 0, 16));
    out.push_back(make(Mnemonic::Csrrw, 0, 29, 0, 0, 0x341)); // mepc
    out.push_back(make(Mnemonic::Mret));
    out.push_back(make(Mnemonic::Csrrsi, 0, 2, 0, 0, 0x300)); // SIE on
    out.push_back(make(Mnemonic::Auipc, 29, 0, 0, 0));
    out.push_back(make(Mnemonic::Addi, 29, 29, 0, 16));
    out.push_back(make(Mnemonic::Csrrw, 0, 29, 0, 0, 0x141)); // sepc
    out.push_back(make(Mnemonic::Sret));
}

inline void emit_system(std::vector<Instruction> &out, Rng &rng) {
    u64 r = rng.below(10);
    if (r < 6) {
        bool is_mret = r < 3;
        if (is_mret && rng.chance(8, 100)) {
            emit_machine_round_trip(out);
            return;
        }
        if (rng.chance(95, 100)) {
            // point the return pc just past the xret so execution keeps flowing
            u8 t = 29;
            out.push_back(make(Mnemonic::Auipc, t, 0, 0, 0));
            out.push_back(make(Mnemonic::Addi, t, t, 0, 16));
            out.push_back(make(Mnemonic::Csrrw, 0, t, 0, 0, is_mret ? u16(0x341) : u16(0x141)));
        }
        out.push_back(make(is_mret ? Mnemonic::Mret : Mnemonic::Sret));
    } else if (r < 8) {
        out.push_back(make(Mnemonic::Wfi));
    } else if (r == 8) {
        out.push_back(rng.chance(1, 2) ? make(Mnemonic::Ecall) : make(Mnemonic::Wfi));
    } else {
        out.push_back(make(Mnemonic::Ebreak));
    }
}

inline void emit_class(std::vector<Instruction> &out, InstrClass cls, Rng &rng,
                       const GenConfig &cfg) {
    switch (cls) {
    case InstrClass::Integer:
        if (rng.chance(1, 10)) {
            emit_li(out, 1 + u8(rng.below(28)), dict(rng));
            return;
        }
        out.push_back(random_integer(rng));
        return;
    case InstrClass::MulDiv: emit_muldiv(out, rng); return;
    case InstrClass::LoadStore: emit_loadstore(out, rng); return;
    case InstrClass::Branch: emit_branch(out, rng); return;
    case InstrClass::Csr: emit_csr(out, rng, cfg); return;
    case InstrClass::Fp: emit_fp(out, rng); return;
    default: emit_system(out, rng); return;
    }
}

/// One fresh single instruction (for Replace, which must preserve length).
inline Instruction single_instruction(Rng &rng, const GenConfig &cfg) {
    for (;;) {
        std::vector<Instruction> tmp;
        emit_class(tmp, pick_class(rng, cfg), rng, cfg);
        if (!tmp.empty()) return tmp[rng.below(tmp.size())];
    }
}

} // namespace gen_detail

/// Fixed harness prologue: install the delegation mask, enable the fp unit,
/// and enter the start privilege. Trap stubs are placed by the loader.
inline std::vector<Instruction> build_prologue(u64 medeleg_mask, bool start_user) {
    using namespace gen_detail;
    std::vector<Instruction> p;
    p.push_back(make(Mnemonic::Addi, 10, 0, 0, 1)); // body ecalls trap, only the epilogue exits
    p.push_back(make(Mnemonic::Addi, 31, 0, 0, i64(medeleg_mask)));
    p.push_back(make(Mnemonic::Csrrw, 0, 31, 0, 0, 0x302)); // medeleg
    p.push_back(make(Mnemonic::Lui, 31, 0, 0, 0x6));        // mstatus.FS = dirty
    p.push_back(make(Mnemonic::Csrrs, 0, 31, 0, 0, 0x300));
    if (start_user) {
        p.push_back(make(Mnemonic::Auipc, 30, 0, 0, 0));
        p.push_back(make(Mnemonic::Addi, 30, 30, 0, 16));
        p.push_back(make(Mnemonic::Csrrw, 0, 30, 0, 0, 0x341)); // mepc
        p.push_back(make(Mnemonic::Mret));                      // MPP resets to U
    }
    return p;
}

/// Fig. 3 stage (1): a random ISA-conforming program, deterministic in seed.
inline Program gen_random_program(u64 seed, const GenConfig &cfg) {
    using namespace gen_detail;
    Rng rng(seed);
    Program prog;
    u64 mask = kMedelegPool[rng.below(std::size(kMedelegPool))];
    prog.prologue = build_prologue(mask, rng.chance(1, 2));
    size_t target = cfg.min_len + rng.below(cfg.max_len - cfg.min_len + 1);
    while (prog.body.size() < target)
        emit_class(prog.body, pick_class(rng, cfg), rng, cfg);
    if (prog.body.size() > cfg.max_len) prog.body.resize(cfg.max_len);
    prog.epilogue = exit_epilogue();
    return prog;
}

/// Re-rolls one register operand in place; the csr address of Zicsr forms is
/// never touched, so operand perturbation stays within the instruction's
/// address class.
inline void perturb_operand(Instruction &in, Rng &rng) {
    using namespace gen_detail;
    switch (instr_class(in.mnemonic)) {
    case InstrClass::System: break; // no register operands
    case InstrClass::Branch:
        if (in.mnemonic == Mnemonic::Jal) in.rd = reg(rng);
        else if (rng.chance(1, 2)) in.rs1 = reg(rng);
        else if (in.mnemonic == Mnemonic::Jalr) in.rd = reg(rng);
        else in.rs2 = reg(rng);
        break;
    case InstrClass::Csr:
        if (rng.chance(1, 2)) in.rd = reg(rng);
        else in.rs1 = u8(rng.below(32)); // register or zimm, same field
        break;
    default:
        switch (rng.below(3)) {
        case 0: in.rd = reg(rng); break;
        case 1: in.rs1 = reg(rng); break;
        default: in.rs2 = reg(rng); break;
        }
        // drop fields the format does not carry
        switch (in.mnemonic) {
        case Mnemonic::Lui:
        case Mnemonic::Auipc: in.rs1 = in.rs2 = 0; break;
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
        case Mnemonic::Fence:
        case Mnemonic::Lb:
        case Mnemonic::Lh:
        case Mnemonic::Lw:
        case Mnemonic::Ld:
        case Mnemonic::Lbu:
        case Mnemonic::Lhu:
        case Mnemonic::Lwu:
        case Mnemonic::FsqrtS:
        case Mnemonic::FmvWX:
        case Mnemonic::FmvXW: in.rs2 = 0; break;
        case Mnemonic::Sb:
        case Mnemonic::Sh:
        case Mnemonic::Sw:
        case Mnemonic::Sd: in.rd = 0; break;
        default: break;
        }
        break;
    }
}

/// Re-rolls the immediate in place, staying within each format's legal range.
inline void perturb_immediate(Instruction &in, Rng &rng) {
    switch (in.mnemonic) {
    case Mnemonic::Lui: in.imm = i64(rng.below(1 << 20)); break;
    case Mnemonic::Auipc: in.imm = i64(rng.below(0x60)); break;
    case Mnemonic::Slli:
    case Mnemonic::Srli:
    case Mnemonic::Srai: in.imm = i64(rng.below(64)); break;
    case Mnemonic::Slliw:
    case Mnemonic::Srliw:
    case Mnemonic::Sraiw: in.imm = i64(rng.below(32)); break;
    case Mnemonic::Jal:
    case Mnemonic::Beq:
    case Mnemonic::Bne:
    case Mnemonic::Blt:
    case Mnemonic::Bge:
    case Mnemonic::Bltu:
    case Mnemonic::Bgeu: in.imm = i64(1 + rng.below(8)) * 4; break;
    case Mnemonic::Fence: in.imm = i64(rng.below(4096)); break;
    case Mnemonic::Addi:
    case Mnemonic::Slti:
    case Mnemonic::Sltiu:
    case Mnemonic::Xori:
    case Mnemonic::Ori:
    case Mnemonic::Andi:
    case Mnemonic::Addiw:
    case Mnemonic::Jalr:
    case Mnemonic::Lb:
    case Mnemonic::Lh:
    case Mnemonic::Lw:
    case Mnemonic::Ld:
    case Mnemonic::Lbu:
    case Mnemonic::Lhu:
    case Mnemonic::Lwu:
    case Mnemonic::Sb:
    case Mnemonic::Sh:
    case Mnemonic::Sw:
    case Mnemonic::Sd: {
        i64 next = rng.chance(1, 2) ? in.imm + i64(rng.below(17)) - 8
                                    : i64(rng.below(4096)) - 2048;
        in.imm = std::clamp<i64>(next, -2048, 2047);
        break;
    }
    default: break; // register-register forms carry no immediate
    }
}

/// Mutation sites skew toward the front of the body, where execution is
/// most likely to actually reach them.
inline size_t pick_position(Rng &rng, size_t n) {
    return std::min(rng.below(n), rng.below(n));
}

/// Draws a mutation operator; structural edits dominate so children rarely
/// retrace their parent's exact CSR trajectory.
inline MutationOp pick_mutation_op(Rng &rng) {
    u64 r = rng.below(100);
    if (r < 15) return MutationOp::RemoveInstruction;
    if (r < 40) return MutationOp::AppendInstruction;
    if (r < 60) return MutationOp::ReplaceInstruction;
    if (r < 80) return MutationOp::PerturbOperand;
    return MutationOp::PerturbImmediate;
}

/// Fig. 3 stage (3): 1..3 mutation operators applied to a copy of the parent.
inline Program mutate(const Program &parent, u64 seed, const GenConfig &cfg) {
    using namespace gen_detail;
    Rng rng(seed);
    Program child = parent;
    unsigned ops = 1 + unsigned(rng.below(3));
    for (unsigned k = 0; k < ops; ++k) {
        auto op = pick_mutation_op(rng);
        if (op == MutationOp::RemoveInstruction && child.body.size() <= 1)
            op = rng.chance(1, 2) ? MutationOp::AppendInstruction : MutationOp::ReplaceInstruction;
        switch (op) {
        case MutationOp::RemoveInstruction:
            child.body.erase(child.body.begin() + pick_position(rng, child.body.size()));
            break;
        case MutationOp::AppendInstruction: {
            if (child.body.size() >= cfg.max_len) break;
            std::vector<Instruction> fresh;
            if (rng.chance(1, 800)) emit_supervisor_round_trip(fresh);
            else emit_class(fresh, pick_class(rng, cfg), rng, cfg);
            size_t room = cfg.max_len - child.body.size();
            if (fresh.size() > room) fresh.resize(room);
            size_t at = pick_position(rng, child.body.size() + 1);
            child.body.insert(child.body.begin() + at, fresh.begin(), fresh.end());
            break;
        }
        case MutationOp::ReplaceInstruction:
            child.body[pick_position(rng, child.body.size())] = single_instruction(rng, cfg);
            break;
        case MutationOp::PerturbOperand:
            perturb_operand(child.body[pick_position(rng, child.body.size())], rng);
            break;
        case MutationOp::PerturbImmediate:
            perturb_immediate(child.body[pick_position(rng, child.body.size())], rng);
            break;
        }
    }
    if (child.body.empty()) child.body.push_back(single_instruction(rng, cfg));
    return child;
}

struct CorpusEntry {
    Program program;
    u64 iteration = 0;          // discovery iteration
    size_t tuples_contributed = 0;
};

struct Corpus {
    std::vector<CorpusEntry> entries;
};

/// Fig. 3 stage (2): uniform random choice over the corpus.
inline const Program &pick_seed(const Corpus &corpus, u64 seed) {
    if (corpus.entries.empty()) throw EmptyCorpus("pick_seed on an empty corpus");
    Rng rng(seed);
    return corpus.entries[rng.below(corpus.entries.size())].program;
}

} // namespace procfuzz
