#pragma once

#include "procfuzz/arch.hpp"
#include "procfuzz/bugs.hpp"
#include "procfuzz/isa.hpp"
#include "procfuzz/program.hpp"
#include "procfuzz/softfloat.hpp"
#include "procfuzz/trace.hpp"

#include <vector>

namespace procfuzz {

struct ExecLimits {
    u64 max_retired = 1024;
    // Retirement-counter seed: a campaign session keeps counting across runs,
    // which is what makes minstret-monitoring degenerate under all-csr.
    u64 instret_base = 0;
};

enum class StepOutcome : u8 { Normal, Exit, FetchEscape, DoubleTrap };

namespace exec {

// Mutable defect machinery for a DUT run. A null pointer (or empty bug set)
// selects golden semantics; the bug-free-equivalence property pins the two
// paths together.
struct DefectState {
    const DutConfig *cfg = nullptr;

    struct Slot {
        bool fflags_writer = false;
        u64 pre_fflags = 0;
        bool div_to_x0 = false;
        u64 div_result = 0;
    };
    std::vector<Slot> window; // last hazard_window retirements, oldest first
    Slot pending;             // effects of the instruction in flight

    // Fig. 5 synthetic-bug trajectory: N1 is an S episode entered via mret,
    // the P1 edge is an sret from such an episode.
    bool s_entered_via_mret = false;
    bool corrupt_next_writeback = false;

    std::vector<TriggerEvent> *events = nullptr;
    size_t entry_index = 0;

    bool on(BugId b) const { return cfg && cfg->enabled(b); }

    void record(BugId b) {
        if (events) events->push_back({entry_index, b});
    }

    void retire() {
        if (!cfg) return;
        window.push_back(pending);
        pending = {};
        while (window.size() > cfg->hazard_window) window.erase(window.begin());
    }

    void flush() { // traps drain the in-flight window
        window.clear();
        pending = {};
    }
};

inline void take_trap(ArchState &st, TrapCause cause, u64 epc, DefectState *dft) {
    u64 c = u64(cause);
    u64 ms = st.csrs.read(CsrId::Mstatus);
    bool delegate =
        st.priv != PrivMode::Machine && ((st.csrs.read(CsrId::Medeleg) >> c) & 1);
    if (delegate) {
        st.csrs.write(CsrId::Scause, c);
        st.csrs.write(CsrId::Sepc, epc);
        ms = set_field(ms, mstatus::SPIE, get_field(ms, mstatus::SIE));
        ms = set_field(ms, mstatus::SIE, 0);
        ms = set_field(ms, mstatus::SPP, st.priv == PrivMode::Supervisor ? 1 : 0);
        st.priv = PrivMode::Supervisor;
        st.pc = kSupervisorTrapVector;
        if (dft) dft->s_entered_via_mret = false;
    } else {
        st.csrs.write(CsrId::Mcause, c);
        st.csrs.write(CsrId::Mepc, epc);
        ms = set_field(ms, mstatus::MPIE, get_field(ms, mstatus::MIE));
        ms = set_field(ms, mstatus::MIE, 0);
        ms = set_field(ms, mstatus::MPP, u64(st.priv));
        st.priv = PrivMode::Machine;
        st.pc = kMachineTrapVector;
    }
    st.csrs.write(CsrId::Mstatus, ms);
    if (dft) dft->flush();
}

/// Executes the instruction at state.pc and appends nothing; the caller owns
/// the log. The returned entry carries the post-retirement CSR snapshot.
inline StepOutcome step(ArchState &st, const CsrSelection &sel, ExtendedTraceEntry &entry,
                        DefectState *dft = nullptr) {
    if (!st.mem.in_range(st.pc, 4)) return StepOutcome::FetchEscape;

    const u64 pc = st.pc;
    const u32 word = u32(st.mem.load(pc, 4));
    const Instruction in = decode(word);
    const bool in_machine_stub = pc >= kMachineTrapVector && pc < kMachineTrapVector + 16;

    entry = {};
    entry.pc = pc;
    entry.encoding = word;
    entry.instr = in;
    entry.priv = st.priv;

    StepOutcome outcome = StepOutcome::Normal;
    bool trapped = false;
    bool wrote_minstret = false;

    auto trap = [&](TrapCause cause) {
        entry.trap = cause;
        trapped = true;
        take_trap(st, cause, pc, dft);
        if (in_machine_stub) outcome = StepOutcome::DoubleTrap;
    };

    // Integer operand read; the zero-register bypass leak hooks in here.
    auto rx = [&](unsigned r) -> u64 {
        if (r == 0 && dft && dft->on(BugId::ZeroRegBypassLeak)) {
            for (auto it = dft->window.rbegin(); it != dft->window.rend(); ++it) {
                if (it->div_to_x0) {
                    if (it->div_result != 0) dft->record(BugId::ZeroRegBypassLeak);
                    return it->div_result;
                }
            }
        }
        return st.read_x(r);
    };

    auto writeback_x = [&](u8 rd, u64 v) {
        if (rd == 0) return;
        if (dft && dft->corrupt_next_writeback) {
            v ^= 1;
            dft->corrupt_next_writeback = false;
            dft->record(BugId::TransitionSensitiveSynthetic);
        }
        st.write_x(rd, v);
        entry.writeback = Writeback{false, rd, v};
    };

    auto writeback_f = [&](u8 rd, u64 v) {
        if (dft && dft->corrupt_next_writeback) {
            v ^= 1;
            dft->corrupt_next_writeback = false;
            dft->record(BugId::TransitionSensitiveSynthetic);
        }
        st.f[rd] = v;
        entry.writeback = Writeback{true, rd, v};
        st.csrs.set_fs(mstatus::FS_DIRTY);
    };

    auto jump_to = [&](u64 target) { st.pc = target & ~u64{3}; };

    st.pc = pc + 4;

    switch (in.mnemonic) {
    case Mnemonic::Illegal: trap(TrapCause::IllegalInstruction); break;

    case Mnemonic::Lui: writeback_x(in.rd, u64(sign_extend(u64(in.imm) << 12, 32))); break;
    case Mnemonic::Auipc: writeback_x(in.rd, pc + u64(sign_extend(u64(in.imm) << 12, 32))); break;

    case Mnemonic::Jal:
        writeback_x(in.rd, pc + 4);
        jump_to(pc + u64(in.imm));
        break;
    case Mnemonic::Jalr: {
        u64 target = (rx(in.rs1) + u64(in.imm)) & ~u64{1};
        writeback_x(in.rd, pc + 4);
        jump_to(target);
        break;
    }

    case Mnemonic::Beq:
    case Mnemonic::Bne:
    case Mnemonic::Blt:
    case Mnemonic::Bge:
    case Mnemonic::Bltu:
    case Mnemonic::Bgeu: {
        u64 a = rx(in.rs1), b = rx(in.rs2);
        bool taken = false;
        switch (in.mnemonic) {
        case Mnemonic::Beq: taken = a == b; break;
        case Mnemonic::Bne: taken = a != b; break;
        case Mnemonic::Blt: taken = i64(a) < i64(b); break;
        case Mnemonic::Bge: taken = i64(a) >= i64(b); break;
        case Mnemonic::Bltu: taken = a < b; break;
        case Mnemonic::Bgeu: taken = a >= b; break;
        default: break;
        }
        if (taken) jump_to(pc + u64(in.imm));
        break;
    }

    case Mnemonic::Lb:
    case Mnemonic::Lh:
    case Mnemonic::Lw:
    case Mnemonic::Ld:
    case Mnemonic::Lbu:
    case Mnemonic::Lhu:
    case Mnemonic::Lwu: {
        static constexpr unsigned sizes[] = {1, 2, 4, 8, 1, 2, 4};
        unsigned idx = unsigned(in.mnemonic) - unsigned(Mnemonic::Lb);
        unsigned size = sizes[idx];
        u64 addr = rx(in.rs1) + u64(in.imm);
        if (addr & (size - 1)) {
            trap(TrapCause::LoadAddressMisaligned);
            break;
        }
        if (!st.mem.in_range(addr, size)) {
            trap(TrapCause::LoadAccessFault);
            break;
        }
        u64 v = st.mem.load(addr, size);
        if (idx < 4) v = u64(sign_extend(v, size * 8)); // sign-extending forms
        writeback_x(in.rd, v);
        break;
    }

    case Mnemonic::Sb:
    case Mnemonic::Sh:
    case Mnemonic::Sw:
    case Mnemonic::Sd: {
        unsigned size = 1u << (unsigned(in.mnemonic) - unsigned(Mnemonic::Sb));
        u64 addr = rx(in.rs1) + u64(in.imm);
        if (addr & (size - 1)) {
            trap(TrapCause::StoreAddressMisaligned);
            break;
        }
        if (!st.mem.in_range(addr, size)) {
            trap(TrapCause::StoreAccessFault);
            break;
        }
        st.mem.store(addr, rx(in.rs2), size);
        break;
    }

    case Mnemonic::Addi: writeback_x(in.rd, rx(in.rs1) + u64(in.imm)); break;
    case Mnemonic::Slti: writeback_x(in.rd, i64(rx(in.rs1)) < in.imm ? 1 : 0); break;
    case Mnemonic::Sltiu: writeback_x(in.rd, rx(in.rs1) < u64(in.imm) ? 1 : 0); break;
    case Mnemonic::Xori: writeback_x(in.rd, rx(in.rs1) ^ u64(in.imm)); break;
    case Mnemonic::Ori: writeback_x(in.rd, rx(in.rs1) | u64(in.imm)); break;
    case Mnemonic::Andi: writeback_x(in.rd, rx(in.rs1) & u64(in.imm)); break;
    case Mnemonic::Slli: writeback_x(in.rd, rx(in.rs1) << in.imm); break;
    case Mnemonic::Srli: writeback_x(in.rd, rx(in.rs1) >> in.imm); break;
    case Mnemonic::Srai: writeback_x(in.rd, u64(i64(rx(in.rs1)) >> in.imm)); break;

    case Mnemonic::Add: writeback_x(in.rd, rx(in.rs1) + rx(in.rs2)); break;
    case Mnemonic::Sub: writeback_x(in.rd, rx(in.rs1) - rx(in.rs2)); break;
    case Mnemonic::Sll: writeback_x(in.rd, rx(in.rs1) << (rx(in.rs2) & 63)); break;
    case Mnemonic::Slt: writeback_x(in.rd, i64(rx(in.rs1)) < i64(rx(in.rs2)) ? 1 : 0); break;
    case Mnemonic::Sltu: writeback_x(in.rd, rx(in.rs1) < rx(in.rs2) ? 1 : 0); break;
    case Mnemonic::Xor: writeback_x(in.rd, rx(in.rs1) ^ rx(in.rs2)); break;
    case Mnemonic::Srl: writeback_x(in.rd, rx(in.rs1) >> (rx(in.rs2) & 63)); break;
    case Mnemonic::Sra: writeback_x(in.rd, u64(i64(rx(in.rs1)) >> (rx(in.rs2) & 63))); break;
    case Mnemonic::Or: writeback_x(in.rd, rx(in.rs1) | rx(in.rs2)); break;
    case Mnemonic::And: writeback_x(in.rd, rx(in.rs1) & rx(in.rs2)); break;

    case Mnemonic::Addiw: writeback_x(in.rd, u64(sign_extend(rx(in.rs1) + u64(in.imm), 32))); break;
    case Mnemonic::Slliw: writeback_x(in.rd, u64(sign_extend(rx(in.rs1) << in.imm, 32))); break;
    case Mnemonic::Srliw:
        writeback_x(in.rd, u64(sign_extend(u64(u32(rx(in.rs1))) >> in.imm, 32)));
        break;
    case Mnemonic::Sraiw:
        writeback_x(in.rd, u64(sign_extend(u64(u32(i32(u32(rx(in.rs1))) >> in.imm)), 32)));
        break;
    case Mnemonic::Addw: writeback_x(in.rd, u64(sign_extend(rx(in.rs1) + rx(in.rs2), 32))); break;
    case Mnemonic::Subw: writeback_x(in.rd, u64(sign_extend(rx(in.rs1) - rx(in.rs2), 32))); break;
    case Mnemonic::Sllw:
        writeback_x(in.rd, u64(sign_extend(rx(in.rs1) << (rx(in.rs2) & 31), 32)));
        break;
    case Mnemonic::Srlw:
        writeback_x(in.rd, u64(sign_extend(u64(u32(rx(in.rs1))) >> (rx(in.rs2) & 31), 32)));
        break;
    case Mnemonic::Sraw:
        writeback_x(in.rd,
                    u64(sign_extend(u64(u32(i32(u32(rx(in.rs1))) >> (rx(in.rs2) & 31))), 32)));
        break;

    case Mnemonic::Fence: break;

    case Mnemonic::Mul: writeback_x(in.rd, rx(in.rs1) * rx(in.rs2)); break;
    case Mnemonic::Mulh:
        writeback_x(in.rd, u64((__int128(i64(rx(in.rs1))) * __int128(i64(rx(in.rs2)))) >> 64));
        break;
    case Mnemonic::Mulhsu:
        writeback_x(in.rd, u64((__int128(i64(rx(in.rs1))) * __int128(rx(in.rs2))) >> 64));
        break;
    case Mnemonic::Mulhu:
        writeback_x(in.rd, u64(((unsigned __int128)rx(in.rs1) * rx(in.rs2)) >> 64));
        break;
    case Mnemonic::Div:
    case Mnemonic::Divu:
    case Mnemonic::Rem:
    case Mnemonic::Remu:
    case Mnemonic::Divw:
    case Mnemonic::Divuw:
    case Mnemonic::Remw:
    case Mnemonic::Remuw: {
        u64 a = rx(in.rs1), b = rx(in.rs2);
        u64 v = 0;
        switch (in.mnemonic) {
        case Mnemonic::Div:
            v = b == 0 ? ~u64{0}
                : (i64(a) == INT64_MIN && i64(b) == -1) ? a
                                                        : u64(i64(a) / i64(b));
            break;
        case Mnemonic::Divu: v = b == 0 ? ~u64{0} : a / b; break;
        case Mnemonic::Rem:
            v = b == 0 ? a : (i64(a) == INT64_MIN && i64(b) == -1) ? 0 : u64(i64(a) % i64(b));
            break;
        case Mnemonic::Remu: v = b == 0 ? a : a % b; break;
        case Mnemonic::Divw: {
            i32 a32 = i32(u32(a)), b32 = i32(u32(b));
            i32 r = b32 == 0 ? -1 : (a32 == INT32_MIN && b32 == -1) ? a32 : a32 / b32;
            v = u64(i64(r));
            break;
        }
        case Mnemonic::Divuw: {
            u32 a32 = u32(a), b32 = u32(b);
            v = u64(sign_extend(b32 == 0 ? ~u32{0} : a32 / b32, 32));
            break;
        }
        case Mnemonic::Remw: {
            i32 a32 = i32(u32(a)), b32 = i32(u32(b));
            i32 r = b32 == 0 ? a32 : (a32 == INT32_MIN && b32 == -1) ? 0 : a32 % b32;
            v = u64(i64(r));
            break;
        }
        case Mnemonic::Remuw: {
            u32 a32 = u32(a), b32 = u32(b);
            v = u64(sign_extend(b32 == 0 ? a32 : a32 % b32, 32));
            break;
        }
        default: break;
        }
        // Discarded divide results linger in the DUT bypass network.
        if (in.rd == 0 && dft && dft->on(BugId::ZeroRegBypassLeak) &&
            in.mnemonic != Mnemonic::Mul) {
            dft->pending.div_to_x0 = true;
            dft->pending.div_result = v;
        }
        writeback_x(in.rd, v);
        break;
    }

    case Mnemonic::Ecall: {
        // Harness exit convention: ecall with x10 = 0 ends the run cleanly.
        if (st.read_x(10) == 0) {
            outcome = StepOutcome::Exit;
            break;
        }
        switch (st.priv) {
        case PrivMode::User: trap(TrapCause::EcallFromU); break;
        case PrivMode::Supervisor: trap(TrapCause::EcallFromS); break;
        case PrivMode::Machine: trap(TrapCause::EcallFromM); break;
        }
        break;
    }
    case Mnemonic::Ebreak: trap(TrapCause::Breakpoint); break;

    case Mnemonic::Mret: {
        if (st.priv != PrivMode::Machine) {
            trap(TrapCause::IllegalInstruction);
            break;
        }
        u64 ms = st.csrs.read(CsrId::Mstatus);
        auto target = PrivMode(get_field(ms, mstatus::MPP));
        ms = set_field(ms, mstatus::MIE, get_field(ms, mstatus::MPIE));
        ms = set_field(ms, mstatus::MPIE, 1);
        ms = set_field(ms, mstatus::MPP, u64(PrivMode::User));
        if (target != PrivMode::Machine) ms = set_field(ms, mstatus::MPRV, 0);
        st.csrs.write(CsrId::Mstatus, ms);
        st.priv = target;
        if (dft) dft->s_entered_via_mret = (target == PrivMode::Supervisor);
        jump_to(st.csrs.read(CsrId::Mepc));
        break;
    }
    case Mnemonic::Sret: {
        if (st.priv == PrivMode::User ||
            (st.priv == PrivMode::Supervisor &&
             get_field(st.csrs.read(CsrId::Mstatus), mstatus::TSR))) {
            trap(TrapCause::IllegalInstruction);
            break;
        }
        u64 ms = st.csrs.read(CsrId::Mstatus);
        auto target = get_field(ms, mstatus::SPP) ? PrivMode::Supervisor : PrivMode::User;
        ms = set_field(ms, mstatus::SIE, get_field(ms, mstatus::SPIE));
        ms = set_field(ms, mstatus::SPIE, 1);
        ms = set_field(ms, mstatus::SPP, 0);
        ms = set_field(ms, mstatus::MPRV, 0);
        st.csrs.write(CsrId::Mstatus, ms);
        if (dft) {
            if (st.priv == PrivMode::Supervisor && target == PrivMode::User &&
                dft->s_entered_via_mret && dft->on(BugId::TransitionSensitiveSynthetic))
                dft->corrupt_next_writeback = true;
            if (target == PrivMode::Supervisor) dft->s_entered_via_mret = false;
        }
        st.priv = target;
        jump_to(st.csrs.read(CsrId::Sepc));
        break;
    }
    case Mnemonic::Wfi: {
        // Modeled as a no-op; TW still gates it below machine mode.
        if (st.priv != PrivMode::Machine &&
            get_field(st.csrs.read(CsrId::Mstatus), mstatus::TW))
            trap(TrapCause::IllegalInstruction);
        break;
    }

    case Mnemonic::Csrrw:
    case Mnemonic::Csrrs:
    case Mnemonic::Csrrc:
    case Mnemonic::Csrrwi:
    case Mnemonic::Csrrsi:
    case Mnemonic::Csrrci: {
        const u16 addr = in.csr;
        const bool is_write = csr_instr_writes(in);
        const bool is_fcsr_class = addr == kFcsrAddr || addr == csr_info(CsrId::Fflags).address ||
                                   addr == csr_info(CsrId::Frm).address;
        const bool implemented = addr == kFcsrAddr || csr_from_address(addr).has_value();

        if (!implemented || csr_min_priv(addr) > st.priv) {
            trap(TrapCause::IllegalInstruction);
            break;
        }
        bool bug5_fired = false;
        if (is_write && csr_addr_read_only(addr)) {
            if (dft && dft->on(BugId::ReadOnlyCsrWriteSilent) &&
                addr == csr_info(CsrId::Mhartid).address) {
                dft->record(BugId::ReadOnlyCsrWriteSilent);
                bug5_fired = true; // complete without the exception, drop the write
            } else {
                trap(TrapCause::IllegalInstruction);
                break;
            }
        }
        bool bug3_fired = false;
        if (is_fcsr_class && st.csrs.fs() == mstatus::FS_OFF) {
            if (dft && dft->on(BugId::FsSetOnFcsrWriteWhenOff)) {
                dft->record(BugId::FsSetOnFcsrWriteWhenOff);
                bug3_fired = true; // access proceeds, FS gets dirtied below
            } else {
                trap(TrapCause::IllegalInstruction);
                break;
            }
        }

        auto read_csr = [&]() -> u64 {
            if (addr == kFcsrAddr)
                return (st.csrs.read(CsrId::Frm) << 5) | st.csrs.read(CsrId::Fflags);
            return st.csrs.read(*csr_from_address(addr));
        };

        u64 old = read_csr();
        // RAW hazard on fflags: the read path sees the pre-accrual value while
        // a flag-writing fp instruction is still in flight.
        if (addr == csr_info(CsrId::Fflags).address && dft && dft->on(BugId::FflagsRawHazard)) {
            for (const auto &slot : dft->window) {
                if (slot.fflags_writer) {
                    if (slot.pre_fflags != old) dft->record(BugId::FflagsRawHazard);
                    old = slot.pre_fflags;
                    break;
                }
            }
        }

        if (is_write && !bug5_fired) {
            u64 operand = in.mnemonic == Mnemonic::Csrrw || in.mnemonic == Mnemonic::Csrrs ||
                                  in.mnemonic == Mnemonic::Csrrc
                              ? st.read_x(in.rs1)
                              : u64(in.rs1);
            u64 next = operand;
            if (in.mnemonic == Mnemonic::Csrrs || in.mnemonic == Mnemonic::Csrrsi)
                next = old | operand;
            if (in.mnemonic == Mnemonic::Csrrc || in.mnemonic == Mnemonic::Csrrci)
                next = old & ~operand;

            u64 before = read_csr();
            if (addr == kFcsrAddr) {
                st.csrs.write(CsrId::Frm, (next >> 5) & 7);
                st.csrs.write(CsrId::Fflags, next & 0x1f);
            } else {
                CsrId id = *csr_from_address(addr);
                if (id == CsrId::Sepc && dft && dft->on(BugId::SepcLowBitsWritable)) {
                    if (next & 3) dft->record(BugId::SepcLowBitsWritable);
                    st.csrs.write_raw(CsrId::Sepc, next);
                } else {
                    st.csrs.write(id, next);
                }
                if (id == CsrId::Minstret) wrote_minstret = true;
            }
            if (is_fcsr_class) {
                bool changed = read_csr() != before;
                bool gratuitous = dft && dft->on(BugId::FsGratuitousDirty);
                if (gratuitous && !changed && st.csrs.fs() != mstatus::FS_DIRTY &&
                    st.csrs.fs() != mstatus::FS_OFF)
                    dft->record(BugId::FsGratuitousDirty);
                if (changed || gratuitous || bug3_fired) st.csrs.set_fs(mstatus::FS_DIRTY);
            }
        } else if (bug3_fired) {
            st.csrs.set_fs(mstatus::FS_DIRTY);
        }

        // Reads of a dirty sepc expose the retained low bits.
        if (addr == csr_info(CsrId::Sepc).address && (old & 3) && dft &&
            dft->on(BugId::SepcLowBitsWritable))
            dft->record(BugId::SepcLowBitsWritable);

        bool does_read =
            !((in.mnemonic == Mnemonic::Csrrw || in.mnemonic == Mnemonic::Csrrwi) && in.rd == 0);
        if (does_read) writeback_x(in.rd, old);
        break;
    }

    case Mnemonic::FaddS:
    case Mnemonic::FsubS:
    case Mnemonic::FmulS:
    case Mnemonic::FdivS:
    case Mnemonic::FsqrtS: {
        if (st.csrs.fs() == mstatus::FS_OFF) {
            trap(TrapCause::IllegalInstruction);
            break;
        }
        unsigned rm = in.rm == 7 ? unsigned(st.csrs.read(CsrId::Frm)) : in.rm;
        if (rm > 4) {
            trap(TrapCause::IllegalInstruction);
            break;
        }
        u32 a = u32(st.f[in.rs1]);
        u32 b = u32(st.f[in.rs2]);
        unsigned flags = 0;
        u32 r = 0;
        switch (in.mnemonic) {
        case Mnemonic::FaddS: r = sf32::add(a, b, sf32::Round(rm), flags); break;
        case Mnemonic::FsubS: r = sf32::sub(a, b, sf32::Round(rm), flags); break;
        case Mnemonic::FmulS: r = sf32::mul(a, b, sf32::Round(rm), flags); break;
        case Mnemonic::FdivS: r = sf32::div(a, b, sf32::Round(rm), flags); break;
        case Mnemonic::FsqrtS: r = sf32::sqrt(a, sf32::Round(rm), flags); break;
        default: break;
        }
        if (flags) {
            u64 pre = st.csrs.read(CsrId::Fflags);
            if (dft && dft->on(BugId::FflagsRawHazard) && !dft->pending.fflags_writer) {
                dft->pending.fflags_writer = true;
                dft->pending.pre_fflags = pre;
            }
            st.csrs.write(CsrId::Fflags, pre | flags);
        }
        writeback_f(in.rd, 0xffffffff00000000ull | r);
        break;
    }
    case Mnemonic::FmvWX:
        if (st.csrs.fs() == mstatus::FS_OFF) {
            trap(TrapCause::IllegalInstruction);
            break;
        }
        writeback_f(in.rd, 0xffffffff00000000ull | u32(rx(in.rs1)));
        break;
    case Mnemonic::FmvXW:
        if (st.csrs.fs() == mstatus::FS_OFF) {
            trap(TrapCause::IllegalInstruction);
            break;
        }
        writeback_x(in.rd, u64(sign_extend(st.f[in.rs1], 32)));
        break;

    default: trap(TrapCause::IllegalInstruction); break;
    }

    if (!trapped && !wrote_minstret)
        st.csrs.write(CsrId::Minstret, st.csrs.read(CsrId::Minstret) + 1);

    entry.csr_snapshot.reserve(sel.monitored.size());
    for (CsrId id : sel.monitored) entry.csr_snapshot.push_back(st.csrs.read(id));

    if (dft) {
        if (!trapped) dft->retire(); // take_trap already flushed the window
        ++dft->entry_index;
    }
    return outcome;
}

struct RunResult {
    ExtendedTraceLog log;
};

inline RunResult run(const Program &prog, const ExecLimits &limits, const CsrSelection &sel,
                     DefectState *dft = nullptr) {
    if (prog.flatten().empty()) throw ProgramLoadError("empty program");
    ArchState st;
    load_program(prog, st);
    st.csrs.write(CsrId::Minstret, limits.instret_base);
    RunResult res;
    res.log.selection_name = sel.name;
    res.log.monitored = sel.monitored;
    res.log.end = RunEnd::MaxRetired;
    for (u64 retired = 0; retired < limits.max_retired; ++retired) {
        ExtendedTraceEntry entry;
        StepOutcome out = step(st, sel, entry, dft);
        if (out == StepOutcome::FetchEscape) {
            res.log.end = RunEnd::FetchEscape;
            break;
        }
        res.log.entries.push_back(std::move(entry));
        if (out == StepOutcome::Exit) {
            res.log.end = RunEnd::Exit;
            break;
        }
        if (out == StepOutcome::DoubleTrap) {
            res.log.end = RunEnd::DoubleTrap;
            break;
        }
    }
    return res;
}

} // namespace exec
} // namespace procfuzz
