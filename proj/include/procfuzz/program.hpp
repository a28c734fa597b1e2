#pragma once

#include "procfuzz/arch.hpp"
#include "procfuzz/isa.hpp"

#include <vector>

namespace procfuzz {

// A fuzzer test input: fixed harness prologue, mutable body, fixed exit
// epilogue. Only the body is ever mutated.
struct Program {
    std::vector<Instruction> prologue;
    std::vector<Instruction> body;
    std::vector<Instruction> epilogue;

    bool operator==(const Program &) const = default;

    size_t size() const { return prologue.size() + body.size() + epilogue.size(); }

    std::vector<Instruction> flatten() const {
        std::vector<Instruction> all;
        all.reserve(size());
        all.insert(all.end(), prologue.begin(), prologue.end());
        all.insert(all.end(), body.begin(), body.end());
        all.insert(all.end(), epilogue.begin(), epilogue.end());
        return all;
    }
};

/// The standard exit sequence: ecall with x10 = 0 terminates a run.
inline std::vector<Instruction> exit_epilogue() {
    Instruction clear{.mnemonic = Mnemonic::Addi, .rd = 10, .rs1 = 0, .imm = 0};
    Instruction ecall{.mnemonic = Mnemonic::Ecall};
    return {clear, ecall};
}

// Skip-and-record trap stubs: bump the return pc past the faulting
// instruction and resume. x31 is the stub scratch register.
inline std::vector<Instruction> machine_trap_stub() {
    return {
        Instruction{.mnemonic = Mnemonic::Csrrs, .rd = 31, .rs1 = 0, .csr = 0x341}, // mepc
        Instruction{.mnemonic = Mnemonic::Addi, .rd = 31, .rs1 = 31, .imm = 4},
        Instruction{.mnemonic = Mnemonic::Csrrw, .rd = 0, .rs1 = 31, .csr = 0x341},
        Instruction{.mnemonic = Mnemonic::Mret},
    };
}

inline std::vector<Instruction> supervisor_trap_stub() {
    return {
        Instruction{.mnemonic = Mnemonic::Csrrs, .rd = 31, .rs1 = 0, .csr = 0x141}, // sepc
        Instruction{.mnemonic = Mnemonic::Addi, .rd = 31, .rs1 = 31, .imm = 4},
        Instruction{.mnemonic = Mnemonic::Csrrw, .rd = 0, .rs1 = 31, .csr = 0x141},
        Instruction{.mnemonic = Mnemonic::Sret},
    };
}

constexpr size_t kPadTrampolines = 64;

/// Writes the program image and trap stubs into memory and resets the pc.
/// The image is followed by a small field of jump-to-exit trampolines so
/// stray control flow off the end of the body drains into the epilogue
/// instead of walking uninitialized memory. Throws ProgramLoadError when the
/// image does not fit below the stubs.
inline void load_program(const Program &prog, ArchState &state) {
    auto all = prog.flatten();
    if (kMemBase + (all.size() + kPadTrampolines) * 4 > kMachineTrapVector)
        throw ProgramLoadError("program image of " + std::to_string(all.size()) +
                               " instructions exceeds the memory region");
    u64 addr = kMemBase;
    for (const auto &in : all) {
        state.mem.store(addr, encode(in), 4);
        addr += 4;
    }
    u64 exit_addr = kMemBase + (prog.prologue.size() + prog.body.size()) * 4;
    for (size_t i = 0; i < kPadTrampolines; ++i) {
        Instruction tramp{.mnemonic = Mnemonic::Jal, .rd = 0,
                          .imm = i64(exit_addr) - i64(addr)};
        state.mem.store(addr, encode(tramp), 4);
        addr += 4;
    }
    addr = kMachineTrapVector;
    for (const auto &in : machine_trap_stub()) {
        state.mem.store(addr, encode(in), 4);
        addr += 4;
    }
    addr = kSupervisorTrapVector;
    for (const auto &in : supervisor_trap_stub()) {
        state.mem.store(addr, encode(in), 4);
        addr += 4;
    }
    state.pc = kMemBase;
}

} // namespace procfuzz
