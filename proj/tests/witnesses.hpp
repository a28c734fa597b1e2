#pragma once

// Hand-written witness programs: for every injectable bug, a program whose
// trace diverges at a documented entry and field, and a negative twin that
// avoids the trigger condition.

#include <procfuzz/procfuzz.hpp>

namespace witnesses {

using namespace procfuzz;

struct Witness {
    BugId bug;
    const char *positive;
    const char *negative;
    const char *selection;       // selection the documented field shows under
    MismatchField field;         // expected first divergent field
    size_t entry;                // expected first divergent entry index
};

// fp flag write immediately followed by an fflags read: the DUT returns the
// pre-divide flags.
inline constexpr const char *kFflagsRawPos = R"(procfuzz-program v1
.prologue
lui x31, 0x2
csrrs x0, mstatus, x31
.body
lui x5, 0x3f800
fmv.w.x f1, x5
fmv.w.x f2, x0
fdiv.s f3, f1, f2
csrrs x1, fflags, x0
.epilogue
addi x10, x0, 0
ecall
)";

// the read sits past the hazard window
inline constexpr const char *kFflagsRawNeg = R"(procfuzz-program v1
.prologue
lui x31, 0x2
csrrs x0, mstatus, x31
.body
lui x5, 0x3f800
fmv.w.x f1, x5
fmv.w.x f2, x0
fdiv.s f3, f1, f2
addi x6, x5, 1
addi x7, x5, 2
addi x8, x5, 3
csrrs x1, fflags, x0
.epilogue
addi x10, x0, 0
ecall
)";

// fcsr-class access with mstatus.FS = 0: golden traps, the DUT completes and
// dirties FS.
inline constexpr const char *kFsWhenOffPos = R"(procfuzz-program v1
.prologue
.body
csrrwi x1, fflags, 0
.epilogue
addi x10, x0, 0
ecall
)";

inline constexpr const char *kFsWhenOffNeg = R"(procfuzz-program v1
.prologue
lui x31, 0x2
csrrs x0, mstatus, x31
.body
csrrwi x1, fflags, 0
.epilogue
addi x10, x0, 0
ecall
)";

// sepc retains its low bits on an explicit write (visible in the snapshot
// under all-csr, and through the read-back writeback under any selection).
inline constexpr const char *kSepcLowBitsPos = R"(procfuzz-program v1
.prologue
.body
addi x1, x0, 7
csrrw x0, sepc, x1
csrrs x2, sepc, x0
.epilogue
addi x10, x0, 0
ecall
)";

inline constexpr const char *kSepcLowBitsNeg = R"(procfuzz-program v1
.prologue
.body
addi x1, x0, 8
csrrw x0, sepc, x1
csrrs x2, sepc, x0
.epilogue
addi x10, x0, 0
ecall
)";

// machine-mode write to the read-only mhartid
inline constexpr const char *kReadOnlyWritePos = R"(procfuzz-program v1
.prologue
.body
csrrw x1, mhartid, x2
.epilogue
addi x10, x0, 0
ecall
)";

inline constexpr const char *kReadOnlyWriteNeg = R"(procfuzz-program v1
.prologue
.body
csrrs x1, mhartid, x0
.epilogue
addi x10, x0, 0
ecall
)";

// div with rd=x0 immediately followed by an x0 read
inline constexpr const char *kZeroRegPos = R"(procfuzz-program v1
.prologue
.body
addi x5, x0, 7
addi x6, x0, 2
div x0, x5, x6
addi x7, x0, 0
.epilogue
addi x10, x0, 0
ecall
)";

inline constexpr const char *kZeroRegNeg = R"(procfuzz-program v1
.prologue
.body
addi x5, x0, 7
addi x6, x0, 2
div x1, x5, x6
addi x7, x0, 0
.epilogue
addi x10, x0, 0
ecall
)";

// value-preserving fflags write with FS clean: golden keeps FS, the DUT
// gratuitously dirties it.
inline constexpr const char *kFsGratuitousPos = R"(procfuzz-program v1
.prologue
lui x31, 0x2
csrrs x0, mstatus, x31
.body
csrrw x0, fflags, x0
.epilogue
addi x10, x0, 0
ecall
)";

inline constexpr const char *kFsGratuitousNeg = R"(procfuzz-program v1
.prologue
lui x31, 0x2
csrrs x0, mstatus, x31
.body
csrrwi x0, fflags, 1
.epilogue
addi x10, x0, 0
ecall
)";

// P1 edge: M -> S via mret, S -> U via sret, then the first writeback in U is
// corrupted.
inline constexpr const char *kSyntheticP1 = R"(procfuzz-program v1
.prologue
.body
lui x1, 0x1
srli x1, x1, 1
csrrs x0, mstatus, x1
auipc x2, 0
addi x2, x2, 16
csrrw x0, mepc, x2
mret
auipc x3, 0
addi x3, x3, 16
csrrw x0, sepc, x3
sret
addi x4, x0, 5
.epilogue
addi x10, x0, 0
ecall
)";

// P2 edge: U entered directly from M; no corruption.
inline constexpr const char *kSyntheticP2 = R"(procfuzz-program v1
.prologue
.body
auipc x2, 0
addi x2, x2, 16
csrrw x0, mepc, x2
mret
addi x4, x0, 5
.epilogue
addi x10, x0, 0
ecall
)";

// N1 without the P1 edge: S entered via mret, no sret afterwards.
inline constexpr const char *kSyntheticN1Only = R"(procfuzz-program v1
.prologue
.body
lui x1, 0x1
srli x1, x1, 1
csrrs x0, mstatus, x1
auipc x2, 0
addi x2, x2, 16
csrrw x0, mepc, x2
mret
addi x4, x0, 5
.epilogue
addi x10, x0, 0
ecall
)";

inline const std::vector<Witness> &all() {
    static const std::vector<Witness> w = {
        {BugId::FflagsRawHazard, kFflagsRawPos, kFflagsRawNeg, "selected",
         MismatchField::Writeback, 6},
        {BugId::FsSetOnFcsrWriteWhenOff, kFsWhenOffPos, kFsWhenOffNeg, "selected",
         MismatchField::Writeback, 0},
        {BugId::SepcLowBitsWritable, kSepcLowBitsPos, kSepcLowBitsNeg, "all-csr",
         MismatchField::Csr, 1},
        {BugId::ReadOnlyCsrWriteSilent, kReadOnlyWritePos, kReadOnlyWriteNeg, "selected",
         MismatchField::Writeback, 0},
        {BugId::ZeroRegBypassLeak, kZeroRegPos, kZeroRegNeg, "selected",
         MismatchField::Writeback, 3},
        {BugId::FsGratuitousDirty, kFsGratuitousPos, kFsGratuitousNeg, "selected",
         MismatchField::Csr, 2},
        {BugId::TransitionSensitiveSynthetic, kSyntheticP1, kSyntheticP2, "selected",
         MismatchField::Writeback, 11},
    };
    return w;
}

struct ReplayResult {
    ExtendedTraceLog golden;
    DutRunResult dut;
    std::optional<Mismatch> mismatch;
};

inline ReplayResult replay(const char *text, std::vector<BugId> bugs,
                           const std::string &selection_name = "selected") {
    Program prog = assemble(text);
    CsrSelection sel = selection_by_name(selection_name);
    DutConfig cfg;
    cfg.enabled_bugs = std::move(bugs);
    ReplayResult r;
    r.golden = golden_run(prog, {}, sel);
    r.dut = dut_run(prog, cfg, {}, sel);
    r.mismatch = compare_traces(r.golden, r.dut.log);
    return r;
}

} // namespace witnesses
