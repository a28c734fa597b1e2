#pragma once

#include "procfuzz/execute.hpp"

namespace procfuzz {

// The reference ISA interpreter. Purely architectural, deterministic in its
// arguments, and the ground truth side of every differential comparison.

/// Executes the instruction at state.pc with golden semantics, advancing the
/// state and returning the extended trace entry.
inline std::pair<StepOutcome, ExtendedTraceEntry> golden_step(ArchState &state,
                                                              const CsrSelection &sel) {
    ExtendedTraceEntry entry;
    StepOutcome out = exec::step(state, sel, entry);
    return {out, entry};
}

inline ExtendedTraceLog golden_run(const Program &prog, const ExecLimits &limits,
                                   const CsrSelection &sel) {
    return exec::run(prog, limits, sel).log;
}

} // namespace procfuzz
