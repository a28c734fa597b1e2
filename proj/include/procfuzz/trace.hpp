#pragma once

#include "procfuzz/common.hpp"
#include "procfuzz/isa.hpp"
#include "procfuzz/selection.hpp"

#include <optional>
#include <vector>

namespace procfuzz {

struct Writeback {
    bool fp = false; // x- or f-register file
    u8 rd = 0;
    u64 value = 0;
    bool operator==(const Writeback &) const = default;
};

// One retired instruction of the extended trace log. The CSR snapshot is
// captured after retirement, in the selection's monitored order. The
// disassembly column is derived from the decoded instruction on output.
struct ExtendedTraceEntry {
    u64 pc = 0;
    u32 encoding = 0;
    Instruction instr;
    PrivMode priv = PrivMode::Machine; // mode the instruction executed in
    std::optional<Writeback> writeback;
    std::optional<TrapCause> trap;
    std::vector<u64> csr_snapshot;

    bool operator==(const ExtendedTraceEntry &) const = default;
};

enum class RunEnd : u8 {
    Exit,        // exit-convention ecall
    MaxRetired,  // retirement budget exhausted
    DoubleTrap,  // trap raised inside the machine trap handler
    FetchEscape, // pc left the memory region
};

inline const char *run_end_name(RunEnd e) {
    switch (e) {
    case RunEnd::Exit: return "exit";
    case RunEnd::MaxRetired: return "max-retired";
    case RunEnd::DoubleTrap: return "double-trap";
    case RunEnd::FetchEscape: return "fetch-escape";
    }
    return "?";
}

inline std::optional<RunEnd> run_end_from_name(const std::string &s) {
    for (RunEnd e : {RunEnd::Exit, RunEnd::MaxRetired, RunEnd::DoubleTrap, RunEnd::FetchEscape})
        if (s == run_end_name(e)) return e;
    return std::nullopt;
}

struct ExtendedTraceLog {
    std::string selection_name;
    std::vector<CsrId> monitored;
    RunEnd end = RunEnd::Exit;
    std::vector<ExtendedTraceEntry> entries;

    bool operator==(const ExtendedTraceLog &) const = default;

    bool matches(const CsrSelection &sel) const {
        return selection_name == sel.name && monitored == sel.monitored;
    }
};

/// Snapshot of a fresh reset state, used as the diff baseline for a log's
/// first entry.
inline std::vector<u64> reset_snapshot(const CsrSelection &sel) {
    CsrFile reset;
    std::vector<u64> v;
    v.reserve(sel.monitored.size());
    for (CsrId id : sel.monitored) v.push_back(reset.read(id));
    return v;
}

} // namespace procfuzz
