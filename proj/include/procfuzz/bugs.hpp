#pragma once

#include "procfuzz/common.hpp"

#include <optional>
#include <string>
#include <vector>

namespace procfuzz {

// Injectable defect catalog for the device-under-test interpreter. Each bug
// has a documented trigger condition and a trace-observable divergence.
enum class BugId : u8 {
    FflagsRawHazard,             // stale fflags read inside the hazard window
    FsSetOnFcsrWriteWhenOff,     // fcsr access with FS=0 dirties FS instead of trapping
    SepcLowBitsWritable,         // sepc retains its two low bits on explicit writes
    ReadOnlyCsrWriteSilent,      // mhartid writes complete without an exception
    ZeroRegBypassLeak,           // x0 reads see an in-flight div/rem result
    FsGratuitousDirty,           // value-preserving fcsr writes still dirty FS
    TransitionSensitiveSynthetic, // corrupts a writeback only on the N1->N2 edge
    Count,
};

constexpr size_t kBugCount = static_cast<size_t>(BugId::Count);

inline const char *bug_name(BugId b) {
    switch (b) {
    case BugId::FflagsRawHazard: return "fflags-raw-hazard";
    case BugId::FsSetOnFcsrWriteWhenOff: return "fs-set-on-fcsr-write-when-off";
    case BugId::SepcLowBitsWritable: return "sepc-low-bits-writable";
    case BugId::ReadOnlyCsrWriteSilent: return "read-only-csr-write-silent";
    case BugId::ZeroRegBypassLeak: return "zero-reg-bypass-leak";
    case BugId::FsGratuitousDirty: return "fs-gratuitous-dirty";
    case BugId::TransitionSensitiveSynthetic: return "transition-sensitive-synthetic";
    default: return "?";
    }
}

inline std::optional<BugId> bug_from_name(const std::string &s) {
    for (size_t i = 0; i < kBugCount; ++i)
        if (s == bug_name(BugId(i))) return BugId(i);
    return std::nullopt;
}

inline std::vector<BugId> all_bugs() {
    std::vector<BugId> v;
    for (size_t i = 0; i < kBugCount; ++i) v.push_back(BugId(i));
    return v;
}

struct DutConfig {
    std::vector<BugId> enabled_bugs;
    unsigned hazard_window = 3; // in-flight instructions for the RAW/bypass model
    unsigned slowdown_factor = 79; // simulated cost per DUT-retired instruction

    bool enabled(BugId b) const {
        for (BugId e : enabled_bugs)
            if (e == b) return true;
        return false;
    }
};

/// Recorded when a bug's trigger condition fires during a DUT run; the
/// campaign attributes mismatches to bugs through these.
struct TriggerEvent {
    size_t entry_index;
    BugId bug;
};

} // namespace procfuzz
