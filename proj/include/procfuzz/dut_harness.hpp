#pragma once

#include "procfuzz/execute.hpp"

namespace procfuzz {

// The device-under-test stand-in for RTL simulation: the architectural
// interpreter wrapped with the defect catalog and a bounded in-flight window
// that models the pipeline hazards of bugs 2 and 6. With no bugs enabled the
// output is entry-for-entry equal to golden_run.

struct DutRunResult {
    ExtendedTraceLog log;
    std::vector<TriggerEvent> triggers;
};

inline DutRunResult dut_run(const Program &prog, const DutConfig &cfg, const ExecLimits &limits,
                            const CsrSelection &sel) {
    DutRunResult res;
    exec::DefectState defects;
    defects.cfg = &cfg;
    defects.events = &res.triggers;
    res.log = exec::run(prog, limits, sel, &defects).log;
    return res;
}

} // namespace procfuzz
