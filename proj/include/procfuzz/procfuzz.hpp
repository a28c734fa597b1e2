#pragma once

#include "procfuzz/arch.hpp"
#include "procfuzz/bugs.hpp"
#include "procfuzz/campaign.hpp"
#include "procfuzz/common.hpp"
#include "procfuzz/compare.hpp"
#include "procfuzz/csr.hpp"
#include "procfuzz/dut_harness.hpp"
#include "procfuzz/execute.hpp"
#include "procfuzz/golden_sim.hpp"
#include "procfuzz/isa.hpp"
#include "procfuzz/mutator.hpp"
#include "procfuzz/program.hpp"
#include "procfuzz/selection.hpp"
#include "procfuzz/softfloat.hpp"
#include "procfuzz/trace.hpp"
#include "procfuzz/trace_io.hpp"
#include "procfuzz/transition.hpp"
