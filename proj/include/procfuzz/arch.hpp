#pragma once

#include "procfuzz/common.hpp"
#include "procfuzz/csr.hpp"

#include <cstring>
#include <vector>

namespace procfuzz {

// Flat little-endian memory region; the program image loads at its base.
constexpr u64 kMemBase = 0x80000000;
constexpr u64 kMemSize = 1 << 20;

// Hardwired trap vectors (mtvec/stvec are architecturally constant in this
// model; the loader places skip-and-record stubs here).
constexpr u64 kMachineTrapVector = kMemBase + kMemSize - 0x100;
constexpr u64 kSupervisorTrapVector = kMemBase + kMemSize - 0x80;

class Memory {
public:
    Memory() : bytes_(kMemSize, 0) {}

    bool in_range(u64 addr, u64 size) const {
        return addr >= kMemBase && addr - kMemBase + size <= kMemSize;
    }

    u64 load(u64 addr, unsigned size) const {
        u64 v = 0;
        std::memcpy(&v, &bytes_[addr - kMemBase], size);
        return v;
    }

    void store(u64 addr, u64 value, unsigned size) {
        std::memcpy(&bytes_[addr - kMemBase], &value, size);
    }

    bool operator==(const Memory &) const = default;

private:
    std::vector<u8> bytes_;
};

struct ArchState {
    u64 pc = kMemBase;
    u64 x[32] = {};
    u64 f[32] = {};
    CsrFile csrs;
    PrivMode priv = PrivMode::Machine;
    Memory mem;

    ArchState() {
        // UXL/SXL are constant-composed on read; everything else resets to 0.
        csrs.write_raw(CsrId::Mstatus, 0);
    }

    u64 read_x(unsigned i) const { return i == 0 ? 0 : x[i]; }
    void write_x(unsigned i, u64 v) {
        if (i != 0) x[i] = v;
    }
};

} // namespace procfuzz
