#pragma once

#include "procfuzz/common.hpp"

#include <array>
#include <optional>
#include <string>

namespace procfuzz {

enum class PrivMode : u8 { User = 0, Supervisor = 1, Machine = 3 };

inline char priv_letter(PrivMode p) {
    switch (p) {
    case PrivMode::User: return 'U';
    case PrivMode::Supervisor: return 'S';
    case PrivMode::Machine: return 'M';
    }
    return '?';
}

// mstatus field masks
namespace mstatus {
constexpr u64 UIE = bit(0);
constexpr u64 SIE = bit(1);
constexpr u64 MIE = bit(3);
constexpr u64 UPIE = bit(4);
constexpr u64 SPIE = bit(5);
constexpr u64 MPIE = bit(7);
constexpr u64 SPP = bit(8);
constexpr u64 MPP = bit(11) | bit(12);
constexpr u64 FS = bit(13) | bit(14);
constexpr u64 XS = bit(15) | bit(16); // reads zero, no extension state
constexpr u64 MPRV = bit(17);
constexpr u64 SUM = bit(18);
constexpr u64 MXR = bit(19);
constexpr u64 TVM = bit(20);
constexpr u64 TW = bit(21);
constexpr u64 TSR = bit(22);
constexpr u64 UXL = bit(32) | bit(33); // fixed 64-bit
constexpr u64 SXL = bit(34) | bit(35); // fixed 64-bit
constexpr u64 SD = bit(63);

constexpr u64 WRITABLE = UIE | SIE | MIE | UPIE | SPIE | MPIE | SPP | MPP | FS | MPRV | SUM |
                         MXR | TVM | TW | TSR;
constexpr u64 XL_FIXED = (u64{2} << 32) | (u64{2} << 34);

constexpr unsigned FS_OFF = 0;
constexpr unsigned FS_INITIAL = 1;
constexpr unsigned FS_CLEAN = 2;
constexpr unsigned FS_DIRTY = 3;
} // namespace mstatus

// fflags accrued-exception bits (also sf32::Flag)
namespace fflags {
constexpr u64 NX = bit(0);
constexpr u64 UF = bit(1);
constexpr u64 OF = bit(2);
constexpr u64 DZ = bit(3);
constexpr u64 NV = bit(4);
} // namespace fflags

enum class TrapCause : u8 {
    Breakpoint = 3,
    IllegalInstruction = 2,
    LoadAddressMisaligned = 4,
    LoadAccessFault = 5,
    StoreAddressMisaligned = 6,
    StoreAccessFault = 7,
    EcallFromU = 8,
    EcallFromS = 9,
    EcallFromM = 11,
};

inline const char *trap_cause_name(TrapCause c) {
    switch (c) {
    case TrapCause::IllegalInstruction: return "illegal-instruction";
    case TrapCause::Breakpoint: return "breakpoint";
    case TrapCause::LoadAddressMisaligned: return "load-address-misaligned";
    case TrapCause::LoadAccessFault: return "load-access-fault";
    case TrapCause::StoreAddressMisaligned: return "store-address-misaligned";
    case TrapCause::StoreAccessFault: return "store-access-fault";
    case TrapCause::EcallFromU: return "ecall-from-u";
    case TrapCause::EcallFromS: return "ecall-from-s";
    case TrapCause::EcallFromM: return "ecall-from-m";
    }
    return "?";
}

inline std::optional<TrapCause> trap_cause_from_name(const std::string &s) {
    for (TrapCause c : {TrapCause::IllegalInstruction, TrapCause::Breakpoint,
                        TrapCause::LoadAddressMisaligned, TrapCause::LoadAccessFault,
                        TrapCause::StoreAddressMisaligned, TrapCause::StoreAccessFault,
                        TrapCause::EcallFromU, TrapCause::EcallFromS, TrapCause::EcallFromM})
        if (s == trap_cause_name(c)) return c;
    return std::nullopt;
}

// Delegatable exception bits; ecall-from-M can never be delegated.
constexpr u64 kMedelegMask = 0x3ff;

enum class CsrId : u8 {
    Fflags,
    Frm,
    Scounteren,
    Sepc,
    Scause,
    Mstatus,
    Medeleg,
    Mcounteren,
    Mepc,
    Mcause,
    Mhartid,
    Minstret,
    Count,
};

constexpr size_t kCsrCount = static_cast<size_t>(CsrId::Count);

struct CsrInfo {
    CsrId id;
    u16 address;
    const char *name;
    unsigned hex_width; // snapshot/concatenation width
};

// fcsr (0x003) is an alias view of frm|fflags, not separate storage.
constexpr u16 kFcsrAddr = 0x003;

inline const std::array<CsrInfo, kCsrCount> &csr_table() {
    static const std::array<CsrInfo, kCsrCount> table = {{
        {CsrId::Fflags, 0x001, "fflags", 2},
        {CsrId::Frm, 0x002, "frm", 2},
        {CsrId::Scounteren, 0x106, "scounteren", 16},
        {CsrId::Sepc, 0x141, "sepc", 16},
        {CsrId::Scause, 0x142, "scause", 16},
        {CsrId::Mstatus, 0x300, "mstatus", 16},
        {CsrId::Medeleg, 0x302, "medeleg", 16},
        {CsrId::Mcounteren, 0x306, "mcounteren", 16},
        {CsrId::Mepc, 0x341, "mepc", 16},
        {CsrId::Mcause, 0x342, "mcause", 16},
        {CsrId::Mhartid, 0xf14, "mhartid", 16},
        {CsrId::Minstret, 0xb02, "minstret", 16},
    }};
    return table;
}

inline const CsrInfo &csr_info(CsrId id) { return csr_table()[static_cast<size_t>(id)]; }

inline std::optional<CsrId> csr_from_address(u16 addr) {
    for (const auto &c : csr_table())
        if (c.address == addr) return c.id;
    return std::nullopt;
}

inline std::optional<CsrId> csr_from_name(const std::string &name) {
    for (const auto &c : csr_table())
        if (name == c.name) return c.id;
    return std::nullopt;
}

/// Minimum privilege encoded in a CSR address (bits 9:8).
inline PrivMode csr_min_priv(u16 addr) {
    switch ((addr >> 8) & 3) {
    case 0: return PrivMode::User;
    case 1: case 2: return PrivMode::Supervisor;
    default: return PrivMode::Machine;
    }
}

/// Addresses with bits 11:10 == 11 are architecturally read-only.
inline bool csr_addr_read_only(u16 addr) { return ((addr >> 10) & 3) == 3; }

// The modeled CSR file. Values are stored legalized; reads compose the
// constant fields (UXL/SXL, SD).
class CsrFile {
public:
    CsrFile() { storage_.fill(0); }

    u64 read(CsrId id) const {
        u64 v = storage_[static_cast<size_t>(id)];
        if (id == CsrId::Mstatus) {
            v |= mstatus::XL_FIXED;
            if (get_field(v, mstatus::FS) == mstatus::FS_DIRTY) v |= mstatus::SD;
        }
        return v;
    }

    void write(CsrId id, u64 v) { storage_[static_cast<size_t>(id)] = legalize(id, v); }

    /// Raw store bypassing legalization; the DUT's defect paths use it.
    void write_raw(CsrId id, u64 v) { storage_[static_cast<size_t>(id)] = v; }

    static u64 legalize(CsrId id, u64 v) {
        switch (id) {
        case CsrId::Mstatus: {
            v &= mstatus::WRITABLE;
            if (get_field(v, mstatus::MPP) == 2) v = set_field(v, mstatus::MPP, 0);
            return v;
        }
        case CsrId::Medeleg: return v & kMedelegMask;
        case CsrId::Mcause:
        case CsrId::Scause: return v & 0x1f; // WLRL, modeled cause codes fit 5 bits
        case CsrId::Sepc:
        case CsrId::Mepc: return v & ~u64{3};
        case CsrId::Mcounteren:
        case CsrId::Scounteren: return v & 0x7; // CY/TM/IR only
        case CsrId::Fflags: return v & 0x1f;
        case CsrId::Frm: return v & 0x7;
        case CsrId::Mhartid: return 0;
        default: return v;
        }
    }

    unsigned fs() const { return unsigned(get_field(read(CsrId::Mstatus), mstatus::FS)); }

    void set_fs(unsigned fs) {
        write_raw(CsrId::Mstatus,
                  set_field(storage_[size_t(CsrId::Mstatus)], mstatus::FS, fs));
    }

    bool operator==(const CsrFile &) const = default;

private:
    std::array<u64, kCsrCount> storage_;
};

} // namespace procfuzz
