#pragma once

#include "procfuzz/trace.hpp"

#include <optional>

namespace procfuzz {

enum class MismatchField : u8 { Pc, Encoding, Priv, Writeback, Csr, Trap, Truncated };

inline const char *mismatch_field_name(MismatchField f) {
    switch (f) {
    case MismatchField::Pc: return "pc";
    case MismatchField::Encoding: return "encoding";
    case MismatchField::Priv: return "priv";
    case MismatchField::Writeback: return "writeback";
    case MismatchField::Csr: return "csr";
    case MismatchField::Trap: return "trap";
    case MismatchField::Truncated: return "truncated";
    }
    return "?";
}

// First point of divergence between a golden and a DUT trace log. The two
// logs agree on every entry before `index`.
struct Mismatch {
    size_t index = 0;
    MismatchField field = MismatchField::Pc;
    std::string csr_name;   // set when field == Csr
    std::string golden_value;
    std::string dut_value;
};

namespace compare_detail {

inline std::string wb_text(const std::optional<Writeback> &wb) {
    if (!wb) return "-";
    return std::string(wb->fp ? "f" : "x") + std::to_string(wb->rd) + "=0x" +
           to_hex(wb->value, 16);
}

inline std::string trap_text(const std::optional<TrapCause> &t) {
    return t ? trap_cause_name(*t) : "-";
}

} // namespace compare_detail

/// Entry-by-entry comparison in (pc, encoding, priv, writeback, csr_snapshot,
/// trap) field order; a missing entry beyond the common prefix counts as a
/// divergence at the first absent index.
inline std::optional<Mismatch> compare_traces(const ExtendedTraceLog &golden,
                                              const ExtendedTraceLog &dut) {
    using namespace compare_detail;
    if (golden.selection_name != dut.selection_name || golden.monitored != dut.monitored)
        throw SelectionMismatch("logs recorded under different CSR selections: '" +
                                golden.selection_name + "' vs '" + dut.selection_name + "'");
    size_t common = std::min(golden.entries.size(), dut.entries.size());
    for (size_t i = 0; i < common; ++i) {
        const auto &g = golden.entries[i];
        const auto &d = dut.entries[i];
        if (g.pc != d.pc)
            return Mismatch{i, MismatchField::Pc, "", "0x" + to_hex(g.pc, 16), "0x" + to_hex(d.pc, 16)};
        if (g.encoding != d.encoding)
            return Mismatch{i, MismatchField::Encoding, "", "0x" + to_hex(g.encoding, 8),
                            "0x" + to_hex(d.encoding, 8)};
        if (g.priv != d.priv)
            return Mismatch{i, MismatchField::Priv, "", std::string(1, priv_letter(g.priv)),
                            std::string(1, priv_letter(d.priv))};
        if (g.writeback != d.writeback)
            return Mismatch{i, MismatchField::Writeback, "", wb_text(g.writeback),
                            wb_text(d.writeback)};
        for (size_t c = 0; c < g.csr_snapshot.size(); ++c) {
            if (g.csr_snapshot[c] != d.csr_snapshot[c])
                return Mismatch{i, MismatchField::Csr, csr_info(golden.monitored[c]).name,
                                "0x" + to_hex(g.csr_snapshot[c], 16),
                                "0x" + to_hex(d.csr_snapshot[c], 16)};
        }
        if (g.trap != d.trap)
            return Mismatch{i, MismatchField::Trap, "", trap_text(g.trap), trap_text(d.trap)};
    }
    if (golden.entries.size() != dut.entries.size())
        return Mismatch{common, MismatchField::Truncated, "",
                        std::to_string(golden.entries.size()) + " entries",
                        std::to_string(dut.entries.size()) + " entries"};
    return std::nullopt;
}

} // namespace procfuzz
