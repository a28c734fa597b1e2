#pragma once

#include "procfuzz/common.hpp"
#include "procfuzz/csr.hpp"

#include <string>
#include <vector>

namespace procfuzz {

// Which CSRs the extended trace snapshots and how they partition into
// architectural-unit groups for transition counting.
struct CsrSelection {
    struct Group {
        std::string name;
        std::vector<CsrId> csrs; // in monitored order
    };

    std::string name;
    std::vector<CsrId> monitored; // snapshot order
    std::vector<Group> groups;    // exact partition of monitored

    bool operator==(const CsrSelection &other) const {
        return name == other.name && monitored == other.monitored;
    }

    size_t index_of(CsrId id) const {
        for (size_t i = 0; i < monitored.size(); ++i)
            if (monitored[i] == id) return i;
        return monitored.size();
    }

    void validate() const {
        std::vector<bool> seen(monitored.size(), false);
        size_t total = 0;
        for (const auto &g : groups) {
            for (CsrId id : g.csrs) {
                size_t i = index_of(id);
                if (i == monitored.size())
                    throw ConfigError("group '" + g.name + "' references unmonitored CSR");
                if (seen[i]) throw ConfigError("groups overlap on " + std::string(csr_info(id).name));
                seen[i] = true;
                ++total;
            }
        }
        if (total != monitored.size()) throw ConfigError("groups do not cover the selection");
    }
};

inline CsrSelection selection_selected() {
    CsrSelection s;
    s.name = "selected";
    s.monitored = {CsrId::Mstatus, CsrId::Mcause,     CsrId::Scause, CsrId::Medeleg,
                   CsrId::Mcounteren, CsrId::Scounteren, CsrId::Frm,    CsrId::Fflags};
    s.groups = {{"privileged",
                 {CsrId::Mstatus, CsrId::Mcause, CsrId::Scause, CsrId::Medeleg,
                  CsrId::Mcounteren, CsrId::Scounteren}},
                {"unprivileged-fp", {CsrId::Frm, CsrId::Fflags}}};
    return s;
}

inline CsrSelection selection_fp_csr() {
    CsrSelection s;
    s.name = "fp-csr";
    s.monitored = {CsrId::Frm, CsrId::Fflags};
    s.groups = {{"unprivileged-fp", {CsrId::Frm, CsrId::Fflags}}};
    return s;
}

inline CsrSelection selection_all_csr() {
    CsrSelection s;
    s.name = "all-csr";
    s.monitored = {CsrId::Mstatus, CsrId::Mcause,     CsrId::Scause,  CsrId::Medeleg,
                   CsrId::Mcounteren, CsrId::Scounteren, CsrId::Sepc,    CsrId::Mepc,
                   CsrId::Mhartid, CsrId::Minstret,   CsrId::Frm,     CsrId::Fflags};
    s.groups = {{"privileged",
                 {CsrId::Mstatus, CsrId::Mcause, CsrId::Scause, CsrId::Medeleg,
                  CsrId::Mcounteren, CsrId::Scounteren, CsrId::Sepc, CsrId::Mepc,
                  CsrId::Mhartid, CsrId::Minstret}},
                {"unprivileged-fp", {CsrId::Frm, CsrId::Fflags}}};
    return s;
}

inline CsrSelection selection_by_name(const std::string &name) {
    if (name == "selected") return selection_selected();
    if (name == "fp-csr") return selection_fp_csr();
    if (name == "all-csr") return selection_all_csr();
    throw ConfigError("unknown CSR selection: " + name);
}

} // namespace procfuzz
