#pragma once

#include "procfuzz/common.hpp"
#include "procfuzz/trace.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>
#include <vector>

namespace procfuzz {

// The transition unit: extracts CSR transitions from extended trace logs,
// filters transitions caused solely by explicit status-CSR writes, groups
// them per architectural unit, and maintains the campaign-lifetime map that
// decides whether an input is interesting.

struct TransitionTuple {
    std::string group;
    std::string mnemonic; // operands excluded by construction
    std::string s0;       // concatenated pre-transition group values
    std::string s1;       // concatenated post-transition group values

    bool operator==(const TransitionTuple &) const = default;
};

struct ExtractedTransition {
    TransitionTuple tuple;
    size_t entry_index;
};

namespace tu_detail {

struct GroupLayout {
    std::string name;
    std::vector<size_t> index;    // positions in the monitored order
    std::vector<unsigned> width;  // hex digits per CSR
};

inline std::vector<GroupLayout> layouts(const CsrSelection &sel) {
    std::vector<GroupLayout> out;
    for (const auto &g : sel.groups) {
        GroupLayout l;
        l.name = g.name;
        for (CsrId id : g.csrs) {
            l.index.push_back(sel.index_of(id));
            l.width.push_back(csr_info(id).hex_width);
        }
        out.push_back(std::move(l));
    }
    return out;
}

inline bool group_changed(const GroupLayout &l, const std::vector<u64> &a,
                          const std::vector<u64> &b) {
    for (size_t i : l.index)
        if (a[i] != b[i]) return true;
    return false;
}

inline std::string concat(const GroupLayout &l, const std::vector<u64> &snap) {
    std::string s;
    for (size_t k = 0; k < l.index.size(); ++k) s += to_hex(snap[l.index[k]], l.width[k]);
    return s;
}

} // namespace tu_detail

/// Diffs consecutive snapshots per group; the first entry is compared against
/// the architectural reset snapshot. Output preserves log order.
inline std::vector<ExtractedTransition> extract_transitions(const ExtendedTraceLog &log,
                                                            const CsrSelection &sel) {
    if (!log.matches(sel))
        throw SelectionMismatch("log recorded under selection '" + log.selection_name +
                                "', not '" + sel.name + "'");
    auto groups = tu_detail::layouts(sel);
    std::vector<ExtractedTransition> out;
    std::vector<u64> reset = reset_snapshot(sel);
    const std::vector<u64> *prev = &reset;
    for (size_t k = 0; k < log.entries.size(); ++k) {
        const auto &entry = log.entries[k];
        for (const auto &g : groups) {
            if (!tu_detail::group_changed(g, *prev, entry.csr_snapshot)) continue;
            out.push_back({{g.name, mnemonic_text(entry.instr.mnemonic),
                            tu_detail::concat(g, *prev), tu_detail::concat(g, entry.csr_snapshot)},
                           k});
        }
        prev = &entry.csr_snapshot;
    }
    return out;
}

/// Status CSRs whose explicit writes the filter discards. fflags stays out:
/// explicit fflags writes are an ordinary software idiom and remain coverage.
inline bool is_status_csr(CsrId id) {
    return id == CsrId::Mstatus || id == CsrId::Mcause || id == CsrId::Scause;
}

/// Drops every transition caused solely by an explicit write to a status CSR
/// of its group; transitions with a co-occurring implicit change survive.
inline std::vector<ExtractedTransition>
filter_explicit_writes(const std::vector<ExtractedTransition> &transitions,
                       const ExtendedTraceLog &log, const CsrSelection &sel) {
    auto groups = tu_detail::layouts(sel);
    std::vector<u64> reset = reset_snapshot(sel);
    std::vector<ExtractedTransition> out;
    for (const auto &t : transitions) {
        const auto &entry = log.entries[t.entry_index];
        auto targets = csr_write_targets(entry.instr);
        const tu_detail::GroupLayout *layout = nullptr;
        for (const auto &g : groups)
            if (g.name == t.tuple.group) layout = &g;
        const std::vector<u64> &prev =
            t.entry_index == 0 ? reset : log.entries[t.entry_index - 1].csr_snapshot;

        bool solely_explicit_status = false;
        if (layout && !targets.empty()) {
            bool intersects_status = false;
            bool all_changes_explicit = true;
            for (size_t k = 0; k < layout->index.size(); ++k) {
                CsrId id = sel.monitored[layout->index[k]];
                bool written = false;
                for (CsrId w : targets)
                    if (w == id) written = true;
                bool changed = prev[layout->index[k]] != entry.csr_snapshot[layout->index[k]];
                if (written && is_status_csr(id)) intersects_status = true;
                if (changed && !(written && is_status_csr(id))) all_changes_explicit = false;
            }
            solely_explicit_status = intersects_status && all_changes_explicit;
        }
        if (!solely_explicit_status) out.push_back(t);
    }
    return out;
}

// Campaign-lifetime set of unique tuples; membership decides "interesting".
// Insert-only: empty at the start of a session and maintained throughout.
class TransitionMap {
public:
    bool insert(const TransitionTuple &t) {
        auto [it, fresh] = groups_[t.group].insert(t.mnemonic + "\t" + t.s0 + "\t" + t.s1);
        if (fresh) ++total_;
        return fresh;
    }

    bool contains(const TransitionTuple &t) const {
        auto g = groups_.find(t.group);
        return g != groups_.end() && g->second.count(t.mnemonic + "\t" + t.s0 + "\t" + t.s1);
    }

    size_t size() const { return total_; }

    size_t group_size(const std::string &group) const {
        auto g = groups_.find(group);
        return g == groups_.end() ? 0 : g->second.size();
    }

    /// Line-oriented export: `group<TAB>mnemonic<TAB>s0<TAB>s1`, sorted.
    std::string export_text() const {
        std::vector<std::string> lines;
        for (const auto &[group, keys] : groups_)
            for (const auto &key : keys) lines.push_back(group + "\t" + key);
        std::sort(lines.begin(), lines.end());
        std::string out;
        for (const auto &l : lines) {
            out += l;
            out += '\n';
        }
        return out;
    }

    static TransitionMap import_text(const std::string &text) {
        TransitionMap map;
        size_t lineno = 1;
        size_t pos = 0;
        while (pos < text.size()) {
            size_t eol = text.find('\n', pos);
            if (eol == std::string::npos) eol = text.size();
            std::string line = text.substr(pos, eol - pos);
            if (!line.empty()) {
                size_t a = line.find('\t');
                size_t b = line.find('\t', a + 1);
                size_t c = line.find('\t', b + 1);
                if (a == std::string::npos || b == std::string::npos || c == std::string::npos)
                    throw ParseError(lineno, 1, "expected group\\tmnemonic\\ts0\\ts1");
                map.insert({line.substr(0, a), line.substr(a + 1, b - a - 1),
                            line.substr(b + 1, c - b - 1), line.substr(c + 1)});
            }
            pos = eol + 1;
            ++lineno;
        }
        return map;
    }

private:
    std::map<std::string, std::unordered_set<std::string>> groups_;
    size_t total_ = 0;
};

/// Inserts all tuples absent from the map; the input is interesting when at
/// least one was new. Transitions must already be filtered.
inline std::pair<bool, size_t> is_interesting(TransitionMap &map,
                                              const std::vector<ExtractedTransition> &transitions) {
    size_t added = 0;
    for (const auto &t : transitions)
        if (map.insert(t.tuple)) ++added;
    return {added >= 1, added};
}

// Value-coverage baseline: the same pipeline keyed on the post-state alone
// (no S0, no mnemonic), mirroring a register-coverage-style metric that only
// stores the current state.
class ValueCoverageMap {
public:
    bool insert(const std::string &group, const std::string &s1) {
        auto [it, fresh] = groups_[group].insert(s1);
        if (fresh) ++total_;
        return fresh;
    }

    size_t size() const { return total_; }

private:
    std::map<std::string, std::unordered_set<std::string>> groups_;
    size_t total_ = 0;
};

inline std::pair<bool, size_t> value_coverage_is_interesting(ValueCoverageMap &map,
                                                             const ExtendedTraceLog &log,
                                                             const CsrSelection &sel) {
    auto transitions = filter_explicit_writes(extract_transitions(log, sel), log, sel);
    size_t added = 0;
    for (const auto &t : transitions)
        if (map.insert(t.tuple.group, t.tuple.s1)) ++added;
    return {added >= 1, added};
}

} // namespace procfuzz
