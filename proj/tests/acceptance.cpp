// Acceptance suite: exercises every project-level criterion at its stated
// tolerance and prints one pass/fail line per criterion.

#include "witnesses.hpp"

#include <procfuzz/campaign.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace procfuzz;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// Independent oracle: per-group diff of consecutive concatenated snapshots.
std::vector<TransitionTuple> oracle_extract(const ExtendedTraceLog &log,
                                            const CsrSelection &sel) {
    std::vector<TransitionTuple> out;
    auto concat = [&](const CsrSelection::Group &g, const std::vector<u64> &snap) {
        std::string s;
        for (CsrId id : g.csrs) s += to_hex(snap[sel.index_of(id)], csr_info(id).hex_width);
        return s;
    };
    std::vector<u64> prev = reset_snapshot(sel);
    for (const auto &e : log.entries) {
        for (const auto &g : sel.groups) {
            std::string s0 = concat(g, prev);
            std::string s1 = concat(g, e.csr_snapshot);
            if (s0 != s1) out.push_back({g.name, mnemonic_text(e.instr.mnemonic), s0, s1});
        }
        prev = e.csr_snapshot;
    }
    return out;
}

unsigned exposed_trials(const CampaignReport &rep, BugId bug) {
    unsigned n = 0;
    for (const auto &t : rep.trials)
        if (t.exposures.count(bug_name(bug))) ++n;
    return n;
}

// ---- criteria ----

bool c1_bug_free_soundness(std::string &detail) {
    Timer t;
    GenConfig cfg = GenConfig::for_selection(selection_selected());
    DutConfig dut;
    Rng rng(0xacce0101);
    size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        Program p = gen_random_program(rng.next(), cfg);
        auto glog = golden_run(p, {}, selection_selected());
        auto dres = dut_run(p, dut, {}, selection_selected());
        if (compare_traces(glog, dres.log)) ++mismatches;
    }
    detail = std::to_string(mismatches) + " mismatches over 1000 programs, " + fmt(t.seconds()) +
             "s";
    return mismatches == 0 && t.seconds() < 30.0;
}

bool c2_extraction_oracle(std::string &detail) {
    Rng rng(0xacce0102);
    size_t checked = 0;
    for (int i = 0; i < 500; ++i) {
        const CsrSelection sel = (i % 3 == 0)   ? selection_all_csr()
                                 : (i % 3 == 1) ? selection_fp_csr()
                                                : selection_selected();
        GenConfig cfg = GenConfig::for_selection(sel);
        Program p = gen_random_program(rng.next(), cfg);
        auto log = golden_run(p, {}, sel);
        auto got = extract_transitions(log, sel);
        auto want = oracle_extract(log, sel);
        if (got.size() != want.size()) {
            detail = "size mismatch on log " + std::to_string(i);
            return false;
        }
        for (size_t k = 0; k < got.size(); ++k) {
            if (!(got[k].tuple == want[k])) {
                detail = "tuple mismatch on log " + std::to_string(i);
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " tuples over 500 logs, exact";
    return true;
}

bool c3_worked_example(std::string &detail) {
    CsrSelection sel = selection_selected();

    ArchState st;
    st.csrs.write_raw(CsrId::Mstatus, 0x6000);
    st.priv = PrivMode::Supervisor;
    if (st.csrs.read(CsrId::Mstatus) != 0x8000000a00006000ull) {
        detail = "crafted mstatus is not 0x8000000a00006000";
        return false;
    }
    Instruction nop;
    nop.mnemonic = Mnemonic::Addi;
    Instruction sret;
    sret.mnemonic = Mnemonic::Sret;
    st.mem.store(st.pc, encode(nop), 4);
    st.mem.store(st.pc + 4, encode(sret), 4);
    ExtendedTraceLog log;
    log.selection_name = sel.name;
    log.monitored = sel.monitored;
    for (int k = 0; k < 2; ++k) {
        ExtendedTraceEntry e;
        exec::step(st, sel, e);
        log.entries.push_back(e);
    }
    if (st.csrs.read(CsrId::Mstatus) != 0x8000000a00006020ull) {
        detail = "sret did not yield mstatus 0x8000000a00006020";
        return false;
    }
    bool sret_tuple = false;
    for (const auto &tr : extract_transitions(log, sel))
        if (tr.tuple.group == "privileged" && tr.tuple.mnemonic == "sret" &&
            tr.tuple.s0.substr(0, 16) == "8000000a00006000" &&
            tr.tuple.s1.substr(0, 16) == "8000000a00006020")
            sret_tuple = true;
    if (!sret_tuple) {
        detail = "missing (privileged, sret, 8000000a00006000.., 8000000a00006020..)";
        return false;
    }

    Program p = assemble(R"(procfuzz-program v1
.prologue
lui x31, 0x2
csrrs x0, mstatus, x31
.body
lui x5, 0x800
fmv.w.x f1, x5
lui x6, 0x40400
fmv.w.x f2, x6
fdiv.s f3, f1, f2
.epilogue
addi x10, x0, 0
ecall
)");
    auto runlog = golden_run(p, {}, sel);
    auto filtered = filter_explicit_writes(extract_transitions(runlog, sel), runlog, sel);
    bool fdiv_tuple = false;
    for (const auto &tr : filtered)
        if (tr.tuple.group == "unprivileged-fp" && tr.tuple.mnemonic == "fdiv.s" &&
            tr.tuple.s0 == "0000" && tr.tuple.s1 == "0003")
            fdiv_tuple = true;
    if (!fdiv_tuple) {
        detail = "missing (unprivileged-fp, fdiv.s, 0000, 0003)";
        return false;
    }
    detail = "sret mstatus 6000->6020 and (fdiv.s, 0000, 0003) exact";
    return true;
}

bool c4_guided_beats_blackbox(std::string &detail) {
    Timer t;
    const u64 seed = 0xacce0104;
    const u64 iters = 20000;
    CampaignConfig guided_cfg = make_campaign_config(CampaignMode::CsrTransition,
                                                     selection_selected(), all_bugs(), iters,
                                                     seed, 10);
    guided_cfg.jobs = 2;
    CampaignConfig blackbox_cfg = guided_cfg;
    blackbox_cfg.mode = CampaignMode::NoCov;

    CampaignReport guided = fuzz(guided_cfg);
    CampaignReport blackbox = fuzz(blackbox_cfg);

    unsigned lower = 0, total = 0, subset_violations = 0;
    std::string per_bug;
    for (BugId b : all_bugs()) {
        ++total;
        BugCostStats g = bug_cost_stats(guided, b);
        BugCostStats n = bug_cost_stats(blackbox, b);
        if (g.median_cost < n.median_cost) ++lower;
        if (n.exposed_trials > 0 && g.exposed_trials == 0) ++subset_violations;
        per_bug += std::string(" ") + bug_name(b) + "=" +
                   (g.median_cost < n.median_cost ? "guided" : "blackbox");
    }
    detail = std::to_string(lower) + "/" + std::to_string(total) +
             " bugs cheaper under guidance, subset violations " +
             std::to_string(subset_violations) + ", " + fmt(t.seconds()) + "s;" + per_bug;
    return lower >= 5 && subset_violations == 0 && t.seconds() < 600.0;
}

bool c5_transition_vs_value(std::string &detail) {
    // unit level: the Fig. 5 three-log walk
    CsrSelection sel = selection_selected();
    auto snap = [&](u64 ms) {
        std::vector<u64> s(sel.monitored.size(), 0);
        s[sel.index_of(CsrId::Mstatus)] = ms;
        return s;
    };
    auto entry = [&](Mnemonic m, u64 ms) {
        ExtendedTraceEntry e;
        e.instr.mnemonic = m;
        e.encoding = encode(e.instr);
        e.csr_snapshot = snap(ms);
        return e;
    };
    auto mklog = [&](std::vector<ExtendedTraceEntry> es) {
        ExtendedTraceLog log;
        log.selection_name = sel.name;
        log.monitored = sel.monitored;
        log.entries = std::move(es);
        return log;
    };
    auto logA = mklog({entry(Mnemonic::Mret, 0x2000), entry(Mnemonic::Mret, 0x4000)});
    auto logB = mklog({entry(Mnemonic::Mret, 0x2000), entry(Mnemonic::Mret, 0x6000)});
    auto logC = mklog({entry(Mnemonic::Mret, 0x2000), entry(Mnemonic::Mret, 0x4000),
                       entry(Mnemonic::Sret, 0x6000)});
    ValueCoverageMap vmap;
    value_coverage_is_interesting(vmap, logA, sel);
    value_coverage_is_interesting(vmap, logB, sel);
    auto [v_int, v_new] = value_coverage_is_interesting(vmap, logC, sel);
    TransitionMap tmap;
    is_interesting(tmap, extract_transitions(logA, sel));
    is_interesting(tmap, extract_transitions(logB, sel));
    auto [t_int, t_new] = is_interesting(tmap, extract_transitions(logC, sel));
    if (v_int || v_new != 0 || !t_int || t_new < 1) {
        detail = "unit-level Fig. 5 separation failed";
        return false;
    }

    // campaign level: the synthetic P1-edge bug; the budget sits between the
    // two modes' typical exposure iterations (pilot-calibrated)
    const u64 seed = 0xacce0105;
    const u64 iters = 5200;
    CampaignConfig tcfg = make_campaign_config(CampaignMode::CsrTransition, selection_selected(),
                                               {BugId::TransitionSensitiveSynthetic}, iters,
                                               seed, 10);
    tcfg.jobs = 2;
    CampaignConfig vcfg = tcfg;
    vcfg.mode = CampaignMode::ValueCov;
    unsigned t_exposed = exposed_trials(fuzz(tcfg), BugId::TransitionSensitiveSynthetic);
    unsigned v_exposed = exposed_trials(fuzz(vcfg), BugId::TransitionSensitiveSynthetic);
    detail = "unit exact; campaign csr-transition " + std::to_string(t_exposed) +
             "/10, value-cov " + std::to_string(v_exposed) + "/10";
    return t_exposed >= 8 && v_exposed < t_exposed;
}

bool c6_configuration_scoping(std::string &detail) {
    const u64 seed = 0xacce0106;
    const u64 iters = 20000;

    CampaignConfig fp_cfg = make_campaign_config(CampaignMode::CsrTransition, selection_fp_csr(),
                                                 {BugId::FflagsRawHazard}, iters, seed, 10);
    fp_cfg.jobs = 2;
    CampaignConfig sel_cfg = fp_cfg;
    sel_cfg.selection = selection_selected();
    sel_cfg.gen = GenConfig::for_selection(selection_selected());

    BugCostStats fp_stats = bug_cost_stats(fuzz(fp_cfg), BugId::FflagsRawHazard);
    BugCostStats sel_stats = bug_cost_stats(fuzz(sel_cfg), BugId::FflagsRawHazard);

    CampaignConfig sepc_cfg = make_campaign_config(CampaignMode::CsrTransition,
                                                   selection_fp_csr(),
                                                   {BugId::SepcLowBitsWritable}, iters, seed, 10);
    sepc_cfg.jobs = 2;
    unsigned sepc_exposed = exposed_trials(fuzz(sepc_cfg), BugId::SepcLowBitsWritable);

    detail = "fflags median cost fp-csr " + fmt(fp_stats.median_cost) + " vs selected " +
             fmt(sel_stats.median_cost) + "; sepc bug exposed in " +
             std::to_string(sepc_exposed) + "/10 fp-csr trials";
    return fp_stats.median_cost <= sel_stats.median_cost && sepc_exposed <= 4;
}

bool c7_all_csr_degradation(std::string &detail) {
    const u64 seed = 0xacce0107;
    const u64 iters = 5000;
    CampaignConfig all_cfg = make_campaign_config(CampaignMode::CsrTransition,
                                                  selection_all_csr(), {}, iters, seed, 1);
    CampaignConfig sel_cfg = make_campaign_config(CampaignMode::CsrTransition,
                                                  selection_selected(), {}, iters, seed, 1);
    CampaignReport all_rep = fuzz(all_cfg);
    CampaignReport sel_rep = fuzz(sel_cfg);
    double all_rate = double(all_rep.trials[0].interesting) / double(all_rep.trials[0].generated);
    double sel_rate = double(sel_rep.trials[0].interesting) / double(sel_rep.trials[0].generated);
    detail = "interesting rate all-csr " + fmt(all_rate) + ", selected " + fmt(sel_rate);
    return all_rate >= 0.99 && sel_rate < all_rate && sel_rate > 0.0 && sel_rate < 1.0;
}

bool c8_witness_suite(std::string &detail) {
    for (const auto &w : witnesses::all()) {
        auto pos = witnesses::replay(w.positive, {w.bug}, w.selection);
        if (!pos.mismatch || pos.mismatch->index != w.entry || pos.mismatch->field != w.field) {
            detail = std::string(bug_name(w.bug)) + " positive witness misbehaved";
            return false;
        }
        bool attributed = false;
        for (const auto &ev : pos.dut.triggers)
            if (ev.bug == w.bug && ev.entry_index == pos.mismatch->index) attributed = true;
        if (!attributed) {
            detail = std::string(bug_name(w.bug)) + " mismatch not attributable";
            return false;
        }
        auto neg = witnesses::replay(w.negative, {w.bug}, w.selection);
        if (neg.mismatch) {
            detail = std::string(bug_name(w.bug)) + " negative witness diverged";
            return false;
        }
    }
    detail = "7 positive and 7 negative witnesses exact";
    return true;
}

bool c9_format_round_trips(std::string &detail) {
    Rng rng(0xacce0109);
    for (int i = 0; i < 1000; ++i) {
        const CsrSelection sel = (i % 3 == 0)   ? selection_all_csr()
                                 : (i % 3 == 1) ? selection_fp_csr()
                                                : selection_selected();
        GenConfig cfg = GenConfig::for_selection(sel);
        Program p = gen_random_program(rng.next(), cfg);
        if (!(assemble(disassemble(p)) == p)) {
            detail = "program round-trip failed at " + std::to_string(i);
            return false;
        }
        auto log = golden_run(p, ExecLimits{256}, sel);
        if (!(parse_log(serialize_log(log)) == log)) {
            detail = "trace round-trip failed at " + std::to_string(i);
            return false;
        }
    }
    detail = "1000 program and 1000 trace round-trips lossless";
    return true;
}

} // namespace

int main() {
    struct Criterion {
        const char *name;
        std::function<bool(std::string &)> run;
    };
    const std::vector<Criterion> criteria = {
        {"bug-free differential soundness", c1_bug_free_soundness},
        {"transition-extraction oracle equivalence", c2_extraction_oracle},
        {"worked trace example values", c3_worked_example},
        {"guided beats blackbox", c4_guided_beats_blackbox},
        {"transitions-vs-values separation", c5_transition_vs_value},
        {"configuration-scoping effect", c6_configuration_scoping},
        {"all-csr degradation", c7_all_csr_degradation},
        {"witness suite", c8_witness_suite},
        {"format round-trips", c9_format_round_trips},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception &e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%zu] %-42s %s  (%s)\n", i + 1, criteria[i].name, ok ? "PASS" : "FAIL",
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
