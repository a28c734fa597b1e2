#pragma once

#include "procfuzz/compare.hpp"
#include "procfuzz/dut_harness.hpp"
#include "procfuzz/golden_sim.hpp"
#include "procfuzz/mutator.hpp"
#include "procfuzz/transition.hpp"

#include <json.hpp>

#include <future>
#include <map>
#include <optional>

namespace procfuzz {

// The full Fig. 3 loop: mutate, golden-simulate, transition-unit triage,
// conditional DUT simulation, trace comparison. Simulated cost charges one
// unit per golden-retired instruction and slowdown_factor units per
// DUT-retired instruction, mirroring the ISA-vs-RTL asymmetry.

enum class CampaignMode : u8 { CsrTransition, NoCov, ValueCov };

inline const char *campaign_mode_name(CampaignMode m) {
    switch (m) {
    case CampaignMode::CsrTransition: return "csr-transition";
    case CampaignMode::NoCov: return "no-cov";
    case CampaignMode::ValueCov: return "value-cov";
    }
    return "?";
}

inline std::optional<CampaignMode> campaign_mode_from_name(const std::string &s) {
    for (CampaignMode m :
         {CampaignMode::CsrTransition, CampaignMode::NoCov, CampaignMode::ValueCov})
        if (s == campaign_mode_name(m)) return m;
    return std::nullopt;
}

struct CampaignConfig {
    CampaignMode mode = CampaignMode::CsrTransition;
    CsrSelection selection = selection_selected();
    DutConfig dut;
    ExecLimits limits;
    GenConfig gen;
    u64 master_seed = 1;
    unsigned trial_count = 1;
    unsigned initial_corpus = 32;
    u64 max_iterations = 10000;
    u64 max_cost = 0; // 0 = unlimited
    unsigned jobs = 1;

    void validate() const {
        if (trial_count < 1) throw ConfigError("trial count must be at least 1");
        if (jobs < 1) throw ConfigError("jobs must be at least 1");
        selection.validate();
        if (gen.min_len < 1 || gen.min_len > gen.max_len)
            throw ConfigError("generator length bounds are inconsistent");
    }
};

inline CampaignConfig make_campaign_config(CampaignMode mode, const CsrSelection &sel,
                                           std::vector<BugId> bugs, u64 iterations, u64 seed,
                                           unsigned trials) {
    CampaignConfig cfg;
    cfg.mode = mode;
    cfg.selection = sel;
    cfg.dut.enabled_bugs = std::move(bugs);
    cfg.gen = GenConfig::for_selection(sel);
    cfg.max_iterations = iterations;
    cfg.master_seed = seed;
    cfg.trial_count = trials;
    return cfg;
}

struct Exposure {
    u64 iteration = 0; // 1-based
    u64 cost = 0;
};

struct TrajectoryPoint {
    u64 iteration;
    u64 map_size;
    u64 interesting;
    u64 cost;
};

struct TrialReport {
    unsigned trial = 0;
    u64 iterations = 0;
    u64 generated = 0;
    u64 interesting = 0;
    u64 dut_runs = 0;
    u64 mismatches = 0;
    u64 cost = 0;
    u64 final_map_size = 0;
    std::map<std::string, Exposure> exposures; // by bug name
    std::vector<TrajectoryPoint> trajectory;
    Corpus corpus;
};

struct CampaignReport {
    CampaignConfig config;
    std::vector<TrialReport> trials;
};

namespace campaign_detail {

inline TrialReport run_trial(const CampaignConfig &cfg, unsigned trial) {
    TrialReport rep;
    rep.trial = trial;
    Rng rng = Rng(cfg.master_seed).fork(u64(trial) + 1);

    TransitionMap tmap;
    ValueCoverageMap vmap;
    Corpus corpus;
    u64 session_retired = 0; // the ISA-simulator session counts across runs

    auto snapshot_trajectory = [&](u64 iter) {
        u64 map_size = cfg.mode == CampaignMode::ValueCov ? vmap.size() : tmap.size();
        rep.trajectory.push_back({iter, map_size, rep.interesting, rep.cost});
    };

    for (u64 iter = 1; iter <= cfg.max_iterations; ++iter) {
        if (cfg.max_cost && rep.cost >= cfg.max_cost) break;
        rep.iterations = iter;

        Program prog;
        if (iter <= cfg.initial_corpus || corpus.entries.empty()) {
            prog = gen_random_program(rng.next(), cfg.gen);
        } else {
            const Program &parent = pick_seed(corpus, rng.next());
            prog = mutate(parent, rng.next(), cfg.gen);
        }
        ++rep.generated;

        ExecLimits limits = cfg.limits;
        limits.instret_base = session_retired;
        ExtendedTraceLog glog = golden_run(prog, limits, cfg.selection);
        session_retired += glog.entries.size();
        rep.cost += glog.entries.size();

        bool interesting = false;
        size_t added = 0;
        switch (cfg.mode) {
        case CampaignMode::CsrTransition: {
            auto tr = filter_explicit_writes(extract_transitions(glog, cfg.selection), glog,
                                             cfg.selection);
            std::tie(interesting, added) = is_interesting(tmap, tr);
            break;
        }
        case CampaignMode::ValueCov:
            std::tie(interesting, added) = value_coverage_is_interesting(vmap, glog, cfg.selection);
            break;
        case CampaignMode::NoCov: break; // blackbox: no triage
        }
        if (interesting) ++rep.interesting;

        // Blackbox mode keeps the stage-(1) population as its seed corpus and
        // mutates from it without any feedback-driven additions.
        bool store = cfg.mode == CampaignMode::NoCov ? iter <= cfg.initial_corpus : interesting;

        bool to_dut = cfg.mode == CampaignMode::NoCov ? true : interesting;
        if (to_dut) {
            DutRunResult dres = dut_run(prog, cfg.dut, limits, cfg.selection);
            ++rep.dut_runs;
            rep.cost += u64(cfg.dut.slowdown_factor) * dres.log.entries.size();
            if (auto mm = compare_traces(glog, dres.log)) {
                ++rep.mismatches;
                // Attribute to the trigger recorded at the divergent entry,
                // falling back to the latest trigger before it.
                const TriggerEvent *hit = nullptr;
                for (const auto &ev : dres.triggers) {
                    if (ev.entry_index == mm->index) {
                        hit = &ev;
                        break;
                    }
                    if (ev.entry_index < mm->index && (!hit || ev.entry_index >= hit->entry_index))
                        hit = &ev;
                }
                if (hit) {
                    std::string name = bug_name(hit->bug);
                    if (!rep.exposures.count(name)) rep.exposures[name] = {iter, rep.cost};
                }
            }
        }

        if (store) corpus.entries.push_back({std::move(prog), iter, added});
        if (iter % 50 == 0 || iter == cfg.max_iterations) snapshot_trajectory(iter);
    }

    rep.final_map_size = cfg.mode == CampaignMode::ValueCov ? vmap.size() : tmap.size();
    if (rep.trajectory.empty() || rep.trajectory.back().iteration != rep.iterations)
        snapshot_trajectory(rep.iterations);
    rep.corpus = std::move(corpus);
    return rep;
}

} // namespace campaign_detail

/// Runs trial_count independent trials, at most `jobs` in parallel. Fully
/// deterministic in (config, master_seed); workers share nothing mutable.
inline CampaignReport fuzz(const CampaignConfig &cfg) {
    cfg.validate();
    CampaignReport report;
    report.config = cfg;
    report.trials.resize(cfg.trial_count);
    unsigned next = 0;
    while (next < cfg.trial_count) {
        unsigned batch = std::min(cfg.jobs, cfg.trial_count - next);
        std::vector<std::future<TrialReport>> futures;
        for (unsigned k = 0; k < batch; ++k)
            futures.push_back(std::async(std::launch::async, campaign_detail::run_trial,
                                         std::cref(cfg), next + k));
        for (unsigned k = 0; k < batch; ++k) report.trials[next + k] = futures[k].get();
        next += batch;
    }
    return report;
}

// Per-bug cost-to-exposure medians with censoring: a trial that never exposed
// the bug contributes its total consumed cost, mirroring the
// maximum-allowed-runtime convention for unfound bugs.
struct BugCostStats {
    unsigned exposed_trials = 0;
    unsigned trials = 0;
    double median_cost = 0; // censored trials enter at their final cost
    bool censored_median = false;
};

inline BugCostStats bug_cost_stats(const CampaignReport &rep, BugId bug) {
    BugCostStats st;
    st.trials = unsigned(rep.trials.size());
    std::vector<double> costs;
    for (const auto &t : rep.trials) {
        auto it = t.exposures.find(bug_name(bug));
        if (it != t.exposures.end()) {
            ++st.exposed_trials;
            costs.push_back(double(it->second.cost));
        } else {
            costs.push_back(double(t.cost));
        }
    }
    std::sort(costs.begin(), costs.end());
    size_t n = costs.size();
    st.median_cost = n % 2 ? costs[n / 2] : (costs[n / 2 - 1] + costs[n / 2]) / 2.0;
    st.censored_median = st.exposed_trials * 2 <= st.trials;
    return st;
}

struct SpeedupEntry {
    BugCostStats a;
    BugCostStats b;
    std::optional<double> ratio; // median_b / median_a; absent when censored
};

/// Per-bug cost ratios of report_b over report_a (>1 means a was faster).
inline std::map<std::string, SpeedupEntry> measure_speedup(const CampaignReport &a,
                                                           const CampaignReport &b) {
    std::map<std::string, SpeedupEntry> out;
    for (BugId bug : a.config.dut.enabled_bugs) {
        SpeedupEntry e;
        e.a = bug_cost_stats(a, bug);
        e.b = bug_cost_stats(b, bug);
        if (!e.a.censored_median && !e.b.censored_median && e.a.median_cost > 0)
            e.ratio = e.b.median_cost / e.a.median_cost;
        out[bug_name(bug)] = e;
    }
    return out;
}

inline nlohmann::json report_to_json(const CampaignReport &rep) {
    nlohmann::json j;
    const auto &cfg = rep.config;
    j["config"] = {
        {"mode", campaign_mode_name(cfg.mode)},
        {"selection", cfg.selection.name},
        {"bugs", nlohmann::json::array()},
        {"iterations", cfg.max_iterations},
        {"max_cost", cfg.max_cost},
        {"trials", cfg.trial_count},
        {"seed", cfg.master_seed},
        {"initial_corpus", cfg.initial_corpus},
        {"max_retired", cfg.limits.max_retired},
        {"hazard_window", cfg.dut.hazard_window},
        {"slowdown_factor", cfg.dut.slowdown_factor},
    };
    for (BugId b : cfg.dut.enabled_bugs) j["config"]["bugs"].push_back(bug_name(b));

    j["trials"] = nlohmann::json::array();
    for (const auto &t : rep.trials) {
        nlohmann::json tj = {
            {"trial", t.trial},
            {"iterations", t.iterations},
            {"generated", t.generated},
            {"interesting", t.interesting},
            {"dut_runs", t.dut_runs},
            {"mismatches", t.mismatches},
            {"cost", t.cost},
            {"final_map_size", t.final_map_size},
            {"exposures", nlohmann::json::object()},
        };
        for (const auto &[name, e] : t.exposures)
            tj["exposures"][name] = {{"iteration", e.iteration}, {"cost", e.cost}};
        j["trials"].push_back(std::move(tj));
    }

    nlohmann::json agg = nlohmann::json::object();
    for (BugId b : cfg.dut.enabled_bugs) {
        BugCostStats st = bug_cost_stats(rep, b);
        agg[bug_name(b)] = {
            {"exposed_trials", st.exposed_trials},
            {"trials", st.trials},
            {"median_cost", st.censored_median ? nlohmann::json(nullptr)
                                               : nlohmann::json(st.median_cost)},
        };
    }
    j["aggregate"] = std::move(agg);
    return j;
}

inline std::string trajectory_csv(const TrialReport &t) {
    std::string out = "iteration,map_size,interesting,cost\n";
    for (const auto &p : t.trajectory)
        out += std::to_string(p.iteration) + "," + std::to_string(p.map_size) + "," +
               std::to_string(p.interesting) + "," + std::to_string(p.cost) + "\n";
    return out;
}

} // namespace procfuzz
