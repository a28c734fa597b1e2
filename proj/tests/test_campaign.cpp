#include "witnesses.hpp"

#include <procfuzz/campaign.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace procfuzz;

TEST_CASE("compare_traces finds the earliest divergence", "[campaign]") {
    GenConfig cfg = GenConfig::for_selection(selection_selected());
    Program p = gen_random_program(17, cfg);
    auto log = golden_run(p, {}, selection_selected());
    REQUIRE(!compare_traces(log, log).has_value()); // reflexivity

    // a truncated log diverges at the first absent entry
    auto shorter = log;
    shorter.entries.pop_back();
    auto mm = compare_traces(log, shorter);
    REQUIRE(mm.has_value());
    REQUIRE(mm->index == shorter.entries.size());
    REQUIRE(mm->field == MismatchField::Truncated);

    // selection mismatch is an error, not a divergence
    auto fp = golden_run(p, {}, selection_fp_csr());
    REQUIRE_THROWS_AS(compare_traces(log, fp), SelectionMismatch);
}

TEST_CASE("zero budget produces an empty report", "[campaign]") {
    CampaignConfig cfg = make_campaign_config(CampaignMode::CsrTransition, selection_selected(),
                                              all_bugs(), 0, 1, 2);
    CampaignReport rep = fuzz(cfg);
    REQUIRE(rep.trials.size() == 2);
    for (const auto &t : rep.trials) {
        REQUIRE(t.generated == 0);
        REQUIRE(t.exposures.empty());
        REQUIRE(t.cost == 0);
    }
}

TEST_CASE("bug-free campaigns never mismatch", "[campaign]") {
    for (CampaignMode mode :
         {CampaignMode::CsrTransition, CampaignMode::NoCov, CampaignMode::ValueCov}) {
        CampaignConfig cfg =
            make_campaign_config(mode, selection_selected(), {}, 400, 3, 1);
        CampaignReport rep = fuzz(cfg);
        REQUIRE(rep.trials[0].mismatches == 0);
        REQUIRE(rep.trials[0].exposures.empty());
    }
}

TEST_CASE("triage gate: DUT runs exactly the interesting set", "[campaign]") {
    CampaignConfig guided = make_campaign_config(CampaignMode::CsrTransition,
                                                 selection_selected(), all_bugs(), 600, 5, 1);
    CampaignReport rep = fuzz(guided);
    const auto &t = rep.trials[0];
    REQUIRE(t.dut_runs == t.interesting);
    REQUIRE(t.interesting <= t.generated);
    REQUIRE(t.interesting > 0);
    REQUIRE(t.interesting < t.generated); // triage discards something at this scale

    CampaignConfig blackbox =
        make_campaign_config(CampaignMode::NoCov, selection_selected(), all_bugs(), 300, 5, 1);
    CampaignReport brep = fuzz(blackbox);
    REQUIRE(brep.trials[0].dut_runs == brep.trials[0].generated);
}

TEST_CASE("campaigns are deterministic per (config, master seed)", "[campaign]") {
    CampaignConfig cfg = make_campaign_config(CampaignMode::CsrTransition, selection_selected(),
                                              all_bugs(), 500, 7, 2);
    cfg.jobs = 2;
    auto a = report_to_json(fuzz(cfg)).dump(2);
    auto b = report_to_json(fuzz(cfg)).dump(2);
    REQUIRE(a == b);

    cfg.master_seed = 8;
    auto c = report_to_json(fuzz(cfg)).dump(2);
    REQUIRE(a != c);
}

TEST_CASE("cost accounting matches the retirement counts", "[campaign]") {
    // replicate one trial by hand and check the cost identity
    CampaignConfig cfg = make_campaign_config(CampaignMode::NoCov, selection_selected(),
                                              all_bugs(), 100, 11, 1);
    CampaignReport rep = fuzz(cfg);
    const auto &t = rep.trials[0];

    u64 golden_retired = 0, dut_retired = 0;
    Rng rng = Rng(cfg.master_seed).fork(1);
    Corpus corpus;
    u64 session = 0;
    for (u64 iter = 1; iter <= cfg.max_iterations; ++iter) {
        Program prog;
        if (iter <= cfg.initial_corpus || corpus.entries.empty()) {
            prog = gen_random_program(rng.next(), cfg.gen);
        } else {
            const Program &parent = pick_seed(corpus, rng.next());
            prog = mutate(parent, rng.next(), cfg.gen);
        }
        ExecLimits limits = cfg.limits;
        limits.instret_base = session;
        auto glog = golden_run(prog, limits, cfg.selection);
        session += glog.entries.size();
        golden_retired += glog.entries.size();
        auto dres = dut_run(prog, cfg.dut, limits, cfg.selection);
        dut_retired += dres.log.entries.size();
        // blackbox keeps the initial population as its seed corpus
        if (iter <= cfg.initial_corpus) corpus.entries.push_back({std::move(prog), iter, 0});
    }
    REQUIRE(t.cost == golden_retired + u64(cfg.dut.slowdown_factor) * dut_retired);
    REQUIRE(cfg.dut.slowdown_factor == 79);
}

TEST_CASE("measure_speedup handles identity and censoring", "[campaign]") {
    CampaignConfig cfg = make_campaign_config(CampaignMode::CsrTransition, selection_selected(),
                                              {BugId::ReadOnlyCsrWriteSilent}, 800, 13, 3);
    CampaignReport rep = fuzz(cfg);
    auto self = measure_speedup(rep, rep);
    for (const auto &[name, e] : self) {
        if (e.ratio) REQUIRE(*e.ratio == 1.0);
        REQUIRE(e.a.exposed_trials == e.b.exposed_trials);
    }

    // a report that never exposes the bug yields a censored median and no ratio
    CampaignConfig cold = cfg;
    cold.dut.enabled_bugs = {};
    CampaignReport cold_rep = fuzz(cold);
    cold_rep.config.dut.enabled_bugs = {BugId::ReadOnlyCsrWriteSilent};
    auto mixed = measure_speedup(cold_rep, rep);
    const auto &e = mixed.at(bug_name(BugId::ReadOnlyCsrWriteSilent));
    REQUIRE(e.a.exposed_trials == 0);
    REQUIRE(e.a.censored_median);
    REQUIRE(!e.ratio.has_value());
}

TEST_CASE("exposures carry the documented attribution", "[campaign]") {
    CampaignConfig cfg = make_campaign_config(CampaignMode::CsrTransition, selection_selected(),
                                              {BugId::ReadOnlyCsrWriteSilent,
                                               BugId::SepcLowBitsWritable},
                                              3000, 21, 1);
    CampaignReport rep = fuzz(cfg);
    const auto &t = rep.trials[0];
    REQUIRE(t.exposures.count(bug_name(BugId::ReadOnlyCsrWriteSilent)));
    for (const auto &[name, e] : t.exposures) {
        REQUIRE(e.iteration >= 1);
        REQUIRE(e.iteration <= t.iterations);
        REQUIRE(e.cost <= t.cost);
    }
}

TEST_CASE("config validation rejects inconsistent setups", "[campaign]") {
    CampaignConfig cfg = make_campaign_config(CampaignMode::CsrTransition, selection_selected(),
                                              {}, 10, 1, 0);
    REQUIRE_THROWS_AS(fuzz(cfg), ConfigError);

    CampaignConfig bad_sel = make_campaign_config(CampaignMode::CsrTransition,
                                                  selection_selected(), {}, 10, 1, 1);
    bad_sel.selection.groups[0].csrs.pop_back(); // groups no longer partition
    REQUIRE_THROWS_AS(fuzz(bad_sel), ConfigError);
}
