// procfuzz command-line front end: run fuzzing campaigns, replay programs
// differentially, and analyze trace logs with the transition unit.

#include <procfuzz/procfuzz.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace procfuzz;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

std::vector<BugId> parse_bugs(const std::string &spec) {
    if (spec == "all") return all_bugs();
    if (spec == "none" || spec.empty()) return {};
    std::vector<BugId> bugs;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = bug_from_name(item);
        if (!b) throw ConfigError("unknown bug '" + item + "'");
        bugs.push_back(*b);
    }
    return bugs;
}

// Custom selection files:
//   selection <name>
//   group <group-name> <csr> <csr> ...
CsrSelection parse_selection_file(const std::string &path) {
    CsrSelection sel;
    std::stringstream ss(read_file(path));
    std::string line;
    while (std::getline(ss, line)) {
        std::stringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (word == "selection") {
            ls >> sel.name;
        } else if (word == "group") {
            CsrSelection::Group g;
            ls >> g.name;
            std::string csr;
            while (ls >> csr) {
                auto id = csr_from_name(csr);
                if (!id) throw ConfigError("unknown CSR '" + csr + "' in " + path);
                g.csrs.push_back(*id);
                sel.monitored.push_back(*id);
            }
            sel.groups.push_back(std::move(g));
        } else {
            throw ConfigError("unexpected directive '" + word + "' in " + path);
        }
    }
    if (sel.name.empty() || sel.monitored.empty())
        throw ConfigError("selection file " + path + " is incomplete");
    sel.validate();
    return sel;
}

CsrSelection parse_selection(const std::string &spec) {
    if (!spec.empty() && spec[0] == '@') return parse_selection_file(spec.substr(1));
    return selection_by_name(spec);
}

u64 resolve_seed(CLI::Option *seed_opt, u64 seed_flag) {
    if (seed_opt->count()) return seed_flag;
    if (const char *env = std::getenv("PROCFUZZ_SEED")) return std::strtoull(env, nullptr, 0);
    std::random_device rd;
    u64 s = (u64(rd()) << 32) | rd();
    std::cout << "seed drawn from entropy: " << s << "\n";
    return s;
}

int cmd_fuzz(const std::string &mode_name, const std::string &selection_spec,
             const std::string &bugs_spec, u64 iters, unsigned trials, u64 seed, unsigned jobs,
             u64 max_retired, unsigned initial_corpus, const std::string &out_dir) {
    auto mode = campaign_mode_from_name(mode_name);
    if (!mode) throw ConfigError("unknown mode '" + mode_name + "'");
    CampaignConfig cfg =
        make_campaign_config(*mode, parse_selection(selection_spec), parse_bugs(bugs_spec), iters,
                             seed, trials);
    cfg.jobs = jobs;
    cfg.limits.max_retired = max_retired;
    cfg.initial_corpus = initial_corpus;
    cfg.validate();

    std::cout << "# effective config\n"
              << "mode = " << campaign_mode_name(cfg.mode) << "\n"
              << "selection = " << cfg.selection.name << "\n"
              << "bugs = " << (cfg.dut.enabled_bugs.empty() ? "none" : bugs_spec) << "\n"
              << "iters = " << cfg.max_iterations << "\n"
              << "trials = " << cfg.trial_count << "\n"
              << "seed = " << cfg.master_seed << "\n"
              << "jobs = " << cfg.jobs << "\n"
              << "max-retired = " << cfg.limits.max_retired << "\n"
              << "initial-corpus = " << cfg.initial_corpus << "\n";

    CampaignReport report = fuzz(cfg);

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "report.json", report_to_json(report).dump(2) + "\n");
    for (const auto &t : report.trials) {
        write_file(fs::path(out_dir) / ("trial" + std::to_string(t.trial) + ".trajectory.csv"),
                   trajectory_csv(t));
        fs::path cdir = fs::path(out_dir) / "corpus" / ("trial" + std::to_string(t.trial));
        fs::create_directories(cdir);
        for (size_t i = 0; i < t.corpus.entries.size(); ++i) {
            const auto &e = t.corpus.entries[i];
            write_file(cdir / ("prog" + std::to_string(i) + ".s"), disassemble(e.program));
            write_file(cdir / ("prog" + std::to_string(i) + ".meta"),
                       "iteration " + std::to_string(e.iteration) + "\ntuples " +
                           std::to_string(e.tuples_contributed) + "\n");
        }
    }

    for (const auto &t : report.trials) {
        std::cout << "trial " << t.trial << ": interesting " << t.interesting << "/" << t.generated
                  << ", dut runs " << t.dut_runs << ", cost " << t.cost << ", map "
                  << t.final_map_size << ", exposures " << t.exposures.size() << "\n";
    }
    std::cout << "report written to " << (fs::path(out_dir) / "report.json").string() << "\n";
    return 0;
}

int cmd_replay(const std::string &program_path, const std::string &bugs_spec,
               const std::string &selection_spec, u64 max_retired) {
    Program prog = assemble(read_file(program_path));
    CsrSelection sel = parse_selection(selection_spec);
    DutConfig dut;
    dut.enabled_bugs = parse_bugs(bugs_spec);
    ExecLimits limits{max_retired};

    ExtendedTraceLog glog = golden_run(prog, limits, sel);
    DutRunResult dres = dut_run(prog, dut, limits, sel);

    std::cout << "--- golden trace ---\n" << serialize_log(glog);
    std::cout << "--- dut trace ---\n" << serialize_log(dres.log);

    auto mm = compare_traces(glog, dres.log);
    if (!mm) {
        std::cout << "verdict: logs equal\n";
        return 0;
    }
    std::cout << "verdict: MISMATCH at entry " << mm->index << ", field "
              << mismatch_field_name(mm->field);
    if (mm->field == MismatchField::Csr) std::cout << " " << mm->csr_name;
    std::cout << ": golden " << mm->golden_value << ", dut " << mm->dut_value << "\n";
    return 1;
}

int cmd_analyze(const std::string &trace_path, const std::string &selection_spec,
                const std::string &map_in, const std::string &map_out) {
    CsrSelection sel = parse_selection(selection_spec);
    ExtendedTraceLog log = parse_log(read_file(trace_path));

    auto extracted = extract_transitions(log, sel); // throws SelectionMismatch on foreign logs
    auto filtered = filter_explicit_writes(extracted, log, sel);

    std::cout << "extracted " << extracted.size() << " transitions, " << filtered.size()
              << " after filtering\n";
    for (const auto &t : filtered)
        std::cout << "  entry " << t.entry_index << ": (" << t.tuple.group << ", "
                  << t.tuple.mnemonic << ", " << t.tuple.s0 << ", " << t.tuple.s1 << ")\n";

    TransitionMap map;
    if (!map_in.empty()) map = TransitionMap::import_text(read_file(map_in));
    auto [interesting, added] = is_interesting(map, filtered);
    if (!map_out.empty()) write_file(map_out, map.export_text());

    std::cout << "verdict: " << (interesting ? "interesting" : "not interesting") << " ("
              << added << " new tuples, map size " << map.size() << ")\n";
    return interesting ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"CSR-transition-coverage processor fuzzer"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file; keys mirror the flags under a [fuzz] section");
    app.fallthrough();

    std::string mode = "csr-transition", selection = "selected", bugs = "none", out_dir = "out";
    u64 iters = 10000, seed = 0, max_retired = 1024;
    unsigned trials = 1, jobs = 1, initial_corpus = 32;

    auto *fuzz_cmd = app.add_subcommand("fuzz", "run a fuzzing campaign");
    fuzz_cmd->add_option("--mode", mode, "csr-transition | no-cov | value-cov");
    fuzz_cmd->add_option("--selection", selection, "selected | fp-csr | all-csr | @file");
    fuzz_cmd->add_option("--bugs", bugs, "comma list | all | none");
    fuzz_cmd->add_option("--iters", iters, "iteration budget per trial");
    fuzz_cmd->add_option("--trials", trials, "independent trials");
    auto *seed_opt = fuzz_cmd->add_option("--seed", seed, "campaign master seed");
    fuzz_cmd->add_option("--jobs", jobs, "parallel trial workers");
    fuzz_cmd->add_option("--max-retired", max_retired, "retirement cap per run");
    fuzz_cmd->add_option("--initial-corpus", initial_corpus, "random seed programs");
    fuzz_cmd->add_option("--out", out_dir, "output directory");

    std::string program_path, replay_bugs = "none", replay_selection = "selected";
    u64 replay_retired = 1024;
    auto *replay_cmd = app.add_subcommand("replay", "differentially replay one program");
    replay_cmd->add_option("program", program_path, "program file")->required();
    replay_cmd->add_option("--bugs", replay_bugs, "comma list | all | none");
    replay_cmd->add_option("--selection", replay_selection, "selected | fp-csr | all-csr | @file");
    replay_cmd->add_option("--max-retired", replay_retired, "retirement cap");

    std::string trace_path, an_selection = "selected", map_in, map_out;
    auto *analyze_cmd = app.add_subcommand("analyze", "run the transition unit over a trace log");
    analyze_cmd->add_option("trace", trace_path, "trace log file")->required();
    analyze_cmd->add_option("--selection", an_selection, "selected | fp-csr | all-csr | @file");
    analyze_cmd->add_option("--map-in", map_in, "transition map to preload");
    analyze_cmd->add_option("--map-out", map_out, "write the updated map here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (fuzz_cmd->parsed())
            return cmd_fuzz(mode, selection, bugs, iters, trials, resolve_seed(seed_opt, seed),
                            jobs, max_retired, initial_corpus, out_dir);
        if (replay_cmd->parsed())
            return cmd_replay(program_path, replay_bugs, replay_selection, replay_retired);
        if (analyze_cmd->parsed())
            return cmd_analyze(trace_path, an_selection, map_in, map_out);
    } catch (const SelectionMismatch &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
