#include "witnesses.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace procfuzz;

namespace {

const char *cli_path() { return PROCFUZZ_CLI_PATH; }

int run_cli(const std::string &args) {
    std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path temp_dir() {
    fs::path d = fs::temp_directory_path() / "procfuzz-cli-test";
    fs::create_directories(d);
    return d;
}

void write(const fs::path &p, const std::string &text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("replay exit codes form the contract", "[cli]") {
    fs::path dir = temp_dir();
    fs::path witness = dir / "sepc.s";
    write(witness, witnesses::kSepcLowBitsPos);

    REQUIRE(run_cli("replay " + witness.string() +
                    " --bugs sepc-low-bits-writable --selection all-csr") == 1);
    REQUIRE(run_cli("replay " + witness.string() + " --bugs none") == 0);

    fs::path malformed = dir / "malformed.s";
    write(malformed, "procfuzz-program v1\n.body\nvadd.vv v1, v2, v3\n");
    REQUIRE(run_cli("replay " + malformed.string() + " --bugs none") == 2);
    REQUIRE(run_cli("replay " + (dir / "missing.s").string()) == 2);
    REQUIRE(run_cli("replay") == 2); // usage error
}

TEST_CASE("analyze exit codes and map files", "[cli]") {
    fs::path dir = temp_dir();
    GenConfig cfg = GenConfig::for_selection(selection_selected());
    Program p = gen_random_program(3, cfg);
    auto log = golden_run(p, {}, selection_selected());
    fs::path trace = dir / "trace.log";
    write(trace, serialize_log(log));
    fs::path map = dir / "map.tsv";

    // a fresh log against an empty map is interesting
    REQUIRE(run_cli("analyze " + trace.string() + " --map-out " + map.string()) == 0);
    // against the map it just produced it is not
    REQUIRE(run_cli("analyze " + trace.string() + " --map-in " + map.string()) == 1);
    // selection mismatch
    REQUIRE(run_cli("analyze " + trace.string() + " --selection fp-csr") == 2);

    // the exported map round-trips through the library loader
    TransitionMap m = TransitionMap::import_text(slurp(map));
    REQUIRE(m.size() > 0);
}

TEST_CASE("fuzz writes reproducible reports", "[cli]") {
    fs::path dir = temp_dir();
    fs::path out1 = dir / "out1";
    fs::path out2 = dir / "out2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    std::string flags = "fuzz --mode csr-transition --selection selected --bugs all "
                        "--iters 300 --trials 2 --seed 7 --jobs 2 --out ";
    REQUIRE(run_cli(flags + out1.string()) == 0);
    REQUIRE(run_cli(flags + out2.string()) == 0);
    REQUIRE(slurp(out1 / "report.json") == slurp(out2 / "report.json"));
    REQUIRE(fs::exists(out1 / "trial0.trajectory.csv"));
    REQUIRE(fs::exists(out1 / "corpus" / "trial0" / "prog0.s"));

    // corpus entries replay as valid programs
    Program prog = assemble(slurp(out1 / "corpus" / "trial0" / "prog0.s"));
    REQUIRE(!prog.body.empty());

    // config errors exit 2
    REQUIRE(run_cli("fuzz --mode nonsense --iters 1 --seed 1 --out " +
                    (dir / "bad").string()) == 2);
    REQUIRE(run_cli("fuzz --bugs nosuchbug --iters 1 --seed 1 --out " +
                    (dir / "bad").string()) == 2);
}

TEST_CASE("config files seed the flags and flags override them", "[cli]") {
    fs::path dir = temp_dir();
    fs::path cfg = dir / "campaign.ini";
    write(cfg, "[fuzz]\niters=25\nseed=3\ntrials=1\n");
    fs::path out1 = dir / "cfg-out1";
    fs::path out2 = dir / "cfg-out2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    REQUIRE(run_cli("fuzz --config " + cfg.string() + " --out " + out1.string()) == 0);
    std::string report = slurp(out1 / "report.json");
    REQUIRE(report.find("\"iterations\": 25") != std::string::npos);
    REQUIRE(run_cli("fuzz --config " + cfg.string() + " --iters 30 --out " + out2.string()) == 0);
    REQUIRE(slurp(out2 / "report.json").find("\"iterations\": 30") != std::string::npos);
}

TEST_CASE("custom selection files drive all subcommands", "[cli]") {
    fs::path dir = temp_dir();
    fs::path self = dir / "custom.sel";
    write(self, "selection custom-fp\ngroup fp frm fflags\n");
    GenConfig cfg = GenConfig::for_selection(selection_fp_csr());
    Program p = gen_random_program(5, cfg);

    CsrSelection custom;
    custom.name = "custom-fp";
    custom.monitored = {CsrId::Frm, CsrId::Fflags};
    custom.groups = {{"fp", {CsrId::Frm, CsrId::Fflags}}};
    auto log = golden_run(p, {}, custom);
    fs::path trace = dir / "custom.log";
    write(trace, serialize_log(log));
    int rc = run_cli("analyze " + trace.string() + " --selection @" + self.string());
    REQUIRE((rc == 0 || rc == 1)); // parses and matches; verdict depends on the log
}
