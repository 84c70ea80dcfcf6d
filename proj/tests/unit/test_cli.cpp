#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "manet_cli_test";

int manetsim(const std::string& args, const std::string& stdout_file = "out.txt") {
  fs::create_directories(kWork);
  const std::string cmd = std::string("\"") + MANETSIM_PATH + "\" " + args + " > \"" +
                          (kWork / stdout_file).string() + "\" 2> \"" + (kWork / "err.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string path(const std::string& name) { return "\"" + (kWork / name).string() + "\""; }

}  // namespace

TEST_CASE("run writes trace, result and mobility files") {
  REQUIRE(manetsim("run --protocol dsdv --nodes 12 --pause 20 --seed 3 --duration 40 --out-trace " +
                   path("run.tr") + " --out-result " + path("run.csv") + " --out-mobility " +
                   path("run.mob")) == 0);
  const std::string csv = slurp(kWork / "run.csv");
  CHECK(csv.rfind("protocol,n_nodes,pause_time,seed,mean_ct", 0) == 0);
  CHECK(csv.find("\nDSDV,12,20,3,") != std::string::npos);
  CHECK(slurp(kWork / "out.txt") == csv);
  CHECK(slurp(kWork / "run.tr").rfind("# protocol DSDV", 0) == 0);
  CHECK_FALSE(slurp(kWork / "run.mob").empty());
}

TEST_CASE("same arguments, same bytes") {
  REQUIRE(manetsim("run --protocol aodv --nodes 15 --seed 9 --duration 30 --out-trace " + path("a1.tr")) == 0);
  REQUIRE(manetsim("run --protocol aodv --nodes 15 --seed 9 --duration 30 --out-trace " + path("a2.tr")) == 0);
  CHECK(slurp(kWork / "a1.tr") == slurp(kWork / "a2.tr"));
}

TEST_CASE("analyze reports the same counts as the run") {
  REQUIRE(manetsim("run --protocol dsdv --nodes 20 --seed 5 --duration 60 --out-trace " + path("b.tr") +
                   " --out-result " + path("b.csv")) == 0);
  REQUIRE(manetsim("analyze --trace " + path("b.tr")) == 0);
  const std::string summary = slurp(kWork / "out.txt");
  CHECK(summary.rfind("flow,fault_at,restored_at,duration\n", 0) == 0);
  CHECK(summary.find("# samples ") != std::string::npos);

  REQUIRE(manetsim("analyze --format jsonl --trace " + path("b.tr"), "out.jsonl") == 0);
  const std::string jl = slurp(kWork / "out.jsonl");
  CHECK(jl.find("\"censored\":") != std::string::npos);
  CHECK(jl.find("\"mean_ct\":") != std::string::npos);
}

TEST_CASE("dry-run matrix lists the plan") {
  REQUIRE(manetsim("matrix --dry-run --with-tora") == 0);
  CHECK(fixtures::count(slurp(kWork / "out.txt"), "\n") == 900);
  REQUIRE(manetsim("matrix --dry-run --protocols AODV --nodes-list 10,20 --pauses-list 0 --seed-count 2") == 0);
  CHECK(slurp(kWork / "out.txt") == "AODV_n10_p0_s1\nAODV_n10_p0_s2\nAODV_n20_p0_s1\nAODV_n20_p0_s2\n");
}

TEST_CASE("small matrix writes results and plot data") {
  const fs::path dir = kWork / "mx";
  fs::remove_all(dir);
  REQUIRE(manetsim("matrix --quiet --nodes-list 10 --pauses-list 0,30 --seed-count 1 --duration 30 --out-dir " +
                   path("mx")) == 0);
  CHECK(fixtures::count(slurp(dir / "results.csv"), "\n") == 5);
  CHECK(fs::exists(dir / "plot" / "nodes_10.dat"));
  CHECK_FALSE(fs::exists(dir / "failures.txt"));
}

TEST_CASE("exit codes") {
  CHECK(manetsim("run --protocol OLSR") == 1);
  CHECK(manetsim("run --nodes 1") == 1);
  CHECK(manetsim("run --pause 999") == 1);
  CHECK(manetsim("run --no-such-flag") == 1);
  CHECK(manetsim("") == 1);
  CHECK(manetsim("analyze --trace /nonexistent/trace.tr") == 2);
  CHECK(manetsim("run --nodes 3 --duration 5 --out-trace /nonexistent/dir/t.tr") == 2);

  std::ofstream(kWork / "bad.tr") << "# header\ns 1.000000 0 AGT CBR 0 0 0 3 -\nthis is not a trace line\n";
  CHECK(manetsim("analyze --trace " + path("bad.tr")) == 3);
  CHECK(slurp(kWork / "err.txt").find("line 3") != std::string::npos);
  CHECK(manetsim("analyze --lenient --trace " + path("bad.tr")) == 0);
  CHECK(slurp(kWork / "err.txt").find("warning") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  CHECK(manetsim("--help") == 0);
  CHECK(slurp(kWork / "out.txt").find("matrix") != std::string::npos);
}
