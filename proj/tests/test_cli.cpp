#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;

  bool contains(const std::string& needle) const {
    return output.find(needle) != std::string::npos;
  }
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CONCLAB_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[4096];
  size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "conclab_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const std::string kCalibration =
    std::string(CONCLAB_SOURCE_DIR) + "/data/grover_calibration.csv";

}  // namespace

TEST_CASE("build prints the topology summary") {
  const CliResult res = run_cli("build full 11 5");
  CHECK(res.exit_code == 0);
  CHECK(res.contains("crosspoints: 35"));
  CHECK(res.contains("capacity (declared): 5"));
}

TEST_CASE("build regular prints the degree summary") {
  const CliResult res = run_cli("build regular 3 6");
  CHECK(res.exit_code == 0);
  CHECK(res.contains("crosspoints: 78"));
  CHECK(res.contains("outputs 13"));
  CHECK(res.contains("inputs 4-5"));
}

TEST_CASE("build surfaces violated construction constraints") {
  const CliResult res = run_cli("build bounded 9 7 1");
  CHECK(res.exit_code == 2);
  CHECK(res.contains("q must be at least n - m"));

  // q = 5 satisfies n-m <= q <= m and yields capacity 1
  const CliResult wide = run_cli("build bounded 9 7 5");
  CHECK(wide.exit_code == 0);
  CHECK(wide.contains("c: 1"));
}

TEST_CASE("build writes a loadable topology file") {
  const auto path = temp_dir() / "full_11_5.topo";
  const CliResult res =
      run_cli("build full 11 5 --out " + path.string());
  CHECK(res.exit_code == 0);
  CHECK(res.contains("written:"));
  CHECK(slurp(path).rfind("kind: full\n", 0) == 0);
}

TEST_CASE("route runs the classical router end to end") {
  const auto path = temp_dir() / "route_full.topo";
  REQUIRE(run_cli("build full 11 5 --out " + path.string()).exit_code == 0);

  const CliResult res = run_cli("route --topology " + path.string() +
                                " --request 11000010010");
  CHECK(res.exit_code == 0);
  CHECK(res.contains(" -> "));
  CHECK(res.contains("pairs: 5"));
  CHECK(res.contains("valid: yes"));

  const CliResult list_form = run_cli("route --topology " + path.string() +
                                      " --request 1,2,7,10");
  CHECK(list_form.exit_code == 0);
  CHECK(list_form.contains("request completed to k=5"));
}

TEST_CASE("route rejects a request of the wrong length") {
  const auto path = temp_dir() / "route_len.topo";
  REQUIRE(run_cli("build full 11 5 --out " + path.string()).exit_code == 0);
  const CliResult res =
      run_cli("route --topology " + path.string() + " --request 0101");
  CHECK(res.exit_code == 2);
  CHECK(res.contains("expected n = 11"));
}

TEST_CASE("quantum route is reproducible under a fixed seed") {
  const auto path = temp_dir() / "route_q.topo";
  REQUIRE(run_cli("build full 11 5 --out " + path.string()).exit_code == 0);
  const std::string cmd = "route --topology " + path.string() +
                          " --request 11000010010 --router quantum --seed 42";
  const CliResult a = run_cli(cmd);
  const CliResult b = run_cli(cmd);
  CHECK(a.exit_code == 0);
  CHECK(a.contains("quantum_queries:"));
  CHECK(a.contains("failed: no"));
  CHECK(a.output == b.output);
}

TEST_CASE("route supports the cost-model engine via the calibration table") {
  const auto path = temp_dir() / "route_cm.topo";
  REQUIRE(run_cli("build full 11 5 --out " + path.string()).exit_code == 0);
  const CliResult res = run_cli(
      "route --topology " + path.string() +
      " --request 11000010010 --router quantum --engine cost-model --seed 7" +
      " --calibration " + kCalibration);
  CHECK(res.exit_code == 0);
  CHECK(res.contains("engine: cost-model"));

  const CliResult missing = run_cli(
      "route --topology " + path.string() +
      " --request 11000010010 --router quantum --engine cost-model" +
      " --calibration /nonexistent/table.csv");
  CHECK(missing.exit_code == 2);
  CHECK(missing.contains("missing"));
}

TEST_CASE("verify capacity reports the certified bound") {
  const auto path = temp_dir() / "verify_cap.topo";
  REQUIRE(run_cli("build bounded 9 7 2 --out " + path.string()).exit_code == 0);
  const CliResult res =
      run_cli("verify --topology " + path.string() + " --suite capacity");
  CHECK(res.exit_code == 0);
  CHECK(res.contains("certified c=3 (exhaustive, 84 subsets)"));
  CHECK(res.contains("PASS capacity"));
}

TEST_CASE("verify crosspoints passes on built instances and catches tampering") {
  const auto path = temp_dir() / "verify_xp.topo";
  REQUIRE(run_cli("build full 11 5 --out " + path.string()).exit_code == 0);
  CHECK(run_cli("verify --topology " + path.string() + " --suite crosspoints")
            .exit_code == 0);

  const auto tampered = temp_dir() / "tampered.topo";
  std::ofstream out(tampered);
  out << "kind: full\nn: 3\nm: 2\nadjacency:\n1: [1]\n2: [1]\n3: [2]\n";
  out.close();
  const CliResult res =
      run_cli("verify --topology " + tampered.string() + " --suite crosspoints");
  CHECK(res.exit_code == 1);
  CHECK(res.contains("FAIL crosspoints"));
}

TEST_CASE("verify router-equivalence sweeps the full (7,3) instance") {
  const auto path = temp_dir() / "verify_req.topo";
  REQUIRE(run_cli("build full 7 3 --out " + path.string()).exit_code == 0);
  const CliResult res = run_cli("verify --topology " + path.string() +
                                " --suite router-equivalence");
  CHECK(res.exit_code == 0);
  CHECK(res.contains("exhaustive sweep: 35 requests"));
  CHECK(res.contains("failures: 0"));
}

TEST_CASE("verify grover-calibration checks the table against fresh runs") {
  const CliResult res = run_cli(
      "verify --suite grover-calibration --calibration " + kCalibration);
  CHECK(res.exit_code == 0);
  CHECK(res.contains("PASS grover-calibration"));
}

TEST_CASE("sweep writes a deterministic csv with the fixed header") {
  const auto path = temp_dir() / "sweep.csv";
  const std::string cmd =
      "sweep --kind full --n 64,256 --m sqrt --router both "
      "--engine statevector --trials 2 --seed 5 --out " +
      path.string();
  const CliResult res = run_cli(cmd);
  CHECK(res.exit_code == 0);
  CHECK(res.contains("rows: 8"));
  const std::string first = slurp(path);
  CHECK(first.rfind("n,m,k,router,engine,trial,quantum_queries,"
                    "classical_steps,valid,failed,seed\n",
                    0) == 0);
  REQUIRE(run_cli(cmd).exit_code == 0);
  CHECK(slurp(path) == first);
}

TEST_CASE("sweep prints fitted slopes and the crossover when present") {
  const auto path = temp_dir() / "sweep_cx.csv";
  const CliResult res = run_cli(
      "sweep --kind full --n 64,1024,16384,262144 --m sqrt --router both "
      "--engine cost-model --trials 3 --seed 11 --calibration " +
      kCalibration + " --out " + path.string());
  CHECK(res.exit_code == 0);
  CHECK(res.contains("classical steps vs n: slope"));
  CHECK(res.contains("quantum queries vs sqrt(n*k)*ln(k): slope"));
  CHECK(res.contains("crossover near n ="));
}

TEST_CASE("calibrate regenerates a table usable by the cost model") {
  const auto path = temp_dir() / "small_calibration.csv";
  const CliResult res = run_cli("calibrate --max-n 64 --trials 80 --seed 3 --out " +
                                path.string());
  CHECK(res.exit_code == 0);
  CHECK(slurp(path).rfind("N,k,mean_queries,stdev\n", 0) == 0);

  const auto topo = temp_dir() / "calib_route.topo";
  REQUIRE(run_cli("build full 11 5 --out " + topo.string()).exit_code == 0);
  const CliResult route = run_cli(
      "route --topology " + topo.string() +
      " --request 11000010010 --router quantum --engine cost-model --seed 1" +
      " --calibration " + path.string());
  CHECK(route.exit_code == 0);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("build hexagonal 3 3").exit_code == 2);
  CHECK(run_cli("verify --suite nonsense --topology /dev/null").exit_code == 2);
  CHECK(run_cli("route --topology /nonexistent.topo --request 1,2").exit_code ==
        2);
}
