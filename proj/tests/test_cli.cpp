#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string output;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("virtenrich-cli-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

Run run(const std::string& args) {
  const fs::path log = scratch() / "stdout.txt";
  const std::string cmd = std::string(VIRTENRICH_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("help exits cleanly") {
  const Run r = run("--help");
  CHECK(r.status == 0);
  CHECK(r.output.find("cflat") != std::string::npos);
}

TEST_CASE("verify on the square") {
  const fs::path out = scratch() / "verify";
  const Run r = run("verify --domain square --k 3 --out " + out.string());
  CHECK(r.status == 0);
  const std::string csv = slurp(out / "invariance.csv");
  CHECK(csv.rfind("experiment,level,h,quantity,value\n", 0) == 0);
  CHECK(csv.find("check.c1_invariance.passed,1") != std::string::npos);
}

TEST_CASE("an injected fault fails verification") {
  const Run r = run("verify --domain square --k 3 --inject-fault c1 --out " + (scratch() / "fault").string());
  CHECK(r.status == 1);
}

TEST_CASE("usage errors exit with 2") {
  const Run low = run("enrich --k 1 --out " + (scratch() / "low").string());
  CHECK(low.status == 2);
  CHECK(low.output.find("UnsupportedOrder") != std::string::npos);
  CHECK(run("verify --no-such-flag").status == 2);
  CHECK(run("verify --domain disk").status == 2);
  CHECK(run("verify --inject-fault gremlins").status == 2);
  CHECK(run("verify --format xml").status == 2);
}

TEST_CASE("cflat writes fitted orders") {
  const fs::path out = scratch() / "cflat";
  const Run r = run("cflat --domain square --k 3 --levels 3 --base-level 2 --zeta sinsin --out " + out.string());
  CHECK(r.status == 0);
  const std::string csv = slurp(out / "cflat.csv");
  CHECK(csv.find("order_h0") != std::string::npos);
  CHECK(csv.find("order_h2") != std::string::npos);
}

TEST_CASE("reports are byte identical across runs and thread counts") {
  const fs::path a = scratch() / "rep_a", b = scratch() / "rep_b";
  const std::string args = "csharp --domain square --k 3 --samples 10 --base-level 0 --seed 5 --format json";
  REQUIRE(run(args + " --threads 1 --out " + a.string()).status == 0);
  REQUIRE(run(args + " --threads 3 --out " + b.string()).status == 0);
  const std::string ja = slurp(a / "csharp.json");
  CHECK_FALSE(ja.empty());
  CHECK(ja == slurp(b / "csharp.json"));
}

TEST_CASE("mesh, enrich and export") {
  const fs::path out = scratch() / "misc";
  CHECK(run("mesh --domain cube --levels 1 --out " + out.string()).status == 0);
  CHECK(slurp(out / "mesh.txt").find("dim 3") != std::string::npos);
  CHECK(run("enrich --domain square --k 4 --out " + out.string()).status == 0);
  CHECK(slurp(out / "enrich.csv").find("vertex") != std::string::npos);
  CHECK(run("export-vtk --domain square --k 3 --out " + out.string()).status == 0);
  CHECK(slurp(out / "proxy.vtk").rfind("# vtk DataFile", 0) == 0);
  CHECK(run("mesh --domain file:" + (out / "mesh.txt").string() + " --out " + (scratch() / "again").string()).status == 0);
  CHECK(slurp(scratch() / "again" / "mesh.txt") == slurp(out / "mesh.txt"));
}
