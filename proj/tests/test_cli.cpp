#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "signbal/cli.hpp"

using namespace signbal;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "signbal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("signbal_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& contents = "") const {
    const auto p = path / name;
    if (!contents.empty()) std::ofstream(p) << contents;
    return p.string();
  }
};

}  // namespace

TEST_CASE("generate then metrics round trip") {
  TempDir t;
  const auto g = t.file("g.txt");
  auto r = run({"generate", "ba", "--n", "300", "--m", "3", "--plant", "150", "--seed", "3", "--out", g});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(g + ".truth.json"));
  const auto truth = nlohmann::json::parse(slurp(g + ".truth.json"));
  CHECK(truth["planted"].size() == 150);
  r = run({"metrics", g});
  REQUIRE(r.code == 0);
  const auto m = nlohmann::json::parse(r.out);
  CHECK(m["n"] == 300);
  CHECK(m["m"] == 3 * 297);
  r = run({"metrics", g, "--format", "csv"});
  CHECK(r.out.rfind("command,", 0) == 0);
}

TEST_CASE("timbal on a balanced graph") {
  TempDir t;
  const auto g = t.file("b.txt", "a b 1\nb c -1\nc d 1\na d -1\n");
  const auto out = t.file("rep.json");
  const auto trace = t.file("trace.csv");
  const auto r = run({"timbal", g, "--out", out, "--trace", trace});
  REQUIRE(r.code == 0);
  const auto rep = nlohmann::json::parse(slurp(out));
  CHECK(rep["result"]["vertices"] == 4);
  CHECK(rep["result"]["iterations"] == 0);
  CHECK(slurp(trace) == "iter,n,m,lambda1_est,removed,discarded,edge_agreement,avg_degree\n");
  const auto v1 = slurp(out + ".v1.txt");
  const auto v2 = slurp(out + ".v2.txt");
  CHECK(v1 == "a\nb\n");
  CHECK(v2 == "c\nd\n");
}

TEST_CASE("timbal reports are reproducible") {
  TempDir t;
  const auto g = t.file("g.txt");
  REQUIRE(run({"generate", "ba", "--n", "400", "--m", "3", "--plant", "200", "--seed", "1", "--out", g}).code == 0);
  const auto a = t.file("a.json");
  REQUIRE(run({"timbal", g, "--seed", "5", "--runs", "3", "--out", a, "--trace", t.file("ta.csv")}).code == 0);
  const auto first = slurp(a);
  const auto first_trace = slurp(t.file("ta.csv"));
  REQUIRE(run({"timbal", g, "--seed", "5", "--runs", "3", "--out", a, "--trace", t.file("ta.csv")}).code == 0);
  CHECK(slurp(a) == first);
  CHECK(slurp(t.file("ta.csv")) == first_trace);
  const auto rep = nlohmann::json::parse(slurp(a));
  CHECK(rep["runs"].size() == 3);
  std::size_t best = 0;
  for (const auto& run : rep["runs"]) best = std::max<std::size_t>(best, run["vertices"]);
  CHECK(rep["result"]["vertices"] == best);
  CHECK(fs::exists(a + ".timings.json"));
}

TEST_CASE("baselines and oracle") {
  TempDir t;
  const auto k2 = t.file("k2.txt", "1 2 1\n");
  const auto tri = t.file("tri.txt", "1 2 -1\n2 3 -1\n1 3 -1\n");
  auto r = run({"baseline", "eigen", k2});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["result"]["vertices"] == 2);
  r = run({"baseline", "ggmz", tri});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["result"]["vertices"] == 2);
  r = run({"baseline", "grasp", tri, "--runs", "4", "--seed", "1"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["runs"].size() == 4);
  const auto sweep = t.file("sweep.csv");
  REQUIRE(run({"baseline", "eigen", tri, "--trace", sweep}).code == 0);
  CHECK(slurp(sweep).rfind("tau,n,m,balanced\n", 0) == 0);
  r = run({"oracle", tri});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["size"] == 2);
}

TEST_CASE("exit codes") {
  TempDir t;
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"timbal"}).code == kExitUsage);
  CHECK(run({"timbal", "x.txt", "--bogus"}).code == kExitUsage);
  CHECK(run({"baseline", "magic", "x.txt"}).code == kExitUsage);
  CHECK(run({"timbal", (t.path / "missing.txt").string()}).code == kExitParse);
  const auto bad = t.file("bad.txt", "1 2 1\n1 2\n");
  const auto r = run({"metrics", bad});
  CHECK(r.code == kExitParse);
  CHECK(r.err.find("line 2") != std::string::npos);
  std::string big;
  for (int i = 1; i < 30; ++i) big += std::to_string(i) + " " + std::to_string(i + 1) + " -1\n";
  CHECK(run({"oracle", t.file("big.txt", big)}).code == kExitGuard);
  CHECK(run({"timbal", bad, "--max-iter", "0"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}
