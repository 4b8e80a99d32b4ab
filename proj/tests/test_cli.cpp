#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "dyncausal/cli.hpp"
#include "dyncausal/serialize.hpp"

using namespace dyncausal;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dyncausal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Workdir {
  fs::path path;
  Workdir() {
    path = fs::temp_directory_path() / ("dyncausal-cli-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~Workdir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::string demo_file() {
  const char* dir = std::getenv("DYNCAUSAL_SCENARIO_DIR");
  if (dir && fs::exists(fs::path(dir) / "demo.json")) return (fs::path(dir) / "demo.json").string();
  return "demo";
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("run then replay") {
  Workdir w;
  const auto r = cli({"run", demo_file(), "--seed", "7", "--length", "100", "--trace", w / "t.jsonl"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(w / "t.jsonl"));
  const auto rp = cli({"replay", w / "t.jsonl"});
  CHECK(rp.code == 0);
  CHECK(rp.out.find("replay ok") != std::string::npos);
  // a bare bundled name works even with a file extension attached
  CHECK(cli({"run", "demo.scenario", "--seed", "7", "--length", "10"}).code == 0);
}

TEST_CASE("evaluate reports one rmse value per tick") {
  Workdir w;
  REQUIRE(cli({"run", demo_file(), "--seed", "7", "--length", "100", "--trace", w / "t.jsonl"}).code == 0);
  const auto r = cli({"evaluate", w / "t.jsonl", "--scenario", demo_file()});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("rmse_series").size() == 100);
  CHECK(j.at("shd_series").size() == 100);

  REQUIRE(cli({"evaluate", w / "t.jsonl", "--scenario", demo_file(), "--out", w / "r.json", "--table", w / "r.tsv"}).code == 0);
  CHECK(json::parse(read_file(w / "r.json")).at("rmse_series").size() == 100);
  CHECK(lines(read_file(w / "r.tsv")) == 101);
}

TEST_CASE("evaluate with two traces compares them") {
  Workdir w;
  REQUIRE(cli({"run", "break", "--seed", "1", "--length", "300", "--trace", w / "a.jsonl"}).code == 0);
  REQUIRE(cli({"run", "break", "--seed", "1", "--length", "300", "--no-reflect", "--trace", w / "b.jsonl"}).code == 0);
  const auto r = cli({"evaluate", w / "a.jsonl", w / "b.jsonl", "--scenario", "break"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("deltas").contains("recovery"));
  CHECK(j.at("deltas").at("shd").size() == 300);
  CHECK(j.at("reflect").at("reflect_enabled").get<bool>());
  CHECK_FALSE(j.at("baseline").at("reflect_enabled").get<bool>());
  CHECK(cli({"evaluate", w / "a.jsonl", "--scenario", "calm"}).code == 2);
}

TEST_CASE("explain prints one counterfactual line") {
  Workdir w;
  REQUIRE(cli({"run", demo_file(), "--seed", "7", "--length", "100", "--trace", w / "t.jsonl"}).code == 0);
  const auto r = cli({"explain", w / "t.jsonl", "--tick", "50", "--counterfactual-delta", "0"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 1);
  CHECK(r.out.rfind("Had perturbation", 0) == 0);

  const auto t1 = cli({"explain", w / "t.jsonl", "--tick", "50"});
  CHECK(t1.code == 0);
  CHECK(t1.out.rfind("At tick 50", 0) == 0);

  const auto p = cli({"explain", w / "t.jsonl", "--tick", "50", "--prompt"});
  CHECK(p.code == 0);
  CHECK(p.out.find("FACTS:") != std::string::npos);

  CHECK(cli({"explain", w / "t.jsonl", "--tick", "500"}).code == 2);
}

TEST_CASE("explain can annotate the trace without breaking replay") {
  Workdir w;
  REQUIRE(cli({"run", demo_file(), "--seed", "3", "--length", "40", "--trace", w / "t.jsonl"}).code == 0);
  REQUIRE(cli({"explain", w / "t.jsonl", "--tick", "10", "--annotate"}).code == 0);
  CHECK(read_file(w / "t.jsonl").find("\"annotation\"") != std::string::npos);
  CHECK(cli({"replay", w / "t.jsonl"}).code == 0);
}

TEST_CASE("sweep writes paired reports") {
  Workdir w;
  const auto r = cli({"sweep", "break", "--seeds", "0..2", "--length", "260", "--out-dir", w / "sweep", "--jobs", "2"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 4);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(w / "sweep")) files += e.path().extension() == ".json";
  CHECK(files == 3);
  CHECK(cli({"sweep", "break", "--seeds", "5..1"}).code == 1);
}

TEST_CASE("usage and data errors") {
  const auto bad = cli({"run", "demo", "--frobnicate"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("Usage") != std::string::npos);
  CHECK(bad.out.empty());
  CHECK(cli({}).code == 1);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"replay", "/nonexistent/trace.jsonl"}).code == 2);
  CHECK(cli({"run", "no-such-scenario"}).code == 2);

  Workdir w;
  REQUIRE(cli({"run", "calm", "--length", "20", "--trace", w / "t.jsonl"}).code == 0);
  std::string text = read_file(w / "t.jsonl");
  const auto pos = text.find("\"observed\":[");
  REQUIRE(pos != std::string::npos);
  text.insert(pos + 12, "1");
  write_file_atomic(w / "t.jsonl", text);
  CHECK(cli({"replay", w / "t.jsonl"}).code == 2);
}
