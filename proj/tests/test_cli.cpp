#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flexibo/cli.hpp"
#include "flexibo/results.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "flexibo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = flexibo::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("flexibo_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("problems lists the built-ins") {
  const auto r = cli({"problems"});
  CHECK(r.code == 0);
  for (const char* name : {"concave", "convex", "cliff", "cheap-dim"}) CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("argument errors exit non-zero") {
  CHECK(cli({}).code != 0);
  CHECK(cli({"run", "--method", "rs"}).code != 0);
  CHECK(cli({"run", "--problem", "cliff", "--method", "rs", "--bogus"}).code != 0);
  CHECK(cli({"run", "--problem", "cliff", "--method", "rs", "--mode", "slow"}).code != 0);
  const auto dir = scratch("errors");
  CHECK(cli({"run", "--problem", "nope", "--method", "rs", "--out", dir.string()}).code == 2);
  CHECK(cli({"run", "--problem", "cliff", "--method", "magic", "--out", dir.string()}).code == 2);
  CHECK(cli({"run", "--problem", "cliff", "--method", "rs", "--mode", "tbm", "--out", dir.string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("run writes trace, summary and csv") {
  const auto dir = scratch("run");
  const auto r = cli({"run", "--problem", "cheap-dim", "--method", "flexibo", "--iters", "12", "--seed", "4", "--out",
                      dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("defaults:") != std::string::npos);
  CHECK(r.out.find("pareto region") != std::string::npos);
  const auto run_dir = flexibo::run_directory(dir, "cheap-dim", "flexibo-gp", 4);
  const auto lines = flexibo::read_json_lines(run_dir / "trace_fcm.jsonl");
  CHECK(lines.size() == 15 + 12);
  const auto summary = flexibo::read_json_file(run_dir / "summary_fcm.json");
  CHECK(summary["method"] == "flexibo-gp");
  CHECK(summary["iterations"] == 12);
  CHECK(fs::exists(dir / "cheap-dim" / "summary.csv"));
  CHECK(fs::exists(dir / "cheap-dim" / "summary.jsonl"));
  fs::remove_all(dir);
}

TEST_CASE("config file supplies costs") {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"costs": {"theta": [2, 8]}, "optimizer": {"iterations": 5, "init_k": 3}})";
  }
  const auto r = cli({"run", "--problem", "concave", "--method", "rs", "--config", (dir / "cfg.json").string(), "--out",
                      dir.string()});
  REQUIRE(r.code == 0);
  const auto s = flexibo::read_json_file(flexibo::run_directory(dir, "concave", "rs", 0) / "summary_fcm.json");
  const double cost = s["total_cost"].get<double>();
  const auto n1 = s["count_obj1"].get<double>();
  const auto n2 = s["count_obj2"].get<double>();
  CHECK(cost == n1 + 4.0 * n2);
  CHECK(n1 + n2 == 5.0);
  fs::remove_all(dir);
}

TEST_CASE("compare then report") {
  const auto dir = scratch("compare");
  const auto r = cli({"compare", "--problem", "convex", "--method", "flexibo-gp,rs", "--iters", "8", "--seeds", "2",
                      "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "convex" / "report" / "cost_table.csv"));
  CHECK(fs::exists(dir / "convex" / "report" / "hv_series.csv"));
  const auto rep = cli({"report", (dir / "convex").string(), "--out", (dir / "again").string()});
  CHECK(rep.code == 0);
  CHECK(fs::exists(dir / "again" / "metrics.csv"));
  CHECK(cli({"report", (dir / "missing").string()}).code != 0);
  fs::remove_all(dir);
}

TEST_CASE("validate describes a configuration") {
  const auto dir = scratch("validate");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"options": [{"name": "filters", "values": [32, 64, 128, 256, 512, 1024]},
                           {"name": "filter_size", "values": [1, 3, 5, 7, 9]}],
               "objectives": [{"name": "latency", "direction": "minimize"}, {"name": "energy", "direction": "minimize"}],
               "costs": {"theta": [50, 5]}})";
  }
  const auto r = cli({"validate", (dir / "cfg.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("30 points") != std::string::npos);
  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"options": [], "objectives": []})";
  }
  CHECK(cli({"validate", (dir / "bad.json").string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("the installed binary runs") {
  const std::string cmd = std::string(FLEXIBO_CLI_PATH) + " problems > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string bad = std::string(FLEXIBO_CLI_PATH) + " run 2> /dev/null";
  CHECK(std::system(bad.c_str()) != 0);
}
