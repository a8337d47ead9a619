#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "flexibo/report.hpp"
#include "flexibo/results.hpp"

using namespace flexibo;

namespace {

const std::array<ObjectiveSpec, 2> kObjs{ObjectiveSpec{"latency", Direction::minimize, "ms"},
                                         ObjectiveSpec{"accuracy", Direction::maximize, ""}};

RunResult sample_result() {
  RunResult r;
  r.method = "flexibo-gp";
  r.records = {{4, 0, -2.0, 1.0, 0, 0.0}, {4, 1, 0.5, 10.0, 0, 0.0}, {9, 0, -1.0, 1.0, 0, 0.0},
               {9, 1, 0.2, 10.0, 0, 0.0}, {7, 0, -3.0, 1.0, 1, 0.0}};
  IterationTrace tr;
  tr.t = 1;
  tr.flat_id = 7;
  tr.objectives = {0};
  tr.values = {-3.0};
  tr.cost = 1.0;
  tr.cumulative_cost = 23.0;
  tr.volume = 0.4;
  r.trace = {tr};
  return r;
}

}  // namespace

TEST_CASE("trace lines group the initial design and use the reported sign") {
  const auto lines = trace_lines(sample_result(), kObjs);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].t == 0);
  CHECK(lines[0].flat_id == 4);
  CHECK(lines[0].objectives == std::vector<std::size_t>{1, 2});
  CHECK(lines[0].values == std::vector<double>{2.0, 0.5});
  CHECK(lines[0].cost == 11.0);
  CHECK(lines[1].cumulative_cost == 22.0);
  CHECK(lines[2].t == 1);
  CHECK(lines[2].values == std::vector<double>{3.0});
  CHECK(lines[2].volume == 0.4);
  CHECK_FALSE(lines[0].volume.has_value());
}

TEST_CASE("trace lines round-trip through json") {
  for (const auto& l : trace_lines(sample_result(), kObjs)) {
    const auto j = l.to_json();
    CHECK(j["schema_version"] == kSchemaVersion);
    const auto back = TraceLine::from_json(j);
    CHECK(back.to_json() == j);
  }
}

TEST_CASE("summaries round-trip through json") {
  RunSummary s;
  s.problem = "cliff";
  s.method = "pal";
  s.seed = 4;
  s.mode = Mode::tbm;
  s.objectives = kObjs;
  s.reference = {-5.0, 0.0};
  s.iterations = 12;
  s.stop = "budget";
  s.total_cost = 143.0;
  s.counts = {13, 13};
  s.budget = 140.0;
  s.hypervolume = 1.25;
  s.contribution = 0.5;
  s.front = {{3, {1.0, 0.9}}};
  s.wall_time = 0.3;
  const auto j = s.to_json();
  const auto back = RunSummary::from_json(j);
  CHECK(back.to_json() == j);
  CHECK_FALSE(back.diversity.has_value());
  auto bad = j;
  bad["schema_version"] = 99;
  CHECK_THROWS(RunSummary::from_json(bad));
}

TEST_CASE("csv rows line up with the header") {
  RunSummary s;
  s.problem = "concave";
  s.method = "rs";
  s.stop = "iterations";
  auto count = [](const std::string& line) { return std::count(line.begin(), line.end(), ','); };
  CHECK(count(csv_header()) == count(csv_row(s)));
  CHECK(csv_header().rfind("problem,method,seed,mode,contribution,diversity,total_cost,wall_time", 0) == 0);
}

TEST_CASE("modes parse") {
  CHECK(parse_mode("tbm") == Mode::tbm);
  CHECK(to_string(Mode::fcm) == "fcm");
  CHECK_THROWS_AS(parse_mode("fast"), std::invalid_argument);
}

TEST_CASE("files are written atomically and read back") {
  const auto root = std::filesystem::temp_directory_path() / "flexibo_test_results";
  std::filesystem::remove_all(root);
  const auto dir = run_directory(root, "cliff", "rs", 3);
  CHECK(dir == root / "cliff" / "rs" / "seed-3");
  write_text_file(dir / "a.json", R"({"x": 1})");
  CHECK(read_json_file(dir / "a.json")["x"] == 1);
  CHECK_FALSE(std::filesystem::exists(dir / "a.json.tmp"));
  write_text_file(dir / "b.jsonl", "{\"t\": 0}\n\n{\"t\": 1}\n");
  const auto lines = read_json_lines(dir / "b.jsonl");
  REQUIRE(lines.size() == 2);
  CHECK(lines[1]["t"] == 1);
  std::filesystem::remove_all(root);
}

TEST_CASE("quantiles interpolate linearly") {
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile({4, 1, 3, 2}, 0.25) == 1.75);
  CHECK(quantile({7}, 0.75) == 7.0);
  CHECK_THROWS(quantile({}, 0.5));
  const auto s = spread({1, 2, 3, 4, 5});
  CHECK(s.median == 3.0);
  CHECK(s.q25 == 2.0);
  CHECK(s.q75 == 4.0);
}

TEST_CASE("hypervolume series replays fully measured points") {
  const auto lines = trace_lines(sample_result(), kObjs);
  const auto hv = hypervolume_series(lines, kObjs, {-4.0, 0.0});
  REQUIRE(hv.size() == 2);
  // points (-2, 0.5) and (-1, 0.2) in the internal frame
  CHECK(hv[0] == doctest::Approx(2.0 * 0.5 + 1.0 * 0.2));
  CHECK(hv[1] == hv[0]);
}
