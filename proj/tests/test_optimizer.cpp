#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "flexibo/metrics.hpp"
#include "flexibo/optimizer.hpp"
#include "flexibo/results.hpp"

using namespace flexibo;

namespace {

class Toy : public Oracle {
 public:
  explicit Toy(std::optional<std::size_t> fail_on = {})
      : space_({OptionDef{"a", {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}}, OptionDef{"b", {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}}}),
        fail_on_(fail_on) {}
  const DesignSpace& space() const override { return space_; }
  const std::array<ObjectiveSpec, 2>& objectives() const override { return objectives_; }
  Evaluation evaluate(std::size_t id, std::size_t k) const override {
    if (fail_on_ && *fail_on_ == id) throw std::runtime_error("device lost");
    const auto x = space_.encode(id);
    const double v = k == 0 ? std::cos(1.4 * x[0]) * (1.0 - 0.3 * x[1]) : std::sin(1.4 * x[0]) * (1.0 - 0.3 * x[1]);
    return {v, k == 0 ? 1.0 : 10.0};
  }

 private:
  DesignSpace space_;
  std::array<ObjectiveSpec, 2> objectives_{ObjectiveSpec{"f1"}, ObjectiveSpec{"f2"}};
  std::optional<std::size_t> fail_on_;
};

RunSettings small(std::size_t iterations) {
  RunSettings s;
  s.iterations = iterations;
  s.init_k = 5;
  s.seed = 3;
  s.exec = Execution::serial;
  return s;
}

double fold(const RunResult& r) {
  double total = 0.0;
  for (const auto& rec : r.records) total += rec.cost;
  return total;
}

}  // namespace

TEST_CASE("improvement criteria") {
  CHECK(probability_of_improvement({1.0, 0.0}, 0.5) == 1.0);
  CHECK(probability_of_improvement({0.5, 0.0}, 0.5) == 0.0);
  CHECK(probability_of_improvement({0.0, 1.0}, 0.0) == doctest::Approx(0.5));
  CHECK(probability_of_improvement({1.0, 1.0}, 0.0) == doctest::Approx(0.841344746068543));
  CHECK(expected_improvement({2.0, 0.0}, 0.5) == 1.5);
  CHECK(expected_improvement({0.0, 1.0}, 0.0) == doctest::Approx(0.398942280401433));
}

TEST_CASE("flexibo evaluates one pair per iteration after the initial design") {
  const Toy toy;
  const auto r = flexibo_run(toy, small(20));
  CHECK(r.method == "flexibo-gp");
  std::size_t init = 0;
  for (const auto& rec : r.records) init += rec.iteration == 0;
  CHECK(init == 10);
  CHECK(r.records.size() == 10 + r.trace.size());
  for (const auto& tr : r.trace) {
    CHECK(tr.objectives.size() == 1);
    CHECK(tr.volume.has_value());
    CHECK(tr.beta > 0.0);
  }
  CHECK(r.total_cost == fold(r));
  const auto cs = cost_summary(r.records);
  CHECK(cs.total == r.total_cost);
  CHECK(cs.counts[0] == r.count(0));
  CHECK(r.total_cost == static_cast<double>(r.count(0)) + 10.0 * static_cast<double>(r.count(1)));
  REQUIRE(r.region.has_value());
  CHECK(r.region->volume >= 0.0);
}

TEST_CASE("no pair is ever measured twice") {
  const Toy toy;
  auto s = small(60);
  s.surrogate = SurrogateKind::rf;
  const auto r = flexibo_run(toy, s);
  CHECK(r.method == "flexibo-rf");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& rec : r.records) CHECK(seen.insert({rec.flat_id, rec.objective}).second);
}

TEST_CASE("runs are deterministic") {
  const Toy toy;
  const auto a = flexibo_run(toy, small(15));
  const auto b = flexibo_run(toy, small(15));
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].flat_id == b.records[i].flat_id);
    CHECK(a.records[i].objective == b.records[i].objective);
    CHECK(a.records[i].value == b.records[i].value);
  }
}

TEST_CASE("budget halts after the crossing evaluation") {
  const Toy toy;
  auto s = small(200);
  s.budget = 80.0;
  const auto r = flexibo_run(toy, s);
  CHECK(r.stop == StopReason::budget);
  CHECK(r.total_cost > 80.0);
  CHECK(r.total_cost - r.records.back().cost <= 80.0);
}

TEST_CASE("pal measures both objectives each iteration") {
  const Toy toy;
  const auto r = pal_run(toy, small(6));
  CHECK(r.method == "pal");
  for (const auto& tr : r.trace) CHECK(tr.cost == 11.0);
  CHECK(r.total_cost == fold(r));
  if (r.stop == StopReason::iterations) CHECK(r.total_cost == (5 + 6) * 11.0);
}

TEST_CASE("random search has no initial design and respects the cap") {
  const Toy toy;
  auto s = small(30);
  s.expensive_cap = 3;
  const auto r = rs_run(toy, s);
  CHECK(r.method == "rs");
  CHECK(r.records.size() == 30);
  CHECK(r.records.front().iteration == 1);
  CHECK(r.count(1) <= 3);
  CHECK(r.total_cost == fold(r));
  s.expensive_cap = 0;
  CHECK(rs_run(toy, s).count(1) == 0);
}

TEST_CASE("random search stops when every pair is measured") {
  const Toy toy;
  auto s = small(500);
  const auto r = rs_run(toy, s);
  CHECK(r.stop == StopReason::exhausted);
  CHECK(r.records.size() == 72);
}

TEST_CASE("single-objective baseline tracks its incumbent") {
  const Toy toy;
  for (std::size_t target : {0u, 1u}) {
    auto s = small(8);
    s.sobo_criterion = target == 0 ? ImprovementCriterion::probability : ImprovementCriterion::expected;
    const auto r = sobo_run(toy, target, s);
    CHECK(r.method == (target == 0 ? "sobo-1" : "sobo-2"));
    REQUIRE(r.best_point.has_value());
    double best = -1e300;
    for (const auto& rec : r.records)
      if (rec.objective == target) best = std::max(best, rec.value);
    CHECK(toy.evaluate(*r.best_point, target).value == best);
    CHECK(r.total_cost == fold(r));
  }
  CHECK_THROWS_AS(sobo_run(toy, 2, small(1)), std::invalid_argument);
}

TEST_CASE("oracle failure carries and writes a checkpoint") {
  const auto dir = std::filesystem::temp_directory_path() / "flexibo_test_failure";
  std::filesystem::create_directories(dir);
  auto s = small(100);
  s.checkpoint_path = dir / "checkpoint.json";
  std::filesystem::remove(s.checkpoint_path);
  const auto ids = sample_random(Toy{}.space(), 5, s.seed);
  const Toy failing(ids[2].flat_id);
  try {
    flexibo_run(failing, s);
    FAIL("expected OracleFailure");
  } catch (const OracleFailure& e) {
    CHECK(std::string(e.what()).find("device lost") != std::string::npos);
    CHECK(e.checkpoint()["kind"] == "checkpoint");
    CHECK(e.checkpoint()["records"].size() == 4);
  }
  const auto doc = read_json_file(s.checkpoint_path);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["records"][0]["objective"] == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("periodic checkpoints record progress") {
  const auto dir = std::filesystem::temp_directory_path() / "flexibo_test_checkpoint";
  std::filesystem::create_directories(dir);
  const Toy toy;
  auto s = small(10);
  s.checkpoint_path = dir / "cp.json";
  s.checkpoint_every = 5;
  const auto r = flexibo_run(toy, s);
  const auto doc = read_json_file(s.checkpoint_path);
  CHECK(doc["method"] == "flexibo-gp");
  CHECK(doc["t"].get<std::size_t>() % 5 == 0);
  CHECK(doc["cumulative_cost"].get<double>() <= r.total_cost);
  std::filesystem::remove_all(dir);
}

TEST_CASE("stop reasons have names") {
  CHECK(to_string(StopReason::iterations) == "iterations");
  CHECK(to_string(StopReason::converged) == "converged");
  CHECK(to_string(StopReason::exhausted) == "exhausted");
  CHECK(to_string(StopReason::budget) == "budget");
}
