#include <numeric>

#include "doctest.h"
#include "dualvm/bench.hpp"
#include "json.hpp"

using namespace dualvm;

namespace {

std::vector<std::uint64_t> range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> v(hi - lo + 1);
  std::iota(v.begin(), v.end(), lo);
  return v;
}

}  // namespace

TEST_CASE("classification") {
  CHECK(classify(std::vector<std::int64_t>{7, 7, 7, 7, 7}) == GrowthClass::Constant);
  CHECK(classify(std::vector<std::int64_t>{1, 9, 3, 5, 7, 9}) == GrowthClass::Linear);
  CHECK(classify(std::vector<std::int64_t>{0, 0, 1, 4, 9, 16, 25}) == GrowthClass::Quadratic);
  CHECK(classify(std::vector<std::int64_t>{1, 2, 4, 8, 16, 32, 64}) == GrowthClass::Other);
  CHECK(classify(std::vector<std::int64_t>{1, 2, 3, 4}) == GrowthClass::Other);
  CHECK(classify(std::vector<std::int64_t>{5, 4, 3, 2, 1}) == GrowthClass::Linear);
  // warm-up values are ignored
  CHECK(classify(std::vector<std::int64_t>{100, -3, 7, 7, 7}) == GrowthClass::Constant);
  CHECK(std::string(to_string(GrowthClass::Quadratic)) == "Quadratic");
}

TEST_CASE("pred without encoding") {
  auto n = run_experiment("pred-native", Strategy::CBN, range(1, 50));
  for (const auto& p : n.points) CHECK(p.count(RuleTag::BetaSucc) == 1);
  CHECK(classify(n) == GrowthClass::Constant);
  auto v = run_experiment("pred-native", Strategy::CBV, range(1, 50));
  for (const auto& p : v.points) CHECK(p.count(RuleTag::BetaSucc) == static_cast<std::int64_t>(p.n));
  CHECK(classify(v) == GrowthClass::Linear);
}

TEST_CASE("pred through iteration is linear in both strategies") {
  for (Strategy s : {Strategy::CBV, Strategy::CBN}) {
    auto c = run_experiment("pred-via-iter", s, range(1, 30));
    CHECK(classify(c) == GrowthClass::Linear);
    for (const auto& p : c.points) CHECK(p.count(RuleTag::BetaSucc) == static_cast<std::int64_t>(p.n));
  }
}

TEST_CASE("scons overhead under call-by-value is constant") {
  auto c = run_experiment("scons-overhead", Strategy::CBV, range(1, 30));
  CHECK(classify(c) == GrowthClass::Constant);
}

TEST_CASE("countNow under call-by-value is linear") {
  auto c = run_experiment("countNow", Strategy::CBV, range(2, 30));
  CHECK(classify(c) == GrowthClass::Linear);
}

TEST_CASE("corecursion through coiteration costs linear extra tails under call-by-value") {
  auto enc = run_experiment("corec-via-coiter", Strategy::CBV, range(1, 30));
  CHECK(classify(enc) == GrowthClass::Linear);
  CHECK(classify(enc.counts(RuleTag::BetaTail)) == GrowthClass::Linear);
  auto native = run_experiment("scons-overhead", Strategy::CBV, range(1, 30));
  CHECK(classify(native.counts(RuleTag::BetaTail)) == GrowthClass::Constant);
}

// Measured call-by-name behaviour of the CoCase-built streams: the newest seed
// thunk discards the older ones, so the observation stops early.
TEST_CASE("call-by-name CoCase streams stop at the first seed") {
  auto sc = run_experiment("scons-overhead", Strategy::CBN, range(1, 30));
  auto totals = sc.totals();
  for (std::size_t i = 1; i < totals.size(); ++i) CHECK(totals[i] - totals[i - 1] == -1);
  auto cn = run_experiment("countNow", Strategy::CBN, range(2, 30));
  CHECK(classify(cn) == GrowthClass::Linear);
}

TEST_CASE("experiments are reproducible") {
  for (const auto& name : experiment_names()) {
    for (Strategy s : {Strategy::CBV, Strategy::CBN}) {
      auto a = run_experiment(name, s, {1, 3, 5});
      auto b = run_experiment(name, s, {1, 3, 5});
      CHECK(report_json(a) == report_json(b));
      for (const auto& p : a.points) CHECK(p.outcome == Outcome::Final);
    }
  }
}

TEST_CASE("argument errors") {
  CHECK_THROWS_AS(run_experiment("nope", Strategy::CBV, {1}), UnknownExperiment);
  CHECK_THROWS_AS(experiment_command("nope", Strategy::CBV, 1), UnknownExperiment);
  CHECK_THROWS_AS(run_experiment("pred-native", Strategy::CBV, {3, 2}), std::invalid_argument);
  CHECK_THROWS_AS(run_experiment("pred-native", Strategy::CBV, {2, 2}), std::invalid_argument);
}

TEST_CASE("out of fuel is reported per point") {
  auto c = run_experiment("pred-native", Strategy::CBV, {1, 40}, 50);
  CHECK(c.points[0].outcome == Outcome::Final);
  CHECK(c.points[1].outcome == Outcome::OutOfFuel);
}

TEST_CASE("baselines") {
  CHECK(experiment_baseline("scons-overhead", Strategy::CBV, 3).has_value());
  CHECK(experiment_baseline("corec-via-coiter", Strategy::CBN, 3).has_value());
  CHECK_FALSE(experiment_baseline("countNow", Strategy::CBV, 3).has_value());
}

TEST_CASE("reports") {
  auto c = run_experiment("pred-native", Strategy::CBV, range(1, 5));
  auto j = nlohmann::json::parse(report_json(c));
  CHECK(j["experiment"] == "pred-native");
  CHECK(j["strategy"] == "cbv");
  CHECK(j["class"] == "Linear");
  REQUIRE(j["points"].size() == 5);
  CHECK(j["points"][2]["n"] == 3);
  CHECK(j["points"][2]["perRule"]["BetaSucc"] == 3);
  CHECK(j["points"][2]["total"].get<std::int64_t>() == c.points[2].total);
  std::string csv = report_csv(c);
  CHECK(csv.rfind("n,total,Mu,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  std::string table = report_table(c);
  CHECK(table.find("pred-native (cbv)") != std::string::npos);
  CHECK(table.find("class: Linear") != std::string::npos);
}
